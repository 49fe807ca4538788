"""Shared generators and brute-force reference computations for the tests."""

from __future__ import annotations

from opacheck import CounterRng, Partition, StatePairRelation, random_system


def sample_system(seed, max_states=4, max_inputs=2, max_outputs=3):
    """One deterministic random system per seed, sizes varied by seed."""
    rng = CounterRng(seed * 1_000_003 + 17)
    n_states = 1 + rng.randrange(max_states)
    n_inputs = 1 + rng.randrange(max_inputs)
    n_outputs = 1 + rng.randrange(max_outputs)
    density = 0.15 + 0.7 * rng.fraction()
    secret_frac = 0.6 * rng.fraction()
    return random_system(seed, n_states, n_inputs, n_outputs, density, secret_frac)


def sample_relation(seed, left, right, density=0.4) -> StatePairRelation:
    rng = CounterRng(seed * 7_919 + 3)
    pairs = {
        (a, b)
        for a in left.states
        for b in right.states
        if rng.fraction() < density
    }
    return StatePairRelation(left, right, pairs)


def sample_homogeneous_partition(seed, sys) -> Partition:
    """Random output-homogeneous, secret-compatible partition.

    Starts from the (output, secret) grouping and randomly splits each
    group into finer blocks.
    """
    rng = CounterRng(seed * 104_729 + 5)
    groups: dict[tuple[str, bool], list[str]] = {}
    for s in sys.states:
        groups.setdefault((sys.output_map[s], s in sys.secret), []).append(s)
    blocks = []
    for members in groups.values():
        buckets: dict[int, set[str]] = {}
        n_buckets = 1 + rng.randrange(len(members))
        for s in sorted(members):
            buckets.setdefault(rng.randrange(n_buckets), set()).add(s)
        blocks.extend(b for b in buckets.values() if b)
    return Partition(sys, blocks)


def set_partitions(items):
    """All set partitions of ``items`` (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] | {first}] + part[i + 1:]
        yield part + [{first}]


def forward_bruteforce(aug, inputs, output_record):
    """Endpoints of runs over ``inputs`` whose outputs match the record."""
    ends = set()

    def rec(pos, state):
        if pos == len(inputs):
            ends.add(state)
            return
        for t in aug.successors(state, inputs[pos]):
            if aug.output_map[t] == output_record[pos + 1]:
                rec(pos + 1, t)

    for x0 in sorted(aug.initial):
        if aug.output_map[x0] == output_record[0]:
            rec(0, x0)
    return frozenset(ends)


def backward_bruteforce(aug, binputs, output_record):
    """Start points of reversed-suffix paths matching the backward record.

    A backward record of length m+1 describes states z_m .. z_0 with
    z_{j+1} -binputs[j]-> z_j and output(z_j) == record[j]; returns the
    set of feasible z_m.
    """
    m = len(binputs)

    def feasible(j, state):
        if j == 0:
            return True
        return any(
            aug.output_map[t] == output_record[j - 1] and feasible(j - 1, t)
            for t in aug.successors(state, binputs[j - 1])
        )

    return frozenset(
        z for z in aug.states
        if aug.output_map[z] == output_record[m] and feasible(m, z)
    )
