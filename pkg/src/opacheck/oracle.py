"""Definition-level opacity checking and random system generation.

This module deliberately re-implements the easy parts of the toolkit as a
second, naive code path so the observer-based procedures can be
cross-validated against it:

* :func:`bounded_check` enumerates every run over every input sequence up
  to a length bound (on the sink-completed system) and evaluates the four
  opacity definitions verbatim.  It is sound for refutation only: a found
  violation disproves opacity, while absence of violations within the
  bound proves nothing.
* :func:`naive_forward_beliefs` / :func:`naive_backward_beliefs` recompute
  the observer components with straight-line set code that shares nothing
  with the observer module.
* :func:`random_system` draws reproducible systems from a counter-based
  generator (SHA-256 over ``seed:counter``), so identical parameters give
  identical systems on every platform forever.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .observer import (
    CSO,
    INFSO,
    INITSO,
    KSO,
    Verdict,
    verify_cso,
    verify_infso,
    verify_initso,
    verify_kso,
)
from .system import ResourceCapError, Run, TransitionSystem, augment

DEFAULT_RUN_BUDGET = 500_000


class CounterRng:
    """Deterministic counter-based generator: SHA-256 of ``seed:counter``."""

    def __init__(self, seed: int):
        self._seed = seed
        self._counter = 0

    def _u64(self) -> int:
        digest = hashlib.sha256(
            f"{self._seed}:{self._counter}".encode()
        ).digest()
        self._counter += 1
        return int.from_bytes(digest[:8], "big")

    def fraction(self) -> float:
        return self._u64() / 2**64

    def randrange(self, n: int) -> int:
        return self._u64() % n


@dataclass(frozen=True)
class BoundedResult:
    """Outcome of a definitional bounded check.

    ``violation_found`` implies the system is not opaque in the notion;
    ``witness_run`` then holds a run such that no other run over the same
    inputs with the same outputs masks the secret position.
    """

    notion: str
    bound: int
    violation_found: bool
    witness_run: Run | None
    k: int | None = None


def _window_mask(length: int, k: int | None, notion: str) -> int:
    """Bitmask of run positions the notion quantifies over (length+1 bits)."""
    if notion == INITSO:
        return 1
    if notion == CSO:
        return 1 << length
    if notion == INFSO:
        return (1 << (length + 1)) - 1
    lo = max(0, length - (k or 0))
    return ((1 << (length + 1)) - 1) & ~((1 << lo) - 1)


def bounded_check(
    sys: TransitionSystem,
    notion: str,
    bound: int,
    k: int | None = None,
    run_budget: int = DEFAULT_RUN_BUDGET,
) -> BoundedResult:
    """Exhaustively test one opacity definition up to an input-length bound.

    For every input sequence alpha with ``len(alpha) <= bound`` and every
    run over alpha of the completed system, searches all runs over the
    same alpha with the same output sequence for one that is non-secret at
    the position(s) the definition names.  A position where every
    output-equivalent run is secret is a violation.
    """
    if notion == KSO and k is None:
        raise ValueError("K-step opacity requires k")
    found = _bounded_search(sys, bound, {notion: k}, run_budget)
    witness = found[notion]
    return BoundedResult(
        notion=notion,
        bound=bound,
        violation_found=witness is not None,
        witness_run=witness,
        k=k,
    )


def bounded_check_all(
    sys: TransitionSystem,
    bound: int,
    ks: tuple[int, ...] = (),
    run_budget: int = DEFAULT_RUN_BUDGET,
) -> dict:
    """All four notions in one enumeration pass; keys ``initso``, ``cso``,
    ``infso`` and ``(kso, K)`` map to witness runs or None."""
    wanted: dict = {INITSO: None, CSO: None, INFSO: None}
    for k in ks:
        wanted[(KSO, k)] = k
    return _bounded_search(sys, bound, wanted, run_budget)


def _bounded_search(sys, bound, wanted, run_budget):
    aug = augment(sys)
    states = aug.states
    index = {s: i for i, s in enumerate(states)}
    secret = [s in aug.secret for s in states]
    out_id = {y: i for i, y in enumerate(aug.outputs)}
    outputs = [out_id[aug.output_map[s]] for s in states]
    succ = {
        (index[s], u): tuple(index[t] for t in aug.successors(s, u))
        for s in states
        for u in aug.inputs
    }

    results: dict = {key: None for key in wanted}
    budget = [run_budget]

    def note_violations(alpha: tuple[str, ...], runs):
        """Group full-length runs over alpha by output sequence and flag
        positions where the whole group is secret."""
        n = len(alpha)
        groups: dict[tuple[int, ...], list] = {}
        for states_t, mask in runs:
            key = tuple(outputs[s] for s in states_t)
            groups.setdefault(key, []).append((states_t, mask))
        for members in groups.values():
            gmask = members[0][1]
            for _, mask in members[1:]:
                gmask &= mask
                if not gmask:
                    break
            if not gmask:
                continue
            for key, k in wanted.items():
                if results[key] is not None:
                    continue
                notion = key[0] if isinstance(key, tuple) else key
                if gmask & _window_mask(n, k, notion):
                    states_t = members[0][0]
                    results[key] = Run(alpha, tuple(states[i] for i in states_t))

    def explore(alpha: tuple[str, ...], runs):
        budget[0] -= len(runs)
        if budget[0] < 0:
            raise ResourceCapError(
                f"bounded check exceeds {run_budget} enumerated runs"
            )
        note_violations(alpha, runs)
        if len(alpha) >= bound or all(v is not None for v in results.values()):
            return
        for u in aug.inputs:
            extended = [
                (states_t + (t,), mask | (secret[t] << (len(alpha) + 1)))
                for states_t, mask in runs
                for t in succ[(states_t[-1], u)]
            ]
            if extended:
                explore(alpha + (u,), extended)

    seeds = [
        ((index[s],), int(s in aug.secret)) for s in sorted(aug.initial)
    ]
    if seeds:
        explore((), seeds)
    return results


def naive_forward_beliefs(sys: TransitionSystem) -> frozenset[frozenset[str]]:
    """Forward belief fixpoint, recomputed with plain set comprehensions.

    Independent of the observer module; used to cross-validate the
    current-state decision: the system is current-state opaque iff no
    belief here is contained in the secret set.
    """
    aug = augment(sys)
    trans = set(aug.transitions)
    h = aug.output_map

    def classes(group):
        outs = {h[x] for x in group}
        return {frozenset(x for x in group if h[x] == y) for y in outs}

    beliefs = set(classes(set(aug.initial)))
    beliefs.discard(frozenset())
    work = list(beliefs)
    while work:
        q = work.pop()
        for u in aug.inputs:
            image = {t for (s, u2, t) in trans if u2 == u and s in q}
            for piece in classes(image):
                if piece and piece not in beliefs:
                    beliefs.add(piece)
                    work.append(piece)
    return frozenset(beliefs)


def naive_backward_beliefs(sys: TransitionSystem) -> frozenset[frozenset[str]]:
    """Backward analogue of :func:`naive_forward_beliefs`.

    Initial-state opacity holds iff every belief here that contains an
    initial state also contains a non-secret initial state.
    """
    aug = augment(sys)
    trans = set(aug.transitions)
    h = aug.output_map

    def classes(group):
        outs = {h[x] for x in group}
        return {frozenset(x for x in group if h[x] == y) for y in outs}

    beliefs = set(classes(set(aug.states)))
    beliefs.discard(frozenset())
    work = list(beliefs)
    while work:
        q = work.pop()
        for u in aug.inputs:
            preimage = {s for (s, u2, t) in trans if u2 == u and t in q}
            for piece in classes(preimage):
                if piece and piece not in beliefs:
                    beliefs.add(piece)
                    work.append(piece)
    return frozenset(beliefs)


def naive_cso_opaque(sys: TransitionSystem) -> bool:
    secret = sys.secret
    return not any(q <= secret for q in naive_forward_beliefs(sys))


def naive_initso_opaque(sys: TransitionSystem) -> bool:
    if not sys.initial:
        return True
    secret, initial = sys.secret, sys.initial
    for q in naive_backward_beliefs(sys):
        hit = q & initial
        if hit and hit <= secret:
            return False
    return True


def random_system(
    seed: int,
    n_states: int,
    n_inputs: int,
    n_outputs: int,
    transition_density: float,
    secret_fraction: float,
) -> TransitionSystem:
    """Reproducible random system.

    Draws, in fixed order: one output per state, a secret flag per state
    (probability ``secret_fraction``), an initial flag per state
    (probability 1/2), then one inclusion flag per (state, input, state)
    triple (probability ``transition_density``).  Identical arguments give
    identical systems.
    """
    if min(n_states, n_inputs, n_outputs) < 1:
        raise ValueError("sizes must be at least 1")
    if not 0 < transition_density <= 1:
        raise ValueError("transition_density must be in (0, 1]")
    rng = CounterRng(seed)
    states = tuple(f"s{i}" for i in range(n_states))
    inputs = tuple(f"u{i}" for i in range(n_inputs))
    outputs = tuple(f"y{i}" for i in range(n_outputs))
    output_map = {s: outputs[rng.randrange(n_outputs)] for s in states}
    secret = {s for s in states if rng.fraction() < secret_fraction}
    initial = {s for s in states if rng.fraction() < 0.5}
    transitions = {
        (s, u, t)
        for s in states
        for u in inputs
        for t in states
        if rng.fraction() < transition_density
    }
    return TransitionSystem(
        name=f"random-{seed}",
        states=states,
        initial=initial,
        secret=secret,
        inputs=inputs,
        outputs=outputs,
        output_map=output_map,
        transitions=transitions,
    )


@dataclass(frozen=True)
class ImplicationReport:
    """All observer verdicts for one system plus lattice consistency."""

    initso: Verdict
    cso: Verdict
    infso: Verdict
    kso: tuple[Verdict, ...]
    problems: tuple[str, ...]

    @property
    def consistent(self) -> bool:
        return not self.problems


def implication_suite(sys: TransitionSystem, k_max: int) -> ImplicationReport:
    """Compute all verdicts and assert the implication lattice between them.

    Any reported problem indicates a toolkit bug, not a property of the
    input system.
    """
    initso = verify_initso(sys)
    cso = verify_cso(sys)
    infso = verify_infso(sys)
    kso = tuple(verify_kso(sys, k) for k in range(1, k_max + 1))

    problems = []
    if infso.opaque:
        if not cso.opaque:
            problems.append("infinite-step opaque but not current-state opaque")
        if not initso.opaque:
            problems.append("infinite-step opaque but not initial-state opaque")
        for v in kso:
            if not v.opaque:
                problems.append(f"infinite-step opaque but not {v.k}-step opaque")
    for v in kso:
        if v.opaque and not cso.opaque:
            problems.append(f"{v.k}-step opaque but not current-state opaque")
    for i in range(1, len(kso)):
        if kso[i].opaque and not kso[i - 1].opaque:
            problems.append(
                f"{kso[i].k}-step opaque but not {kso[i - 1].k}-step opaque"
            )
    return ImplicationReport(
        initso=initso, cso=cso, infso=infso, kso=kso, problems=tuple(problems)
    )
