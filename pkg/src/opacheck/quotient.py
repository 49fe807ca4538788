"""Quotient systems, quotient relations, and coarsest secrecy-aware quotients.

A :class:`Partition` groups a system's states into output-homogeneous
blocks.  Building the quotient collapses each block into one state; the
quotient relation pairs every state with its block.  The two ``check_*``
operations decide the conditions under which that relation preserves
opacity, and :func:`coarsest_infsop_partition` computes the coarsest
partition whose induced self-relation is a step-secrecy-preserving
bisimulation, by plain partition refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .relations import (
    RelationDiagnosis,
    StatePairRelation,
    Violation,
    check_infsop_bisimulation,
)
from .system import TransitionSystem


def block_name(block: frozenset[str]) -> str:
    return "+".join(sorted(block))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering a system's state set.

    Blocks are stored in canonical order (sorted by name); names default to
    the sorted member list joined with ``+``.
    """

    sys: TransitionSystem
    blocks: tuple[frozenset[str], ...]
    names: tuple[str, ...]

    def __init__(self, sys, blocks, names=None):
        blocks = [frozenset(b) for b in blocks]
        if names is None:
            names = [block_name(b) for b in blocks]
        else:
            names = list(names)
            if len(names) != len(blocks):
                raise ValueError("one name per block required")
        order = sorted(range(len(blocks)), key=lambda i: names[i])
        object.__setattr__(self, "sys", sys)
        object.__setattr__(self, "blocks", tuple(blocks[i] for i in order))
        object.__setattr__(self, "names", tuple(names[i] for i in order))

    @cached_property
    def _block_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for i, b in enumerate(self.blocks):
            for s in b:
                index.setdefault(s, i)
        return index

    def block_of(self, state: str) -> frozenset[str]:
        return self.blocks[self._block_index[state]]

    def name_of(self, state: str) -> str:
        return self.names[self._block_index[state]]


def validate_partition(p: Partition) -> list[str]:
    """Diagnose coverage, disjointness, emptiness, and output mixing."""
    problems: list[str] = []
    seen: set[str] = set()
    state_set = set(p.sys.states)
    for name, block in zip(p.names, p.blocks):
        if not block:
            problems.append(f"block {name!r} is empty")
            continue
        overlap = block & seen
        if overlap:
            problems.append(
                f"block {name!r} overlaps earlier blocks on {sorted(overlap)}"
            )
        unknown = block - state_set
        if unknown:
            problems.append(f"block {name!r} names unknown states {sorted(unknown)}")
        outs = {p.sys.output_map[s] for s in block if s in p.sys.output_map}
        if len(outs) > 1:
            problems.append(f"block {name!r} mixes outputs {sorted(outs)}")
        seen |= block
    missing = state_set - seen
    if missing:
        problems.append(f"blocks do not cover states {sorted(missing)}")
    return problems


def is_secret_compatible(p: Partition) -> bool:
    """True iff every block is entirely secret or entirely non-secret."""
    s = p.sys.secret
    return all(block <= s or not (block & s) for block in p.blocks)


def _require_valid(p: Partition):
    problems = validate_partition(p)
    if problems:
        raise ValueError("invalid partition: " + "; ".join(problems))


def build_quotient(p: Partition) -> TransitionSystem:
    """Collapse each block into one state.

    A block is initial (secret) iff it intersects the initial (secret)
    set; a block transition exists iff some member transition does; the
    block output is the members' shared output.
    """
    _require_valid(p)
    sys = p.sys
    name_of = p.name_of
    transitions = {
        (name_of(src), u, name_of(dst)) for (src, u, dst) in sys.transitions
    }
    return TransitionSystem(
        name=f"{sys.name}-quotient",
        states=p.names,
        initial={n for n, b in zip(p.names, p.blocks) if b & sys.initial},
        secret={n for n, b in zip(p.names, p.blocks) if b & sys.secret},
        inputs=sys.inputs,
        outputs=sys.outputs,
        output_map={
            n: sys.output_map[next(iter(b))] for n, b in zip(p.names, p.blocks)
        },
        transitions=transitions,
    )


def quotient_relation(p: Partition) -> StatePairRelation:
    """The relation pairing each state with its block in the quotient."""
    quotient = build_quotient(p)
    return StatePairRelation(
        p.sys, quotient, {(s, p.name_of(s)) for s in p.sys.states}
    )


def check_eq1_condition(p: Partition) -> RelationDiagnosis:
    """Same-input successor-block matching between equivalent states.

    Holds iff for every same-block pair (x, x') and every transition
    x -u-> x'' there is a transition x' -u-> x''' into the block of x''.
    Requires a secret-compatible partition; calling without that is a
    usage error, not a silent ``False``.
    """
    _require_valid(p)
    if not is_secret_compatible(p):
        raise ValueError("partition is not secret-compatible")
    sys = p.sys

    def first_violation():
        for block in p.blocks:
            for x in sorted(block):
                for x2 in sorted(block):
                    for u in sys.inputs:
                        for tgt in sys.successors(x, u):
                            tgt_block = p.block_of(tgt)
                            if not any(
                                t in tgt_block for t in sys.successors(x2, u)
                            ):
                                return Violation(
                                    "eq1", (x, x2, u, tgt),
                                    f"{x!r} -{u}-> {tgt!r} not matched from "
                                    f"equivalent state {x2!r} into block "
                                    f"{p.name_of(tgt)!r}",
                                )
        return None

    bad = first_violation()
    violations = () if bad is None else (bad,)
    return RelationDiagnosis(holds=bad is None, violations=violations)


def self_relation(p: Partition) -> StatePairRelation:
    """All same-block state pairs, as a relation from the system to itself."""
    pairs = {
        (x, x2) for block in p.blocks for x in block for x2 in block
    }
    return StatePairRelation(p.sys, p.sys, pairs)


def check_infsop_self(p: Partition) -> RelationDiagnosis:
    """Step-secrecy-preserving bisimilarity of the induced self-relation."""
    _require_valid(p)
    if not is_secret_compatible(p):
        raise ValueError("partition is not secret-compatible")
    return check_infsop_bisimulation(self_relation(p))


def coarsest_infsop_partition(sys: TransitionSystem) -> Partition:
    """Coarsest output-homogeneous, secret-compatible, self-bisimilar partition.

    Plain partition refinement: start from blocks keyed by (output,
    secret flag); repeatedly split blocks whose members disagree on which
    blocks they can reach under some input.  The fixpoint is unique, so
    the processing order only affects intermediate work.
    """
    groups: dict[tuple[str, bool], set[str]] = {}
    for s in sys.states:
        groups.setdefault((sys.output_map[s], s in sys.secret), set()).add(s)
    blocks = sorted(
        (frozenset(b) for b in groups.values()), key=block_name
    )

    while True:
        index = {s: i for i, b in enumerate(blocks) for s in b}

        def signature(state: str) -> frozenset[tuple[str, int]]:
            return frozenset(
                (u, index[t])
                for u in sys.inputs
                for t in sys.successors(state, u)
            )

        new_blocks: list[frozenset[str]] = []
        changed = False
        for block in blocks:
            sigs: dict[frozenset, set[str]] = {}
            for s in sorted(block):
                sigs.setdefault(signature(s), set()).add(s)
            if len(sigs) == 1:
                new_blocks.append(block)
            else:
                changed = True
                new_blocks.extend(frozenset(g) for g in sigs.values())
        blocks = sorted(new_blocks, key=block_name)
        if not changed:
            return Partition(sys, blocks)
