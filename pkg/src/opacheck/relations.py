"""Checkers for (bi)simulation relations and their opacity-preserving variants.

Each checker takes a concrete binary relation between two systems' state
sets and decides whether the relation satisfies the defining clauses,
reporting every violated clause with one minimal witness.  Relations are
checked exactly as given; no reflexive or transitive closure is applied.

Clause label conventions:

* plain simulation: ``1`` (initial matching), ``2`` (output equality),
  ``3`` (transition matching, the matching input may differ);
* plain bisimulation: ``1a``, ``1b``, ``2``, ``3a``, ``3b``;
* initial-secrecy-preserving simulation: ``1a``, ``1c``, ``2``, ``2a``,
  ``2c`` (transition matching under the *same* input, both directions);
* initial-secrecy-preserving bisimulation: ``1a``--``1d``, ``2``, ``2a``,
  ``2c``;
* step-secrecy-preserving bisimulation: ``1a``--``1d``, ``2``,
  ``2a``--``2d`` (successor matching refined by secrecy of the target).
"""

from __future__ import annotations

from dataclasses import dataclass

from .system import TransitionSystem


@dataclass(frozen=True)
class StatePairRelation:
    """A binary relation between the state sets of two systems."""

    left: TransitionSystem
    right: TransitionSystem
    pairs: frozenset[tuple[str, str]]

    def __init__(self, left, right, pairs):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in pairs))
        lstates, rstates = set(left.states), set(right.states)
        for a, b in sorted(self.pairs):
            if a not in lstates:
                raise ValueError(f"relation names unknown left state {a!r}")
            if b not in rstates:
                raise ValueError(f"relation names unknown right state {b!r}")

    def right_of(self, a: str) -> list[str]:
        return sorted(b for (x, b) in self.pairs if x == a)

    def left_of(self, b: str) -> list[str]:
        return sorted(a for (a, x) in self.pairs if x == b)


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple[str, ...]
    detail: str

    def __str__(self):
        return f"[{self.clause}] {self.detail}"


@dataclass(frozen=True)
class RelationDiagnosis:
    holds: bool
    violations: tuple[Violation, ...]

    @property
    def clauses(self) -> frozenset[str]:
        return frozenset(v.clause for v in self.violations)


def invert(rel: StatePairRelation) -> StatePairRelation:
    """Swap the two systems and flip every pair; an involution."""
    return StatePairRelation(
        rel.right, rel.left, frozenset((b, a) for (a, b) in rel.pairs)
    )


def _diagnose(found: dict[str, Violation]) -> RelationDiagnosis:
    ordered = tuple(found[c] for c in sorted(found))
    return RelationDiagnosis(holds=not ordered, violations=ordered)


def _record(found: dict[str, Violation], clause: str, witness: tuple[str, ...], detail: str):
    # keep only the first (canonically smallest) witness per clause
    if clause not in found:
        found[clause] = Violation(clause, witness, detail)


def _initial_match(
    found: dict[str, Violation],
    clause: str,
    sources: list[str],
    candidates: set[str],
    partners,
    side: str,
):
    for x in sources:
        if not any(p in candidates for p in partners(x)):
            _record(found, clause, (x,), f"{side} initial state {x!r} has no admissible partner")
            return


def check_simulation(rel: StatePairRelation) -> RelationDiagnosis:
    """Classical simulation from ``left`` to ``right``.

    Transition matching (clause 3) may use a different input on the right,
    which is what distinguishes it from the secrecy-preserving variants.
    """
    l, r = rel.left, rel.right
    found: dict[str, Violation] = {}

    _initial_match(found, "1", sorted(l.initial), set(r.initial), rel.right_of, "left")

    for a, b in sorted(rel.pairs):
        if l.output_map[a] != r.output_map[b]:
            _record(found, "2", (a, b), f"outputs differ on pair ({a!r},{b!r})")
            break

    for a, b in sorted(rel.pairs):
        if "3" in found:
            break
        for u in l.inputs:
            for a2 in l.successors(a, u):
                if "3" in found:
                    break
                if not any(
                    (a2, b2) in rel.pairs
                    for u2 in r.inputs
                    for b2 in r.successors(b, u2)
                ):
                    _record(
                        found, "3", (a, b, u, a2),
                        f"transition {a!r} -{u}-> {a2!r} unmatched from {b!r}",
                    )
    return _diagnose(found)


def check_bisimulation(rel: StatePairRelation) -> RelationDiagnosis:
    """Classical bisimulation; both directions of clauses 1 and 3."""
    l, r = rel.left, rel.right
    found: dict[str, Violation] = {}

    _initial_match(found, "1a", sorted(l.initial), set(r.initial), rel.right_of, "left")
    _initial_match(found, "1b", sorted(r.initial), set(l.initial), rel.left_of, "right")

    for a, b in sorted(rel.pairs):
        if l.output_map[a] != r.output_map[b]:
            _record(found, "2", (a, b), f"outputs differ on pair ({a!r},{b!r})")
            break

    for a, b in sorted(rel.pairs):
        for u in l.inputs:
            for a2 in l.successors(a, u):
                if "3a" in found:
                    break
                if not any(
                    (a2, b2) in rel.pairs
                    for u2 in r.inputs
                    for b2 in r.successors(b, u2)
                ):
                    _record(
                        found, "3a", (a, b, u, a2),
                        f"transition {a!r} -{u}-> {a2!r} unmatched from {b!r}",
                    )
        for u in r.inputs:
            for b2 in r.successors(b, u):
                if "3b" in found:
                    break
                if not any(
                    (a2, b2) in rel.pairs
                    for u2 in l.inputs
                    for a2 in l.successors(a, u2)
                ):
                    _record(
                        found, "3b", (a, b, u, b2),
                        f"transition {b!r} -{u}-> {b2!r} unmatched from {a!r}",
                    )
    return _diagnose(found)


def _same_input_match(
    found: dict[str, Violation],
    clause: str,
    rel: StatePairRelation,
    forward: bool,
    target_filter=None,
    partner_filter=None,
):
    """Same-input transition matching, optionally restricted by target secrecy.

    ``forward`` matches left transitions from right states; otherwise the
    converse.  ``target_filter``/``partner_filter`` restrict which successor
    states participate (used by the secrecy-refined clauses).
    """
    l, r = rel.left, rel.right
    src_sys, dst_sys = (l, r) if forward else (r, l)
    for a, b in sorted(rel.pairs):
        x, z = (a, b) if forward else (b, a)
        for u in src_sys.inputs:
            for x2 in src_sys.successors(x, u):
                if target_filter and not target_filter(x2):
                    continue
                ok = any(
                    ((x2, z2) if forward else (z2, x2)) in rel.pairs
                    and (partner_filter is None or partner_filter(z2))
                    for z2 in dst_sys.successors(z, u)
                )
                if not ok:
                    _record(
                        found, clause, (x, z, u, x2),
                        f"transition {x!r} -{u}-> {x2!r} unmatched from {z!r} under the same input",
                    )
                    return


def check_initsop_simulation(rel: StatePairRelation) -> RelationDiagnosis:
    """Initial-secrecy-preserving simulation from ``left`` to ``right``."""
    l, r = rel.left, rel.right
    found: dict[str, Violation] = {}

    _initial_match(
        found, "1a",
        sorted(l.initial - l.secret), set(r.initial - r.secret),
        rel.right_of, "left non-secret",
    )
    _initial_match(
        found, "1c",
        sorted(r.initial & r.secret), set(l.initial & l.secret),
        rel.left_of, "right secret",
    )

    for a, b in sorted(rel.pairs):
        if l.output_map[a] != r.output_map[b]:
            _record(found, "2", (a, b), f"outputs differ on pair ({a!r},{b!r})")
            break

    _same_input_match(found, "2a", rel, forward=True)
    _same_input_match(found, "2c", rel, forward=False)
    return _diagnose(found)


def check_initsop_bisimulation(rel: StatePairRelation) -> RelationDiagnosis:
    """Initial-secrecy-preserving bisimulation between the two systems.

    Equivalent to the simulation variant holding for the relation and for
    its inverse; that equivalence is property-tested rather than assumed.
    """
    l, r = rel.left, rel.right
    found: dict[str, Violation] = {}

    _initial_match(
        found, "1a",
        sorted(l.initial & l.secret), set(r.initial & r.secret),
        rel.right_of, "left secret",
    )
    _initial_match(
        found, "1b",
        sorted(l.initial - l.secret), set(r.initial - r.secret),
        rel.right_of, "left non-secret",
    )
    _initial_match(
        found, "1c",
        sorted(r.initial & r.secret), set(l.initial & l.secret),
        rel.left_of, "right secret",
    )
    _initial_match(
        found, "1d",
        sorted(r.initial - r.secret), set(l.initial - l.secret),
        rel.left_of, "right non-secret",
    )

    for a, b in sorted(rel.pairs):
        if l.output_map[a] != r.output_map[b]:
            _record(found, "2", (a, b), f"outputs differ on pair ({a!r},{b!r})")
            break

    _same_input_match(found, "2a", rel, forward=True)
    _same_input_match(found, "2c", rel, forward=False)
    return _diagnose(found)


def check_infsop_bisimulation(rel: StatePairRelation) -> RelationDiagnosis:
    """Step-secrecy-preserving bisimulation between the two systems.

    Successor matching is refined by secrecy of the *target*: secret
    targets must be matched by secret targets (2a/2c) and non-secret by
    non-secret (2b/2d), always under the same input.
    """
    l, r = rel.left, rel.right
    found: dict[str, Violation] = {}

    _initial_match(
        found, "1a",
        sorted(l.initial & l.secret), set(r.initial & r.secret),
        rel.right_of, "left secret",
    )
    _initial_match(
        found, "1b",
        sorted(l.initial - l.secret), set(r.initial - r.secret),
        rel.right_of, "left non-secret",
    )
    _initial_match(
        found, "1c",
        sorted(r.initial & r.secret), set(l.initial & l.secret),
        rel.left_of, "right secret",
    )
    _initial_match(
        found, "1d",
        sorted(r.initial - r.secret), set(l.initial - l.secret),
        rel.left_of, "right non-secret",
    )

    for a, b in sorted(rel.pairs):
        if l.output_map[a] != r.output_map[b]:
            _record(found, "2", (a, b), f"outputs differ on pair ({a!r},{b!r})")
            break

    _same_input_match(
        found, "2a", rel, forward=True,
        target_filter=lambda x: x in l.secret,
        partner_filter=lambda x: x in r.secret,
    )
    _same_input_match(
        found, "2b", rel, forward=True,
        target_filter=lambda x: x not in l.secret,
        partner_filter=lambda x: x not in r.secret,
    )
    _same_input_match(
        found, "2c", rel, forward=False,
        target_filter=lambda x: x in r.secret,
        partner_filter=lambda x: x in l.secret,
    )
    _same_input_match(
        found, "2d", rel, forward=False,
        target_filter=lambda x: x not in r.secret,
        partner_filter=lambda x: x not in l.secret,
    )
    return _diagnose(found)
