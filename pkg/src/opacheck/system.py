"""Nondeterministic finite transition systems and their run semantics.

The central data type is :class:`TransitionSystem`: a finite set of states
with initial and secret subsets, a finite input alphabet, a nondeterministic
transition relation, and a total output map.  Everything else in the package
consumes these objects.

All types are immutable after construction; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

#: Reserved sink identifier used when completing a non-total system.
PHI = "__phi__"

Transition = tuple[str, str, str]


class ResourceCapError(RuntimeError):
    """A configurable exploration or enumeration budget was exceeded."""


@dataclass(frozen=True)
class TransitionSystem:
    """A finite transition system with secret states and an output map.

    Identifier collections are canonicalised (sorted, frozen) at
    construction so that serialisation and traversal orders are stable.
    Construction never rejects a semantically broken system; use
    :func:`validate` to diagnose one.
    """

    name: str
    states: tuple[str, ...]
    initial: frozenset[str]
    secret: frozenset[str]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    output_map: Mapping[str, str]
    transitions: frozenset[Transition]

    def __init__(
        self,
        name: str,
        states: Iterable[str],
        initial: Iterable[str],
        secret: Iterable[str],
        inputs: Iterable[str],
        outputs: Iterable[str],
        output_map: Mapping[str, str],
        transitions: Iterable[Transition],
    ):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "states", tuple(sorted(states)))
        object.__setattr__(self, "initial", frozenset(initial))
        object.__setattr__(self, "secret", frozenset(secret))
        object.__setattr__(self, "inputs", tuple(sorted(inputs)))
        object.__setattr__(self, "outputs", tuple(sorted(outputs)))
        object.__setattr__(self, "output_map", dict(output_map))
        object.__setattr__(
            self, "transitions", frozenset(tuple(t) for t in transitions)
        )

    def __eq__(self, other):
        if not isinstance(other, TransitionSystem):
            return NotImplemented
        return (
            self.name == other.name
            and self.states == other.states
            and self.initial == other.initial
            and self.secret == other.secret
            and self.inputs == other.inputs
            and self.outputs == other.outputs
            and self.output_map == other.output_map
            and self.transitions == other.transitions
        )

    def __hash__(self):
        return hash((
            self.name, self.states, self.initial, self.secret, self.inputs,
            self.outputs, tuple(sorted(self.output_map.items())),
            self.transitions,
        ))

    def output(self, state: str) -> str:
        return self.output_map[state]

    @cached_property
    def _succ_index(self) -> dict[tuple[str, str], tuple[str, ...]]:
        index: dict[tuple[str, str], list[str]] = {}
        for src, inp, dst in self.transitions:
            index.setdefault((src, inp), []).append(dst)
        return {k: tuple(sorted(v)) for k, v in index.items()}

    @cached_property
    def _pred_index(self) -> dict[tuple[str, str], tuple[str, ...]]:
        index: dict[tuple[str, str], list[str]] = {}
        for src, inp, dst in self.transitions:
            index.setdefault((dst, inp), []).append(src)
        return {k: tuple(sorted(v)) for k, v in index.items()}

    def successors(self, state: str, inp: str) -> tuple[str, ...]:
        """States reachable from ``state`` in one ``inp``-step (sorted)."""
        return self._succ_index.get((state, inp), ())

    def predecessors(self, state: str, inp: str) -> tuple[str, ...]:
        """States with an ``inp``-transition into ``state`` (sorted)."""
        return self._pred_index.get((state, inp), ())

    @cached_property
    def states_by_output(self) -> dict[str, frozenset[str]]:
        """Observational equivalence classes: output -> set of states."""
        classes: dict[str, set[str]] = {}
        for s in self.states:
            classes.setdefault(self.output_map.get(s, ""), set()).add(s)
        return {y: frozenset(v) for y, v in classes.items()}


@dataclass(frozen=True)
class Run:
    """A finite run: ``state_seq`` consumes ``input_seq`` transition-wise.

    ``state_seq`` has length ``len(input_seq) + 1``; position 0 is an
    initial state of the generating system.
    """

    input_seq: tuple[str, ...]
    state_seq: tuple[str, ...]

    def outputs(self, sys: TransitionSystem) -> tuple[str, ...]:
        return tuple(sys.output_map[s] for s in self.state_seq)


def validate(sys: TransitionSystem) -> list[str]:
    """Diagnose a system against the type invariants.

    Returns an empty list iff the system is well formed; otherwise one entry
    per violated invariant, naming the offending identifier.
    """
    problems: list[str] = []
    state_set = set(sys.states)
    input_set = set(sys.inputs)
    output_set = set(sys.outputs)

    for coll, label in ((sys.states, "state"), (sys.inputs, "input"), (sys.outputs, "output")):
        seen: set[str] = set()
        for ident in coll:
            if ident in seen:
                problems.append(f"duplicate {label} identifier {ident!r}")
            seen.add(ident)

    for s in sorted(sys.initial):
        if s not in state_set:
            problems.append(f"initial state {s!r} not a state")
    for s in sorted(sys.secret):
        if s not in state_set:
            problems.append(f"secret state {s!r} not a state")

    for src, inp, dst in sorted(sys.transitions):
        if src not in state_set:
            problems.append(f"transition source {src!r} not a state")
        if dst not in state_set:
            problems.append(f"transition target {dst!r} not a state")
        if inp not in input_set:
            problems.append(f"transition input {inp!r} not an input")

    for s in sys.states:
        if s not in sys.output_map:
            problems.append(f"state {s!r} missing from output map")
    for s, y in sorted(sys.output_map.items()):
        if s not in state_set:
            problems.append(f"output map entry for unknown state {s!r}")
        elif y not in output_set:
            problems.append(f"output {y!r} of state {s!r} not an output")

    return problems


def is_total(sys: TransitionSystem) -> bool:
    """True iff every (state, input) pair has at least one successor."""
    return all(
        sys.successors(x, u) for x in sys.states for u in sys.inputs
    )


def augment(sys: TransitionSystem) -> TransitionSystem:
    """Complete a non-total system with the sink state ``__phi__``.

    The sink carries a fresh output, self-loops under every input, and
    absorbs every missing (state, input) pair.  Total systems are returned
    unchanged, which also makes the operation idempotent.
    """
    if is_total(sys):
        return sys
    if PHI in sys.states or PHI in sys.outputs or PHI in sys.inputs:
        raise ValueError(f"reserved identifier {PHI!r} already used by {sys.name!r}")
    new_transitions = set(sys.transitions)
    for u in sys.inputs:
        new_transitions.add((PHI, u, PHI))
        for x in sys.states:
            if not sys.successors(x, u):
                new_transitions.add((x, u, PHI))
    output_map = dict(sys.output_map)
    output_map[PHI] = PHI
    return TransitionSystem(
        name=sys.name,
        states=(*sys.states, PHI),
        initial=sys.initial,
        secret=sys.secret,
        inputs=sys.inputs,
        outputs=(*sys.outputs, PHI),
        output_map=output_map,
        transitions=new_transitions,
    )


def reachable(sys: TransitionSystem) -> frozenset[str]:
    """Least fixpoint of successor closure from the initial states."""
    seen = set(sys.initial)
    frontier = sorted(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for u in sys.inputs:
                for t in sys.successors(x, u):
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = sorted(nxt)
    return frozenset(seen)


def enumerate_runs(sys: TransitionSystem, max_len: int) -> Iterator[Run]:
    """Yield every run with at most ``max_len`` transitions.

    Depth-first order: a run precedes its extensions; siblings are ordered
    by input identifier, then by target state.  The count is exponential in
    ``max_len`` for branching systems.
    """

    def extend(inputs: tuple[str, ...], states: tuple[str, ...]) -> Iterator[Run]:
        yield Run(inputs, states)
        if len(inputs) >= max_len:
            return
        last = states[-1]
        for u in sys.inputs:
            for t in sys.successors(last, u):
                yield from extend(inputs + (u,), states + (t,))

    for x0 in sorted(sys.initial):
        yield from extend((), (x0,))
