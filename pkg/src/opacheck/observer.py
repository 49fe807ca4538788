"""Two-way observer construction and the four opacity decision procedures.

The observer tracks a pair of belief sets: the first component is a
forward state estimate (successor closure split by output class), the
second a backward estimate (predecessor closure split likewise).  The two
components move independently: a ``(u, eps)`` input advances only the
first, an ``(eps, u)`` input only the second.  Reachability questions on
this product decide all four opacity notions:

* current-state: no reachable first component lies inside the secret set;
* initial-state: no reachable second component traps the initial states
  it contains inside the secret set;
* infinite-step: no reachable pair has a nonempty intersection inside the
  secret set;
* K-step: as infinite-step, restricted to paths with at most K backward
  steps.

Verdicts carry replayable witness paths.  All procedures complete the
input system with the ``__phi__`` sink first, so that runs that die early
are observably distinct from runs that continue.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .system import ResourceCapError, TransitionSystem, augment

#: Default cap on explored observer states per construction.
DEFAULT_STATE_CAP = 2**20

#: Observer input: exactly one side is an input identifier, the other None.
ObsInput = tuple[str | None, str | None]

INITSO = "initso"
CSO = "cso"
KSO = "kso"
INFSO = "infso"
NOTIONS = (INITSO, CSO, KSO, INFSO)


def format_obs_input(step: ObsInput) -> str:
    u1, u2 = step
    return f"({u1 if u1 is not None else 'ε'},{u2 if u2 is not None else 'ε'})"


@dataclass(frozen=True)
class ObserverState:
    """A pair of nonempty, output-homogeneous belief sets."""

    q1: frozenset[str]
    q2: frozenset[str]

    def label(self) -> str:
        return (
            "{" + ",".join(sorted(self.q1)) + "} | {"
            + ",".join(sorted(self.q2)) + "}"
        )


@dataclass(frozen=True)
class Observer:
    """BFS-reachable fragment of the two-way observer of ``source``."""

    source: TransitionSystem
    states: tuple[ObserverState, ...]
    initial: tuple[ObserverState, ...]
    transitions: tuple[tuple[ObserverState, ObsInput, ObserverState], ...]


@dataclass(frozen=True)
class ComponentObserver:
    """One side of the observer explored on its own (the product shuffles)."""

    kind: str  # "forward" or "backward"
    source: TransitionSystem
    states: tuple[frozenset[str], ...]
    initial: tuple[frozenset[str], ...]
    transitions: tuple[tuple[frozenset[str], str, frozenset[str]], ...]


@dataclass(frozen=True)
class Witness:
    """A replayable observer path certifying a not-opaque verdict."""

    initial: ObserverState
    steps: tuple[tuple[ObsInput, ObserverState], ...]

    @property
    def terminal(self) -> ObserverState:
        return self.steps[-1][1] if self.steps else self.initial

    def backward_count(self) -> int:
        return sum(1 for (step, _) in self.steps if step[1] is not None)

    def describe(self) -> str:
        parts = [self.initial.label()]
        for step, state in self.steps:
            parts.append(f" -{format_obs_input(step)}-> {state.label()}")
        return "".join(parts)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one opacity check, with a witness when not opaque."""

    notion: str
    opaque: bool
    witness: Witness | None
    augmented: bool
    k: int | None = None

    def label(self) -> str:
        return f"{self.notion}({self.k})" if self.notion == KSO else self.notion

    def describe(self, with_witness: bool = True) -> str:
        if self.opaque:
            return f"{self.label()}: opaque"
        if with_witness and self.witness is not None:
            return f"{self.label()}: not opaque  witness: {self.witness.describe()}"
        return f"{self.label()}: not opaque"


def succ_set(sys: TransitionSystem, q: frozenset[str], u: str) -> frozenset[str]:
    """States reachable from ``q`` in one ``u``-step."""
    if u not in sys.inputs:
        raise ValueError(f"unknown input {u!r}")
    out: set[str] = set()
    for x in q:
        out.update(sys.successors(x, u))
    return frozenset(out)


def post_set(sys: TransitionSystem, q: frozenset[str], u: str) -> frozenset[str]:
    """States that can reach ``q`` in one ``u``-step."""
    if u not in sys.inputs:
        raise ValueError(f"unknown input {u!r}")
    out: set[str] = set()
    for x in q:
        out.update(sys.predecessors(x, u))
    return frozenset(out)


def _split_by_output(sys: TransitionSystem, q: frozenset[str]) -> list[frozenset[str]]:
    classes: dict[str, set[str]] = {}
    for x in q:
        classes.setdefault(sys.output_map[x], set()).add(x)
    return [frozenset(classes[y]) for y in sorted(classes)]


def _forward_seeds(sys: TransitionSystem) -> list[frozenset[str]]:
    return _split_by_output(sys, frozenset(sys.initial))


def _backward_seeds(sys: TransitionSystem) -> list[frozenset[str]]:
    return _split_by_output(sys, frozenset(sys.states))


def _component_steps(sys: TransitionSystem, forward: bool):
    """Successor function for one component, memoised per belief set."""
    step = succ_set if forward else post_set
    cache: dict[frozenset[str], tuple[tuple[str, frozenset[str]], ...]] = {}

    def successors(q: frozenset[str]):
        hit = cache.get(q)
        if hit is None:
            found = []
            for u in sys.inputs:
                for piece in _split_by_output(sys, step(sys, q, u)):
                    found.append((u, piece))
            hit = cache[q] = tuple(found)
        return hit

    return successors


def _explore_component(
    sys: TransitionSystem, forward: bool, state_cap: int
) -> ComponentObserver:
    seeds = _forward_seeds(sys) if forward else _backward_seeds(sys)
    successors = _component_steps(sys, forward)
    seen: dict[frozenset[str], None] = {}
    transitions = []
    queue = deque()
    def admit(q):
        if len(seen) >= state_cap:
            raise ResourceCapError(
                f"observer component exceeds {state_cap} states"
            )
        seen[q] = None
        queue.append(q)

    for q in seeds:
        if q not in seen:
            admit(q)
    while queue:
        q = queue.popleft()
        for u, q2 in successors(q):
            transitions.append((q, u, q2))
            if q2 not in seen:
                admit(q2)
    return ComponentObserver(
        kind="forward" if forward else "backward",
        source=sys,
        states=tuple(seen),
        initial=tuple(seeds),
        transitions=tuple(transitions),
    )


def forward_observer(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> ComponentObserver:
    """Forward belief construction of the completed system."""
    return _explore_component(augment(sys), forward=True, state_cap=state_cap)


def backward_observer(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> ComponentObserver:
    """Backward belief construction of the completed system."""
    return _explore_component(augment(sys), forward=False, state_cap=state_cap)


def _initial_pairs(sys: TransitionSystem) -> list[ObserverState]:
    return [
        ObserverState(q1, q2)
        for q1 in _forward_seeds(sys)
        for q2 in _backward_seeds(sys)
    ]


def _pair_successors(sys: TransitionSystem):
    fwd = _component_steps(sys, forward=True)
    bwd = _component_steps(sys, forward=False)

    def successors(state: ObserverState):
        for u, q1 in fwd(state.q1):
            yield (u, None), ObserverState(q1, state.q2)
        for u, q2 in bwd(state.q2):
            yield (None, u), ObserverState(state.q1, q2)

    return successors


def build_two_way_observer(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> Observer:
    """BFS-reachable fragment of the two-way observer (system completed first)."""
    aug = augment(sys)
    successors = _pair_successors(aug)
    initial = _initial_pairs(aug)
    seen: dict[ObserverState, None] = {}
    transitions = []
    queue = deque()
    def admit(state):
        if len(seen) >= state_cap:
            raise ResourceCapError(
                f"two-way observer exceeds {state_cap} states"
            )
        seen[state] = None
        queue.append(state)

    for s in initial:
        if s not in seen:
            admit(s)
    while queue:
        state = queue.popleft()
        for step, nxt in successors(state):
            transitions.append((state, step, nxt))
            if nxt not in seen:
                admit(nxt)
    return Observer(
        source=aug,
        states=tuple(seen),
        initial=tuple(initial),
        transitions=tuple(transitions),
    )


def _component_witness(
    aug: TransitionSystem,
    forward: bool,
    offending,
    state_cap: int,
) -> Witness | None:
    """Shortest component path to a belief satisfying ``offending``.

    Returns None when no reachable belief offends.  The path is embedded
    into full observer states by holding the untouched component at its
    canonical first seed.
    """
    seeds = _forward_seeds(aug) if forward else _backward_seeds(aug)
    successors = _component_steps(aug, forward)
    parent: dict[frozenset[str], tuple[frozenset[str], str] | None] = {}
    queue = deque()
    target = None
    for q in seeds:
        if q not in parent:
            if len(parent) >= state_cap:
                raise ResourceCapError(
                    f"observer component exceeds {state_cap} states"
                )
            parent[q] = None
            if offending(q):
                target = q
                break
            queue.append(q)
    while target is None and queue:
        q = queue.popleft()
        for u, q2 in successors(q):
            if q2 in parent:
                continue
            if len(parent) >= state_cap:
                raise ResourceCapError(
                    f"observer component exceeds {state_cap} states"
                )
            parent[q2] = (q, u)
            if offending(q2):
                target = q2
                break
            queue.append(q2)
    if target is None:
        return None

    path: list[tuple[str, frozenset[str]]] = []
    cur = target
    while parent[cur] is not None:
        prev, u = parent[cur]
        path.append((u, cur))
        cur = prev
    path.reverse()

    other_seeds = _backward_seeds(aug) if forward else _forward_seeds(aug)
    hold = other_seeds[0]
    if forward:
        mk = lambda q: ObserverState(q, hold)
        steps = tuple(((u, None), mk(q)) for u, q in path)
    else:
        mk = lambda q: ObserverState(hold, q)
        steps = tuple(((None, u), mk(q)) for u, q in path)
    return Witness(initial=mk(cur), steps=steps)


def verify_cso(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> Verdict:
    """Current-state opacity: no forward belief lies inside the secret set.

    Only the first component is explored; the product is a pure shuffle,
    so its reachable first components coincide with the forward beliefs.
    """
    aug = augment(sys)
    secret = aug.secret
    witness = _component_witness(
        aug, forward=True, offending=lambda q: q <= secret, state_cap=state_cap
    )
    return Verdict(CSO, witness is None, witness, augmented=aug is not sys)


def verify_initso(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> Verdict:
    """Initial-state opacity, decided on the backward component only."""
    aug = augment(sys)
    secret, initial = aug.secret, aug.initial

    def offending(q: frozenset[str]) -> bool:
        hits = q & initial
        return bool(hits) and hits <= secret

    if not aug.initial:
        # no initial observer pairs exist at all; vacuously opaque
        return Verdict(INITSO, True, None, augmented=aug is not sys)
    witness = _component_witness(
        aug, forward=False, offending=offending, state_cap=state_cap
    )
    return Verdict(INITSO, witness is None, witness, augmented=aug is not sys)


def _product_witness(
    aug: TransitionSystem,
    offending,
    state_cap: int,
    max_backward: int | None = None,
) -> Witness | None:
    """Shortest product path to an offending pair.

    When ``max_backward`` is given, exploration is over (pair, backward
    count) nodes so that only paths with at most that many backward steps
    are considered.
    """
    successors = _pair_successors(aug)
    # nodes are (pair, backward count); the count is tracked only when a
    # bound is given, otherwise pairs alone identify nodes
    track = max_backward is not None
    Node = tuple  # (ObserverState, backward count)
    parent: dict[Node, tuple[Node, ObsInput] | None] = {}
    queue = deque()
    target: Node | None = None
    for s in _initial_pairs(aug):
        node = (s, 0)
        if node not in parent:
            if len(parent) >= state_cap:
                raise ResourceCapError(
                    f"two-way observer exploration exceeds {state_cap} nodes"
                )
            parent[node] = None
            if offending(s):
                target = node
                break
            queue.append(node)
    while target is None and queue:
        node = queue.popleft()
        state, used = node
        for step, nxt in successors(state):
            nused = used + (1 if step[1] is not None else 0) if track else 0
            if track and nused > max_backward:
                continue
            nnode = (nxt, nused)
            if nnode in parent:
                continue
            if len(parent) >= state_cap:
                raise ResourceCapError(
                    f"two-way observer exploration exceeds {state_cap} nodes"
                )
            parent[nnode] = (node, step)
            if offending(nxt):
                target = nnode
                break
            queue.append(nnode)
    if target is None:
        return None
    path: list[tuple[ObsInput, ObserverState]] = []
    cur = target
    while parent[cur] is not None:
        prev, step = parent[cur]
        path.append((step, cur[0]))
        cur = prev
    path.reverse()
    return Witness(initial=cur[0], steps=tuple(path))


def _infso_offending(aug: TransitionSystem):
    secret = aug.secret

    def offending(state: ObserverState) -> bool:
        both = state.q1 & state.q2
        return bool(both) and both <= secret

    return offending


def verify_infso(
    sys: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> Verdict:
    """Infinite-step opacity over the full two-way observer."""
    aug = augment(sys)
    witness = _product_witness(aug, _infso_offending(aug), state_cap)
    return Verdict(INFSO, witness is None, witness, augmented=aug is not sys)


def verify_kso(
    sys: TransitionSystem, k: int, state_cap: int = DEFAULT_STATE_CAP
) -> Verdict:
    """K-step opacity: offending pairs reachable within ``k`` backward steps."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    aug = augment(sys)
    witness = _product_witness(
        aug, _infso_offending(aug), state_cap, max_backward=k
    )
    return Verdict(KSO, witness is None, witness, augmented=aug is not sys, k=k)


def verify(
    sys: TransitionSystem,
    notion: str,
    k: int | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Dispatch a notion name to its decision procedure."""
    if notion == CSO:
        return verify_cso(sys, state_cap)
    if notion == INITSO:
        return verify_initso(sys, state_cap)
    if notion == INFSO:
        return verify_infso(sys, state_cap)
    if notion == KSO:
        if k is None:
            raise ValueError("K-step opacity requires k")
        return verify_kso(sys, k, state_cap)
    raise ValueError(f"unknown notion {notion!r}")


def replay_witness(sys: TransitionSystem, verdict: Verdict) -> bool:
    """Re-execute a witness from scratch and re-check the violated condition.

    Uses only the one-step successor/predecessor functions, not the stored
    observer, so it independently certifies the verdict.
    """
    if verdict.witness is None:
        return False
    aug = augment(sys)
    w = verdict.witness

    start = w.initial
    if start.q1 not in _forward_seeds(aug) or start.q2 not in _backward_seeds(aug):
        return False
    cur = start
    for (step, claimed) in w.steps:
        u1, u2 = step
        if (u1 is None) == (u2 is None):
            return False
        if u1 is not None:
            nxt_sets = _split_by_output(aug, succ_set(aug, cur.q1, u1))
            if claimed.q1 not in nxt_sets or claimed.q2 != cur.q2:
                return False
        else:
            nxt_sets = _split_by_output(aug, post_set(aug, cur.q2, u2))
            if claimed.q2 not in nxt_sets or claimed.q1 != cur.q1:
                return False
        cur = claimed

    secret, initial = aug.secret, aug.initial
    if verdict.notion == CSO:
        return cur.q1 <= secret
    if verdict.notion == INITSO:
        hits = cur.q2 & initial
        return bool(hits) and hits <= secret
    both = cur.q1 & cur.q2
    if verdict.notion == INFSO:
        return bool(both) and both <= secret
    if verdict.notion == KSO:
        return (
            bool(both)
            and both <= secret
            and w.backward_count() <= (verdict.k or 0)
        )
    return False
