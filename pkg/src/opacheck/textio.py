"""Text formats: the NTS line format, relation/partition files, DOT export.

The NTS format is line oriented, UTF-8 with LF endings; ``#`` starts a
comment.  Serialisation is canonical (sorted identifiers, fixed section
order) so that parse -> serialize -> parse is a fixpoint and serialized
output is byte-stable.

::

    nts <name>
    states: <id> <id> ...
    initial: <id> ...
    secret: <id> ...
    inputs: <id> ...
    outputs: <id> ...
    map: <state> <output>       # one line per state, each state exactly once
    trans: <src> <input> <dst>  # repeated
    end
"""

from __future__ import annotations

import re

from .observer import ComponentObserver, Observer, ObserverState, format_obs_input
from .quotient import Partition
from .relations import StatePairRelation
from .system import TransitionSystem, validate

IDENT_RE = re.compile(r"[A-Za-z0-9_.'+-]+\Z")


class ParseError(ValueError):
    """Syntax or consistency error in a text input, with a line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _lines(text: str):
    """Yield (line number, tokens) for nonblank lines, comments stripped."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line.split()


def _check_ident(line_no: int, token: str) -> str:
    if not IDENT_RE.match(token):
        raise ParseError(line_no, f"invalid identifier {token!r}")
    return token


def _id_section(line_no: int, tokens: list[str], keyword: str) -> list[str]:
    if not tokens or tokens[0] != keyword + ":":
        got = tokens[0] if tokens else "end of line"
        raise ParseError(line_no, f"expected {keyword}: section, got {got!r}")
    seen = []
    for t in tokens[1:]:
        _check_ident(line_no, t)
        if t in seen:
            raise ParseError(line_no, f"duplicate identifier {t!r} in {keyword}:")
        seen.append(t)
    return seen


def parse_nts(text: str) -> TransitionSystem:
    """Parse the NTS line format; the result always passes ``validate``."""
    stream = _lines(text)

    def next_line(what: str):
        try:
            return next(stream)
        except StopIteration:
            raise ParseError(0, f"unexpected end of input, expected {what}") from None

    line_no, tokens = next_line("nts header")
    if len(tokens) != 2 or tokens[0] != "nts":
        raise ParseError(line_no, "expected header 'nts <name>'")
    name = _check_ident(line_no, tokens[1])

    line_no, tokens = next_line("states:")
    states = _id_section(line_no, tokens, "states")
    line_no, tokens = next_line("initial:")
    initial = _id_section(line_no, tokens, "initial")
    line_no, tokens = next_line("secret:")
    secret = _id_section(line_no, tokens, "secret")
    line_no, tokens = next_line("inputs:")
    inputs = _id_section(line_no, tokens, "inputs")
    line_no, tokens = next_line("outputs:")
    outputs = _id_section(line_no, tokens, "outputs")

    state_set, input_set, output_set = set(states), set(inputs), set(outputs)
    output_map: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    while True:
        line_no, tokens = next_line("map:/trans:/end")
        if tokens == ["end"]:
            break
        if tokens[0] == "map:":
            if len(tokens) != 3:
                raise ParseError(line_no, "map: expects '<state> <output>'")
            s, y = tokens[1], tokens[2]
            if s not in state_set:
                raise ParseError(line_no, f"map: unknown state {s!r}")
            if y not in output_set:
                raise ParseError(line_no, f"map: unknown output {y!r}")
            if s in output_map:
                raise ParseError(line_no, f"map: duplicate entry for state {s!r}")
            output_map[s] = y
        elif tokens[0] == "trans:":
            if len(tokens) != 4:
                raise ParseError(line_no, "trans: expects '<src> <input> <dst>'")
            src, u, dst = tokens[1], tokens[2], tokens[3]
            if src not in state_set:
                raise ParseError(line_no, f"trans: unknown source state {src!r}")
            if u not in input_set:
                raise ParseError(line_no, f"trans: unknown input {u!r}")
            if dst not in state_set:
                raise ParseError(line_no, f"trans: unknown target state {dst!r}")
            transitions.add((src, u, dst))
        else:
            raise ParseError(line_no, f"expected map:, trans: or end, got {tokens[0]!r}")

    for line_no, tokens in stream:
        raise ParseError(line_no, "content after end")

    sys = TransitionSystem(
        name=name,
        states=states,
        initial=initial,
        secret=secret,
        inputs=inputs,
        outputs=outputs,
        output_map=output_map,
        transitions=transitions,
    )
    problems = validate(sys)
    if problems:
        raise ParseError(0, "; ".join(problems))
    return sys


def serialize_nts(sys: TransitionSystem) -> str:
    """Canonical text form: sorted identifiers, fixed sections, LF endings."""
    problems = validate(sys)
    if problems:
        raise ValueError("cannot serialize invalid system: " + "; ".join(problems))
    lines = [f"nts {sys.name}"]
    lines.append("states: " + " ".join(sys.states))
    lines.append("initial: " + " ".join(sorted(sys.initial)))
    lines.append("secret: " + " ".join(sorted(sys.secret)))
    lines.append("inputs: " + " ".join(sys.inputs))
    lines.append("outputs: " + " ".join(sys.outputs))
    for s in sys.states:
        lines.append(f"map: {s} {sys.output_map[s]}")
    for src, u, dst in sorted(sys.transitions):
        lines.append(f"trans: {src} {u} {dst}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_relation(
    text: str, left: TransitionSystem, right: TransitionSystem
) -> StatePairRelation:
    """One ``<left-state> <right-state>`` pair per line."""
    pairs = set()
    lstates, rstates = set(left.states), set(right.states)
    for line_no, tokens in _lines(text):
        if len(tokens) != 2:
            raise ParseError(line_no, "expected '<left-state> <right-state>'")
        a, b = tokens
        if a not in lstates:
            raise ParseError(line_no, f"unknown left state {a!r}")
        if b not in rstates:
            raise ParseError(line_no, f"unknown right state {b!r}")
        pairs.add((a, b))
    return StatePairRelation(left, right, pairs)


def serialize_relation(rel: StatePairRelation) -> str:
    return "".join(f"{a} {b}\n" for a, b in sorted(rel.pairs))


def parse_partition(text: str, sys: TransitionSystem) -> Partition:
    """One block per line, whitespace-separated state identifiers."""
    blocks = []
    states = set(sys.states)
    for line_no, tokens in _lines(text):
        block = set()
        for t in tokens:
            if t not in states:
                raise ParseError(line_no, f"unknown state {t!r}")
            if t in block:
                raise ParseError(line_no, f"duplicate state {t!r} in block")
            block.add(t)
        blocks.append(block)
    return Partition(sys, blocks)


def serialize_partition(p: Partition) -> str:
    return "".join(" ".join(sorted(block)) + "\n" for block in p.blocks)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    obj: TransitionSystem | Observer | ComponentObserver,
    offenders=(),
) -> str:
    """Deterministic Graphviz text.

    Transition systems use the diagramming conventions of the library:
    node label ``state/output``, double border for secret states, a bare
    arrow into each initial state.  Observer nodes are labelled
    ``{q1} | {q2}``; ``offenders`` are filled.
    """
    if isinstance(obj, TransitionSystem):
        return _system_dot(obj, offenders)
    if isinstance(obj, Observer):
        return _observer_dot(obj, offenders)
    if isinstance(obj, ComponentObserver):
        return _component_dot(obj, offenders)
    raise TypeError(f"cannot export {type(obj).__name__} as DOT")


def _system_dot(sys: TransitionSystem, offenders) -> str:
    offenders = set(offenders)
    out = [f"digraph {_dot_quote(sys.name)} {{", "  rankdir=LR;"]
    for i, s in enumerate(sys.states):
        if s in sys.initial:
            out.append(f"  __start{i} [shape=none, label=\"\"];")
    for s in sys.states:
        attrs = [f"label={_dot_quote(s + '/' + sys.output_map[s])}", "shape=circle"]
        if s in sys.secret:
            attrs.append("peripheries=2")
        if s in offenders:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightcoral")
        out.append(f"  {_dot_quote(s)} [{', '.join(attrs)}];")
    for i, s in enumerate(sys.states):
        if s in sys.initial:
            out.append(f"  __start{i} -> {_dot_quote(s)};")
    edges: dict[tuple[str, str], list[str]] = {}
    for src, u, dst in sorted(sys.transitions):
        edges.setdefault((src, dst), []).append(u)
    for (src, dst), labels in sorted(edges.items()):
        label = ",".join(sorted(labels))
        out.append(
            f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label={_dot_quote(label)}];"
        )
    out.append("}")
    return "\n".join(out) + "\n"


def _observer_dot(obs: Observer, offenders) -> str:
    offenders = {o.label() if isinstance(o, ObserverState) else o for o in offenders}
    initial = set(obs.initial)
    out = [f"digraph {_dot_quote(obs.source.name + '_observer')} {{", "  rankdir=LR;"]
    ids = {state: f"n{i}" for i, state in enumerate(obs.states)}
    for state, node in ids.items():
        attrs = [f"label={_dot_quote(state.label())}", "shape=box"]
        if state.label() in offenders:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightcoral")
        out.append(f"  {node} [{', '.join(attrs)}];")
        if state in initial:
            out.append(f"  __start_{node} [shape=none, label=\"\"];")
            out.append(f"  __start_{node} -> {node};")
    for src, step, dst in obs.transitions:
        out.append(
            f"  {ids[src]} -> {ids[dst]} [label={_dot_quote(format_obs_input(step))}];"
        )
    out.append("}")
    return "\n".join(out) + "\n"


def _component_dot(obs: ComponentObserver, offenders) -> str:
    def label(q: frozenset[str]) -> str:
        return "{" + ",".join(sorted(q)) + "}"

    offenders = {label(o) if isinstance(o, frozenset) else o for o in offenders}
    initial = set(obs.initial)
    out = [
        f"digraph {_dot_quote(obs.source.name + '_' + obs.kind)} {{",
        "  rankdir=LR;",
    ]
    ids = {q: f"n{i}" for i, q in enumerate(obs.states)}
    for q, node in ids.items():
        attrs = [f"label={_dot_quote(label(q))}", "shape=box"]
        if label(q) in offenders:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightcoral")
        out.append(f"  {node} [{', '.join(attrs)}];")
        if q in initial:
            out.append(f"  __start_{node} [shape=none, label=\"\"];")
            out.append(f"  __start_{node} -> {node};")
    for src, u, dst in obs.transitions:
        out.append(f"  {ids[src]} -> {ids[dst]} [label={_dot_quote(u)}];")
    out.append("}")
    return "\n".join(out) + "\n"
