"""Built-in example systems, relations, and partitions.

These small systems exercise every corner of the toolkit: opacity verdicts
of all four notions, relation diagnoses down to single clauses, and the
quotient pipeline.  Each entry is constructed fresh on access.
"""

from __future__ import annotations

from .quotient import Partition
from .relations import StatePairRelation
from .system import TransitionSystem


def _example_2_1() -> TransitionSystem:
    return TransitionSystem(
        name="example-2.1",
        states="abc",
        initial="abc",
        secret="b",
        inputs="01",
        outputs="01",
        output_map={"a": "0", "b": "1", "c": "1"},
        transitions=[
            ("a", "1", "a"), ("a", "0", "b"), ("a", "0", "c"),
            ("b", "0", "b"), ("b", "1", "b"),
            ("c", "0", "c"), ("c", "1", "b"),
        ],
    )


def _cycle(name, states, outputs, secret, inputs=("1",), edge_inputs=None):
    """A one-directional cycle over ``states`` with per-state outputs."""
    n = len(states)
    transitions = []
    for i, s in enumerate(states):
        nxt = states[(i + 1) % n]
        for u in (edge_inputs[i] if edge_inputs else inputs):
            transitions.append((s, u, nxt))
    return TransitionSystem(
        name=name,
        states=states,
        initial=states,
        secret=secret,
        inputs=inputs,
        outputs=sorted(set(outputs)),
        output_map=dict(zip(states, outputs)),
        transitions=transitions,
    )


def _prop35_sigma1() -> TransitionSystem:
    return _cycle(
        "prop-3.5-sigma1", ("1'", "2'", "3'", "4'"), ("1", "2", "1", "2"), {"1'"}
    )


def _prop35_sigma2() -> TransitionSystem:
    return _cycle("prop-3.5-sigma2", ("1", "2"), ("1", "2"), {"1"})


def _rem2_shape(name, states, initial, secret):
    """Six states: a 4-cycle 1-2-3-4 plus a 5-6 appendix, single input."""
    s1, s2, s3, s4, s5, s6 = states
    transitions = [
        (s1, "1", s2), (s2, "1", s3), (s3, "1", s4), (s4, "1", s1),
        (s1, "1", s5), (s5, "1", s1),
        (s5, "1", s6), (s6, "1", s5),
        (s6, "1", s3), (s3, "1", s6),
    ]
    return TransitionSystem(
        name=name,
        states=states,
        initial=initial,
        secret=secret,
        inputs=("1",),
        outputs=("1", "2", "3"),
        output_map=dict(zip(states, ("1", "2", "1", "2", "3", "3"))),
        transitions=transitions,
    )


def _rem2_sigma1() -> TransitionSystem:
    states = ("1", "2", "3", "4", "5", "6")
    return _rem2_shape("rem2-sigma1", states, ("1", "2", "3", "4"), {"1"})


def _rem2_sigma2() -> TransitionSystem:
    states = ("1'", "2'", "3'", "4'", "5'", "6'")
    return _rem2_shape("rem2-sigma2", states, states, {"5'", "6'"})


def _four_cycle(name, states, edge_inputs):
    return TransitionSystem(
        name=name,
        states=states,
        initial=states,
        secret={states[0]},
        inputs=("1", "2"),
        outputs=("1", "2"),
        output_map=dict(zip(states, ("1", "2", "1", "2"))),
        transitions=[
            (states[i], u, states[(i + 1) % 4])
            for i in range(4)
            for u in edge_inputs[i]
        ],
    )


def _rem4_sigma1() -> TransitionSystem:
    return _four_cycle(
        "rem4-sigma1", ("1", "2", "3", "4"), (("1", "2"),) * 4
    )


def _rem4_sigma2() -> TransitionSystem:
    return _four_cycle(
        "rem4-sigma2", ("1'", "2'", "3'", "4'"),
        (("1", "2"), ("1",), ("1",), ("1",)),
    )


def _rem3_sigma1() -> TransitionSystem:
    return _four_cycle(
        "rem3-sigma1", ("1", "2", "3", "4"), (("1",),) * 4
    )


def _rem3_sigma2() -> TransitionSystem:
    sys = _rem4_sigma2()
    return TransitionSystem(
        name="rem3-sigma2",
        states=sys.states,
        initial=sys.initial,
        secret=sys.secret,
        inputs=sys.inputs,
        outputs=sys.outputs,
        output_map=sys.output_map,
        transitions=sys.transitions,
    )


def _exam4() -> TransitionSystem:
    states = tuple("12345678")
    return _cycle(
        "exam4", states, ("1", "2", "1", "2", "1", "2", "1", "2"), {"1", "5"}
    )


def _exam4_partition() -> Partition:
    return Partition(
        _exam4(), [{"1", "5"}, {"2", "6"}, {"3", "7"}, {"4", "8"}]
    )


def _fig5_quotient() -> TransitionSystem:
    return _cycle(
        "fig5-quotient", ("1+5", "2+6", "3+7", "4+8"),
        ("1", "2", "1", "2"), {"1+5"},
    )


def _branching(name, transitions, output_map, secret):
    states = sorted(output_map)
    return TransitionSystem(
        name=name,
        states=states,
        initial=states,
        secret=secret,
        inputs=("u1", "u2"),
        outputs=sorted(set(output_map.values())),
        output_map=output_map,
        transitions=transitions,
    )


def _fig7() -> TransitionSystem:
    return _branching(
        "fig7",
        [
            ("x3", "u1", "x1"), ("x3", "u1", "x2"), ("x3", "u1", "x3"),
            ("x1", "u1", "x4"), ("x1", "u2", "x4"),
            ("x2", "u1", "x4"),
            ("x4", "u1", "x4"),
        ],
        {"x1": "y1", "x2": "y1", "x3": "y2", "x4": "y3"},
        {"x1"},
    )


def _fig8() -> TransitionSystem:
    return _branching(
        "fig8",
        [
            ("x3", "u1", "x1"), ("x3", "u1", "x2"), ("x3", "u1", "x3"),
            ("x1", "u1", "x4"),
            ("x2", "u1", "x5"),
            ("x4", "u2", "x4"),
            ("x5", "u1", "x5"),
        ],
        {"x1": "y1", "x2": "y1", "x3": "y2", "x4": "y3", "x5": "y3"},
        {"x1"},
    )


def _fig9() -> TransitionSystem:
    return _branching(
        "fig9",
        [
            ("x3", "u1", "x1"), ("x3", "u2", "x2"), ("x3", "u1", "x3"),
            ("x1", "u1", "x4"),
            ("x2", "u1", "x4"),
            ("x4", "u1", "x4"),
        ],
        {"x1": "y1", "x2": "y1", "x3": "y2", "x4": "y3"},
        {"x1"},
    )


def _fig10() -> TransitionSystem:
    return _branching(
        "fig10",
        [
            ("x3", "u1", "x1"), ("x3", "u1", "x2"), ("x3", "u1", "x3"),
            ("x1", "u1", "x4"),
            ("x2", "u1", "x5"),
            ("x4", "u2", "x6"),
            ("x5", "u1", "x6"),
            ("x6", "u1", "x6"),
        ],
        {
            "x1": "y1", "x2": "y1", "x3": "y2",
            "x4": "y3", "x5": "y3", "x6": "y4",
        },
        {"x1"},
    )


def _eq5_quotient() -> TransitionSystem:
    output_map = {
        "A1": "1", "A2": "1",
        "B1": "2", "B2": "2",
        "C1": "3", "C2": "3",
        "D1": "4", "D2": "4",
        "E": "5",
    }
    transitions = [("E", "u", "E")]
    for i in ("1", "2"):
        transitions += [
            (f"A{i}", "u", f"B{i}"), (f"B{i}", "u", f"C{i}"),
            (f"C{i}", "u", f"D{i}"), (f"D{i}", "u", f"A{i}"),
        ]
    states = sorted(output_map)
    return TransitionSystem(
        name="eq5-quotient",
        states=states,
        initial=states,
        secret={"A1"},
        inputs=("u",),
        outputs=("1", "2", "3", "4", "5"),
        output_map=output_map,
        transitions=transitions,
    )


_SYSTEMS = {
    "example-2.1": _example_2_1,
    "prop-3.5-sigma1": _prop35_sigma1,
    "prop-3.5-sigma2": _prop35_sigma2,
    "rem2-sigma1": _rem2_sigma1,
    "rem2-sigma2": _rem2_sigma2,
    "rem3-sigma1": _rem3_sigma1,
    "rem3-sigma2": _rem3_sigma2,
    "rem4-sigma1": _rem4_sigma1,
    "rem4-sigma2": _rem4_sigma2,
    "exam4": _exam4,
    "fig5-quotient": _fig5_quotient,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
    "fig10": _fig10,
    "eq5-quotient": _eq5_quotient,
}


def list_fixtures() -> list[str]:
    return sorted(_SYSTEMS)


def fixture_system(fixture_id: str) -> TransitionSystem:
    try:
        return _SYSTEMS[fixture_id]()
    except KeyError:
        raise KeyError(f"unknown fixture {fixture_id!r}") from None


def _identity_pairs(left: TransitionSystem, right: TransitionSystem):
    return {
        (a, b) for a, b in zip(sorted(left.states), sorted(right.states))
    }


def fixture_relation(name: str) -> StatePairRelation:
    """Companion relations: ``prop-3.5``, ``rem2``, ``rem3``, ``rem4``."""
    if name == "prop-3.5":
        return StatePairRelation(
            _prop35_sigma1(), _prop35_sigma2(),
            {("1'", "1"), ("2'", "2"), ("3'", "1"), ("4'", "2")},
        )
    if name == "rem2":
        left, right = _rem2_sigma1(), _rem2_sigma2()
        return StatePairRelation(
            left, right, {(s, s + "'") for s in left.states}
        )
    if name == "rem3":
        left, right = _rem3_sigma1(), _rem3_sigma2()
        return StatePairRelation(
            left, right, {(s, s + "'") for s in left.states}
        )
    if name == "rem4":
        left, right = _rem4_sigma1(), _rem4_sigma2()
        return StatePairRelation(
            left, right, {(s, s + "'") for s in left.states}
        )
    raise KeyError(f"unknown fixture relation {name!r}")


def fixture_partition(name: str) -> Partition:
    """Companion partitions: ``exam4``."""
    if name == "exam4":
        return _exam4_partition()
    raise KeyError(f"unknown fixture partition {name!r}")
