"""Acceptance criteria, one test per criterion, each printing a verdict line.

Every tolerance here is exact: fixture verdicts are compared for equality,
property batches over seeded random systems must have zero counterexamples,
and the geometric proof runs in exact rational arithmetic.
"""

from fractions import Fraction as F
from functools import lru_cache

from opacheck import (
    CounterRng,
    augment,
    backward_observer,
    bounded_check_all,
    build_quotient,
    check_bisimulation,
    check_eq1_condition,
    check_infsop_bisimulation,
    check_infsop_self,
    check_initsop_bisimulation,
    check_initsop_simulation,
    check_simulation,
    fixture_relation,
    fixture_system,
    forward_observer,
    implication_suite,
    list_fixtures,
    naive_cso_opaque,
    naive_initso_opaque,
    quotient_relation,
    replay_witness,
    verify,
    verify_cso,
    verify_initso,
)
from opacheck.pwa import (
    REGION_SUCCESSOR,
    apply_dynamics,
    classify_point,
    verify_region_transitions,
)

from helpers import sample_homogeneous_partition, sample_system

N_SAMPLES = 500


@lru_cache(maxsize=None)
def observer_samples():
    return tuple(sample_system(seed, max_states=4) for seed in range(N_SAMPLES))


@lru_cache(maxsize=None)
def quotient_samples():
    return tuple(
        sample_system(seed, max_states=5, max_inputs=2, max_outputs=3)
        for seed in range(N_SAMPLES)
    )


def _report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"{status}  {name}{suffix}")
    assert ok, name


#: notion -> opaque, per fixture; K-step entries map window size to verdict.
FIXTURE_TABLE = {
    "prop-3.5-sigma1": {
        "initso": True, "cso": True, "infso": True,
        "kso": {1: True, 2: True, 3: True, 4: True},
    },
    "prop-3.5-sigma2": {
        "initso": False, "cso": False, "infso": False,
        "kso": {1: False, 2: False, 3: False, 4: False},
    },
    "fig7": {
        "initso": False, "cso": True, "infso": False,
        "kso": {1: False, 2: False, 3: False, 4: False},
    },
    "fig8": {
        "infso": False,
        "kso": {1: True, 2: False, 3: False, 4: False},
    },
    "fig9": {
        "initso": True, "cso": False, "infso": False,
        "kso": {1: False, 2: False, 3: False, 4: False},
    },
    "fig10": {
        "initso": False, "cso": True,
        "kso": {1: True},
    },
    "exam4": {"infso": True},
    "fig5-quotient": {"infso": True},
    "eq5-quotient": {
        "initso": True, "cso": True, "infso": True,
        "kso": {k: True for k in range(1, 9)},
    },
}


def test_criterion_1_fixture_verdict_table():
    from opacheck import fixture_partition

    mismatches = []
    count = 0
    for fid, expected in FIXTURE_TABLE.items():
        sys = fixture_system(fid)
        for notion, want in expected.items():
            if notion == "kso":
                for k, w in want.items():
                    count += 1
                    got = verify(sys, "kso", k=k).opaque
                    if got != w:
                        mismatches.append((fid, f"kso({k})", w, got))
            else:
                count += 1
                got = verify(sys, notion).opaque
                if got != want:
                    mismatches.append((fid, notion, want, got))
    quotient = build_quotient(fixture_partition("exam4"))
    if len(quotient.states) != 4:
        mismatches.append(("exam4-quotient", "state count", 4, len(quotient.states)))
    _report(
        "criterion 1: fixture verdict table (exact)",
        not mismatches,
        f"{count} verdicts" if not mismatches else str(mismatches),
    )


def test_criterion_2_relation_diagnosis_table():
    problems = []
    prop = fixture_relation("prop-3.5")
    if check_initsop_simulation(prop).clauses != {"1a"}:
        problems.append("prop-3.5 initsop-sim clauses")
    if check_infsop_bisimulation(prop).clauses != {"1b", "2b", "2c"}:
        problems.append("prop-3.5 infsop-bisim clauses")
    if not check_simulation(prop).holds:
        problems.append("prop-3.5 plain simulation")
    if not check_bisimulation(prop).holds:
        problems.append("prop-3.5 plain bisimulation")
    for name, clause in (("rem2", "1c"), ("rem4", "2a"), ("rem3", "2c")):
        if check_initsop_simulation(fixture_relation(name)).clauses != {clause}:
            problems.append(f"{name} clause set")
    _report(
        "criterion 2: relation-diagnosis table (exact clause sets)",
        not problems, ", ".join(problems) if problems else "6 relations",
    )


def test_criterion_3_quotient_conditions():
    bad = []
    for seed, sys in enumerate(quotient_samples()):
        partition = sample_homogeneous_partition(seed, sys)
        rel = quotient_relation(partition)
        if not check_simulation(rel).holds:
            bad.append((seed, "quotient relation not a simulation"))
        if check_eq1_condition(partition).holds != check_initsop_bisimulation(rel).holds:
            bad.append((seed, "eq1 <-> initsop-bisim mismatch"))
        if check_infsop_self(partition).holds != check_infsop_bisimulation(rel).holds:
            bad.append((seed, "self <-> infsop-bisim mismatch"))
    _report(
        "criterion 3: quotient conditions, property-based",
        not bad, f"{N_SAMPLES} systems x partitions" if not bad else str(bad[:3]),
    )


def test_criterion_4_observer_cross_validation():
    bad = []
    for seed, sys in enumerate(observer_samples()):
        if naive_cso_opaque(sys) != verify_cso(sys).opaque:
            bad.append((seed, "cso"))
        if naive_initso_opaque(sys) != verify_initso(sys).opaque:
            bad.append((seed, "initso"))
        found = bounded_check_all(sys, 6, ks=(1, 2, 3))
        for key, witness in found.items():
            notion, k = (key, None) if isinstance(key, str) else key
            opaque = verify(sys, notion, k=k).opaque
            if witness is not None and opaque:
                bad.append((seed, f"bounded refutation vs opaque {key}"))
    _report(
        "criterion 4: observer cross-validation, property-based",
        not bad, f"{N_SAMPLES} systems, L=6" if not bad else str(bad[:3]),
    )


def test_criterion_5_implication_lattice():
    bad = []
    for fid in list_fixtures():
        report = implication_suite(fixture_system(fid), 4)
        if not report.consistent:
            bad.append((fid, report.problems))
    for seed, sys in enumerate(observer_samples()):
        report = implication_suite(sys, 4)
        if not report.consistent:
            bad.append((seed, report.problems))
    _report(
        "criterion 5: implication lattice incl. K monotonicity",
        not bad,
        f"{len(list_fixtures())} fixtures + {N_SAMPLES} samples"
        if not bad else str(bad[:3]),
    )


def test_criterion_6_symbolic_proof():
    check = verify_region_transitions()
    ok = check.holds and check.a1_image_equals_b1
    image_count = sum(1 for c in check.containments if c.kind == "image" and c.ok)
    pre_count = sum(1 for c in check.containments if c.kind == "preimage" and c.ok)
    exceptions = 0
    rng = CounterRng(606)
    for _ in range(10_000):
        dx = 1 + rng.randrange(12)
        x = F(rng.randrange(6 * dx + 1) - 3 * dx, dx)
        dy = 1 + rng.randrange(12)
        y = F(rng.randrange(6 * dy + 1) - 3 * dy, dy)
        if classify_point(apply_dynamics((x, y))) != REGION_SUCCESSOR[classify_point((x, y))]:
            exceptions += 1
    ok = ok and image_count >= 8 and pre_count > 0 and exceptions == 0
    _report(
        "criterion 6: exact region-transition proof + sampling",
        ok,
        f"{image_count} image containments, {pre_count} preimage certificates, "
        f"10^4 samples, {exceptions} exceptions",
    )


def test_criterion_7_witness_integrity():
    checked, bad = 0, []
    cases = [fixture_system(fid) for fid in list_fixtures()]
    cases += list(observer_samples())
    for i, sys in enumerate(cases):
        for notion, k in (
            ("initso", None), ("cso", None), ("infso", None),
            ("kso", 1), ("kso", 2),
        ):
            verdict = verify(sys, notion, k=k)
            if verdict.opaque:
                continue
            checked += 1
            if verdict.witness is None or not replay_witness(sys, verdict):
                bad.append((i, notion))
    _report(
        "criterion 7: witness integrity (replay + condition)",
        checked > 0 and not bad,
        f"{checked} not-opaque verdicts replayed" if not bad else str(bad[:3]),
    )


def test_criterion_8_complexity_sanity():
    bad = []
    inputs = [fixture_system(fid) for fid in list_fixtures()]
    inputs += list(observer_samples())
    for i, sys in enumerate(inputs):
        aug = augment(sys)
        bound = sum(2 ** len(cls) for cls in aug.states_by_output.values())
        if len(forward_observer(sys).states) > bound:
            bad.append((i, "forward"))
        if len(backward_observer(sys).states) > bound:
            bad.append((i, "backward"))
    _report(
        "criterion 8: per-component observer size within class bound",
        not bad, f"{len(inputs)} systems" if not bad else str(bad[:3]),
    )
