"""Quotient construction, the two quotient conditions, and refinement."""

import pytest

from opacheck import (
    Partition,
    build_quotient,
    check_eq1_condition,
    check_infsop_bisimulation,
    check_infsop_self,
    check_initsop_bisimulation,
    check_simulation,
    coarsest_infsop_partition,
    fixture_partition,
    fixture_system,
    is_secret_compatible,
    quotient_relation,
    validate_partition,
    verify,
)

from helpers import sample_homogeneous_partition, sample_system, set_partitions


class TestValidatePartition:
    def test_exam4_partition_valid(self):
        assert validate_partition(fixture_partition("exam4")) == []

    def test_output_mixing_block(self):
        sys = fixture_system("exam4")  # outputs alternate 1,2 around the cycle
        p = Partition(sys, [{"1", "2"}, {"3", "4"}, {"5", "6"}, {"7", "8"}])
        problems = validate_partition(p)
        assert any("mixes outputs" in msg for msg in problems)

    def test_missing_state(self):
        sys = fixture_system("exam4")
        p = Partition(sys, [{"1", "5"}, {"2", "6"}, {"3", "7"}])
        problems = validate_partition(p)
        assert any("do not cover" in msg for msg in problems)

    def test_overlap_and_empty(self):
        sys = fixture_system("example-2.1")
        p = Partition(sys, [{"a"}, {"a", "b"}, set(), {"c"}], names=["p", "q", "r", "s"])
        problems = validate_partition(p)
        assert any("overlaps" in msg for msg in problems)
        assert any("empty" in msg for msg in problems)


class TestSecretCompatible:
    def test_exam4_partition(self):
        assert is_secret_compatible(fixture_partition("exam4"))

    def test_mixing_block(self):
        sys = fixture_system("example-2.1")  # S = {b}
        p = Partition(sys, [{"a"}, {"b", "c"}])
        assert not is_secret_compatible(p)

    def test_singletons_always_compatible(self):
        sys = fixture_system("fig7")
        p = Partition(sys, [{s} for s in sys.states])
        assert is_secret_compatible(p)


class TestBuildQuotient:
    def test_exam4_quotient_is_fig5(self):
        quotient = build_quotient(fixture_partition("exam4"))
        fig5 = fixture_system("fig5-quotient")
        assert quotient.states == fig5.states
        assert quotient.initial == fig5.initial
        assert quotient.secret == fig5.secret
        assert quotient.transitions == fig5.transitions
        assert quotient.output_map == fig5.output_map

    def test_singleton_partition_isomorphic(self):
        sys = fixture_system("example-2.1")
        p = Partition(sys, [{s} for s in sys.states])
        quotient = build_quotient(p)
        assert quotient.states == sys.states  # singleton names are the members
        assert quotient.transitions == sys.transitions

    def test_invalid_partition_rejected(self):
        sys = fixture_system("example-2.1")
        p = Partition(sys, [{"a"}])
        with pytest.raises(ValueError, match="invalid partition"):
            build_quotient(p)


class TestQuotientRelation:
    def test_exam4_pairs(self):
        rel = quotient_relation(fixture_partition("exam4"))
        assert len(rel.pairs) == 8
        assert ("1", "1+5") in rel.pairs and ("5", "1+5") in rel.pairs

    def test_always_a_simulation(self):
        for seed in range(80):
            sys = sample_system(seed, max_states=5)
            p = sample_homogeneous_partition(seed, sys)
            assert check_simulation(quotient_relation(p)).holds, seed


class TestEq1Condition:
    def test_exam4_holds(self):
        assert check_eq1_condition(fixture_partition("exam4")).holds

    def test_singleton_partition_holds(self):
        sys = fixture_system("fig7")
        p = Partition(sys, [{s} for s in sys.states])
        assert check_eq1_condition(p).holds

    def test_example21_two_block_partition(self):
        sys = fixture_system("example-2.1")
        p = Partition(sys, [{"a"}, {"b", "c"}])
        # secret-incompatible ({b,c} mixes S={b} with c)
        with pytest.raises(ValueError, match="secret-compatible"):
            check_eq1_condition(p)

    def test_example21_with_secret_c_too(self):
        base = fixture_system("example-2.1")
        from opacheck import TransitionSystem

        sys = TransitionSystem(
            name=base.name, states=base.states, initial=base.initial,
            secret={"b", "c"}, inputs=base.inputs, outputs=base.outputs,
            output_map=base.output_map, transitions=base.transitions,
        )
        p = Partition(sys, [{"a"}, {"b", "c"}])
        # b -1-> b matched by c -1-> b, c -0-> c by b -0-> b, and so on
        assert check_eq1_condition(p).holds

    def test_reports_witness(self):
        sys = fixture_system("fig8")
        # x4 and x5 share output y3 but move under different inputs
        p = Partition(sys, [{"x1"}, {"x2"}, {"x3"}, {"x4", "x5"}])
        diag = check_eq1_condition(p)
        assert not diag.holds
        assert diag.violations[0].clause == "eq1"


class TestInfsopSelf:
    def test_exam4_holds(self):
        assert check_infsop_self(fixture_partition("exam4")).holds

    def test_singleton_partition_holds(self):
        sys = fixture_system("fig9")
        p = Partition(sys, [{s} for s in sys.states])
        assert check_infsop_self(p).holds

    def test_secret_incompatible_rejected(self):
        sys = fixture_system("prop-3.5-sigma1")  # S = {1'}
        p = Partition(sys, [{"1'", "3'"}, {"2'", "4'"}])
        with pytest.raises(ValueError, match="secret-compatible"):
            check_infsop_self(p)


class TestQuotientConditionEquivalences:
    def test_eq1_iff_initsop_bisim_of_quotient_relation(self):
        for seed in range(120):
            sys = sample_system(seed, max_states=5)
            p = sample_homogeneous_partition(seed, sys)
            lhs = check_eq1_condition(p).holds
            rhs = check_initsop_bisimulation(quotient_relation(p)).holds
            assert lhs == rhs, seed

    def test_infsop_self_iff_infsop_bisim_of_quotient_relation(self):
        for seed in range(120):
            sys = sample_system(seed, max_states=5)
            p = sample_homogeneous_partition(seed, sys)
            lhs = check_infsop_self(p).holds
            rhs = check_infsop_bisimulation(quotient_relation(p)).holds
            assert lhs == rhs, seed


class TestCoarsestPartition:
    def test_exam4(self):
        p = coarsest_infsop_partition(fixture_system("exam4"))
        assert [sorted(b) for b in p.blocks] == [
            ["1", "5"], ["2", "6"], ["3", "7"], ["4", "8"]
        ]

    def test_distinct_outputs_give_singletons(self):
        from opacheck import TransitionSystem

        sys = TransitionSystem(
            name="alldistinct", states="abc", initial="abc", secret="a",
            inputs="u", outputs=["p", "q", "r"],
            output_map={"a": "p", "b": "q", "c": "r"},
            transitions=[("a", "u", "b"), ("b", "u", "c")],
        )
        p = coarsest_infsop_partition(sys)
        assert all(len(b) == 1 for b in p.blocks)

    def test_blocks_stay_output_homogeneous(self):
        sys = fixture_system("fig10")  # outputs collide only on y1 and y3
        p = coarsest_infsop_partition(sys)
        for block in p.blocks:
            outs = {sys.output_map[s] for s in block}
            assert len(outs) == 1

    def test_fig5_quotient_already_minimal(self):
        p = coarsest_infsop_partition(fixture_system("fig5-quotient"))
        assert all(len(b) == 1 for b in p.blocks)

    def test_result_passes_all_checks(self):
        for seed in range(60):
            sys = sample_system(seed, max_states=5)
            p = coarsest_infsop_partition(sys)
            assert validate_partition(p) == []
            assert is_secret_compatible(p)
            assert check_infsop_self(p).holds

    def test_coarseness_by_exhaustive_enumeration(self):
        for seed in range(25):
            sys = sample_system(seed, max_states=5)
            best = coarsest_infsop_partition(sys)
            for blocks in set_partitions(sys.states):
                p = Partition(sys, blocks)
                if validate_partition(p):
                    continue
                if not is_secret_compatible(p):
                    continue
                if not check_infsop_self(p).holds:
                    continue
                assert len(p.blocks) >= len(best.blocks), (seed, p.blocks)

    def test_abstraction_soundness_end_to_end(self):
        for seed in range(40):
            sys = sample_system(seed)
            quotient = build_quotient(coarsest_infsop_partition(sys))
            for notion in ("initso", "cso", "infso"):
                assert (
                    verify(sys, notion).opaque == verify(quotient, notion).opaque
                ), (seed, notion)
            for k in (1, 2):
                assert (
                    verify(sys, "kso", k=k).opaque
                    == verify(quotient, "kso", k=k).opaque
                ), (seed, k)
