"""Parsing, canonical serialisation, and DOT export."""

from pathlib import Path

import pytest

from opacheck import (
    PHI,
    ParseError,
    augment,
    build_two_way_observer,
    export_dot,
    fixture_system,
    forward_observer,
    list_fixtures,
    parse_nts,
    parse_partition,
    parse_relation,
    serialize_nts,
    serialize_partition,
    serialize_relation,
    verify_initso,
)

DATA = Path(__file__).parent / "data"


class TestRoundTrip:
    def test_serialize_then_parse_on_all_fixtures(self):
        for fid in list_fixtures():
            sys = fixture_system(fid)
            text = serialize_nts(sys)
            again = parse_nts(text)
            assert again == sys, fid
            assert serialize_nts(again) == text, fid

    def test_golden_fig5(self):
        golden = (DATA / "fig5-quotient.nts").read_text()
        assert serialize_nts(fixture_system("fig5-quotient")) == golden

    def test_augmented_fig7_contains_sink(self):
        text = serialize_nts(augment(fixture_system("fig7")))
        assert PHI in text
        assert parse_nts(text) == augment(fixture_system("fig7"))

    def test_comments_and_blank_lines_ignored(self):
        text = serialize_nts(fixture_system("example-2.1"))
        noisy = "# header comment\n\n" + text.replace(
            "secret: b", "secret: b   # the secret state"
        )
        assert parse_nts(noisy) == fixture_system("example-2.1")


class TestParseErrors:
    def base_text(self):
        return serialize_nts(fixture_system("example-2.1"))

    def test_unknown_input_in_transition(self):
        text = self.base_text().replace("trans: a 0 b", "trans: a 2 b")
        with pytest.raises(ParseError, match="'2'"):
            parse_nts(text)

    def test_empty_secret_line_is_valid(self):
        text = self.base_text().replace("secret: b", "secret:")
        sys = parse_nts(text)
        assert sys.secret == frozenset()

    def test_duplicate_map_entry(self):
        text = self.base_text().replace("map: a 0", "map: a 0\nmap: a 1")
        with pytest.raises(ParseError, match="duplicate"):
            parse_nts(text)

    def test_missing_header(self):
        with pytest.raises(ParseError, match="nts"):
            parse_nts("states: a\n")

    def test_error_carries_line_number(self):
        text = self.base_text().replace("trans: a 0 b", "trans: a 0 zz")
        with pytest.raises(ParseError) as err:
            parse_nts(text)
        assert "line" in str(err.value)

    def test_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_nts("once upon a time\n")

    def test_bad_identifier(self):
        text = self.base_text().replace("states: a b c", "states: a b c{}")
        with pytest.raises(ParseError, match="invalid identifier"):
            parse_nts(text)

    def test_content_after_end(self):
        with pytest.raises(ParseError, match="after end"):
            parse_nts(self.base_text() + "map: a 0\n")


class TestRelationPartitionFiles:
    def test_prop35_relation_text(self):
        left = fixture_system("prop-3.5-sigma1")
        right = fixture_system("prop-3.5-sigma2")
        rel = parse_relation("1' 1\n2' 2\n3' 1\n4' 2\n", left, right)
        assert rel.pairs == {("1'", "1"), ("2'", "2"), ("3'", "1"), ("4'", "2")}
        assert parse_relation(serialize_relation(rel), left, right).pairs == rel.pairs

    def test_exam4_partition_text(self):
        sys = fixture_system("exam4")
        p = parse_partition("1 5\n2 6\n3 7\n4 8\n", sys)
        assert [sorted(b) for b in p.blocks] == [
            ["1", "5"], ["2", "6"], ["3", "7"], ["4", "8"]
        ]
        assert serialize_partition(p) == "1 5\n2 6\n3 7\n4 8\n"

    def test_unknown_identifiers(self):
        sys = fixture_system("exam4")
        with pytest.raises(ParseError, match="'z'"):
            parse_partition("z 1\n", sys)
        with pytest.raises(ParseError, match="'z'"):
            parse_relation("z 1\n", sys, sys)


class TestDot:
    def test_fig1_dot_conventions(self):
        sys = fixture_system("example-2.1")
        dot = export_dot(sys)
        assert dot.count("peripheries=2") == 1  # secret state b double-bordered
        assert '"b" [label="b/1", shape=circle, peripheries=2]' in dot
        assert dot.count("__start") == 6  # three start nodes + three arrows
        assert '"a" -> "b" [label="0"]' in dot

    def test_no_transition_system(self):
        from opacheck import TransitionSystem

        sys = TransitionSystem(
            name="bare", states="ab", initial="a", secret="",
            inputs="u", outputs=["y"], output_map={"a": "y", "b": "y"},
            transitions=[],
        )
        dot = export_dot(sys)
        assert '"a"' in dot and '"b"' in dot and "->" in dot  # start arrow only

    def test_observer_dot_with_offender(self):
        sys = fixture_system("prop-3.5-sigma2")
        obs = build_two_way_observer(sys)
        verdict = verify_initso(sys)
        offender = verdict.witness.terminal
        dot = export_dot(obs, offenders=[offender])
        assert "lightcoral" in dot
        assert "{1} | {1}" in dot

    def test_component_dot(self):
        obs = forward_observer(fixture_system("example-2.1"))
        dot = export_dot(obs)
        assert "digraph" in dot
        assert "{a}" in dot and "{b,c}" in dot  # initial beliefs by output class

    def test_determinism(self):
        sys = fixture_system("fig10")
        assert export_dot(sys) == export_dot(fixture_system("fig10"))
