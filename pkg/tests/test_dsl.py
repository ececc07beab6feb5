"""DSL parsing, serialization, round trips, and error positioning."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detdag import (
    Dag,
    DagBuilder,
    Difference,
    DslError,
    FIXTURE_NAMES,
    fixture_source,
    load_fixture,
    parse,
    serialize,
    try_parse,
    validate,
)

from randgraphs import random_det_dag


class TestParse:
    def test_fig3_shape(self):
        dag = load_fixture("fig3")
        assert len(dag.nodes) == 5
        assert sum(1 for n in dag.nodes if n.deterministic) == 1
        arcs_to_y = [e for e in dag.edges if e.dst == "Y" and not e.deterministic]
        assert len(arcs_to_y) == 3

    def test_unknown_identifiers_each_reported(self):
        dag, errors = try_parse("dag t { X := sum(A, B) }")
        assert dag is None
        unknown = [e for e in errors if "unknown identifier" in e.message]
        assert len(unknown) == 2
        source = "dag t { X := sum(A, B) }"
        assert {e.column for e in unknown} == {
            source.index("A") + 1,
            source.index("B") + 1,
        }

    def test_empty_braces(self):
        dag = parse("dag t { }")
        assert dag.nodes == ()
        assert dag.edges == ()

    def test_parse_results_are_validated(self):
        for name in FIXTURE_NAMES:
            assert validate(load_fixture(name)) == []

    def test_forward_references_allowed(self):
        dag = parse("dag fwd { X := sum(A, B)\n node A\n node B }")
        assert dag.node("X").deterministic

    def test_cycle_reported_with_position(self):
        dag, errors = try_parse("dag c { node A\n node B\n A -> B\n B -> A }")
        assert dag is None
        assert any("Cycle" in e.message for e in errors)
        assert all(e.line >= 1 and e.column >= 1 for e in errors)

    def test_duplicate_definition(self):
        _, errors = try_parse(
            "dag d { node A\n node B\n X := sum(A, B)\n X := sum(B, A) }"
        )
        assert any("duplicate definition" in e.message for e in errors)

    def test_probabilistic_arc_into_deterministic_rejected(self):
        _, errors = try_parse(
            "dag d { node U\n node A\n node B\n X := sum(A, B)\n U -> X }"
        )
        assert any("DeterministicParentViolation" in e.message for e in errors)

    def test_mean_on_definition_rejected(self):
        _, errors = try_parse("dag d { node A\n node X [mean=3]\n X := scale(A, 2) }")
        assert any("cannot carry" in e.message for e in errors)

    def test_single_parse_error_for_unclosed_graph(self):
        _, errors = try_parse("dag t {")
        assert len(errors) == 1
        assert "missing closing '}'" in errors[0].message

    def test_errors_carry_snippets(self):
        _, errors = try_parse("dag t {\n  node 42\n}")
        assert errors
        assert errors[0].snippet.strip() == "node 42"

    def test_comments_and_blank_lines_ignored(self):
        dag = parse("dag c {\n # a comment\n\n node A # trailing\n}")
        assert dag.node_ids() == ("A",)

    def test_attributes_parsed(self):
        dag = parse(
            'dag a { node A [label="alpha beta", time=1.5, mean=-2, sd=0.5]\n'
            " node B [fixed=true]\n A -> B [coef=-0.25] }"
        )
        a = dag.node("A")
        assert a.label == "alpha beta"
        assert a.time == 1.5
        assert a.sim.mean == -2 and a.sim.sd == 0.5
        assert dag.node("B").fixed
        assert dag.edges[0].coef == -0.25

    def test_nonpositive_sd_rejected(self):
        _, errors = try_parse("dag a { node A [sd=0] }")
        assert any("sd" in e.message for e in errors)


class TestSerialize:
    def test_fixture_round_trips(self):
        for name in FIXTURE_NAMES:
            dag = load_fixture(name)
            assert parse(serialize(dag)) == dag, name

    def test_reparse_of_canonical_form_is_stable(self):
        for name in FIXTURE_NAMES:
            canonical = serialize(parse(fixture_source(name)))
            assert serialize(parse(canonical)) == canonical, name

    def test_programmatic_change_score_graph(self):
        b = DagBuilder("fig2b").node("X0").node("X1")
        b.deterministic("X", Difference("X1", "X0"))
        b.edge("X0", "X1")
        text = serialize(b.build())
        assert "X := diff(X1, X0)" in text

    def test_empty_dag(self):
        assert serialize(Dag("name", (), ())) == 'dag "name" {\n}\n'

    def test_numbers_stay_decimal(self):
        dag = parse("dag n { node A [mean=0.000001, sd=1250] }")
        text = serialize(dag)
        assert "0.000001" in text and "1250" in text
        assert "e-" not in text and "e+" not in text  # no exponent notation
        assert parse(text) == dag

    @pytest.mark.parametrize("seed", range(30))
    def test_random_graph_round_trips(self, seed):
        dag = random_det_dag(seed, with_coefs=bool(seed % 2))
        assert parse(serialize(dag)) == dag


class TestRobustness:
    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=120))
    def test_arbitrary_text_never_crashes(self, text):
        dag, errors = try_parse(text)
        if dag is None:
            assert errors, "failure must come with at least one error"
            for e in errors:
                assert e.line >= 1 and e.column >= 1

    @settings(max_examples=120, deadline=None)
    @given(st.binary(max_size=60))
    def test_decoded_bytes_never_crash(self, raw):
        try_parse(raw.decode("utf-8", errors="replace"))

    def test_parse_raises_with_all_errors(self):
        with pytest.raises(DslError) as exc:
            parse("dag t { X := sum(A, B) }")
        assert len(exc.value.errors) == 2
