"""Tautologies, estimand classification, confounder roles, backdoor sets."""

import itertools

import pytest

from detdag import (
    DegenerateQueryError,
    classify_confounder,
    classify_estimand,
    consistency_report,
    det_closure,
    detect_tautologies,
    enumerate_backdoor_sets,
    fixture_source,
    parse,
)
from detdag.classify import _pruned
from detdag.dsep import CONNECTED, _separation

from randgraphs import random_det_dag


def findings_index(dag):
    return {
        frozenset(f.pair): f for f in detect_tautologies(dag)
    }


class TestTautologies:
    def test_shared_denominator_pair(self, fixtures):
        found = findings_index(fixtures["fig2a"])
        f = found[frozenset({"Z1", "Z2"})]
        assert f.relation == "SharedParent"
        assert f.shared_base == ("N",)

    def test_change_score_and_baseline(self, fixtures):
        found = findings_index(fixtures["fig2b"])
        f = found[frozenset({"X", "X0"})]
        assert f.relation == "SelfOrPart"
        assert f.shared_base == ("X0",)

    def test_aggregate_siblings(self, fixtures):
        found = findings_index(fixtures["fig2c"])
        f = found[frozenset({"X1_j", "X_j"})]
        assert f.relation == "SharedParent"
        assert f.shared_base == ("X1_i", "N_j")

    def test_complete_enumeration_fig2a(self, fixtures):
        found = findings_index(fixtures["fig2a"])
        expected = {
            frozenset({"N", "Z1"}): "SelfOrPart",
            frozenset({"N", "Z2"}): "SelfOrPart",
            frozenset({"X", "Z1"}): "SelfOrPart",
            frozenset({"Y", "Z2"}): "SelfOrPart",
            frozenset({"Z1", "Z2"}): "SharedParent",
        }
        assert {k: v.relation for k, v in found.items()} == expected

    def test_complete_enumeration_fig2b(self, fixtures):
        found = findings_index(fixtures["fig2b"])
        assert set(found) == {frozenset({"X", "X0"}), frozenset({"X", "X1"})}
        assert all(f.relation == "SelfOrPart" for f in found.values())

    def test_complete_enumeration_fig2c(self, fixtures):
        found = findings_index(fixtures["fig2c"])
        expected = {
            frozenset({"X1_i", "X_i"}): "SelfOrPart",
            frozenset({"X1_i", "X1_j"}): "SelfOrPart",
            frozenset({"X1_i", "X_j"}): "SelfOrPart",
            frozenset({"N_j", "X1_j"}): "SelfOrPart",
            frozenset({"N_j", "X_j"}): "SelfOrPart",
            frozenset({"X_i", "X1_j"}): "SharedParent",
            frozenset({"X_i", "X_j"}): "SharedParent",
            frozenset({"X1_j", "X_j"}): "SharedParent",
        }
        assert {k: v.relation for k, v in found.items()} == expected

    @pytest.mark.parametrize("seed", range(20))
    def test_findings_always_involve_a_deterministic_member(self, seed):
        dag = random_det_dag(seed)
        for f in detect_tautologies(dag):
            assert f.shared_base
            assert any(dag.node(p).deterministic for p in f.pair)

    def test_no_findings_without_deterministic_nodes(self):
        dag = parse("dag p { node A\n node B\n A -> B }")
        assert detect_tautologies(dag) == []


class TestClassifyEstimand:
    def test_unadjusted_part_is_total_effect(self, fixtures):
        rep = classify_estimand(fixtures["fig3"], "X1", "Y", [])
        assert rep.kind == "TotalEffect"

    def test_conditioning_on_whole_gives_relative_effect(self, fixtures):
        rep = classify_estimand(fixtures["fig3"], "X1", "Y", ["X"])
        assert rep.kind == "RelativeEffect"
        assert rep.substituting == ("X2", "X3")

    def test_additional_part_adjustment_shrinks_substitutes(self, fixtures):
        rep = classify_estimand(fixtures["fig3"], "X1", "Y", ["X", "X2"])
        assert rep.kind == "RelativeEffect"
        assert rep.substituting == ("X3",)

    def test_part_over_whole_ratio_is_conflated(self, fixtures):
        source = fixture_source("fig3").rstrip()[:-1] + "  Z1 := ratio(X1, X)\n}\n"
        dag = parse(source)
        rep = classify_estimand(dag, "Z1", "Y", [])
        assert rep.kind == "ConflatedRatioEffect"
        assert rep.numerator_base == ("X1",)
        assert rep.denominator_base == ("X1", "X2", "X3")
        assert any(w.code == "RATIO_CONFLATION" for w in rep.warnings)

    def test_disjoint_ratio_is_composite_summary(self, fixtures):
        rep = classify_estimand(fixtures["fig1c"], "Z", "Z1", [])
        # numerator and denominator share nothing, so no conflation verdict
        assert rep.kind == "CompositeSummaryEffect"

    def test_composite_summary_carries_consistency_warnings(self, fixtures):
        rep = classify_estimand(fixtures["fig4a"], "BMI", "CVD", [])
        assert rep.kind == "CompositeSummaryEffect"
        assert any(w.code == "CONSISTENCY_RISK" for w in rep.warnings)

    def test_plain_exposure_is_total_effect(self, fixtures):
        rep = classify_estimand(fixtures["fig5b"], "C", "Y", [])
        assert rep.kind == "TotalEffect"

    def test_degenerate_adjustment_raises(self, fixtures):
        with pytest.raises(DegenerateQueryError):
            classify_estimand(fixtures["fig3"], "X1", "Y", ["X", "X2", "X3"])
        with pytest.raises(DegenerateQueryError):
            classify_estimand(fixtures["fig1a"], "M", "Y", ["B"])

    def test_fixed_whole_refuses_total_effect(self):
        dag = parse(
            "dag day { node sleep\n node active\n node sedentary\n"
            " total := sum(sleep, active, sedentary) [fixed=true]\n"
            " node health\n sleep -> health\n active -> health\n"
            " sedentary -> health }"
        )
        rep = classify_estimand(dag, "sleep", "health", [])
        assert rep.kind == "RelativeEffect"
        assert rep.substituting == ("active", "sedentary")
        assert any(w.code == "FIXED_WHOLE" for w in rep.warnings)

    def test_aggregate_adjustment_warning(self):
        source = (
            "dag agg { node X1\n node X2\n node X3\n"
            " X := sum(X1, X2, X3)\n R := sum(X2, X3)\n node Y\n"
            " X1 -> Y\n X2 -> Y\n X3 -> Y }"
        )
        rep = classify_estimand(parse(source), "X1", "Y", ["R"])
        assert any(w.code == "AGGREGATE_ADJUSTMENT" for w in rep.warnings)

    def test_many_part_whole_positivity_warning(self):
        parts = [f"P{i}" for i in range(1, 8)]
        src = "dag wide { " + "\n".join(f"node {p}" for p in parts)
        src += f"\n W := sum({', '.join(parts)})\n node Y\n"
        src += "\n".join(f"{p} -> Y" for p in parts) + " }"
        rep = classify_estimand(parse(src), "P1", "Y", [])
        assert any(w.code == "POSITIVITY_RISK" for w in rep.warnings)

    def test_tautologous_outcome_flagged(self, fixtures):
        rep = classify_estimand(fixtures["fig2b"], "X", "X0", [])
        assert any(w.code == "TAUTOLOGY" for w in rep.warnings)

    def test_no_relative_effect_without_adjustment(self, fixtures):
        # holds on every fixture (none of them declares a fixed whole)
        for name, dag in fixtures.items():
            ids = dag.node_ids()
            for exposure, outcome in itertools.permutations(ids, 2):
                try:
                    rep = classify_estimand(dag, exposure, outcome, [])
                except DegenerateQueryError:
                    continue
                assert rep.kind != "RelativeEffect", (name, exposure, outcome)

    def test_substituting_shrinks_as_parts_join_adjustment(self, fixtures):
        dag = fixtures["fig3"]
        base = classify_estimand(dag, "X1", "Y", ["X"]).substituting
        narrowed = classify_estimand(dag, "X1", "Y", ["X", "X3"]).substituting
        assert set(narrowed) <= set(base)
        assert len(narrowed) < len(base)

    def test_backdoor_diagnostics_present(self, fixtures):
        rep = classify_estimand(fixtures["fig5b"], "X", "Y", [])
        assert rep.open_backdoors  # unadjusted composite has open backdoors
        assert not rep.adjustment_sufficient
        adjusted = classify_estimand(fixtures["fig5b"], "X", "Y", ["C"])
        assert adjusted.adjustment_sufficient
        assert adjusted.blocked_paths


class TestClassifyConfounder:
    def test_early_common_cause_is_uncomplicated(self, fixtures):
        role = classify_confounder(fixtures["fig5b"], "X", "Y", "C")
        assert role.role == "UncomplicatedConfounder"
        assert role.identifiable
        assert role.per_parent == {"X1": "Confounder", "X2": "Confounder"}

    def test_lopsided_effects_are_inconsistent(self, fixtures):
        role = classify_confounder(fixtures["fig5c"], "X", "Y", "C")
        assert role.role == "InconsistentConfounder"
        assert role.identifiable
        assert role.per_parent == {"X1": "Confounder", "X2": "Confounder"}

    def test_confounder_for_one_mediator_for_other(self, fixtures):
        role = classify_confounder(fixtures["fig5d"], "X", "Y", "C")
        assert role.role == "ConfounderMediatorConflict"
        assert role.identifiable is False
        assert role.per_parent == {"X1": "Mediator", "X2": "Confounder"}

    def test_unrelated_candidate(self, fixtures):
        role = classify_confounder(fixtures["fig3"], "X1", "Y", "X2")
        assert role.role == "NotAConfounder"
        assert role.identifiable

    def test_pure_instrument_is_not_a_confounder(self):
        dag = parse("dag iv { node Z\n node A\n node Y\n Z -> A\n A -> Y }")
        role = classify_confounder(dag, "A", "Y", "Z")
        assert role.role == "NotAConfounder"

    def test_probabilistic_exposure_uses_itself_as_base(self):
        dag = parse(
            "dag conf { node C\n node A\n node Y\n C -> A\n C -> Y\n A -> Y }"
        )
        role = classify_confounder(dag, "A", "Y", "C")
        assert role.role == "UncomplicatedConfounder"
        assert role.per_parent == {"A": "Confounder"}

    def test_mixed_confounder_and_unrelated_is_inconsistent(self):
        dag = parse(
            "dag partial { node C\n node X1\n node X2\n"
            " X := ratio(X2, X1)\n node Y\n C -> X2\n C -> Y\n X -> Y }"
        )
        role = classify_confounder(dag, "X", "Y", "C")
        assert role.role == "InconsistentConfounder"
        assert role.per_parent == {"X1": "Unrelated", "X2": "Confounder"}


class TestBackdoorSets:
    def test_single_minimal_set(self, fixtures):
        assert enumerate_backdoor_sets(fixtures["fig5b"], "X", "Y", 5) == [("C",)]

    def test_reduced_per_capita_graph(self):
        dag = parse("dag r { node N\n node X\n node Y\n N -> X\n N -> Y }")
        assert enumerate_backdoor_sets(dag, "X", "Y", 3) == [("N",)]

    def test_no_backdoor_paths_gives_empty_set(self):
        dag = parse("dag s { node A\n node Y\n A -> Y }")
        assert enumerate_backdoor_sets(dag, "A", "Y", 2) == [()]

    def test_component_descendant_rules_out_every_set(self, fixtures):
        dag = fixtures["fig5d"]
        for max_size in (1, 3, 5):
            assert enumerate_backdoor_sets(dag, "X", "Y", max_size) == []

    def test_minimality(self):
        dag = parse(
            "dag two { node C1\n node C2\n node A\n node Y\n"
            " C1 -> A\n C1 -> Y\n C2 -> A\n C2 -> Y\n A -> Y }"
        )
        sets = enumerate_backdoor_sets(dag, "A", "Y", 3)
        assert sets == [("C1", "C2")]

    @pytest.mark.parametrize("name", ["fig2a", "fig3", "fig4a", "fig5b", "fig5c"])
    def test_returned_sets_separate_in_pruned_graph(self, fixtures, name):
        dag = fixtures[name]
        ids = dag.node_ids()
        for exposure, outcome in itertools.permutations(ids, 2):
            for z in enumerate_backdoor_sets(dag, exposure, outcome, 3):
                pruned = _pruned(dag, exposure)
                closure = set(det_closure(dag, z))
                verdict = _separation(pruned, exposure, outcome, closure)
                assert verdict.status != CONNECTED


class TestConsistencyReport:
    def test_composite_with_declared_params(self, fixtures):
        codes = [w.code for w in consistency_report(fixtures["fig4a"], "BMI")]
        assert codes[0] == "CONSISTENCY_RISK"
        assert "VARIANCE_DOMINANCE" in codes
        assert "TEMPORAL_SPREAD" in codes

    def test_whole_without_params_warns_on_consistency_only(self, fixtures):
        codes = [w.code for w in consistency_report(fixtures["fig3"], "X")]
        assert codes == ["CONSISTENCY_RISK"]

    def test_probabilistic_exposure_is_silent(self, fixtures):
        assert consistency_report(fixtures["fig3"], "Y") == []

    def test_single_parent_transform_is_silent(self, fixtures):
        assert consistency_report(fixtures["fig1a"], "M") == []

    def test_variance_dominance_names_the_shares(self, fixtures):
        report = consistency_report(fixtures["fig4a"], "BMI")
        dominance = [w for w in report if w.code == "VARIANCE_DOMINANCE"]
        assert dominance and "weight" in dominance[0].text
