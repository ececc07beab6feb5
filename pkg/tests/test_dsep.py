"""Separation queries: closure, both criteria, witnesses, degeneracy."""

import itertools

import pytest

from detdag import (
    CONNECTED,
    DEGENERATE,
    SEPARATED,
    DagBuilder,
    Scale,
    det_closure,
    is_D_separated,
    is_d_separated,
    parse,
)

from pathoracle import Dsep_by_enumeration, path_is_active
from randgraphs import random_det_dag, random_plain_dag


def fork_with_scaled_copy():
    # A -> B, A -> C, D := scale(A, 2): observing D pins down A.
    b = DagBuilder("fork").node("A").node("B").node("C")
    b.deterministic("D", Scale("A", 2.0))
    b.edge("A", "B").edge("A", "C")
    return b.build()


class TestDetClosure:
    def test_parts_determine_the_whole(self, fixtures):
        assert det_closure(fixtures["fig3"], ["X1", "X2", "X3"]) == (
            "X1",
            "X2",
            "X3",
            "X",
        )

    def test_whole_and_all_but_one_part_determine_the_rest(self, fixtures):
        assert det_closure(fixtures["fig3"], ["X", "X1", "X2"]) == (
            "X1",
            "X2",
            "X3",
            "X",
        )

    def test_empty_set_stays_empty(self, fixtures):
        for dag in fixtures.values():
            assert det_closure(dag, []) == ()

    def test_threshold_does_not_invert(self, fixtures):
        # knowing the flag does not pin down the measurement
        assert det_closure(fixtures["fig1a"], ["M"]) == ("M",)
        # but knowing the measurement pins down the flag
        assert det_closure(fixtures["fig1a"], ["B"]) == ("B", "M")

    @pytest.mark.parametrize("seed", range(30))
    def test_monotone_and_idempotent(self, seed):
        dag = random_det_dag(seed)
        ids = dag.node_ids()
        for k in (0, 1, 2):
            for given in itertools.combinations(ids, k):
                closure = det_closure(dag, given)
                assert set(given) <= set(closure)
                assert det_closure(dag, closure) == closure


class TestClassicDsep:
    def test_chain_blocked_by_middle(self):
        dag = parse("dag c { node A\n node B\n node C\n A -> B\n B -> C }")
        assert is_d_separated(dag, "A", "C", ["B"]).status == SEPARATED

    def test_collider_blocks_until_conditioned(self):
        dag = parse("dag v { node A\n node B\n node C\n A -> B\n C -> B }")
        assert is_d_separated(dag, "A", "C", []).status == SEPARATED
        verdict = is_d_separated(dag, "A", "C", ["B"])
        assert verdict.status == CONNECTED
        assert verdict.witness.nodes() == ("A", "B", "C")

    def test_conditioning_on_whole_connects_parts(self, fixtures):
        assert is_d_separated(fixtures["fig3"], "X1", "X2", ["X"]).status == CONNECTED

    def test_query_variable_in_given_is_an_error(self, fixtures):
        with pytest.raises(ValueError):
            is_d_separated(fixtures["fig3"], "X1", "X2", ["X1"])


class TestDeterministicDsep:
    def test_conditioning_on_scaled_copy_blocks_the_fork(self):
        dag = fork_with_scaled_copy()
        assert is_D_separated(dag, "B", "C", ["D"]).status == SEPARATED
        # classic d-separation cannot see it
        assert is_d_separated(dag, "B", "C", ["D"]).status == CONNECTED

    def test_degenerate_when_query_is_determined(self, fixtures):
        verdict = is_D_separated(fixtures["fig1a"], "M", "Y", ["B"])
        assert verdict.status == DEGENERATE
        assert verdict.separated is None
        assert "M" in verdict.reason

    def test_whole_conditioning_connects_parts(self, fixtures):
        verdict = is_D_separated(fixtures["fig3"], "X1", "X2", ["X"])
        assert verdict.status == CONNECTED
        assert verdict.witness.pretty() == "X1 => X <= X2"

    def test_collider_opened_through_determined_descendant(self):
        # E := scale(D, 3) with D a collider's child: conditioning on E
        # is informationally conditioning on D.
        b = DagBuilder("desc").node("A").node("C").node("D")
        b.deterministic("E", Scale("D", 3.0))
        b.edge("A", "D").edge("C", "D")
        dag = b.build()
        assert is_D_separated(dag, "A", "C", ["E"]).status == CONNECTED
        assert is_D_separated(dag, "A", "C", []).status == SEPARATED

    @pytest.mark.parametrize("seed", range(40))
    def test_equals_classic_on_plain_graphs(self, seed):
        dag = random_plain_dag(seed)
        ids = dag.node_ids()
        for x, y in itertools.combinations(ids, 2):
            others = [o for o in ids if o not in (x, y)]
            for k in range(0, min(3, len(others)) + 1):
                for z in itertools.combinations(others, k):
                    assert (
                        is_D_separated(dag, x, y, z).status
                        == is_d_separated(dag, x, y, z).status
                    )

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_literal_enumeration_on_deterministic_graphs(self, seed):
        dag = random_det_dag(seed)
        ids = dag.node_ids()
        for x, y in itertools.combinations(ids, 2):
            others = [o for o in ids if o not in (x, y)]
            for k in range(0, min(2, len(others)) + 1):
                for z in itertools.combinations(others, k):
                    assert (
                        is_D_separated(dag, x, y, z).status
                        == Dsep_by_enumeration(dag, x, y, set(z))
                    )


class TestSymmetryAndWitnesses:
    @pytest.mark.parametrize("seed", range(15))
    def test_symmetric_in_x_and_y(self, seed):
        dag = random_det_dag(seed)
        ids = dag.node_ids()
        for x, y in itertools.combinations(ids, 2):
            others = [o for o in ids if o not in (x, y)]
            for z in itertools.combinations(others, 2):
                assert (
                    is_D_separated(dag, x, y, z).status
                    == is_D_separated(dag, y, x, z).status
                )

    @pytest.mark.parametrize("seed", range(20))
    def test_witness_is_an_active_path_under_literal_rules(self, seed):
        from detdag.dsep import det_closure as closure_fn

        dag = random_det_dag(seed)
        ids = dag.node_ids()
        for x, y in itertools.combinations(ids, 2):
            others = [o for o in ids if o not in (x, y)]
            for k in (0, 1, 2):
                for z in itertools.combinations(others, k):
                    verdict = is_D_separated(dag, x, y, z)
                    if verdict.status != CONNECTED:
                        continue
                    nodes = list(verdict.witness.nodes())
                    assert nodes[0] == x and nodes[-1] == y
                    blocking = set(closure_fn(dag, z))
                    assert path_is_active(dag, nodes, blocking)

    def test_witness_is_lexicographically_first(self):
        # Two active paths A->B->Y and A->C->Y; B declared before C.
        dag = parse(
            "dag lex { node A\n node B\n node C\n node Y\n"
            " A -> B\n A -> C\n B -> Y\n C -> Y }"
        )
        verdict = is_D_separated(dag, "A", "Y", [])
        assert verdict.witness.nodes() == ("A", "B", "Y")
