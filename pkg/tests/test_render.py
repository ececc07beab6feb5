"""DOT emission: notation markers, clusters, highlights, byte-stable goldens."""

from pathlib import Path

import pytest

from detdag import load_fixture, parse, to_dot

GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.mark.parametrize("name", ["fig1a", "fig1b", "fig1c", "fig3"])
def test_golden_files_byte_identical(name):
    expected = (GOLDEN_DIR / f"{name}.dot").read_text(encoding="utf-8")
    assert to_dot(load_fixture(name)) == expected


def test_repeated_rendering_is_byte_identical(fixtures):
    for dag in fixtures.values():
        assert to_dot(dag) == to_dot(dag)


def test_deterministic_notation_markers(fixtures):
    dot = to_dot(fixtures["fig1a"])
    assert '"M" [label="macrosomia", peripheries=2];' in dot
    assert '"B" -> "M" [color="black:white:black"];' in dot
    assert "subgraph cluster_0" in dot and "style=dashed;" in dot
    # the outcome sits outside the dashed family box
    cluster = dot.split("subgraph cluster_0 {")[1].split("}")[0]
    assert '"B"' in cluster and '"M"' in cluster and '"Y"' not in cluster


def test_highlighted_nodes_are_shaded(fixtures):
    dot = to_dot(fixtures["fig3"], highlight=["X"])
    assert (
        '"X" [label="total energy intake", peripheries=2, style=filled, '
        "fillcolor=lightgrey];" in dot
    )
    plain = to_dot(fixtures["fig3"])
    assert "fillcolor" not in plain


def test_plain_graph_has_no_clusters_or_double_lines():
    dag = parse("dag p { node A\n node B\n A -> B }")
    dot = to_dot(dag)
    assert "cluster" not in dot
    assert "peripheries" not in dot
    assert "black:white:black" not in dot
    assert '"A" -> "B";' in dot


def test_temporally_spread_family_gets_no_box(fixtures):
    # the change score crystallises with the follow-up, after the baseline
    assert "cluster" not in to_dot(fixtures["fig2b"])
    # same for a composite whose components crystallise apart
    assert "cluster" not in to_dot(fixtures["fig4a"])


def test_overlapping_families_claim_first_come(fixtures):
    dot = to_dot(fixtures["fig2a"])
    # Z1's family {X, N, Z1} boxes first; Z2's overlaps at N and gets no box
    assert dot.count("subgraph") == 1


def test_unknown_highlight_rejected(fixtures):
    with pytest.raises(KeyError):
        to_dot(fixtures["fig3"], highlight=["nope"])
