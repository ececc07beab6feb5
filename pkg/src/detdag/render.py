"""DOT emission using the deterministic-variable notation.

Fully determined nodes get a doubled outline (``peripheries=2``), the arcs
entering them a doubled stroke (a black/white/black color list, which reads
as two parallel lines rather than one thick one), and a definition whose
child and arguments all crystallise together (equal ``time`` attributes, or
none anywhere in the family) is wrapped in a dashed cluster box.  Highlighted
(conditioned) nodes are shaded.

Output is byte-deterministic for a given graph: nodes and edges appear in
declaration order with a fixed attribute order, so rendered files can be
golden-tested.
"""

from __future__ import annotations

from typing import Iterable

from .graph import Dag

__all__ = ["to_dot"]


def _concurrent_family(dag: Dag, det_id: str) -> tuple[str, ...] | None:
    """Members of a definition family if they share one crystallisation time."""
    node = dag.node(det_id)
    members = (*node.form.arguments(), det_id)
    times = {dag.node(m).time for m in members}
    if len(times) == 1:  # all equal, or all absent
        return dag.sort_ids(members)
    return None


def to_dot(dag: Dag, highlight: Iterable[str] = ()) -> str:
    """Render a graph to DOT text with deterministic notation."""
    shaded = set(highlight)
    for nid in shaded:
        dag.node(nid)

    # Assign each node to at most one dashed family box.  Families are
    # claimed in declaration order of their defined node; a family whose
    # members are partly claimed already gets no box.
    cluster_of: dict[str, int] = {}
    clusters: list[tuple[str, ...]] = []
    for n in dag.deterministic_nodes():
        family = _concurrent_family(dag, n.id)
        if family is None or any(m in cluster_of for m in family):
            continue
        for m in family:
            cluster_of[m] = len(clusters)
        clusters.append(family)

    def node_stmt(nid: str, indent: str) -> str:
        node = dag.node(nid)
        attrs = []
        if node.label is not None:
            attrs.append(f'label="{node.label}"')
        if node.deterministic:
            attrs.append("peripheries=2")
        if nid in shaded:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgrey")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        return f'{indent}"{nid}"{suffix};'

    lines = [f'digraph "{dag.name}" {{', "  rankdir=LR;"]
    emitted: set[str] = set()
    emitted_clusters: set[int] = set()
    for n in dag.nodes:
        if n.id in emitted:
            continue
        ci = cluster_of.get(n.id)
        if ci is None:
            lines.append(node_stmt(n.id, "  "))
            emitted.add(n.id)
            continue
        if ci in emitted_clusters:
            continue
        emitted_clusters.add(ci)
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append("    style=dashed;")
        for m in sorted(clusters[ci], key=dag.index):
            lines.append(node_stmt(m, "    "))
            emitted.add(m)
        lines.append("  }")

    for e in dag.edges:
        if e.deterministic:
            lines.append(f'  "{e.src}" -> "{e.dst}" [color="black:white:black"];')
        else:
            lines.append(f'  "{e.src}" -> "{e.dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
