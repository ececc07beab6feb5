"""Deterministic node reduction.

A deterministic node adds no probabilistic information beyond its parents:
its outgoing arcs can be transferred to the nodes it is built from, leaving
it barren (childless), after which it can be dropped without changing any
independence relation among the remaining variables.

``transfer_and_barren`` performs the rewiring for one node;  ``reduce_all``
removes every deterministic node outside a kept set, working in reverse
topological order so nested definitions resolve outermost-first.

Transferred arcs are structural only: through a ratio or a power the induced
parent-to-child effect is not linear, so any ``coef`` attribute of the old
arc is dropped and simulating a reduced graph needs fresh coefficients.
"""

from __future__ import annotations

from typing import Iterable

from .graph import Dag, EdgeDef, UnknownNodeError

__all__ = ["transfer_and_barren", "reduce_all"]


def transfer_and_barren(dag: Dag, node_id: str) -> Dag:
    """Replace each outgoing arc of a deterministic node by arcs from the
    node's form arguments to the same child, leaving the node childless.

    The node keeps its definition (and incoming deterministic arcs); only its
    influence on descendants is rerouted.  Duplicate arcs created by the
    transfer are merged silently.  Raises if the node is not deterministic or
    if one of its children is itself deterministic (an algebraic definition
    cannot be rewired; reduce outermost definitions first).
    """
    n = dag.node(node_id)
    if not n.deterministic:
        raise ValueError(f"{node_id!r} is not deterministic; nothing to transfer")
    children = dag.children(node_id)
    for c in children:
        if dag.node(c).deterministic:
            raise ValueError(
                f"cannot transfer {node_id!r}: child {c!r} is deterministic and its "
                f"definition references {node_id!r}; reduce {c!r} first"
            )
    if not children:
        return dag

    args = n.form.arguments()
    present = {(e.src, e.dst) for e in dag.edges}
    new_edges = [e for e in dag.edges if e.src != node_id]
    for e in dag.edges:
        if e.src != node_id:
            continue
        for p in args:
            if (p, e.dst) not in present:
                present.add((p, e.dst))
                new_edges.append(EdgeDef(p, e.dst))
    return Dag(dag.name, dag.nodes, tuple(new_edges))


def reduce_all(dag: Dag, keep: Iterable[str]) -> Dag:
    """Transfer and remove every deterministic node not in ``keep``.

    Probabilistic nodes are never removed, whether or not they are listed.
    The result therefore contains keep plus all probabilistic nodes, with
    declaration order preserved.  Raises if a kept deterministic node's form
    references a node being removed (the definition would dangle).
    """
    keep_set = set(keep)
    for k in keep_set:
        if k not in dag:
            raise UnknownNodeError(k)

    removable = [n.id for n in dag.deterministic_nodes() if n.id not in keep_set]
    for n in dag.deterministic_nodes():
        if n.id in keep_set:
            for arg in n.form.arguments():
                if arg in removable:
                    raise ValueError(
                        f"cannot remove {arg!r}: kept deterministic node {n.id!r} "
                        f"is defined from it; keep {arg!r} too or drop {n.id!r}"
                    )

    # Outermost definitions first: each node is transferred and then dropped
    # immediately, so an inner definition never sees a dangling consumer.
    order = dag.topological_order()
    current = dag
    removable_set = set(removable)
    for nid in reversed(order):
        if nid in removable_set:
            current = transfer_and_barren(current, nid)
            nodes = tuple(n for n in current.nodes if n.id != nid)
            edges = tuple(
                e for e in current.edges if e.src != nid and e.dst != nid
            )
            current = Dag(current.name, nodes, edges)
    return current
