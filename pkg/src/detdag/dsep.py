"""Graphical separation queries, with and without deterministic awareness.

``is_d_separated`` implements the familiar path-blocking criterion, treating
deterministic arcs as ordinary directed edges.  ``is_D_separated`` (capital D)
first expands the conditioning set to its deterministic closure: observing a
set of variables also pins down every variable they functionally determine,
forwards through definitions and backwards through invertible ones.  Blocking
and collider-opening are then evaluated against that closure.

Verdicts are three-valued: separated, connected (with a concrete witness
path), or degenerate, when a query variable is itself functionally determined
by the conditioning set.  A degenerate query is reported distinctly rather
than as "separated": a constant is trivially independent of everything, and
saying so would hide the modelling error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Dag, descendants

__all__ = [
    "PathStep",
    "WitnessPath",
    "SeparationVerdict",
    "SEPARATED",
    "CONNECTED",
    "DEGENERATE",
    "det_closure",
    "is_d_separated",
    "is_D_separated",
]

SEPARATED = "separated"
CONNECTED = "connected"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PathStep:
    """One node on a witness path with the reason it lets the path through."""

    node: str
    role: str  # endpoint | chain | fork | collider
    note: str


@dataclass(frozen=True)
class WitnessPath:
    steps: tuple[PathStep, ...]
    # (src, dst, deterministic, forward) per hop; forward means the edge is
    # traversed src->dst in path direction.
    edges: tuple[tuple[str, str, bool, bool], ...]

    def nodes(self) -> tuple[str, ...]:
        return tuple(s.node for s in self.steps)

    def pretty(self) -> str:
        out = [self.steps[0].node]
        for (src, dst, det, forward), step in zip(self.edges, self.steps[1:]):
            if forward:
                arrow = "=>" if det else "->"
            else:
                arrow = "<=" if det else "<-"
            out.append(f" {arrow} {step.node}")
        return "".join(out)


@dataclass(frozen=True)
class SeparationVerdict:
    status: str  # separated | connected | degenerate
    witness: Optional[WitnessPath] = None
    reason: Optional[str] = None

    @property
    def separated(self) -> Optional[bool]:
        if self.status == DEGENERATE:
            return None
        return self.status == SEPARATED


def det_closure(dag: Dag, given: Iterable[str]) -> tuple[str, ...]:
    """Expand a conditioning set by functional determination.

    Forward rule: a deterministic node whose form arguments all lie in the
    set is itself determined.  Inverse rule: an argument of an invertible
    form is determined once the defined node and every other argument are.
    Aggregate and threshold forms never propagate inversely.  Result is
    sorted by declaration order and always contains ``given``.
    """
    closed: set[str] = set()
    for g in given:
        dag.node(g)
        closed.add(g)
    det_nodes = dag.deterministic_nodes()
    changed = True
    while changed:
        changed = False
        for n in det_nodes:
            args = n.form.arguments()
            if n.id not in closed and all(a in closed for a in args):
                closed.add(n.id)
                changed = True
            if n.id in closed and n.form.invertible:
                for a in args:
                    if a not in closed and all(b in closed for b in args if b != a):
                        closed.add(a)
                        changed = True
    return dag.sort_ids(closed)


def is_d_separated(dag: Dag, x: str, y: str, given: Iterable[str]) -> SeparationVerdict:
    """Classic d-separation; deterministic arcs count as plain directed edges."""
    z = _check_query(dag, x, y, given)
    return _separation(dag, x, y, blocking=z)


def is_D_separated(dag: Dag, x: str, y: str, given: Iterable[str]) -> SeparationVerdict:
    """Deterministic-aware separation: block against the closure of ``given``.

    Returns a degenerate verdict when x or y is functionally determined by
    the conditioning set (the query variable is a constant given Z).
    """
    z = _check_query(dag, x, y, given)
    closure = set(det_closure(dag, z))
    for q in (x, y):
        if q in closure:
            return SeparationVerdict(
                DEGENERATE,
                reason=f"{q!r} is functionally determined by the conditioning set "
                f"{sorted(z)} (closure {list(det_closure(dag, z))})",
            )
    return _separation(dag, x, y, blocking=closure)


def _check_query(dag: Dag, x: str, y: str, given: Iterable[str]) -> set[str]:
    z = set(given)
    for nid in (x, y, *z):
        dag.node(nid)
    if x == y:
        raise ValueError("query variables must differ")
    if x in z or y in z:
        raise ValueError("query variables cannot appear in the conditioning set")
    return z


# ---------------------------------------------------------------------------
# Reachability core (shared by both criteria via the blocking set)
# ---------------------------------------------------------------------------


def _collider_openers(dag: Dag, blocking: set[str]) -> set[str]:
    """Nodes that, as colliders, let a path through: in the blocking set or
    with a descendant there."""
    openers = set(blocking)
    for n in dag.nodes:
        if n.id in openers:
            continue
        if any(d in blocking for d in descendants(dag, n.id)):
            openers.add(n.id)
    return openers


def _separation(dag: Dag, x: str, y: str, blocking: set[str]) -> SeparationVerdict:
    reachable = _active_reach(dag, x, blocking)
    if y not in reachable:
        return SeparationVerdict(SEPARATED)
    witness = _first_witness(dag, x, y, blocking)
    if witness is None:  # pragma: no cover - traversal and path search agree
        raise AssertionError("reachability found a trail but no witness path exists")
    return SeparationVerdict(CONNECTED, witness=witness)


def _active_reach(dag: Dag, x: str, blocking: set[str]) -> set[str]:
    """Active-trail reachability (Bayes-ball style) from x given a blocking set."""
    openers = _collider_openers(dag, blocking)
    UP, DOWN = 0, 1  # arrived from a child / from a parent
    seen: set[tuple[str, int]] = set()
    reached: set[str] = set()
    stack: list[tuple[str, int]] = [(x, UP)]
    while stack:
        node, direction = stack.pop()
        if (node, direction) in seen:
            continue
        seen.add((node, direction))
        reached.add(node)
        if direction == UP:
            if node not in blocking:
                for p in dag.parents(node):
                    stack.append((p, UP))
                for c in dag.children(node):
                    stack.append((c, DOWN))
        else:
            if node not in blocking:
                for c in dag.children(node):
                    stack.append((c, DOWN))
            if node in openers:
                for p in dag.parents(node):
                    stack.append((p, UP))
    reached.discard(x)
    return reached


# ---------------------------------------------------------------------------
# Witness extraction
# ---------------------------------------------------------------------------


def _first_witness(
    dag: Dag, x: str, y: str, blocking: set[str]
) -> Optional[WitnessPath]:
    """Lexicographically first active simple path from x to y.

    Paths are compared as sequences of declaration indices; depth-first
    search visiting neighbours in declaration order enumerates candidate
    paths in exactly that order, so the first active one wins.
    """
    openers = _collider_openers(dag, blocking)
    edge_det = {
        (e.src, e.dst): e.deterministic for e in dag.edges if e.src in dag and e.dst in dag
    }
    found = _dfs_paths(dag, x, y, blocking, openers)
    if found is None:
        return None
    nodes, forwards = found
    steps = [PathStep(nodes[0], "endpoint", "query variable")]
    for i in range(1, len(nodes) - 1):
        prev_f, next_f = forwards[i - 1], forwards[i]
        if prev_f and not next_f:
            note = (
                "opened: conditioned on"
                if nodes[i] in blocking
                else "opened: a descendant is conditioned on"
            )
            steps.append(PathStep(nodes[i], "collider", note))
        else:
            role = "chain" if prev_f == next_f else "fork"
            steps.append(PathStep(nodes[i], role, "open: not conditioned on"))
    steps.append(PathStep(nodes[-1], "endpoint", "query variable"))
    edges = []
    for i, forward in enumerate(forwards):
        src, dst = (nodes[i], nodes[i + 1]) if forward else (nodes[i + 1], nodes[i])
        edges.append((src, dst, edge_det.get((src, dst), False), forward))
    return WitnessPath(tuple(steps), tuple(edges))


def _dfs_paths(
    dag: Dag, x: str, y: str, blocking: set[str], openers: set[str]
) -> Optional[tuple[list[str], list[bool]]]:
    """Return nodes and hop directions of the lexicographically first active path."""

    def neighbours(nid: str) -> list[tuple[str, bool]]:
        out = {(c, True) for c in dag.children(nid)} | {
            (p, False) for p in dag.parents(nid)
        }
        return sorted(out, key=lambda t: (dag.index(t[0]), not t[1]))

    path = [x]
    forwards: list[bool] = []

    def ok_through(prev_forward: bool, node: str, next_forward: bool) -> bool:
        if prev_forward and not next_forward:  # collider at node
            return node in openers
        return node not in blocking

    def dfs() -> bool:
        cur = path[-1]
        for nxt, forward in neighbours(cur):
            if nxt in path:
                continue
            if forwards and not ok_through(forwards[-1], cur, forward):
                continue
            path.append(nxt)
            forwards.append(forward)
            if nxt == y or dfs():
                return True
            path.pop()
            forwards.pop()
        return False

    if dfs():
        return path, forwards
    return None
