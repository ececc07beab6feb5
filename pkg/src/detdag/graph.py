"""Core DAG model with first-class deterministic variables.

A graph holds two kinds of nodes: probabilistic nodes (exogenous noise plus
linear contributions from parents) and deterministic nodes, whose value is an
exact algebraic function of other nodes.  Deterministic nodes carry a
:class:`FunctionalForm` describing that function; their incoming arcs are
implied by the form's arguments and are tagged ``deterministic``.

Graphs are immutable after construction.  Use :class:`DagBuilder` (or the DSL
parser in :mod:`detdag.dsl`) to assemble one.  ``validate`` reports invariant
violations instead of raising, so that malformed graphs can be constructed,
inspected and reported on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Union

__all__ = [
    "Sum",
    "Difference",
    "Ratio",
    "Product",
    "Power",
    "Scale",
    "Threshold",
    "AggMean",
    "AggPrev",
    "FunctionalForm",
    "NodeKind",
    "NodeDef",
    "EdgeDef",
    "Dag",
    "DagBuilder",
    "Violation",
    "UnknownNodeError",
    "DagValidationError",
    "validate",
    "base_components",
    "ancestors",
    "descendants",
]


class UnknownNodeError(KeyError):
    """A query referenced a node id that is not declared in the graph."""

    def __init__(self, node_id: str):
        super().__init__(node_id)
        self.node_id = node_id

    def __str__(self) -> str:
        return f"unknown node id: {self.node_id!r}"


# ---------------------------------------------------------------------------
# Functional forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sum:
    """Sum of two or more arguments (a 'whole' made of 'parts')."""

    args: tuple[str, ...]

    invertible = True
    dsl_name = "sum"

    def arguments(self) -> tuple[str, ...]:
        return self.args

    def dsl(self) -> str:
        return f"sum({', '.join(self.args)})"


@dataclass(frozen=True)
class Difference:
    """minuend - subtrahend (change scores and the like)."""

    minuend: str
    subtrahend: str

    invertible = True
    dsl_name = "diff"

    def arguments(self) -> tuple[str, ...]:
        return (self.minuend, self.subtrahend)

    def dsl(self) -> str:
        return f"diff({self.minuend}, {self.subtrahend})"


@dataclass(frozen=True)
class Ratio:
    """numerator / denominator (per-capita rates, indices)."""

    numerator: str
    denominator: str

    invertible = True  # over nonzero support
    dsl_name = "ratio"

    def arguments(self) -> tuple[str, ...]:
        return (self.numerator, self.denominator)

    def dsl(self) -> str:
        return f"ratio({self.numerator}, {self.denominator})"


@dataclass(frozen=True)
class Product:
    """Product of two or more arguments, e.g. interaction terms."""

    args: tuple[str, ...]

    invertible = True  # over nonzero support
    dsl_name = "product"

    def arguments(self) -> tuple[str, ...]:
        return self.args

    def dsl(self) -> str:
        return f"product({', '.join(self.args)})"


@dataclass(frozen=True)
class Power:
    """base ** exponent with a constant exponent."""

    base: str
    exponent: float

    dsl_name = "power"

    @property
    def invertible(self) -> bool:
        # A zero exponent collapses everything to 1; otherwise invertible on
        # positive support.
        return self.exponent != 0

    def arguments(self) -> tuple[str, ...]:
        return (self.base,)

    def dsl(self) -> str:
        return f"power({self.base}, {_fmt_number(self.exponent)})"


@dataclass(frozen=True)
class Scale:
    """arg * factor with a constant nonzero factor (unit changes)."""

    arg: str
    factor: float

    invertible = True
    dsl_name = "scale"

    def arguments(self) -> tuple[str, ...]:
        return (self.arg,)

    def dsl(self) -> str:
        return f"scale({self.arg}, {_fmt_number(self.factor)})"


@dataclass(frozen=True)
class Threshold:
    """1 if arg > cutpoint else 0 (dichotomisation)."""

    arg: str
    cutpoint: float

    invertible = False
    dsl_name = "threshold"

    def arguments(self) -> tuple[str, ...]:
        return (self.arg,)

    def dsl(self) -> str:
        return f"threshold({self.arg}, {_fmt_number(self.cutpoint)})"


@dataclass(frozen=True)
class AggMean:
    """Group-wise mean of arg, grouped by an integer-valued group node."""

    arg: str
    group: str

    invertible = False
    dsl_name = "aggmean"

    def arguments(self) -> tuple[str, ...]:
        return (self.arg, self.group)

    def dsl(self) -> str:
        return f"aggmean({self.arg}, {self.group})"


@dataclass(frozen=True)
class AggPrev:
    """Group-wise prevalence of (arg > cutpoint), grouped by a group node."""

    arg: str
    cutpoint: float
    group: str

    invertible = False
    dsl_name = "aggprev"

    def arguments(self) -> tuple[str, ...]:
        return (self.arg, self.group)

    def dsl(self) -> str:
        return f"aggprev({self.arg}, {_fmt_number(self.cutpoint)}, {self.group})"


FunctionalForm = Union[
    Sum, Difference, Ratio, Product, Power, Scale, Threshold, AggMean, AggPrev
]

#: Forms that are exactly linear in their arguments.  Everything else is
#: nonlinear and excluded from strict linear-correlation verification.
LINEAR_FORMS = (Sum, Difference, Scale)


def _fmt_number(x: float) -> str:
    """Format a number as plain decimal text (no exponent notation)."""
    # Local import keeps numpy out of the type layer for plain dataclass use.
    import numpy as np

    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return np.format_float_positional(x, trim="-")


# ---------------------------------------------------------------------------
# Nodes, edges, graph
# ---------------------------------------------------------------------------


class NodeKind:
    PROBABILISTIC = "probabilistic"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class SimAttrs:
    """Declared exogenous-noise parameters for a probabilistic node."""

    mean: Optional[float] = None
    sd: Optional[float] = None


@dataclass(frozen=True)
class NodeDef:
    id: str
    label: Optional[str] = None
    form: Optional[FunctionalForm] = None
    time: Optional[float] = None
    sim: Optional[SimAttrs] = None
    fixed: bool = False

    @property
    def deterministic(self) -> bool:
        return self.form is not None

    @property
    def kind(self) -> str:
        return NodeKind.DETERMINISTIC if self.deterministic else NodeKind.PROBABILISTIC


@dataclass(frozen=True)
class EdgeDef:
    src: str
    dst: str
    deterministic: bool = False
    coef: Optional[float] = None

    @property
    def kind(self) -> str:
        return NodeKind.DETERMINISTIC if self.deterministic else NodeKind.PROBABILISTIC


@dataclass(frozen=True)
class Violation:
    """One invariant violation, citing the node/edge it concerns."""

    code: str
    message: str
    location: str


class DagValidationError(ValueError):
    """Raised by DagBuilder.build(strict=True) when the graph is invalid."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = "; ".join(f"{v.code} at {v.location}: {v.message}" for v in violations)
        super().__init__(f"invalid graph: {lines}")


@dataclass(frozen=True, eq=True)
class Dag:
    """Immutable directed graph with probabilistic and deterministic nodes.

    Nodes and edges keep declaration order; all set-valued query results are
    returned sorted by declaration order so output is deterministic.
    """

    name: str
    nodes: tuple[NodeDef, ...]
    edges: tuple[EdgeDef, ...]

    # -- lookups -----------------------------------------------------------

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n.id: i for i, n in enumerate(self.nodes)}

    @cached_property
    def _node_by_id(self) -> dict[str, NodeDef]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def _parents(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            if e.dst in acc and e.src not in acc[e.dst]:
                acc[e.dst].append(e.src)
        return {k: tuple(v) for k, v in acc.items()}

    @cached_property
    def _children(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            if e.src in acc and e.dst not in acc[e.src]:
                acc[e.src].append(e.dst)
        return {k: tuple(v) for k, v in acc.items()}

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._index

    def node(self, node_id: str) -> NodeDef:
        try:
            return self._node_by_id[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def index(self, node_id: str) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def parents(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self._parents[node_id]

    def children(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self._children[node_id]

    def deterministic_nodes(self) -> tuple[NodeDef, ...]:
        return tuple(n for n in self.nodes if n.deterministic)

    def probabilistic_nodes(self) -> tuple[NodeDef, ...]:
        return tuple(n for n in self.nodes if not n.deterministic)

    @cached_property
    def group_node_ids(self) -> frozenset[str]:
        """Nodes referenced as the grouping label of some aggregate form."""
        groups = set()
        for n in self.nodes:
            if isinstance(n.form, (AggMean, AggPrev)):
                groups.add(n.form.group)
        return frozenset(groups)

    def sort_ids(self, ids: Iterable[str]) -> tuple[str, ...]:
        """Sort node ids by declaration order (the canonical result order)."""
        return tuple(sorted(set(ids), key=self.index))

    def topological_order(self) -> tuple[str, ...]:
        """Node ids in a topological order, ties broken by declaration order.

        Raises ValueError on cyclic graphs; run ``validate`` first if the
        graph may be malformed.
        """
        indeg = {n.id: 0 for n in self.nodes}
        for e in self.edges:
            if e.src in indeg and e.dst in indeg:
                indeg[e.dst] += 1
        ready = [nid for nid in self.node_ids() if indeg[nid] == 0]
        out: list[str] = []
        while ready:
            ready.sort(key=self.index)
            nid = ready.pop(0)
            out.append(nid)
            for c in self._children[nid]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(out) != len(self.nodes):
            raise ValueError(f"graph {self.name!r} contains a cycle")
        return tuple(out)


# ---------------------------------------------------------------------------
# Builder
# ---------------------------------------------------------------------------


class DagBuilder:
    """Assembles a Dag; deterministic arcs are derived from form arguments.

    This is the only mutation surface of the package: the parser drives it,
    and tests use it for programmatic graph construction.
    """

    def __init__(self, name: str):
        self.name = name
        self._nodes: list[NodeDef] = []
        self._edges: list[EdgeDef] = []

    def node(
        self,
        node_id: str,
        label: Optional[str] = None,
        time: Optional[float] = None,
        mean: Optional[float] = None,
        sd: Optional[float] = None,
        fixed: bool = False,
    ) -> "DagBuilder":
        sim = SimAttrs(mean, sd) if (mean is not None or sd is not None) else None
        self._nodes.append(NodeDef(node_id, label=label, time=time, sim=sim, fixed=fixed))
        return self

    def deterministic(
        self,
        node_id: str,
        form: FunctionalForm,
        label: Optional[str] = None,
        time: Optional[float] = None,
        fixed: bool = False,
    ) -> "DagBuilder":
        self._nodes.append(
            NodeDef(node_id, label=label, form=form, time=time, fixed=fixed)
        )
        for arg in form.arguments():
            self._edges.append(EdgeDef(arg, node_id, deterministic=True))
        return self

    def edge(self, src: str, dst: str, coef: Optional[float] = None) -> "DagBuilder":
        self._edges.append(EdgeDef(src, dst, coef=coef))
        return self

    def build(self, strict: bool = True) -> Dag:
        dag = Dag(self.name, tuple(self._nodes), tuple(self._edges))
        if strict:
            violations = validate(dag)
            if violations:
                raise DagValidationError(violations)
        return dag


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(dag: Dag) -> list[Violation]:
    """Check every structural invariant; return [] iff the graph is well formed.

    Violations are data, not exceptions, and each one cites the node or edge
    ids involved.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    declared = {n.id for n in dag.nodes}

    for n in dag.nodes:
        if n.id in seen:
            out.append(Violation("DuplicateNode", f"node {n.id!r} declared twice", n.id))
        seen.add(n.id)

    for n in dag.nodes:
        if n.deterministic:
            if n.sim is not None:
                out.append(
                    Violation(
                        "DeterministicNoise",
                        f"deterministic node {n.id!r} cannot carry mean/sd noise parameters",
                        n.id,
                    )
                )
            args = n.form.arguments()
            if len(set(args)) != len(args):
                out.append(
                    Violation(
                        "FormArgumentViolation",
                        f"form of {n.id!r} repeats an argument: {args}",
                        n.id,
                    )
                )
            for a in args:
                if a not in declared:
                    out.append(
                        Violation(
                            "UnknownNode",
                            f"form of {n.id!r} references undeclared node {a!r}",
                            n.id,
                        )
                    )
            if isinstance(n.form, Scale) and n.form.factor == 0:
                out.append(
                    Violation(
                        "FormArgumentViolation",
                        f"scale factor of {n.id!r} must be nonzero",
                        n.id,
                    )
                )
        if n.sim is not None and n.sim.sd is not None and n.sim.sd <= 0:
            out.append(
                Violation("InvalidSimParams", f"node {n.id!r} declares sd <= 0", n.id)
            )

    edge_keys: set[tuple[str, str]] = set()
    for e in dag.edges:
        loc = f"{e.src}->{e.dst}"
        for endpoint in (e.src, e.dst):
            if endpoint not in declared:
                out.append(
                    Violation(
                        "UnknownNode", f"edge {loc} references undeclared node {endpoint!r}", loc
                    )
                )
        if (e.src, e.dst) in edge_keys:
            out.append(Violation("DuplicateEdge", f"edge {loc} declared twice", loc))
        edge_keys.add((e.src, e.dst))

    # Deterministic-arc discipline: a deterministic node's incoming arcs are
    # exactly the deterministic arcs implied by its form arguments.
    for n in dag.nodes:
        incoming = [e for e in dag.edges if e.dst == n.id]
        if n.deterministic:
            expected = list(n.form.arguments())
            got = [e.src for e in incoming if e.deterministic]
            if sorted(got) != sorted(set(expected)):
                out.append(
                    Violation(
                        "MissingDeterministicEdge",
                        f"deterministic arcs into {n.id!r} are {sorted(got)}, "
                        f"form requires {sorted(set(expected))}",
                        n.id,
                    )
                )
            for e in incoming:
                if not e.deterministic:
                    out.append(
                        Violation(
                            "DeterministicParentViolation",
                            f"probabilistic arc {e.src}->{n.id} enters fully "
                            f"determined node {n.id!r}",
                            f"{e.src}->{n.id}",
                        )
                    )
        else:
            for e in incoming:
                if e.deterministic:
                    out.append(
                        Violation(
                            "DeterministicEdgeViolation",
                            f"deterministic arc {e.src}->{n.id} enters "
                            f"probabilistic node {n.id!r}",
                            f"{e.src}->{n.id}",
                        )
                    )

    # Temporal ordering: an effect cannot crystallise before its cause.
    for e in dag.edges:
        if e.src in declared and e.dst in declared:
            tu = dag.node(e.src).time
            tv = dag.node(e.dst).time
            if tu is not None and tv is not None and tu > tv:
                out.append(
                    Violation(
                        "TimeOrderViolation",
                        f"edge {e.src}->{e.dst} runs backwards in time ({tu} > {tv})",
                        f"{e.src}->{e.dst}",
                    )
                )

    out.extend(_cycle_violations(dag))
    return out


def _cycle_violations(dag: Dag) -> list[Violation]:
    ids = [n.id for n in dag.nodes]
    adj: dict[str, list[str]] = {i: [] for i in ids}
    for e in dag.edges:
        if e.src in adj and e.dst in adj:
            adj[e.src].append(e.dst)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack: list[str] = []
    cycle: list[str] = []

    def visit(u: str) -> bool:
        color[u] = GRAY
        stack.append(u)
        for v in adj[u]:
            if color[v] == GRAY:
                cycle.extend(stack[stack.index(v):] + [v])
                return True
            if color[v] == WHITE and visit(v):
                return True
        stack.pop()
        color[u] = BLACK
        return False

    for i in ids:
        if color[i] == WHITE and visit(i):
            path = "->".join(cycle)
            return [Violation("CycleViolation", f"directed cycle: {path}", cycle[0])]
    return []


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------


def base_components(dag: Dag, node_id: str) -> tuple[str, ...]:
    """Probabilistic sources a node is algebraically built from.

    A probabilistic node's base is itself.  A deterministic node's base is
    the union of its form arguments' bases, resolved through chains of
    deterministic definitions.  Result is sorted by declaration order.
    """
    n = dag.node(node_id)
    if not n.deterministic:
        return (node_id,)
    out: set[str] = set()
    stack = list(n.form.arguments())
    visited: set[str] = set()
    while stack:
        cur = stack.pop()
        if cur in visited:
            continue
        visited.add(cur)
        cn = dag.node(cur)
        if cn.deterministic:
            stack.extend(cn.form.arguments())
        else:
            out.add(cur)
    return dag.sort_ids(out)


def ancestors(dag: Dag, node_id: str) -> tuple[str, ...]:
    """All nodes with a directed path to ``node_id`` (excluding itself)."""
    return _reach(dag, node_id, dag._parents)


def descendants(dag: Dag, node_id: str) -> tuple[str, ...]:
    """All nodes reachable from ``node_id`` by directed paths (excluding itself)."""
    return _reach(dag, node_id, dag._children)


def _reach(dag: Dag, node_id: str, step: dict[str, tuple[str, ...]]) -> tuple[str, ...]:
    dag.node(node_id)
    out: set[str] = set()
    stack = list(step[node_id])
    while stack:
        cur = stack.pop()
        if cur in out:
            continue
        out.add(cur)
        stack.extend(step[cur])
    out.discard(node_id)
    return dag.sort_ids(out)
