"""Seeded linear-Gaussian simulator and empirical independence checks.

Every probabilistic node is exogenous noise plus a linear combination of its
parents; every deterministic node is computed exactly from its form, row by
row.  Draws come from one PCG64 stream per node, seeded with
``seed XOR declaration_index``, so results are bit-reproducible and
independent of any parallel scheduling of node evaluation.

Nodes that feed a ratio (either side), a product, or a power base default to
mean 10 so their support stays about ten standard deviations away from zero;
that keeps ratio simulations finite without heavier distributional machinery.
Declared or explicitly supplied means always win over this default.

``verify_dseps`` confronts the graphical engine with the data: it enumerates
small conditioning sets, tests each pair with a Fisher-z partial-correlation
test, and reports agreement.  Partial correlation only measures linear
dependence, so triples touching nonlinear forms (ratio, product, power,
threshold, aggregates) are reported informationally and excluded from the
strict agreement figure.
"""

from __future__ import annotations

import hashlib
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np
from scipy.stats import norm

from .dsep import DEGENERATE, det_closure, is_D_separated
from .graph import (
    LINEAR_FORMS,
    AggMean,
    AggPrev,
    Dag,
    Difference,
    Power,
    Product,
    Ratio,
    Scale,
    Sum,
    Threshold,
    ancestors,
    base_components,
)

__all__ = [
    "SimParams",
    "Dataset",
    "SimulationError",
    "RatioDenominatorNearZeroError",
    "DegenerateColumnError",
    "IndependenceVerdict",
    "TripleResult",
    "VerificationReport",
    "simulate",
    "partial_correlation",
    "independence_verdict",
    "verify_dseps",
    "variance_decomposition",
    "nonlinear_involved",
]

DENOMINATOR_FLOOR = 1e-9
RESIDUAL_VARIANCE_FLOOR = 1e-12

DEFAULT_SD = 1.0
DEFAULT_COEF = 0.5
POSITIVE_SUPPORT_MEAN = 10.0


class SimulationError(RuntimeError):
    pass


class RatioDenominatorNearZeroError(SimulationError):
    def __init__(self, node_id: str, count: int):
        super().__init__(
            f"ratio node {node_id!r}: {count} simulated denominator value(s) within "
            f"{DENOMINATOR_FLOOR} of zero; give the denominator a mean well away from zero"
        )
        self.node_id = node_id


class DegenerateColumnError(ValueError):
    def __init__(self, column: str):
        super().__init__(
            f"residual variance of {column!r} below {RESIDUAL_VARIANCE_FLOOR}; "
            "the column is constant given the conditioning set"
        )
        self.column = column


@dataclass(frozen=True)
class SimParams:
    """Overrides for simulation: per-node mean/sd, per-edge coefficient.

    Anything not overridden falls back to attributes declared on the graph,
    then to the defaults (mean 0, sd 1, coef 0.5, positive-support mean 10
    where needed).  Group labels run 1..n_groups with equal group sizes.
    """

    means: Mapping[str, float] = field(default_factory=dict)
    sds: Mapping[str, float] = field(default_factory=dict)
    coefs: Mapping[tuple[str, str], float] = field(default_factory=dict)
    n_groups: int = 50

    def digest(self) -> str:
        payload = repr(
            (
                sorted(self.means.items()),
                sorted(self.sds.items()),
                sorted(self.coefs.items()),
                self.n_groups,
            )
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Dataset:
    """A simulated sample: one column per node, in declaration order."""

    n: int
    columns: dict[str, np.ndarray]
    seed: int
    provenance: str

    def column(self, node_id: str) -> np.ndarray:
        try:
            return self.columns[node_id]
        except KeyError:
            raise KeyError(f"no simulated column {node_id!r}") from None

    def node_ids(self) -> tuple[str, ...]:
        return tuple(self.columns)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        ids = self.node_ids()
        buf.write(",".join(ids) + "\n")
        mat = np.column_stack([self.columns[i] for i in ids])
        for row in mat:
            buf.write(",".join(np.format_float_positional(v, trim="-") for v in row))
            buf.write("\n")
        return buf.getvalue()

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


# ---------------------------------------------------------------------------
# Parameter resolution
# ---------------------------------------------------------------------------


def positive_support_nodes(dag: Dag) -> frozenset[str]:
    """Probabilistic nodes whose simulated values must stay away from zero.

    These are the base components feeding any ratio argument, product
    argument, or power base; they default to mean 10 unless a mean is given.
    """
    need: set[str] = set()
    for n in dag.deterministic_nodes():
        form = n.form
        if isinstance(form, Ratio):
            need.update((form.numerator, form.denominator))
        elif isinstance(form, Product):
            need.update(form.args)
        elif isinstance(form, Power):
            need.add(form.base)
    out: set[str] = set()
    for nid in need:
        out.update(base_components(dag, nid))
    return frozenset(out)


def _check_params(dag: Dag, params: SimParams) -> None:
    for nid in itertools.chain(params.means, params.sds):
        dag.node(nid)
    for nid, sd in params.sds.items():
        if sd <= 0:
            raise ValueError(f"sd override for {nid!r} must be positive, got {sd}")
    for (src, dst) in params.coefs:
        dag.node(src)
        dag.node(dst)
    if params.n_groups < 1:
        raise ValueError("n_groups must be at least 1")


def _mean(dag: Dag, params: SimParams, positive: frozenset[str], nid: str) -> float:
    if nid in params.means:
        return float(params.means[nid])
    node = dag.node(nid)
    if node.sim is not None and node.sim.mean is not None:
        return float(node.sim.mean)
    return POSITIVE_SUPPORT_MEAN if nid in positive else 0.0


def _sd(dag: Dag, params: SimParams, nid: str) -> float:
    if nid in params.sds:
        return float(params.sds[nid])
    node = dag.node(nid)
    if node.sim is not None and node.sim.sd is not None:
        return float(node.sim.sd)
    return DEFAULT_SD


def _coef(params: SimParams, edge) -> float:
    if (edge.src, edge.dst) in params.coefs:
        return float(params.coefs[(edge.src, edge.dst)])
    if edge.coef is not None:
        return float(edge.coef)
    return DEFAULT_COEF


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


def simulate(
    dag: Dag,
    params: Optional[SimParams] = None,
    n: int = 10_000,
    seed: int = 0,
    fix: Optional[Mapping[str, float]] = None,
) -> Dataset:
    """Draw a seeded sample of every node, in topological order.

    ``fix`` pins listed nodes to constants (an intervention); because every
    node owns its noise stream, all other noise draws are unchanged, giving
    common random numbers across paired runs.
    """
    params = params or SimParams()
    if n < 1:
        raise ValueError("n must be at least 1")
    if seed < 0:
        raise ValueError("seed must be a non-negative 64-bit integer")
    _check_params(dag, params)
    fix = dict(fix or {})
    for nid in fix:
        dag.node(nid)

    positive = positive_support_nodes(dag)
    in_edges: dict[str, list] = {nid: [] for nid in dag.node_ids()}
    for e in dag.edges:
        if not e.deterministic:
            in_edges[e.dst].append(e)

    cols: dict[str, np.ndarray] = {}
    for nid in dag.topological_order():
        node = dag.node(nid)
        idx = dag.index(nid)
        rng = np.random.default_rng(seed ^ idx)
        if nid in fix:
            cols[nid] = np.full(n, float(fix[nid]))
            continue
        if nid in dag.group_node_ids:
            labels = 1 + (np.arange(n) % params.n_groups)
            cols[nid] = rng.permutation(labels).astype(float)
            continue
        if not node.deterministic:
            value = np.full(n, _mean(dag, params, positive, nid))
            for e in in_edges[nid]:
                value = value + _coef(params, e) * cols[e.src]
            value = value + rng.normal(0.0, _sd(dag, params, nid), n)
            cols[nid] = value
            continue
        cols[nid] = _eval_form(node, cols)

    ordered = {nid: cols[nid] for nid in dag.node_ids()}
    provenance = f"{dag.name}:{params.digest()}"
    return Dataset(n=n, columns=ordered, seed=seed, provenance=provenance)


def _eval_form(node, cols: dict[str, np.ndarray]) -> np.ndarray:
    form = node.form
    if isinstance(form, Sum):
        out = cols[form.args[0]].copy()
        for a in form.args[1:]:
            out += cols[a]
        return out
    if isinstance(form, Difference):
        return cols[form.minuend] - cols[form.subtrahend]
    if isinstance(form, Ratio):
        den = cols[form.denominator]
        bad = int(np.count_nonzero(np.abs(den) < DENOMINATOR_FLOOR))
        if bad:
            raise RatioDenominatorNearZeroError(node.id, bad)
        return cols[form.numerator] / den
    if isinstance(form, Product):
        out = cols[form.args[0]].copy()
        for a in form.args[1:]:
            out *= cols[a]
        return out
    if isinstance(form, Power):
        with np.errstate(invalid="ignore", divide="ignore"):
            out = cols[form.base] ** form.exponent
        if not np.all(np.isfinite(out)):
            raise SimulationError(
                f"power node {node.id!r} produced non-finite values; "
                "its base needs positive support"
            )
        return out
    if isinstance(form, Scale):
        return cols[form.arg] * form.factor
    if isinstance(form, Threshold):
        return (cols[form.arg] > form.cutpoint).astype(float)
    if isinstance(form, AggMean):
        return _group_apply(cols[form.arg], cols[form.group])
    if isinstance(form, AggPrev):
        flags = (cols[form.arg] > form.cutpoint).astype(float)
        return _group_apply(flags, cols[form.group])
    raise TypeError(f"unhandled form {form!r}")


def _group_apply(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    g = labels.astype(np.int64)
    sums = np.bincount(g, weights=values)
    counts = np.bincount(g)
    with np.errstate(invalid="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    return means[g]


# ---------------------------------------------------------------------------
# Partial correlation and the Fisher-z test
# ---------------------------------------------------------------------------


def partial_correlation(
    ds: Dataset, x: str, y: str, given: Iterable[str] = ()
) -> float:
    """Pearson correlation of x and y after projecting out ``given``."""
    z = list(given)
    rx = _residual(ds, x, z)
    ry = _residual(ds, y, z)
    r = float(np.dot(rx, ry) / np.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))
    return float(np.clip(r, -1.0, 1.0))


def _residual(ds: Dataset, col: str, given: list[str]) -> np.ndarray:
    v = ds.column(col).astype(float)
    design = np.column_stack(
        [np.ones(ds.n)] + [ds.column(g).astype(float) for g in given]
    )
    beta, *_ = np.linalg.lstsq(design, v, rcond=None)
    resid = v - design @ beta
    if float(np.var(resid)) < RESIDUAL_VARIANCE_FLOOR:
        raise DegenerateColumnError(col)
    return resid


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    r: float
    statistic: float
    p_value: float
    alpha: float

    @property
    def label(self) -> str:
        return "Independent" if self.independent else "Dependent"


def independence_verdict(
    ds: Dataset, x: str, y: str, given: Iterable[str] = (), alpha: float = 0.01
) -> IndependenceVerdict:
    """Fisher-z test of zero partial correlation at level ``alpha``."""
    z = list(given)
    if ds.n <= len(z) + 3:
        raise ValueError(f"need n > |given| + 3 (= {len(z) + 3}), have n = {ds.n}")
    r = partial_correlation(ds, x, y, z)
    r_safe = float(np.clip(r, -1 + 1e-15, 1 - 1e-15))
    statistic = float(np.sqrt(ds.n - len(z) - 3) * abs(np.arctanh(r_safe)))
    p_value = float(2 * (1 - norm.cdf(statistic)))
    crit = float(norm.ppf(1 - alpha / 2))
    return IndependenceVerdict(statistic <= crit, r, statistic, p_value, alpha)


# ---------------------------------------------------------------------------
# Engine-versus-data verification
# ---------------------------------------------------------------------------


def nonlinear_involved(dag: Dag) -> frozenset[str]:
    """Nodes whose value passes through a nonlinear form anywhere upstream.

    A node is involved when it, or any ancestor, is deterministic with a
    form outside sum/difference/scale.  Dependence reaching such a node is
    not linear in the exogenous noise, so a partial-correlation test has no
    power guarantee there.
    """
    nonlinear_defs = {
        n.id
        for n in dag.deterministic_nodes()
        if not isinstance(n.form, LINEAR_FORMS)
    }
    out: set[str] = set()
    for n in dag.nodes:
        if n.id in nonlinear_defs or any(
            a in nonlinear_defs for a in ancestors(dag, n.id)
        ):
            out.add(n.id)
    return frozenset(out)


@dataclass(frozen=True)
class TripleResult:
    x: str
    y: str
    given: tuple[str, ...]
    engine_separated: bool
    empirical_independent: bool
    r: float
    strict: bool

    @property
    def agree(self) -> bool:
        return self.engine_separated == self.empirical_independent


@dataclass(frozen=True)
class VerificationReport:
    dag_name: str
    n: int
    seed: int
    alpha: float
    results: tuple[TripleResult, ...]
    skipped_degenerate: int

    @property
    def strict_results(self) -> tuple[TripleResult, ...]:
        return tuple(r for r in self.results if r.strict)

    @property
    def disagreements(self) -> tuple[TripleResult, ...]:
        return tuple(r for r in self.strict_results if not r.agree)

    @property
    def agreement_rate(self) -> float:
        strict = self.strict_results
        if not strict:
            return 1.0
        return sum(r.agree for r in strict) / len(strict)

    @property
    def full_agreement(self) -> bool:
        return not self.disagreements

    def matrix(self) -> dict[str, int]:
        """Cross-tabulation of engine verdicts against empirical verdicts."""
        cells = {
            "separated_independent": 0,
            "separated_dependent": 0,
            "connected_independent": 0,
            "connected_dependent": 0,
        }
        for r in self.strict_results:
            key = (
                ("separated" if r.engine_separated else "connected")
                + "_"
                + ("independent" if r.empirical_independent else "dependent")
            )
            cells[key] += 1
        return cells


def verify_dseps(
    dag: Dag,
    params: Optional[SimParams] = None,
    n: int = 50_000,
    seed: int = 0,
    alpha: float = 0.01,
    max_given: int = 2,
) -> VerificationReport:
    """Compare graphical verdicts with simulated data for every small query.

    Enumerates all pairs with conditioning sets up to ``max_given`` nodes,
    skipping degenerate queries (a query variable pinned down by the
    conditioning set).  Triples touching nonlinear-derived nodes are tested
    and reported but excluded from the strict agreement rate.
    """
    params = params or SimParams()
    ds = simulate(dag, params, n, seed)
    nonlinear = nonlinear_involved(dag)
    ids = dag.node_ids()
    results: list[TripleResult] = []
    skipped = 0
    for x, y in itertools.combinations(ids, 2):
        others = [o for o in ids if o not in (x, y)]
        for k in range(0, max_given + 1):
            for z in itertools.combinations(others, k):
                closure = set(det_closure(dag, z))
                if x in closure or y in closure:
                    skipped += 1
                    continue
                verdict = is_D_separated(dag, x, y, z)
                assert verdict.status != DEGENERATE
                strict = not any(v in nonlinear for v in (x, y, *z))
                try:
                    emp = independence_verdict(ds, x, y, z, alpha)
                except DegenerateColumnError:
                    skipped += 1
                    continue
                results.append(
                    TripleResult(
                        x,
                        y,
                        tuple(z),
                        bool(verdict.separated),
                        emp.independent,
                        emp.r,
                        strict,
                    )
                )
    return VerificationReport(
        dag_name=dag.name,
        n=n,
        seed=seed,
        alpha=alpha,
        results=tuple(results),
        skipped_degenerate=skipped,
    )


# ---------------------------------------------------------------------------
# Variance attribution for composites
# ---------------------------------------------------------------------------


def variance_decomposition(
    dag: Dag,
    params: Optional[SimParams] = None,
    composite: str = "",
    n: int = 50_000,
    seed: int = 0,
) -> dict[str, float]:
    """Share of a composite's variance attributable to each base component.

    For each base parent p the graph is re-simulated with p held at its
    baseline mean (common random numbers everywhere else); the share is the
    relative drop in the composite's variance, clamped into [0, 1].  Shares
    need not sum to one for nonlinear forms.
    """
    node = dag.node(composite)
    if not node.deterministic:
        raise ValueError(f"{composite!r} is not a composite (deterministic) node")
    params = params or SimParams()
    baseline = simulate(dag, params, n, seed)
    total_var = float(np.var(baseline.column(composite)))
    if total_var <= 0:
        raise SimulationError(f"composite {composite!r} has zero variance")
    shares: dict[str, float] = {}
    for p in base_components(dag, composite):
        pinned = float(np.mean(baseline.column(p)))
        run = simulate(dag, params, n, seed, fix={p: pinned})
        var_p = float(np.var(run.column(composite)))
        share = 1.0 - var_p / total_var
        shares[p] = float(np.clip(share, 0.0, 1.0))
    return shares
