"""Interpretation of analyses on graphs with deterministic variables.

Four families of diagnosis:

* tautology detection: pairs of variables that must associate because one is
  built from the other or both are built from shared components;
* estimand classification: what an exposure-outcome contrast with a given
  adjustment set actually estimates (total, relative, composite-summary, or
  a conflated ratio effect), with warnings;
* confounder roles for composite exposures: a candidate confounder is judged
  against each base component separately, because a variable may confound
  one component while mediating another, making the summary effect
  unidentifiable;
* minimal backdoor adjustment sets by exhaustive search (these graphs are
  desk-scale by construction).

Warning codes are stable identifiers for machine consumption:
CONSISTENCY_RISK, VARIANCE_DOMINANCE, TEMPORAL_SPREAD, RATIO_CONFLATION,
FIXED_WHOLE, TAUTOLOGY, POSITIVITY_RISK, AGGREGATE_ADJUSTMENT.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .dsep import CONNECTED, _collider_openers, _separation, det_closure
from .graph import Dag, Ratio, Sum, base_components, descendants

__all__ = [
    "AnalysisWarning",
    "TautologyFinding",
    "EstimandReport",
    "ConfounderRole",
    "DegenerateQueryError",
    "detect_tautologies",
    "classify_estimand",
    "classify_confounder",
    "enumerate_backdoor_sets",
    "consistency_report",
    "VARIANCE_DOMINANCE_RATIO",
    "COEF_HETEROGENEITY_RATIO",
]

# A composite is flagged as variance-dominated when the largest component
# share exceeds the smallest by this factor (given declared sim params).
VARIANCE_DOMINANCE_RATIO = 2.0
# Declared candidate->parent coefficients differing by more than this factor
# make a confounder "inconsistent".
COEF_HETEROGENEITY_RATIO = 2.0
# Wholes with more than this many parts get a positivity warning.
POSITIVITY_PART_LIMIT = 5


@dataclass(frozen=True)
class AnalysisWarning:
    code: str
    text: str


class DegenerateQueryError(ValueError):
    """The exposure or outcome is functionally determined by the adjustment set."""

    def __init__(self, variable: str, closure: tuple[str, ...]):
        self.variable = variable
        self.closure = closure
        super().__init__(
            f"{variable!r} is functionally determined by the adjustment set "
            f"(closure {list(closure)}); the query is about a constant"
        )


# ---------------------------------------------------------------------------
# Tautologies
# ---------------------------------------------------------------------------

SELF_OR_PART = "SelfOrPart"
SHARED_PARENT = "SharedParent"


@dataclass(frozen=True)
class TautologyFinding:
    pair: tuple[str, str]
    shared_base: tuple[str, ...]
    relation: str  # SelfOrPart | SharedParent
    explanation: str


def _definition_ancestors(dag: Dag, node_id: str) -> set[str]:
    """Every node reachable by walking form arguments, deterministic ones included."""
    node = dag.node(node_id)
    if not node.deterministic:
        return set()
    out: set[str] = set()
    stack = list(node.form.arguments())
    while stack:
        cur = stack.pop()
        if cur in out:
            continue
        out.add(cur)
        cn = dag.node(cur)
        if cn.deterministic:
            stack.extend(cn.form.arguments())
    return out


def detect_tautologies(dag: Dag) -> list[TautologyFinding]:
    """All variable pairs whose association is guaranteed by construction.

    A pair qualifies when one member is algebraically built from the other
    (SelfOrPart) or when both are built from at least one shared component
    (SharedParent).  Pairs are enumerated and ordered by declaration order.
    """
    findings: list[TautologyFinding] = []
    ids = dag.node_ids()
    bases = {nid: set(base_components(dag, nid)) for nid in ids}
    def_anc = {nid: _definition_ancestors(dag, nid) for nid in ids}
    for u, v in itertools.combinations(ids, 2):
        shared = dag.sort_ids(bases[u] & bases[v])
        if v in def_anc[u] or u in def_anc[v]:
            child, source = (u, v) if v in def_anc[u] else (v, u)
            findings.append(
                TautologyFinding(
                    (u, v),
                    shared,
                    SELF_OR_PART,
                    f"{child} is algebraically constructed from {source}; "
                    f"analysing one against the other is self-referential",
                )
            )
        elif shared and (dag.node(u).deterministic or dag.node(v).deterministic):
            findings.append(
                TautologyFinding(
                    (u, v),
                    shared,
                    SHARED_PARENT,
                    f"{u} and {v} are both built from {list(shared)}; "
                    f"they associate by construction even if everything else is unrelated",
                )
            )
    return findings


def _tautology_between(dag: Dag, u: str, v: str) -> Optional[TautologyFinding]:
    for f in detect_tautologies(dag):
        if set(f.pair) == {u, v}:
            return f
    return None


# ---------------------------------------------------------------------------
# Backdoor machinery
# ---------------------------------------------------------------------------


def _pruned(dag: Dag, exposure: str) -> Dag:
    """The graph with the exposure's outgoing arcs removed."""
    edges = tuple(e for e in dag.edges if e.src != exposure)
    return Dag(dag.name, dag.nodes, edges)


def enumerate_backdoor_sets(
    dag: Dag, exposure: str, outcome: str, max_size: int
) -> list[tuple[str, ...]]:
    """All minimal adjustment sets that close every backdoor path.

    A set is valid when, in the graph with the exposure's outgoing arcs
    removed, exposure and outcome are D-separated given the set.  Candidate
    sets never contain a descendant of the exposure or of any of its base
    components: conditioning there either biases the effect or blocks part
    of it (for a composite exposure, intervening means moving its
    components, so their descendants are off limits too).  Sets that
    functionally determine the exposure or outcome are degenerate, not
    valid.  Search is exhaustive; results are minimal and deterministic.
    """
    dag.node(exposure)
    dag.node(outcome)
    if exposure == outcome:
        raise ValueError("exposure and outcome must differ")

    forbidden = {exposure, outcome}
    forbidden.update(descendants(dag, exposure))
    for p in base_components(dag, exposure):
        forbidden.update(descendants(dag, p))
    candidates = [nid for nid in dag.node_ids() if nid not in forbidden]

    pruned = _pruned(dag, exposure)
    valid: list[tuple[str, ...]] = []
    for size in range(0, max_size + 1):
        for z in itertools.combinations(candidates, size):
            if any(set(v) < set(z) for v in valid):
                continue  # a subset already works; z cannot be minimal
            closure = set(det_closure(dag, z))
            if exposure in closure or outcome in closure:
                continue
            verdict = _separation(pruned, exposure, outcome, blocking=closure)
            if verdict.status != CONNECTED:
                valid.append(z)
    return valid


@dataclass(frozen=True)
class _PathDiag:
    pretty: str
    open: bool
    blocker: Optional[str]


def _path_diagnostics(
    dag: Dag, exposure: str, outcome: str, adjust: Iterable[str]
) -> tuple[list[str], list[str]]:
    """Pretty-printed open and blocked backdoor paths given the adjustment set."""
    pruned = _pruned(dag, exposure)
    closure = set(det_closure(dag, adjust))
    openers = _collider_openers(pruned, closure)
    kind = {(e.src, e.dst): e.deterministic for e in pruned.edges}

    children: dict[str, list[str]] = {nid: [] for nid in pruned.node_ids()}
    parents: dict[str, list[str]] = {nid: [] for nid in pruned.node_ids()}
    for e in pruned.edges:
        if e.src in children and e.dst in parents:
            children[e.src].append(e.dst)
            parents[e.dst].append(e.src)

    open_paths: list[str] = []
    blocked: list[str] = []

    path = [exposure]
    forwards: list[bool] = []

    def render(blocker: Optional[str]) -> str:
        parts = [path[0]]
        for i, fwd in enumerate(forwards):
            src, dst = (path[i], path[i + 1]) if fwd else (path[i + 1], path[i])
            det = kind.get((src, dst), False)
            arrow = ("=>" if det else "->") if fwd else ("<=" if det else "<-")
            parts.append(f" {arrow} {path[i + 1]}")
        text = "".join(parts)
        return text if blocker is None else f"{text} [blocked at {blocker}]"

    def status() -> Optional[str]:
        """First blocking node on the current path, or None if fully open."""
        for i in range(1, len(path) - 1):
            prev_f, next_f = forwards[i - 1], forwards[i]
            node = path[i]
            if prev_f and not next_f:  # collider
                if node not in openers:
                    return node
            elif node in closure:
                return node
        return None

    def dfs() -> None:
        cur = path[-1]
        nbrs = sorted(
            {(c, True) for c in children[cur]} | {(p, False) for p in parents[cur]},
            key=lambda t: (pruned.index(t[0]), not t[1]),
        )
        for nxt, fwd in nbrs:
            if nxt in path:
                continue
            path.append(nxt)
            forwards.append(fwd)
            if nxt == outcome:
                blocker = status()
                if blocker is None:
                    open_paths.append(render(None))
                else:
                    blocked.append(render(blocker))
            else:
                dfs()
            path.pop()
            forwards.pop()

    dfs()
    return open_paths, blocked


# ---------------------------------------------------------------------------
# Estimand classification
# ---------------------------------------------------------------------------

TOTAL_EFFECT = "TotalEffect"
RELATIVE_EFFECT = "RelativeEffect"
COMPOSITE_SUMMARY_EFFECT = "CompositeSummaryEffect"
CONFLATED_RATIO_EFFECT = "ConflatedRatioEffect"


@dataclass(frozen=True)
class EstimandReport:
    kind: str
    exposure: str
    outcome: str
    adjust: tuple[str, ...]
    substituting: tuple[str, ...] = ()
    numerator_base: tuple[str, ...] = ()
    denominator_base: tuple[str, ...] = ()
    warnings: tuple[AnalysisWarning, ...] = ()
    open_backdoors: tuple[str, ...] = ()
    blocked_paths: tuple[str, ...] = ()
    backdoor_sets: tuple[tuple[str, ...], ...] = ()

    @property
    def adjustment_sufficient(self) -> bool:
        return not self.open_backdoors


def classify_estimand(
    dag: Dag, exposure: str, outcome: str, adjust: Iterable[str] = ()
) -> EstimandReport:
    """Diagnose what contrasting exposure against outcome under ``adjust``
    actually estimates.

    Rules, in order: a ratio exposure whose numerator and denominator share
    components yields a conflated effect; a part of a conditioned (or
    structurally fixed) whole yields a relative effect against the remaining
    unconditioned parts; a composite exposure yields its summary effect with
    consistency warnings; otherwise the total effect.  Every report carries
    backdoor diagnostics for the supplied adjustment set.
    """
    adjust_t = tuple(dict.fromkeys(adjust))
    dag.node(exposure)
    dag.node(outcome)
    for a in adjust_t:
        dag.node(a)
    if exposure == outcome:
        raise ValueError("exposure and outcome must differ")
    if exposure in adjust_t or outcome in adjust_t:
        raise ValueError("exposure and outcome cannot be adjusted for")

    closure = det_closure(dag, adjust_t)
    closure_set = set(closure)
    for q in (exposure, outcome):
        if q in closure_set:
            raise DegenerateQueryError(q, closure)

    warnings: list[AnalysisWarning] = []
    taut = _tautology_between(dag, exposure, outcome)
    if taut is not None:
        warnings.append(
            AnalysisWarning(
                "TAUTOLOGY",
                f"exposure and outcome share components {list(taut.shared_base)}: "
                f"{taut.explanation}",
            )
        )

    node = dag.node(exposure)
    kind = TOTAL_EFFECT
    substituting: tuple[str, ...] = ()
    num_base: tuple[str, ...] = ()
    den_base: tuple[str, ...] = ()

    wholes = [
        w
        for w in dag.deterministic_nodes()
        if isinstance(w.form, Sum) and exposure in w.form.args
    ]

    conflated = False
    if node.deterministic and isinstance(node.form, Ratio):
        num_base = base_components(dag, node.form.numerator)
        den_base = base_components(dag, node.form.denominator)
        if set(num_base) & set(den_base):
            conflated = True
            kind = CONFLATED_RATIO_EFFECT
            warnings.append(
                AnalysisWarning(
                    "RATIO_CONFLATION",
                    f"the ratio exposure {exposure!r} mixes the effects of its "
                    f"numerator components {list(num_base)} with the inverse of "
                    f"its denominator components {list(den_base)}; the two cannot "
                    f"be told apart in the estimate",
                )
            )

    if not conflated:
        num_base = ()
        den_base = ()
        conditioned = [w for w in wholes if w.id in closure_set]
        fixed = [w for w in wholes if w.fixed]
        if wholes and (conditioned or fixed):
            active = conditioned if conditioned else fixed
            subst: set[str] = set()
            for w in active:
                subst.update(
                    p for p in w.form.args if p not in closure_set and p != exposure
                )
            substituting = dag.sort_ids(subst)
            assert substituting, "a non-degenerate relative effect has substitutes"
            kind = RELATIVE_EFFECT
            if not conditioned:
                warnings.append(
                    AnalysisWarning(
                        "FIXED_WHOLE",
                        f"the whole {fixed[0].id!r} is structurally fixed, so a total "
                        f"effect of {exposure!r} is unobtainable; estimates are "
                        f"relative to {list(substituting)}",
                    )
                )
        elif node.deterministic and len(base_components(dag, exposure)) >= 2:
            kind = COMPOSITE_SUMMARY_EFFECT
            warnings.extend(consistency_report(dag, exposure))
        else:
            kind = TOTAL_EFFECT

    for w in wholes:
        if len(w.form.args) > POSITIVITY_PART_LIMIT:
            warnings.append(
                AnalysisWarning(
                    "POSITIVITY_RISK",
                    f"the whole {w.id!r} has {len(w.form.args)} parts; adjusted "
                    f"analyses over that many components are prone to positivity "
                    f"violations and finite-sample bias",
                )
            )

    # Adjusting for an aggregate of sibling parts (rather than each part)
    # leaves residual confounding when part effects differ.
    sibling_parts = {p for w in wholes for p in w.form.args if p != exposure}
    for a in adjust_t:
        an = dag.node(a)
        if (
            an.deterministic
            and isinstance(an.form, Sum)
            and a not in {w.id for w in wholes}
            and set(an.form.args) & sibling_parts
        ):
            warnings.append(
                AnalysisWarning(
                    "AGGREGATE_ADJUSTMENT",
                    f"adjusting for {a!r}, an aggregate of sibling parts "
                    f"{sorted(set(an.form.args) & sibling_parts)}, can leave "
                    f"residual confounding when the parts' effects differ",
                )
            )

    open_paths, blocked = _path_diagnostics(dag, exposure, outcome, adjust_t)
    sets = enumerate_backdoor_sets(
        dag, exposure, outcome, max_size=max(0, len(dag.nodes) - 2)
    )
    return EstimandReport(
        kind=kind,
        exposure=exposure,
        outcome=outcome,
        adjust=adjust_t,
        substituting=substituting,
        numerator_base=num_base,
        denominator_base=den_base,
        warnings=tuple(warnings),
        open_backdoors=tuple(open_paths),
        blocked_paths=tuple(blocked),
        backdoor_sets=tuple(sets),
    )


# ---------------------------------------------------------------------------
# Confounder roles for composite exposures
# ---------------------------------------------------------------------------

NOT_A_CONFOUNDER = "NotAConfounder"
UNCOMPLICATED_CONFOUNDER = "UncomplicatedConfounder"
INCONSISTENT_CONFOUNDER = "InconsistentConfounder"
CONFOUNDER_MEDIATOR_CONFLICT = "ConfounderMediatorConflict"

CONFOUNDER = "Confounder"
MEDIATOR = "Mediator"
UNRELATED = "Unrelated"


@dataclass(frozen=True)
class ConfounderRole:
    role: str
    identifiable: bool
    per_parent: dict[str, str]
    notes: tuple[str, ...] = ()


def _reaches_avoiding(dag: Dag, src: str, dst: str, avoid: str) -> bool:
    """Directed reachability src -> dst without passing through ``avoid``."""
    if src == avoid:
        return False
    seen = {src}
    stack = [src]
    while stack:
        cur = stack.pop()
        if cur == dst:
            return True
        for c in dag.children(cur):
            if c != avoid and c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def classify_confounder(
    dag: Dag, exposure: str, outcome: str, candidate: str
) -> ConfounderRole:
    """Judge a candidate confounder against each base component of the exposure.

    The candidate confounds a component when it is an ancestor of both that
    component and the outcome (by a route that does not run through the
    component); it mediates when the component causes it and it causes the
    outcome.  Mixed roles across components make the summary effect
    unidentifiable: any adjustment for the candidate blocks part of the
    effect, and none leaves the backdoor closed.
    """
    for nid in (exposure, outcome, candidate):
        dag.node(nid)
    if candidate in (exposure, outcome):
        raise ValueError("candidate must differ from exposure and outcome")

    per_parent: dict[str, str] = {}
    for p in base_components(dag, exposure):
        if p == candidate:
            per_parent[p] = UNRELATED
            continue
        anc_of_p = p in descendants(dag, candidate)
        if anc_of_p and _reaches_avoiding(dag, candidate, outcome, avoid=p):
            per_parent[p] = CONFOUNDER
        elif candidate in descendants(dag, p) and outcome in descendants(dag, candidate):
            per_parent[p] = MEDIATOR
        else:
            per_parent[p] = UNRELATED

    roles = set(per_parent.values())
    notes: list[str] = []
    if CONFOUNDER in roles and MEDIATOR in roles:
        return ConfounderRole(
            CONFOUNDER_MEDIATOR_CONFLICT, identifiable=False, per_parent=per_parent
        )
    if CONFOUNDER not in roles:
        return ConfounderRole(NOT_A_CONFOUNDER, identifiable=True, per_parent=per_parent)

    if UNRELATED in roles:
        notes.append(
            "the candidate is unrelated to some components; its adjustment "
            "corrects confounding unevenly across the composite"
        )
        return ConfounderRole(
            INCONSISTENT_CONFOUNDER, identifiable=True, per_parent=per_parent,
            notes=tuple(notes),
        )

    coefs = []
    for p, role in per_parent.items():
        if role != CONFOUNDER:
            continue
        for e in dag.edges:
            if e.src == candidate and e.dst == p and e.coef is not None:
                coefs.append(abs(e.coef))
    if len(coefs) >= 2:
        low, high = min(coefs), max(coefs)
        if low == 0 or high / low > COEF_HETEROGENEITY_RATIO:
            notes.append(
                f"declared effects on the components differ by a factor of "
                f"{'inf' if low == 0 else round(high / low, 3)}"
            )
            return ConfounderRole(
                INCONSISTENT_CONFOUNDER,
                identifiable=True,
                per_parent=per_parent,
                notes=tuple(notes),
            )
    else:
        notes.append(
            "no (or only one) declared coefficient from the candidate to the "
            "components; effect homogeneity is assumed, not established"
        )
    return ConfounderRole(
        UNCOMPLICATED_CONFOUNDER,
        identifiable=True,
        per_parent=per_parent,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Consistency warnings for composite exposures
# ---------------------------------------------------------------------------


def consistency_report(dag: Dag, exposure: str) -> list[AnalysisWarning]:
    """Warnings about treating a composite node as a single exposure.

    Emitted only for deterministic exposures with at least two base
    components: the same exposure value can arise from many component
    combinations (a consistency risk); with declared simulation parameters,
    the composite's variance is decomposed and a dominance warning raised
    when one component's share dwarfs another's; components that crystallise
    at different times add a temporal-spread warning.
    """
    node = dag.node(exposure)
    if not node.deterministic:
        return []
    base = base_components(dag, exposure)
    if len(base) < 2:
        return []

    out = [
        AnalysisWarning(
            "CONSISTENCY_RISK",
            f"the same value of {exposure!r} can arise from many different "
            f"combinations of {list(base)}; there is no single version of "
            f"this treatment",
        )
    ]

    has_declared_params = any(dag.node(p).sim is not None for p in base)
    if has_declared_params:
        from .oracle import SimulationError, variance_decomposition

        try:
            shares = variance_decomposition(dag, None, exposure, n=20_000, seed=7)
        except SimulationError:
            shares = {}
        if shares:
            low = min(shares.values())
            high = max(shares.values())
            ratio = float("inf") if low <= 0 else high / low
            if ratio > VARIANCE_DOMINANCE_RATIO:
                ranked = sorted(shares.items(), key=lambda kv: -kv[1])
                text = ", ".join(f"{k}: {v:.2f}" for k, v in ranked)
                out.append(
                    AnalysisWarning(
                        "VARIANCE_DOMINANCE",
                        f"the summary effect of {exposure!r} is skewed towards the "
                        f"components with the largest variances (shares: {text})",
                    )
                )

    times = {dag.node(p).time for p in base if dag.node(p).time is not None}
    if len(times) >= 2:
        out.append(
            AnalysisWarning(
                "TEMPORAL_SPREAD",
                f"the components of {exposure!r} crystallise at different times "
                f"({sorted(times)}); other variables may relate to each component "
                f"differently, up to confounding one while mediating another",
            )
        )

    if isinstance(node.form, Sum) and len(node.form.args) > POSITIVITY_PART_LIMIT:
        out.append(
            AnalysisWarning(
                "POSITIVITY_RISK",
                f"{exposure!r} aggregates {len(node.form.args)} parts; analyses "
                f"conditioning on that many components risk positivity violations",
            )
        )
    return out
