"""JSON-friendly views of verdicts and reports (lower_snake_case fields)."""

from __future__ import annotations

from typing import Any

from .classify import ConfounderRole, EstimandReport, TautologyFinding
from .dsl import ParseError
from .dsep import SeparationVerdict, WitnessPath
from .graph import Dag
from .oracle import Dataset, VerificationReport

import numpy as np


def witness_to_json(w: WitnessPath | None) -> Any:
    if w is None:
        return None
    return {
        "nodes": [
            {"node": s.node, "role": s.role, "note": s.note} for s in w.steps
        ],
        "edges": [
            {"src": src, "dst": dst, "deterministic": det, "forward": fwd}
            for (src, dst, det, fwd) in w.edges
        ],
        "pretty": w.pretty(),
    }


def verdict_to_json(v: SeparationVerdict) -> dict[str, Any]:
    return {
        "status": v.status,
        "separated": v.separated,
        "witness": witness_to_json(v.witness),
        "reason": v.reason,
    }


def findings_to_json(findings: list[TautologyFinding]) -> list[dict[str, Any]]:
    return [
        {
            "pair": list(f.pair),
            "shared_base": list(f.shared_base),
            "relation": f.relation,
            "explanation": f.explanation,
        }
        for f in findings
    ]


def estimand_to_json(r: EstimandReport) -> dict[str, Any]:
    return {
        "kind": r.kind,
        "exposure": r.exposure,
        "outcome": r.outcome,
        "adjust": list(r.adjust),
        "substituting": list(r.substituting),
        "numerator_base": list(r.numerator_base),
        "denominator_base": list(r.denominator_base),
        "warnings": [{"code": w.code, "text": w.text} for w in r.warnings],
        "open_backdoors": list(r.open_backdoors),
        "blocked_paths": list(r.blocked_paths),
        "backdoor_sets": [list(s) for s in r.backdoor_sets],
        "adjustment_sufficient": r.adjustment_sufficient,
    }


def confounder_to_json(r: ConfounderRole) -> dict[str, Any]:
    return {
        "role": r.role,
        "identifiable": r.identifiable,
        "per_parent": dict(r.per_parent),
        "notes": list(r.notes),
    }


def dag_to_json(dag: Dag) -> dict[str, Any]:
    return {
        "name": dag.name,
        "nodes": [
            {
                "id": n.id,
                "label": n.label,
                "kind": n.kind,
                "form": n.form.dsl() if n.form is not None else None,
                "time": n.time,
                "fixed": n.fixed,
            }
            for n in dag.nodes
        ],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "kind": e.kind,
                "coef": e.coef,
            }
            for e in dag.edges
        ],
    }


def parse_errors_to_json(errors: list[ParseError]) -> list[dict[str, Any]]:
    return [
        {
            "line": e.line,
            "column": e.column,
            "message": e.message,
            "snippet": e.snippet,
        }
        for e in errors
    ]


def verification_to_json(rep: VerificationReport) -> dict[str, Any]:
    return {
        "dag": rep.dag_name,
        "n": rep.n,
        "seed": rep.seed,
        "alpha": rep.alpha,
        "strict_triples": len(rep.strict_results),
        "informational_triples": len(rep.results) - len(rep.strict_results),
        "skipped_degenerate": rep.skipped_degenerate,
        "agreement_rate": rep.agreement_rate,
        "full_agreement": rep.full_agreement,
        "matrix": rep.matrix(),
        "disagreements": [
            {
                "x": d.x,
                "y": d.y,
                "given": list(d.given),
                "engine": "separated" if d.engine_separated else "connected",
                "empirical": "independent" if d.empirical_independent else "dependent",
                "r": d.r,
            }
            for d in rep.disagreements
        ],
    }


def dataset_summary_to_json(ds: Dataset) -> dict[str, Any]:
    ids = list(ds.node_ids())
    mat = np.column_stack([ds.columns[i] for i in ids])
    means = mat.mean(axis=0)
    sds = mat.std(axis=0)
    # Constant columns (e.g. a threshold that never fires) get zero correlation
    # rows rather than NaNs.
    safe = np.where(sds > 0, sds, 1.0)
    centered = (mat - means) / safe
    corr = centered.T @ centered / ds.n
    np.fill_diagonal(corr, 1.0)
    return {
        "nodes": ids,
        "n": ds.n,
        "seed": ds.seed,
        "provenance": ds.provenance,
        "means": [float(v) for v in means],
        "sds": [float(v) for v in sds],
        "correlation": [[float(v) for v in row] for row in corr],
    }
