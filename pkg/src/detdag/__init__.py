"""detdag: causal DAG analysis with first-class deterministic variables.

The package models graphs whose nodes may be fully determined by algebraic
functions of other nodes, answers deterministic-aware independence queries,
reduces determined nodes away, classifies what proposed analyses actually
estimate, and verifies all of it against a seeded simulation oracle.
"""

from .graph import (
    AggMean,
    AggPrev,
    Dag,
    DagBuilder,
    DagValidationError,
    Difference,
    EdgeDef,
    FunctionalForm,
    NodeDef,
    Power,
    Product,
    Ratio,
    Scale,
    Sum,
    Threshold,
    UnknownNodeError,
    Violation,
    ancestors,
    base_components,
    descendants,
    validate,
)
from .dsl import DslError, ParseError, parse, serialize, try_parse
from .fixture_lib import FIXTURE_NAMES, fixture_source, load_fixture
from .dsep import (
    CONNECTED,
    DEGENERATE,
    SEPARATED,
    SeparationVerdict,
    WitnessPath,
    det_closure,
    is_D_separated,
    is_d_separated,
)
from .reduction import reduce_all, transfer_and_barren
from .classify import (
    AnalysisWarning,
    ConfounderRole,
    DegenerateQueryError,
    EstimandReport,
    TautologyFinding,
    classify_confounder,
    classify_estimand,
    consistency_report,
    detect_tautologies,
    enumerate_backdoor_sets,
)
from .oracle import (
    Dataset,
    DegenerateColumnError,
    IndependenceVerdict,
    RatioDenominatorNearZeroError,
    SimParams,
    SimulationError,
    VerificationReport,
    independence_verdict,
    partial_correlation,
    simulate,
    variance_decomposition,
    verify_dseps,
)
from .render import to_dot

__version__ = "0.1.0"

__all__ = [
    "AggMean",
    "AggPrev",
    "AnalysisWarning",
    "ConfounderRole",
    "CONNECTED",
    "Dag",
    "DagBuilder",
    "DagValidationError",
    "Dataset",
    "DEGENERATE",
    "DegenerateColumnError",
    "DegenerateQueryError",
    "Difference",
    "DslError",
    "EdgeDef",
    "EstimandReport",
    "FIXTURE_NAMES",
    "FunctionalForm",
    "IndependenceVerdict",
    "NodeDef",
    "ParseError",
    "Power",
    "Product",
    "Ratio",
    "RatioDenominatorNearZeroError",
    "Scale",
    "SEPARATED",
    "SeparationVerdict",
    "SimParams",
    "SimulationError",
    "Sum",
    "TautologyFinding",
    "Threshold",
    "UnknownNodeError",
    "VerificationReport",
    "Violation",
    "WitnessPath",
    "ancestors",
    "base_components",
    "classify_confounder",
    "classify_estimand",
    "consistency_report",
    "descendants",
    "det_closure",
    "detect_tautologies",
    "enumerate_backdoor_sets",
    "fixture_source",
    "independence_verdict",
    "is_D_separated",
    "is_d_separated",
    "load_fixture",
    "parse",
    "partial_correlation",
    "reduce_all",
    "serialize",
    "simulate",
    "to_dot",
    "transfer_and_barren",
    "try_parse",
    "validate",
    "variance_decomposition",
    "verify_dseps",
]
