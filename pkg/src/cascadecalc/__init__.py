"""cascadecalc: a workbench for conjunctive probability cascades.

Evaluate chains of conditional probabilities with per-factor attribution,
cross order-of-magnitude distributions into qualification grids, run compute
-economics arithmetic, convert hazard rates across horizons, pool and
extremize forecasts, and solve what-if questions against a target joint odds.
Reference models ship in the store; a CLI and a local HTTP API expose
everything to scripts and the companion UI.
"""

from .cascade import (
    NOT_APPLICABLE,
    CascadeModel,
    EvaluationReport,
    Factor,
    FactorGroup,
    FactorSource,
    apply_overrides,
    evaluate_cascade,
    validate_model,
)
from .errors import (
    CascadeError,
    InfeasibleError,
    NotFoundError,
    StorageError,
    ValidationError,
)
from .grids import (
    JointGrid,
    LogBucketDistribution,
    MagnitudeBucket,
    QualifierRule,
    at_least_mass,
    build_joint_grid,
    linked_joint_expectation,
    scenario_expectation,
    uniform_distribution,
)
from .sensitivity import (
    FactorSubset,
    TornadoEntry,
    remove_factor,
    required_value,
    scale_factors,
    solve_uniform_multiplier,
    tornado,
)
from .store import ModelDocument, ModelStore, ScenarioDocument, export_report, load_model

__version__ = "0.1.0"

__all__ = [
    "NOT_APPLICABLE",
    "CascadeModel",
    "EvaluationReport",
    "Factor",
    "FactorGroup",
    "FactorSource",
    "apply_overrides",
    "evaluate_cascade",
    "validate_model",
    "CascadeError",
    "InfeasibleError",
    "NotFoundError",
    "StorageError",
    "ValidationError",
    "JointGrid",
    "LogBucketDistribution",
    "MagnitudeBucket",
    "QualifierRule",
    "at_least_mass",
    "build_joint_grid",
    "linked_joint_expectation",
    "scenario_expectation",
    "uniform_distribution",
    "FactorSubset",
    "TornadoEntry",
    "remove_factor",
    "required_value",
    "scale_factors",
    "solve_uniform_multiplier",
    "tornado",
    "ModelDocument",
    "ModelStore",
    "ScenarioDocument",
    "export_report",
    "load_model",
    "__version__",
]
