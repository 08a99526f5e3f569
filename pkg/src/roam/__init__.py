"""Goal-centred metric construction from root and additional criteria."""

__version__ = "0.1.0"

from .errors import (ConfigError, DataError, DegenerateRangeError, RoamError,  # noqa: E402
                     RubricError, ScalingError, SchemaValidationError)
from .dataset_io import load_mapping  # noqa: E402
from .metric import RoamScore, roam_value, score_dataset  # noqa: E402
from .pipeline import RunResult, run, whatif  # noqa: E402
from .records import RawRow, ScaledRecord  # noqa: E402
from .rubric import Rubric, grade_with_rubric, load_rubric  # noqa: E402
from .scaling import (LogisticParams, budget_capped_scale, invert,  # noqa: E402
                      linear_sample_scale, logistic_sample_scale, minmax_scale,
                      scale_record)
from .schema import (CriterionSpec, MetricSchema, UncertaintyVariableSpec,  # noqa: E402
                     WeightSet, load_schema, save_schema, validate_schema)
from .uncertainty import (AcaBeta, aca_beta, confidence_interval,  # noqa: E402
                          uncertainty_weight, usability_weights)

__all__ = [
    "AcaBeta", "ConfigError", "CriterionSpec", "DataError", "DegenerateRangeError",
    "LogisticParams", "MetricSchema", "RawRow", "RoamError", "RoamScore", "Rubric",
    "RubricError", "RunResult", "ScaledRecord", "ScalingError", "SchemaValidationError",
    "UncertaintyVariableSpec", "WeightSet", "aca_beta", "budget_capped_scale",
    "confidence_interval", "grade_with_rubric", "invert", "linear_sample_scale",
    "load_mapping", "load_rubric", "load_schema", "logistic_sample_scale", "minmax_scale",
    "roam_value", "run", "save_schema", "scale_record", "score_dataset",
    "uncertainty_weight", "usability_weights", "validate_schema", "whatif",
]
