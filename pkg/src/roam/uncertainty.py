"""Uncertainty weights and ACA-beta standard errors.

Each scored row is treated as the mean of a beta distribution built from
aggregate data: location is the metric value, shape is the effective
sample size (raw sample size down-weighted by the uncertainty variables).
The standard deviation of that distribution serves as the row's standard
error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from scipy import stats as _stats

from .errors import DataError, RoamError
from .records import ScaledRecord
from .schema import MetricSchema, UncertaintyVariableSpec


@dataclass(frozen=True)
class UncertaintyWeights:
    id: int
    scaled_sample_size: float
    variable_weights: dict[str, float]
    combined: float


@dataclass(frozen=True)
class AcaBeta:
    mu: float
    nu: float
    a: float
    b: float
    sd: float


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float


def usability_weights(grade_count: int, minimum_threshold: float) -> dict[int, float]:
    """Evenly spaced weights from 1 (grade 0) down to ``minimum_threshold``."""
    if grade_count < 2:
        raise ValueError("grade_count must be >= 2")
    if not 0 < minimum_threshold <= 1:
        raise ValueError("minimum_threshold must lie in (0, 1]")
    step = (1.0 - minimum_threshold) / (grade_count - 1)
    table = {g: 1.0 - g * step for g in range(grade_count)}
    # pin the worst grade to the threshold exactly
    table[grade_count - 1] = float(minimum_threshold)
    return table


def grade_weight_table(var: UncertaintyVariableSpec) -> dict[int, float]:
    """Weights for every retained grade of ``var``; removal grades are absent."""
    kept = var.retained_grades
    table = usability_weights(len(kept), var.minimum_threshold)
    return {g: table[i] for i, g in enumerate(kept)}


def variable_weights(record: ScaledRecord, schema: MetricSchema) -> dict[str, float]:
    out = {}
    for var in schema.uncertainty_vars:
        grade = record.uncertainty_grades.get(var.name)
        if grade is None:
            raise DataError("uncertainty grade missing", record.id, var.name)
        table = grade_weight_table(var)
        if grade not in table:
            raise DataError(f"grade {grade!r} has no weight (removed or out of range)",
                            record.id, var.name)
        out[var.name] = table[grade]
    return out


def uncertainty_weight(record: ScaledRecord, schema: MetricSchema) -> UncertaintyWeights:
    """Scaled sample size multiplied by every uncertainty-variable weight."""
    if record.excluded:
        raise RoamError(f"row {record.id} is excluded ({record.exclusion_reason})")
    weights = variable_weights(record, schema)
    combined = record.scaled_sample_size
    for w in weights.values():
        combined *= w
    return UncertaintyWeights(record.id, record.scaled_sample_size, weights, combined)


def aca_beta(metric: float, raw_sample_size: float, variable_weights, epsilon: float = 1e-3) -> AcaBeta:
    """Build the ACA beta distribution for one metric value.

    Exact 0 and 1 are nudged to ``epsilon`` and ``1 - epsilon`` so the
    error never vanishes at the bounds. The shape uses the raw sample
    size, not the capped/scaled one.
    """
    if not 0.0 <= metric <= 1.0:
        raise ValueError(f"metric {metric!r} outside [0, 1]")
    if raw_sample_size < 1:
        raise ValueError(f"raw sample size must be >= 1, got {raw_sample_size!r}")
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5), got {epsilon!r}")
    mu = metric
    if mu == 0.0:
        mu = epsilon
    elif mu == 1.0:
        mu = 1.0 - epsilon
    nu = float(raw_sample_size)
    ws = variable_weights.values() if hasattr(variable_weights, "values") else variable_weights
    for w in ws:
        nu *= w
    a = mu * nu
    b = (1.0 - mu) * nu
    sd = math.sqrt((a * b) / ((a + b) ** 2 * (a + b + 1)))
    return AcaBeta(mu, nu, a, b, sd)


def z_value(level: float) -> float:
    """Two-sided standard-normal critical value for ``level``."""
    if not 0 < level < 1:
        raise ValueError(f"confidence level must lie in (0, 1), got {level!r}")
    return NormalDist().inv_cdf(0.5 + level / 2)


def confidence_interval(beta: AcaBeta, level: float = 0.95, method: str = "normal") -> ConfidenceInterval:
    """Interval around the ACA mean, clamped to [0, 1].

    ``method="normal"`` is mean +/- z*sd; ``"beta"`` uses the exact
    quantiles of the ACA beta distribution instead.
    """
    if method == "normal":
        z = z_value(level)
        return ConfidenceInterval(max(0.0, beta.mu - z * beta.sd),
                                  min(1.0, beta.mu + z * beta.sd), level)
    if method == "beta":
        if not 0 < level < 1:
            raise ValueError(f"confidence level must lie in (0, 1), got {level!r}")
        tail = (1 - level) / 2
        lo, hi = _stats.beta.ppf([tail, 1 - tail], beta.a, beta.b)
        return ConfidenceInterval(float(lo), float(hi), level)
    raise ValueError(f"unknown interval method {method!r}")
