"""Homogenisation and scaling of raw criterion data into [0, 1].

Scaling is two-pass: :func:`compute_stats` gathers per-criterion ranges
over the retained rows, then :func:`scale_record` maps each row using
those fixed ranges. Every value that leaves this module lies in [0, 1]
with 1 meaning "implies the maximal metric value".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateRangeError, RubricError, ScalingError
from .records import ColumnStats, DatasetStats, RawRow, ScaledRecord
from .rubric import grade_with_rubric
from .schema import (CriterionSpec, MetricSchema, MissingPolicy, Role,
                     SampleSizeScaling, ScalingKind)


def minmax_scale(value: float, min: float, max: float) -> float:
    """Equal-spaced scaling: ``min`` maps to 0 and ``max`` to 1."""
    if min > max:
        raise ScalingError(f"min {min!r} exceeds max {max!r}")
    if min == max:
        raise DegenerateRangeError(f"min == max == {min!r}; range carries no information")
    if not min <= value <= max:
        raise ScalingError(f"value {value!r} outside [{min!r}, {max!r}]")
    return (value - min) / (max - min)


def invert(scaled: float) -> float:
    """Flip a lower-is-better scaled value so that 1 is best."""
    if not 0.0 <= scaled <= 1.0:
        raise ScalingError(f"cannot invert {scaled!r}: outside [0, 1]")
    return 1.0 - scaled


def budget_capped_scale(cost: float, min: float, budget: float) -> float:
    """Inverted min-max with the budget as the maximum.

    Costs at or above the budget give exactly 0; negative results are
    clamped to 0 rather than propagated.
    """
    if budget <= min:
        raise ScalingError(f"budget {budget!r} must exceed min {min!r}")
    if cost < min:
        raise ScalingError(f"cost {cost!r} below declared minimum {min!r}")
    return max(0.0, 1.0 - (cost - min) / (budget - min))


@dataclass(frozen=True)
class LogisticParams:
    cap: int
    x_max: float
    x0: float
    k: float

    @classmethod
    def from_cap(cls, cap: int) -> "LogisticParams":
        if cap < 10:
            # log10(x_max) <= 0 below this, so k is undefined or explodes
            raise ScalingError(f"logistic cap must be >= 10, got {cap!r}")
        x_max = math.log10(cap)
        return cls(cap, x_max, x_max / 2, 10 ** -(math.log10(x_max) - 1))


def logistic_sample_scale(sample_size: float, params: LogisticParams) -> float:
    """Logistic curve over log10 sample size; 1 at and beyond the cap."""
    if sample_size < 1:
        raise ScalingError(f"sample size must be >= 1, got {sample_size!r}")
    if sample_size >= params.cap:
        return 1.0
    x = math.log10(sample_size)
    return 1.0 / (1.0 + math.exp(-params.k * (x - params.x0)))


def linear_sample_scale(sample_size: float, cap: float) -> float:
    if cap < 1:
        raise ScalingError(f"linear cap must be >= 1, got {cap!r}")
    if sample_size <= 0:
        raise ScalingError(f"sample size must be positive, got {sample_size!r}")
    return min(1.0, sample_size / cap)


# ---------------------------------------------------------------- stats pass

def _column_stats(values) -> ColumnStats | None:
    if not values:
        return None
    arr = np.asarray(values, dtype=float)
    q1, q3 = np.percentile(arr, [25, 75])
    return ColumnStats(len(arr), float(arr.min()), float(arr.max()), float(q1), float(q3))


def removal_reason(row: RawRow, schema: MetricSchema) -> str | None:
    for u in schema.uncertainty_vars:
        g = row.grades.get(u.name)
        if g is not None and g in u.removal_grades:
            return f"{u.name} grade {g} is a removal grade"
    return None


def compute_stats(rows, schema: MetricSchema) -> DatasetStats:
    """Ranges of numeric criterion values and sample sizes over retained rows."""
    kept = [r for r in rows if not r.excluded and removal_reason(r, schema) is None]
    crit = {}
    for c in schema.criteria:
        vals = [r.values.get(c.name) for r in kept]
        nums = [v for v in vals if isinstance(v, (int, float)) and not isinstance(v, bool)]
        st = _column_stats(nums)
        if st is not None:
            crit[c.name] = st
    return DatasetStats(crit, _column_stats([r.sample_size for r in kept]))


# -------------------------------------------------------------- scaling pass

def _range(c: CriterionSpec, stats: DatasetStats, key: str):
    explicit = c.scaling.get(key)
    if explicit is not None:
        return explicit
    st = stats.criteria.get(c.name)
    if st is None:
        raise ScalingError(f"criterion {c.name!r}: no data to derive {key} from")
    return getattr(st, key)


def scale_value(c: CriterionSpec, value, measure, stats: DatasetStats) -> float:
    """Scale one present (non-missing) criterion value."""
    s = c.scaling
    kind = s.kind
    if kind is ScalingKind.CONSTANT:
        return float(s.get("value", 1.0))

    if kind is ScalingKind.GRADE_LINEAR:
        if s.rubric is not None:
            if not measure:
                raise ScalingError(f"criterion {c.name!r}: rubric grading needs a reporting measure")
            grade = grade_with_rubric(measure, value, s.rubric)
            scaled = s.rubric.grade_value(grade)
        else:
            g_count = s.get("grade_count")
            if not isinstance(value, (int, float)) or value != int(value) or not 0 <= value < g_count:
                raise ScalingError(f"criterion {c.name!r}: grade {value!r} outside 0..{g_count - 1}")
            scaled = minmax_scale(int(value), 0, g_count - 1)
        return invert(scaled) if c.inverted else scaled

    if isinstance(value, str):
        raise ScalingError(f"criterion {c.name!r}: expected a number, got {value!r}")

    if kind in (ScalingKind.MINMAX, ScalingKind.MINMAX_INVERTED):
        lo, hi = _range(c, stats, "min"), _range(c, stats, "max")
        if lo == hi and s.get("on_degenerate", "error") == "constant":
            return float(s.get("degenerate_value", 1.0))
        try:
            scaled = minmax_scale(value, lo, hi)
        except DegenerateRangeError as exc:
            raise DegenerateRangeError(
                f"criterion {c.name!r}: {exc}; set on_degenerate = constant to accept") from None
        if kind is ScalingKind.MINMAX_INVERTED or c.inverted:
            scaled = invert(scaled)
        return scaled

    if kind is ScalingKind.BUDGET_CAPPED:
        return budget_capped_scale(value, _range(c, stats, "min"), s.get("budget"))

    cap = s.get("cap")
    if cap is None:
        cap = _range(c, stats, "max")
    if kind is ScalingKind.LINEAR_CAPPED:
        scaled = linear_sample_scale(value, cap)
    else:
        scaled = logistic_sample_scale(value, LogisticParams.from_cap(int(cap)))
    return invert(scaled) if c.inverted else scaled


def scale_sample_size(n: int, schema: MetricSchema, stats: DatasetStats) -> float:
    ss = schema.sample_size
    if ss.kind is SampleSizeScaling.CONSTANT:
        return float(ss.value)
    cap = ss.cap
    if cap is None:
        if stats.sample_size is None:
            raise ScalingError("no retained rows to derive the sample-size cap from")
        cap = int(stats.sample_size.max)
    if ss.kind is SampleSizeScaling.LINEAR_CAPPED:
        return linear_sample_scale(n, cap)
    return logistic_sample_scale(n, LogisticParams.from_cap(cap))


def _excluded(raw: RawRow, reason: str) -> ScaledRecord:
    return ScaledRecord(raw.id, {}, {}, raw.sample_size, dict(raw.grades),
                        excluded=True, exclusion_reason=reason)


def scale_record(raw: RawRow, schema: MetricSchema, stats: DatasetStats) -> ScaledRecord:
    """Scale every criterion of one row; resolves missing values and removals."""
    if raw.excluded:
        return _excluded(raw, raw.exclusion_reason)
    reason = removal_reason(raw, schema)
    if reason:
        return _excluded(raw, reason)

    roots, extra = {}, {}
    for c in schema.criteria:
        value = raw.values.get(c.name)
        if value is None:
            if c.missing_policy is MissingPolicy.WORST_CASE:
                scaled = 0.0
            elif c.missing_policy is MissingPolicy.DROP_ROW:
                return _excluded(raw, f"{c.name} missing")
            else:
                raise DataError("value missing and policy is 'error'", raw.id, c.name)
        else:
            try:
                scaled = scale_value(c, value, raw.measures.get(c.name), stats)
            except (ScalingError, RubricError) as exc:
                raise DataError(str(exc), raw.id, c.name) from None
        (roots if c.role is Role.ROOT else extra)[c.name] = scaled

    try:
        s_scaled = scale_sample_size(raw.sample_size, schema, stats)
    except ScalingError as exc:
        raise DataError(str(exc), raw.id, "sample_size") from None
    return ScaledRecord(raw.id, roots, extra, raw.sample_size, dict(raw.grades), s_scaled)
