"""Root/additional utility: weighted additive part times product of roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DataError, RoamError
from .records import ScaledRecord
from .schema import MetricSchema


@dataclass(frozen=True)
class RoamScore:
    id: int
    metric: float
    additive_part: float
    root_product: float


def roam_value(record: ScaledRecord, schema: MetricSchema) -> RoamScore:
    """Score one scaled record.

    The additive part ``beta0 + sum(beta_j * x_j)`` runs over additional
    criteria; it is then multiplied by every root value, so a single root
    at 0 zeroes the metric. Arithmetic is exact on the float inputs with a
    single rounding at the end, so the result does not depend on criterion
    order or platform.
    """
    if record.excluded:
        raise RoamError(f"row {record.id} is excluded ({record.exclusion_reason})")
    weights = schema.weights.as_dict()
    additive = Fraction(schema.weights.beta0)
    for c in schema.additionals:
        try:
            x = record.additional_values[c.name]
        except KeyError:
            raise DataError("additional criterion absent from record", record.id, c.name) from None
        additive += Fraction(weights[c.name]) * Fraction(x)
    # weights are accepted within a sum tolerance, which may nudge this past 1
    additive = min(additive, Fraction(1))
    product = Fraction(1)
    for c in schema.roots:
        try:
            product *= Fraction(record.root_values[c.name])
        except KeyError:
            raise DataError("root criterion absent from record", record.id, c.name) from None
    return RoamScore(record.id, float(additive * product), float(additive), float(product))


def score_dataset(records, schema: MetricSchema):
    """Score all retained records in input order.

    Returns ``(scores, excluded)`` where ``excluded`` lists ``(id, reason)``
    for rows that were not scored.
    """
    scores, excluded = [], []
    for rec in records:
        if rec.excluded:
            excluded.append((rec.id, rec.exclusion_reason))
            continue
        scores.append(roam_value(rec, schema))
    return scores, excluded


def rank(scores) -> dict[int, int]:
    """1-based rank by descending metric; ties go to the lower row id."""
    order = sorted(scores, key=lambda s: (-s.metric, s.id))
    return {s.id: i for i, s in enumerate(order, 1)}
