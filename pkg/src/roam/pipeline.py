"""End-to-end scoring: ingest, scale, score, attach uncertainty."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset_io import ColumnMapping, IngestResult, ScoredReportRow, ingest
from .metric import RoamScore, rank, roam_value
from .records import DatasetStats, ScaledRecord
from .scaling import scale_record
from .schema import MetricSchema, SampleSizeScaling, WeightSet, linear_range_warning, validate_schema
from .errors import SchemaValidationError
from .uncertainty import aca_beta, confidence_interval, uncertainty_weight


@dataclass
class RunResult:
    rows: list[ScoredReportRow]
    records: list[ScaledRecord]
    ingest: IngestResult
    warnings: list[str] = field(default_factory=list)

    @property
    def stats(self) -> DatasetStats:
        return self.ingest.stats


def data_warnings(schema: MetricSchema, stats: DatasetStats) -> list[str]:
    out = []
    if schema.sample_size.kind is SampleSizeScaling.LINEAR_CAPPED and stats.sample_size:
        w = linear_range_warning(stats.sample_size.min, stats.sample_size.max)
        if w:
            out.append(w)
    return out


def score_record(record: ScaledRecord, schema: MetricSchema, cells=None) -> ScoredReportRow:
    cells = cells or {}
    if record.excluded:
        return ScoredReportRow(record.id, cells, excluded=True,
                               exclusion_reason=record.exclusion_reason)
    score = roam_value(record, schema)
    uw = uncertainty_weight(record, schema)
    beta = aca_beta(score.metric, record.raw_sample_size, uw.variable_weights, schema.epsilon)
    ci = confidence_interval(beta, schema.confidence_level, schema.interval_method)
    scaled = {c.name: record.value(c.name) for c in schema.criteria}
    return ScoredReportRow(record.id, cells, scaled, score.metric, uw.combined,
                           beta.sd, ci.lower, ci.upper)


def run(schema: MetricSchema, data_path, mapping: ColumnMapping) -> RunResult:
    ing = ingest(data_path, mapping, schema)
    records = [scale_record(r, schema, ing.stats) for r in ing.rows]
    rows = [score_record(rec, schema, raw.cells) for rec, raw in zip(records, ing.rows)]
    return RunResult(rows, records, ing, data_warnings(schema, ing.stats))


def whatif(schema: MetricSchema, records, weight_sets: dict[str, WeightSet]):
    """Re-score retained records under alternative weights.

    Every set is validated against the schema first. Returns
    ``(columns, table_rows)`` with one metric and rank column per set
    (baseline first) and a rank-change column for each alternative;
    positive change means the row moved up.
    """
    sets = {"baseline": schema.weights, **weight_sets}
    scored: dict[str, dict[int, RoamScore]] = {}
    ranks = {}
    for name, ws in sets.items():
        alt = schema.with_weights(ws)
        report = validate_schema(alt)
        if not report.ok:
            raise SchemaValidationError(report)
        s = [roam_value(r, alt) for r in records if not r.excluded]
        scored[name] = {x.id: x for x in s}
        ranks[name] = rank(s)
    cols = ["id"]
    for name in sets:
        cols += [f"metric_{name}", f"rank_{name}"]
        if name != "baseline":
            cols.append(f"rank_change_{name}")
    cols.append("exclusion_reason")
    out = []
    for r in records:
        row = {"id": r.id}
        for name in sets:
            if r.excluded:
                row[f"metric_{name}"] = row[f"rank_{name}"] = None
                if name != "baseline":
                    row[f"rank_change_{name}"] = None
                continue
            row[f"metric_{name}"] = scored[name][r.id].metric
            row[f"rank_{name}"] = ranks[name][r.id]
            if name != "baseline":
                row[f"rank_change_{name}"] = ranks["baseline"][r.id] - ranks[name][r.id]
        row["exclusion_reason"] = r.exclusion_reason
        out.append(row)
    return cols, out
