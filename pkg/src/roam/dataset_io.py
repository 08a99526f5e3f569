"""Reading raw tables and writing scored reports.

Input is UTF-8 comma-separated text with a header row; an empty cell or a
literal ``NA`` marks a missing value. Reports come in two flavours:

* ``table``: comma-separated, reals at 6 significant digits, preceded by
  ``#`` metadata lines;
* ``records``: one JSON object per line, reals at full round-trip
  precision, the first two lines holding metadata.

Both formats put the generation timestamp on a line of its own so that
repeated runs differ only there. Set ``SOURCE_DATE_EPOCH`` to pin it.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import ConfigError, DataError
from .records import DatasetStats, RawRow
from .scaling import compute_stats, removal_reason
from .schema import MetricSchema, MissingPolicy, ScalingKind, schema_hash

MISSING_MARKERS = {"", "NA"}
# mapping value meaning "no column: every row is missing this criterion"
ABSENT = "!missing"

TAIL_COLUMNS = ["metric", "uncertainty_weight", "sd", "ci_lower", "ci_upper",
                "excluded", "exclusion_reason"]


@dataclass(frozen=True)
class ColumnMapping:
    criteria: dict[str, str]
    sample_size: str
    measures: dict[str, str] = field(default_factory=dict)
    uncertainty: dict[str, str] = field(default_factory=dict)

    def check(self, schema: MetricSchema) -> None:
        for c in schema.criteria:
            if c.name not in self.criteria and c.scaling.kind is not ScalingKind.CONSTANT:
                raise ConfigError(f"mapping: criterion {c.name!r} has no column")
            if c.scaling.rubric is not None and c.name not in self.measures:
                raise ConfigError(f"mapping: rubric criterion {c.name!r} needs a [measures] column")
        for u in schema.uncertainty_vars:
            if u.name not in self.uncertainty:
                raise ConfigError(f"mapping: uncertainty variable {u.name!r} has no column")


def load_mapping(path) -> ColumnMapping:
    """Read an INI mapping with ``[columns]``, ``[measures]`` and ``[uncertainty]``.

    ``[columns]`` maps each criterion (and the key ``sample_size``) to a
    header name.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from exc
    if not cp.has_section("columns"):
        raise ConfigError(f"{path}: missing [columns] section")
    cols = dict(cp.items("columns"))
    if "sample_size" not in cols:
        raise ConfigError(f"{path}: [columns] needs a sample_size entry")
    sample = cols.pop("sample_size")
    get = lambda s: dict(cp.items(s)) if cp.has_section(s) else {}  # noqa: E731
    return ColumnMapping(cols, sample, get("measures"), get("uncertainty"))


@dataclass
class IngestResult:
    rows: list[RawRow]
    stats: DatasetStats
    columns: list[str]
    diagnostics: list[str] = field(default_factory=list)


def _cell(row: dict, col: str | None):
    if col is None or col == ABSENT:
        return None
    v = (row.get(col) or "").strip()
    return None if v in MISSING_MARKERS else v


def _positive_int(text, row_id, fld) -> int:
    if text is None:
        raise DataError("value is required", row_id, fld)
    try:
        f = float(text)
    except ValueError:
        raise DataError(f"not a number: {text!r}", row_id, fld) from None
    if f != int(f) or f < 1:
        raise DataError(f"sample size must be an integer >= 1, got {text!r}", row_id, fld)
    return int(f)


def ingest(path, mapping: ColumnMapping, schema: MetricSchema) -> IngestResult:
    """Parse a CSV into raw rows (ids are 1-based input order) plus stats."""
    mapping.check(schema)
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise DataError(f"{path}: no header row")
        needed = [*mapping.criteria.values(), *mapping.measures.values(),
                  *mapping.uncertainty.values(), mapping.sample_size]
        absent = [c for c in needed if c != ABSENT and c not in header]
        if absent:
            raise DataError(f"{path}: mapped column(s) not in header: {', '.join(absent)}")
        rows, diags = [], []
        for rid, rec in enumerate(reader, 1):
            rows.append(_parse_row(rid, rec, header, mapping, schema, diags))
    for r in rows:
        if not r.excluded:
            reason = removal_reason(r, schema)
            if reason:
                r.excluded, r.exclusion_reason = True, reason
    return IngestResult(rows, compute_stats(rows, schema), list(header), diags)


def _parse_row(rid, rec, header, mapping, schema, diags) -> RawRow:
    row = RawRow(rid, {h: (rec.get(h) or "") for h in header})
    row.sample_size = _positive_int(_cell(rec, mapping.sample_size), rid, mapping.sample_size)
    for u in schema.uncertainty_vars:
        col = mapping.uncertainty[u.name]
        text = _cell(rec, col)
        if text is None:
            raise DataError("uncertainty grade is required", rid, col)
        try:
            g = int(text)
        except ValueError:
            raise DataError(f"grade must be an integer, got {text!r}", rid, col) from None
        if not 0 <= g < u.grade_count:
            raise DataError(f"grade {g} outside 0..{u.grade_count - 1}", rid, col)
        row.grades[u.name] = g
    for c in schema.criteria:
        if c.scaling.kind is ScalingKind.CONSTANT and c.name not in mapping.criteria:
            row.values[c.name] = 1.0
            continue
        col = mapping.criteria[c.name]
        text = _cell(rec, col)
        if c.scaling.rubric is not None:
            row.measures[c.name] = _cell(rec, mapping.measures[c.name])
            row.values[c.name] = text
            continue
        if text is None:
            row.values[c.name] = None
            continue
        try:
            row.values[c.name] = float(text)
        except ValueError:
            msg = f"unparseable number {text!r}"
            if c.missing_policy is MissingPolicy.ERROR:
                raise DataError(msg, rid, col) from None
            if c.missing_policy is MissingPolicy.DROP_ROW:
                row.excluded, row.exclusion_reason = True, f"{c.name} unparseable"
                diags.append(f"row {rid}, {col}: {msg}; row dropped")
            else:
                row.values[c.name] = None
                diags.append(f"row {rid}, {col}: {msg}; treated as missing (worst case)")
    return row


# ----------------------------------------------------------------- reports

@dataclass
class ScoredReportRow:
    id: int
    cells: dict[str, str]
    scaled: dict[str, float] = field(default_factory=dict)
    metric: float | None = None
    uncertainty_weight: float | None = None
    sd: float | None = None
    ci_lower: float | None = None
    ci_upper: float | None = None
    excluded: bool = False
    exclusion_reason: str = ""


def report_columns(schema: MetricSchema, echo: list[str]) -> list[str]:
    return (["id", *echo, *(f"scaled_{c.name}" for c in schema.criteria), *TAIL_COLUMNS])


def _values(row: ScoredReportRow, schema, echo) -> list:
    return [row.id, *(row.cells.get(h, "") for h in echo),
            *(row.scaled.get(c.name) for c in schema.criteria),
            row.metric, row.uncertainty_weight, row.sd, row.ci_lower, row.ci_upper,
            row.excluded, row.exclusion_reason]


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (datetime.fromtimestamp(int(epoch), timezone.utc) if epoch
            else datetime.now(timezone.utc))
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def run_metadata(schema: MetricSchema) -> dict:
    return {"toolkit": "roam", "version": __version__, "schema_sha256": schema_hash(schema),
            "confidence_level": schema.confidence_level, "epsilon": schema.epsilon,
            "interval_method": schema.interval_method}


def _table_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def render_report(rows, schema: MetricSchema, fmt: str = "table", echo=None) -> str:
    if echo is None:
        echo = list(rows[0].cells) if rows else []
    cols = report_columns(schema, echo)
    meta = run_metadata(schema)
    buf = io.StringIO()
    if fmt == "table":
        for k, v in meta.items():
            buf.write(f"# {k}: {v}\n")
        buf.write(f"# generated: {timestamp()}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_table_cell(v) for v in _values(r, schema, echo)])
    elif fmt == "records":
        buf.write(json.dumps({"_meta": {**meta, "columns": cols}}) + "\n")
        buf.write(json.dumps({"_generated": timestamp()}) + "\n")
        for r in rows:
            buf.write(json.dumps(dict(zip(cols, _values(r, schema, echo)))) + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return buf.getvalue()


def emit_report(rows, schema: MetricSchema, destination, fmt: str = "table", echo=None) -> None:
    """Write a report; identical inputs give identical bytes bar the timestamp line."""
    text = render_report(rows, schema, fmt, echo)
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_records(path) -> tuple[dict, list[dict]]:
    """Load a records-format report as ``(metadata, rows)``."""
    meta, rows = {}, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            if "_meta" in obj:
                meta.update(obj["_meta"])
            elif "_generated" in obj:
                meta["generated"] = obj["_generated"]
            else:
                rows.append(obj)
    return meta, rows


def read_table(path) -> tuple[dict, list[dict]]:
    """Load a table-format report; values stay as strings."""
    meta, body = {}, []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("# "):
                k, _, v = line[2:].rstrip("\n").partition(": ")
                meta[k] = v
            else:
                body.append(line)
    return meta, list(csv.DictReader(body))


def is_timestamp_line(line: str) -> bool:
    return line.startswith("# generated:") or line.startswith('{"_generated"')
