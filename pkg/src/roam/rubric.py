"""Rubrics that put heterogeneous reporting measures on one grade scale.

A rubric file is comma-separated text split into bracketed sections::

    [grades]
    grade,label,value
    0,Not effective,0
    1,Slightly effective,0.25
    ...
    [thresholds]
    measure,0,1,2,3,4
    Species richness,Decreases,0,10,15,30
    [aliases]
    measure,token,grade
    *,decrease,0

``[thresholds]`` is required. Each row holds one reporting measure and one
cell per grade; the grade-0 cell is a label (or empty) because grade 0 is
what an observation gets when it meets no threshold. Thresholds must be
strictly monotone along a row: ascending rows mean "higher raw value is
better" (raw >= threshold), descending rows mean the opposite.

``[grades]`` supplies labels and, optionally, a per-grade scaled value
for uneven spacing. ``[aliases]`` maps categorical observations (such as
"decrease") to grades; ``*`` applies to every measure. Lines starting
with ``#`` are comments.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import RubricError


def _norm(text: str) -> str:
    return re.sub(r"[\s_\-]+", " ", str(text).strip().lower())


def _number(cell: str) -> float | None:
    s = cell.strip().replace("%", "").lstrip("+").strip()
    try:
        return float(s)
    except ValueError:
        return None


@dataclass(frozen=True)
class Rubric:
    grade_labels: tuple[str, ...]
    # (measure, thresholds for grades 1..G-1)
    rows: tuple[tuple[str, tuple[float, ...]], ...]
    aliases: tuple[tuple[str, str, int], ...] = ()
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        g = len(self.grade_labels)
        if g < 2:
            raise RubricError("a rubric needs at least two grades")
        if not self.rows:
            raise RubricError("a rubric needs at least one reporting measure")
        seen = set()
        for measure, th in self.rows:
            key = _norm(measure)
            if key in seen:
                raise RubricError(f"reporting measure {measure!r} listed twice")
            seen.add(key)
            if len(th) != g - 1:
                raise RubricError(f"measure {measure!r}: expected {g - 1} thresholds, got {len(th)}")
            diffs = [b - a for a, b in zip(th, th[1:])]
            if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
                raise RubricError(f"measure {measure!r}: thresholds must be strictly monotone")
        for measure, token, grade in self.aliases:
            if not 0 <= grade < g:
                raise RubricError(f"alias {token!r}: grade {grade} outside 0..{g - 1}")
            if measure != "*" and _norm(measure) not in seen:
                raise RubricError(f"alias {token!r} names unknown measure {measure!r}")
        if self.values is not None:
            v = self.values
            if len(v) != g:
                raise RubricError(f"value table has {len(v)} entries for {g} grades")
            if any(not 0 <= x <= 1 for x in v) or any(b < a for a, b in zip(v, v[1:])):
                raise RubricError("grade values must be non-decreasing and lie in [0, 1]")

    @property
    def grade_count(self) -> int:
        return len(self.grade_labels)

    @property
    def measures(self) -> list[str]:
        return [m for m, _ in self.rows]

    def thresholds(self, measure: str) -> tuple[float, ...]:
        key = _norm(measure)
        for m, th in self.rows:
            if _norm(m) == key:
                return th
        raise RubricError(f"unknown reporting measure {measure!r}")

    def grade_value(self, grade: int) -> float:
        """Scaled value of a grade: the value table if present, else even spacing."""
        if self.values is not None:
            return self.values[grade]
        return grade / (self.grade_count - 1)

    def fingerprint(self) -> str:
        return repr((self.grade_labels, self.rows, self.aliases, self.values))


def grade_with_rubric(measure: str, raw, rubric: Rubric) -> int:
    """Grade one observation recorded under ``measure``.

    Returns the highest grade whose threshold the observation meets, or 0
    when it meets none. Strings are first matched against the rubric's
    aliases, then parsed as numbers (``"+15%"`` reads as 15).
    """
    th = rubric.thresholds(measure)
    if isinstance(raw, str):
        token = _norm(raw)
        mkey = _norm(measure)
        # measure-specific aliases win over wildcard ones
        for scope in (mkey, "*"):
            for m, t, g in rubric.aliases:
                if (m if m == "*" else _norm(m)) == scope and _norm(t) == token:
                    return g
        value = _number(raw)
        if value is None:
            raise RubricError(f"measure {measure!r}: cannot grade non-numeric observation {raw!r}")
    elif isinstance(raw, (int, float)) and not isinstance(raw, bool):
        value = float(raw)
    else:
        raise RubricError(f"measure {measure!r}: cannot grade observation {raw!r}")

    descending = len(th) > 1 and th[1] < th[0]
    for grade in range(len(th), 0, -1):
        t = th[grade - 1]
        if (value <= t) if descending else (value >= t):
            return grade
    return 0


def _sections(text: str) -> dict[str, list[list[str]]]:
    out: dict[str, list[list[str]]] = {}
    current = None
    buf: list[str] = []

    def flush():
        if current is not None:
            out[current] = [r for r in csv.reader(io.StringIO("\n".join(buf))) if any(c.strip() for c in r)]

    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#") or not s:
            continue
        m = re.fullmatch(r"\[(\w+)\]", s)
        if m:
            flush()
            current, buf = m.group(1).lower(), []
            if current in out:
                raise RubricError(f"section [{current}] appears twice")
        elif current is None:
            raise RubricError(f"content before first section: {s!r}")
        else:
            buf.append(line)
    flush()
    return out


def parse_rubric(text: str) -> Rubric:
    try:
        return _parse_rubric(text)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, RubricError):
            raise
        raise RubricError(f"malformed rubric: {exc}") from exc


def _parse_rubric(text: str) -> Rubric:
    sec = _sections(text)
    unknown = set(sec) - {"grades", "thresholds", "aliases"}
    if unknown:
        raise RubricError(f"unknown rubric section(s): {sorted(unknown)}")
    if "thresholds" not in sec or len(sec["thresholds"]) < 2:
        raise RubricError("rubric needs a [thresholds] section with a header and at least one row")
    header, *body = sec["thresholds"]
    g = len(header) - 1
    labels = [h.strip() for h in header[1:]]
    values = None
    if "grades" in sec:
        ghead, *grows = sec["grades"]
        cols = [c.strip().lower() for c in ghead]
        if cols[:2] != ["grade", "label"]:
            raise RubricError("[grades] header must start with 'grade,label'")
        if len(grows) != g:
            raise RubricError(f"[grades] lists {len(grows)} grades but [thresholds] has {g}")
        labels = [r[1].strip() for r in grows]
        if [int(r[0]) for r in grows] != list(range(g)):
            raise RubricError("[grades] must list grades 0..G-1 in order")
        if "value" in cols:
            i = cols.index("value")
            values = tuple(float(r[i]) for r in grows)
    rows, aliases = [], []
    for r in body:
        if len(r) != g + 1:
            raise RubricError(f"threshold row {r!r} has {len(r) - 1} cells, expected {g}")
        measure = r[0].strip()
        if r[1].strip():
            aliases.append((measure, r[1].strip(), 0))
        th = []
        for cell in r[2:]:
            num = _number(cell)
            if num is None:
                raise RubricError(f"measure {measure!r}: threshold {cell!r} is not numeric")
            th.append(num)
        rows.append((measure, tuple(th)))
    for r in sec.get("aliases", [])[1:]:
        if len(r) != 3:
            raise RubricError(f"alias row {r!r} must have measure,token,grade")
        aliases.append((r[0].strip(), r[1].strip(), int(r[2])))
    return Rubric(tuple(labels), tuple(rows), tuple(aliases), values)


def load_rubric(path) -> Rubric:
    return parse_rubric(Path(path).read_text(encoding="utf-8"))
