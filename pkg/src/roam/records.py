"""Row-level data carried between ingestion, scaling and scoring."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RawRow:
    """One input row after parsing but before scaling.

    ``values`` holds a float, a string (rubric observation) or None for a
    missing cell. ``measures`` names the reporting measure of rubric-graded
    criteria.
    """

    id: int
    cells: dict[str, str] = field(default_factory=dict)
    values: dict[str, float | str | None] = field(default_factory=dict)
    measures: dict[str, str | None] = field(default_factory=dict)
    sample_size: int = 1
    grades: dict[str, int] = field(default_factory=dict)
    excluded: bool = False
    exclusion_reason: str = ""


@dataclass(frozen=True)
class ScaledRecord:
    id: int
    root_values: dict[str, float]
    additional_values: dict[str, float]
    raw_sample_size: int
    uncertainty_grades: dict[str, int]
    scaled_sample_size: float = 1.0
    excluded: bool = False
    exclusion_reason: str = ""

    def value(self, name: str) -> float:
        if name in self.root_values:
            return self.root_values[name]
        return self.additional_values[name]


@dataclass(frozen=True)
class ColumnStats:
    count: int
    min: float
    max: float
    q1: float
    q3: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


@dataclass(frozen=True)
class DatasetStats:
    """Per-criterion statistics over retained rows, plus sample sizes."""

    criteria: dict[str, ColumnStats] = field(default_factory=dict)
    sample_size: ColumnStats | None = None
