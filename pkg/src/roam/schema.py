"""Metric schema: criteria, weights, uncertainty variables and run options.

Schemas are plain frozen dataclasses. Constructing one never raises on a
broken invariant; :func:`validate_schema` inspects an arbitrary (possibly
ill-formed) schema and reports every problem it finds, and
:func:`load_schema` refuses to hand back anything that fails validation.

The on-disk format is an INI-style file with four sections::

    [criteria]
    effectiveness.role = root
    effectiveness.scaling = grade_linear
    effectiveness.rubric = rubric.csv
    cost.role = additional
    cost.direction = lower
    cost.scaling = budget_capped
    cost.budget = 5000

    [weights]
    beta0 = 0.5
    cost = 0.5

    [uncertainty]
    usability.grade_count = 4
    usability.minimum_threshold = 0.6
    usability.removal_grades = 3

    [options]
    sample_size_scaling = linear_capped
    sample_size_cap = 200

See ``docs/config.md`` for every key.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError, RubricError, SchemaValidationError
from .rubric import Rubric, load_rubric

FORMAT_VERSION = 1

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Role(str, Enum):
    ROOT = "root"
    ADDITIONAL = "additional"


class Direction(str, Enum):
    HIGHER = "higher"
    LOWER = "lower"


class MissingPolicy(str, Enum):
    WORST_CASE = "worst_case"
    DROP_ROW = "drop_row"
    ERROR = "error"


class ScalingKind(str, Enum):
    MINMAX = "minmax"
    MINMAX_INVERTED = "minmax_inverted"
    BUDGET_CAPPED = "budget_capped"
    GRADE_LINEAR = "grade_linear"
    CONSTANT = "constant"
    LINEAR_CAPPED = "linear_capped"
    LOGISTIC_CAPPED = "logistic_capped"


class SampleSizeScaling(str, Enum):
    CONSTANT = "constant"
    LINEAR_CAPPED = "linear_capped"
    LOGISTIC_CAPPED = "logistic_capped"


# kinds whose formula already encodes "lower raw value is better"
_INHERENTLY_INVERTED = {ScalingKind.MINMAX_INVERTED, ScalingKind.BUDGET_CAPPED}

_SCALING_PARAMS = {
    ScalingKind.MINMAX: {"min", "max", "on_degenerate", "degenerate_value"},
    ScalingKind.MINMAX_INVERTED: {"min", "max", "on_degenerate", "degenerate_value"},
    ScalingKind.BUDGET_CAPPED: {"min", "budget"},
    ScalingKind.GRADE_LINEAR: {"grade_count", "rubric"},
    ScalingKind.CONSTANT: {"value"},
    ScalingKind.LINEAR_CAPPED: {"cap"},
    ScalingKind.LOGISTIC_CAPPED: {"cap"},
}
_INT_PARAMS = {"grade_count", "cap"}
_STR_PARAMS = {"rubric", "on_degenerate"}


@dataclass(frozen=True)
class ScalingMethod:
    kind: ScalingKind = ScalingKind.MINMAX
    params: Mapping[str, Any] = field(default_factory=dict)
    rubric: Rubric | None = None

    def get(self, key, default=None):
        return self.params.get(key, default)


@dataclass(frozen=True)
class CriterionSpec:
    name: str
    role: Role
    direction: Direction = Direction.HIGHER
    scaling: ScalingMethod = field(default_factory=ScalingMethod)
    missing_policy: MissingPolicy = MissingPolicy.WORST_CASE

    @property
    def inverted(self) -> bool:
        """True when the scaled value must be taken away from 1."""
        return (self.direction is Direction.LOWER
                and self.scaling.kind not in _INHERENTLY_INVERTED)


@dataclass(frozen=True)
class WeightSet:
    beta0: float
    additional_weights: tuple[tuple[str, float], ...] = ()
    sum_tolerance: float = 1e-9

    @classmethod
    def from_mapping(cls, beta0, weights: Mapping[str, float], sum_tolerance=1e-9):
        return cls(beta0, tuple(weights.items()), sum_tolerance)

    def as_dict(self) -> dict[str, float]:
        return dict(self.additional_weights)

    def total(self) -> float:
        return math.fsum([self.beta0, *(b for _, b in self.additional_weights)])

    def problems(self) -> list[str]:
        """Constraint violations: every beta > 0 and all betas sum to 1."""
        errors = []
        values = [("beta0", self.beta0), *self.additional_weights]
        for name, beta in values:
            if not _is_real(beta):
                errors.append(f"weight {name!r} is not a real number: {beta!r}")
            elif not beta > 0:
                errors.append(f"weight {name!r} must be strictly positive, got {beta!r}")
        if errors:
            return errors
        if not _is_real(self.sum_tolerance) or self.sum_tolerance < 0:
            return [f"sum_tolerance must be a non-negative real, got {self.sum_tolerance!r}"]
        total = self.total()
        if abs(total - 1.0) > self.sum_tolerance:
            errors.append(
                f"weight sum constraint violated: beta0 + sum of additional "
                f"weights must equal 1 (got {total!r}, tolerance {self.sum_tolerance!r})")
        return errors


@dataclass(frozen=True)
class UncertaintyVariableSpec:
    name: str
    grade_count: int
    minimum_threshold: float
    removal_grades: frozenset[int] = frozenset()

    @property
    def retained_grades(self) -> list[int]:
        return [g for g in range(self.grade_count) if g not in self.removal_grades]


@dataclass(frozen=True)
class SampleSizeSpec:
    kind: SampleSizeScaling = SampleSizeScaling.CONSTANT
    # None means "use the largest retained sample size in the data"
    cap: int | None = None
    value: float = 1.0
    expected_range: tuple[float, float] | None = None


@dataclass(frozen=True)
class MetricSchema:
    criteria: tuple[CriterionSpec, ...]
    weights: WeightSet
    uncertainty_vars: tuple[UncertaintyVariableSpec, ...] = ()
    sample_size: SampleSizeSpec = field(default_factory=SampleSizeSpec)
    epsilon: float = 1e-3
    confidence_level: float = 0.95
    interval_method: str = "normal"

    @property
    def roots(self) -> list[CriterionSpec]:
        return [c for c in self.criteria if c.role is Role.ROOT]

    @property
    def additionals(self) -> list[CriterionSpec]:
        return [c for c in self.criteria if c.role is Role.ADDITIONAL]

    def criterion(self, name: str) -> CriterionSpec:
        for c in self.criteria:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_weights(self, weights: WeightSet) -> "MetricSchema":
        return dataclasses.replace(self, weights=weights)

    def with_options(self, **changes) -> "MetricSchema":
        return dataclasses.replace(self, **changes)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def render(self) -> str:
        lines = [f"error: {e}" for e in self.errors]
        lines += [f"warning: {w}" for w in self.warnings]
        lines.append("schema is valid" if self.ok else f"{len(self.errors)} error(s)")
        return "\n".join(lines)


def _is_real(x) -> bool:
    return (isinstance(x, (int, float)) and not isinstance(x, bool)
            and math.isfinite(x))


# ---------------------------------------------------------------- validation

def linear_range_warning(lo, hi) -> str | None:
    if lo is not None and hi is not None and lo > 0 and hi / lo > 10:
        return (f"linear sample-size scaling chosen but max/min sample size "
                f"exceeds 10 ({hi:g}/{lo:g}); a linear scale is only adequate "
                f"within a multiple of ten, consider logistic_capped")
    return None


def _check_scaling(c: CriterionSpec, errors: list[str]):
    s = c.scaling
    kind = s.kind
    if not isinstance(kind, ScalingKind):
        errors.append(f"criterion {c.name!r}: unknown scaling kind {kind!r}")
        return
    unknown = set(s.params) - _SCALING_PARAMS[kind]
    for key in sorted(unknown):
        errors.append(f"criterion {c.name!r}: parameter {key!r} does not apply to {kind.value}")
    p = s.params
    if kind in _INHERENTLY_INVERTED and c.direction is not Direction.LOWER:
        errors.append(f"criterion {c.name!r}: {kind.value} scaling requires direction = lower")
    if kind in (ScalingKind.MINMAX, ScalingKind.MINMAX_INVERTED):
        lo, hi = p.get("min"), p.get("max")
        if lo is not None and hi is not None and _is_real(lo) and _is_real(hi):
            if lo > hi:
                errors.append(f"criterion {c.name!r}: min {lo!r} > max {hi!r}")
            elif lo == hi and p.get("on_degenerate", "error") == "error":
                errors.append(f"criterion {c.name!r}: min == max ({lo!r}); set on_degenerate = constant")
        mode = p.get("on_degenerate", "error")
        if mode not in ("error", "constant"):
            errors.append(f"criterion {c.name!r}: on_degenerate must be 'error' or 'constant'")
        dv = p.get("degenerate_value", 1.0)
        if not _is_real(dv) or not 0 <= dv <= 1:
            errors.append(f"criterion {c.name!r}: degenerate_value must lie in [0, 1]")
    elif kind is ScalingKind.BUDGET_CAPPED:
        budget, lo = p.get("budget"), p.get("min")
        if budget is None:
            errors.append(f"criterion {c.name!r}: budget_capped scaling needs a budget")
        elif lo is not None and _is_real(lo) and _is_real(budget) and budget <= lo:
            errors.append(f"criterion {c.name!r}: budget {budget!r} must exceed min {lo!r}")
    elif kind is ScalingKind.GRADE_LINEAR:
        gc = p.get("grade_count")
        if s.rubric is None and gc is None:
            errors.append(f"criterion {c.name!r}: grade_linear scaling needs grade_count or a rubric")
        if gc is not None and (not isinstance(gc, int) or gc < 2):
            errors.append(f"criterion {c.name!r}: grade_count must be an integer >= 2")
        if s.rubric is not None and gc is not None and gc != s.rubric.grade_count:
            errors.append(f"criterion {c.name!r}: grade_count {gc} disagrees with rubric "
                          f"({s.rubric.grade_count} grades)")
    elif kind is ScalingKind.CONSTANT:
        v = p.get("value", 1.0)
        if not _is_real(v) or not 0 <= v <= 1:
            errors.append(f"criterion {c.name!r}: constant value must lie in [0, 1]")
    elif kind is ScalingKind.LINEAR_CAPPED:
        cap = p.get("cap")
        if cap is not None and (not isinstance(cap, int) or cap < 1):
            errors.append(f"criterion {c.name!r}: linear cap must be an integer >= 1")
    elif kind is ScalingKind.LOGISTIC_CAPPED:
        cap = p.get("cap")
        if cap is not None and (not isinstance(cap, int) or cap < 10):
            errors.append(f"criterion {c.name!r}: logistic cap must be an integer >= 10")


def validate_schema(schema: MetricSchema) -> ValidationReport:
    """Check every schema invariant; never raises on malformed content."""
    report = ValidationReport()
    errors, warnings = report.errors, report.warnings

    criteria = list(schema.criteria or ())
    names = [getattr(c, "name", None) for c in criteria]
    seen = set()
    for n in names:
        if not isinstance(n, str) or not _IDENT.match(n):
            errors.append(f"criterion name {n!r} is not a valid identifier")
        elif n in seen:
            errors.append(f"duplicate criterion name {n!r}")
        seen.add(n)
    if not criteria:
        errors.append("schema declares no criteria")

    for c in criteria:
        if not isinstance(c.role, Role):
            errors.append(f"criterion {c.name!r}: role must be root or additional")
        if not isinstance(c.direction, Direction):
            errors.append(f"criterion {c.name!r}: direction must be higher or lower")
        if not isinstance(c.missing_policy, MissingPolicy):
            errors.append(f"criterion {c.name!r}: unknown missing policy {c.missing_policy!r}")
        _check_scaling(c, errors)

    roots = [c.name for c in criteria if c.role is Role.ROOT]
    additional = [c.name for c in criteria if c.role is Role.ADDITIONAL]
    if criteria and not roots:
        errors.append("schema needs at least one root criterion")

    ws = schema.weights
    if not isinstance(ws, WeightSet):
        errors.append("weights section missing or malformed")
    else:
        errors.extend(ws.problems())
        weighted = [n for n, _ in ws.additional_weights]
        dupes = sorted({n for n in weighted if weighted.count(n) > 1})
        for n in dupes:
            errors.append(f"weight for {n!r} given more than once")
        for n in additional:
            if n not in weighted:
                errors.append(f"additional criterion {n!r} has no weight")
        for n in weighted:
            if n in roots:
                errors.append(f"root criterion {n!r} cannot carry a weight (roots are weighted 1)")
            elif n not in additional:
                errors.append(f"weight {n!r} does not match any additional criterion")

    unames = set()
    for u in schema.uncertainty_vars or ():
        if not isinstance(u.name, str) or not _IDENT.match(u.name):
            errors.append(f"uncertainty variable name {u.name!r} is not a valid identifier")
        elif u.name in unames or u.name in seen:
            errors.append(f"duplicate name {u.name!r} among uncertainty variables/criteria")
        unames.add(u.name)
        if not isinstance(u.grade_count, int) or isinstance(u.grade_count, bool) or u.grade_count < 2:
            errors.append(f"uncertainty {u.name!r}: grade_count must be an integer >= 2")
            continue
        if not _is_real(u.minimum_threshold) or not 0 < u.minimum_threshold <= 1:
            errors.append(f"uncertainty {u.name!r}: minimum_threshold must lie in (0, 1]")
        bad = sorted(g for g in u.removal_grades if not (isinstance(g, int) and 0 <= g < u.grade_count))
        if bad:
            errors.append(f"uncertainty {u.name!r}: removal grades {bad} outside 0..{u.grade_count - 1}")
        elif len(u.retained_grades) < 2:
            errors.append(f"uncertainty {u.name!r}: at least two grades must be retained")

    ss = schema.sample_size
    if not isinstance(ss.kind, SampleSizeScaling):
        errors.append(f"unknown sample_size_scaling {ss.kind!r}")
    elif ss.kind is SampleSizeScaling.CONSTANT:
        if not _is_real(ss.value) or not 0 < ss.value <= 1:
            errors.append("sample_size_value must lie in (0, 1]")
    elif ss.cap is not None:
        lowest = 10 if ss.kind is SampleSizeScaling.LOGISTIC_CAPPED else 1
        if not isinstance(ss.cap, int) or ss.cap < lowest:
            errors.append(f"sample_size_cap must be an integer >= {lowest} for {ss.kind.value}")
    if ss.expected_range is not None:
        lo, hi = ss.expected_range
        if not (_is_real(lo) and _is_real(hi)) or lo < 1 or hi < lo:
            errors.append("sample_size_range must be two numbers 1 <= min <= max")
        elif ss.kind is SampleSizeScaling.LINEAR_CAPPED:
            w = linear_range_warning(lo, hi)
            if w:
                warnings.append(w)

    if not _is_real(schema.epsilon) or not 1e-9 <= schema.epsilon <= 0.1:
        errors.append(f"epsilon must lie in [1e-9, 0.1], got {schema.epsilon!r}")
    if not _is_real(schema.confidence_level) or not 0 < schema.confidence_level < 1:
        errors.append(f"confidence_level must lie in (0, 1), got {schema.confidence_level!r}")
    if schema.interval_method not in ("normal", "beta"):
        errors.append(f"interval_method must be 'normal' or 'beta', got {schema.interval_method!r}")
    return report


# ------------------------------------------------------------------- parsing

def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep key case
    return cp


class _Fields:
    """Helper that turns raw strings into typed values with located errors."""

    def __init__(self, text: str, source: str):
        self.lines = text.splitlines()
        self.source = source

    def where(self, section, key) -> str:
        in_section = False
        for i, line in enumerate(self.lines, 1):
            s = line.strip()
            if s.startswith("["):
                in_section = s == f"[{section}]"
            elif in_section and re.match(rf"{re.escape(key)}\s*[=:]", s):
                return f"{self.source}:{i}: [{section}] {key}"
        return f"{self.source}: [{section}] {key}"

    def fail(self, section, key, msg):
        raise ConfigError(f"{self.where(section, key)}: {msg}")

    def real(self, section, key, raw) -> float:
        try:
            d = Decimal(raw.strip())
        except InvalidOperation:
            self.fail(section, key, f"expected a decimal number, got {raw!r}")
        if not d.is_finite():
            self.fail(section, key, f"expected a finite number, got {raw!r}")
        return float(d)

    def integer(self, section, key, raw) -> int:
        try:
            return int(raw.strip())
        except ValueError:
            self.fail(section, key, f"expected an integer, got {raw!r}")

    def enum(self, section, key, raw, enum_cls):
        try:
            return enum_cls(raw.strip().lower())
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls)
            self.fail(section, key, f"{raw!r} is not one of: {allowed}")


def _split_dotted(section, cp, fields: _Fields) -> dict[str, dict[str, str]]:
    groups: dict[str, dict[str, str]] = {}
    for key, raw in cp.items(section):
        if "." not in key:
            fields.fail(section, key, "expected '<name>.<attribute>'")
        name, attr = key.split(".", 1)
        groups.setdefault(name, {})[attr] = raw
    return groups


def _parse_criteria(cp, fields: _Fields, base_dir: Path | None):
    criteria = []
    for name, attrs in _split_dotted("criteria", cp, fields).items():
        key = lambda a: f"{name}.{a}"  # noqa: E731
        if "role" not in attrs:
            fields.fail("criteria", key("role"), "missing required attribute")
        role = fields.enum("criteria", key("role"), attrs.pop("role"), Role)
        direction = fields.enum("criteria", key("direction"), attrs.pop("direction", "higher"), Direction)
        kind = fields.enum("criteria", key("scaling"), attrs.pop("scaling", "minmax"), ScalingKind)
        missing = fields.enum("criteria", key("missing"), attrs.pop("missing", "worst_case"), MissingPolicy)
        params: dict[str, Any] = {}
        rubric = None
        for attr, raw in attrs.items():
            if attr not in _SCALING_PARAMS[kind]:
                fields.fail("criteria", key(attr), f"unknown attribute for {kind.value} scaling")
            if attr in _INT_PARAMS:
                params[attr] = fields.integer("criteria", key(attr), raw)
            elif attr in _STR_PARAMS:
                params[attr] = raw.strip()
            else:
                params[attr] = fields.real("criteria", key(attr), raw)
        if "rubric" in params:
            rpath = Path(params["rubric"])
            if base_dir is not None and not rpath.is_absolute():
                rpath = base_dir / rpath
            try:
                rubric = load_rubric(rpath)
            except (OSError, RubricError) as exc:
                fields.fail("criteria", key("rubric"), f"cannot load rubric: {exc}")
        criteria.append(CriterionSpec(name, role, direction, ScalingMethod(kind, params, rubric), missing))
    return tuple(criteria)


def _parse_weights(cp, fields: _Fields) -> WeightSet:
    items = dict(cp.items("weights"))
    if "beta0" not in items:
        fields.fail("weights", "beta0", "missing required key")
    beta0 = fields.real("weights", "beta0", items.pop("beta0"))
    tol = 1e-9
    if "sum_tolerance" in items:
        tol = fields.real("weights", "sum_tolerance", items.pop("sum_tolerance"))
    weights = tuple((k, fields.real("weights", k, v)) for k, v in items.items())
    return WeightSet(beta0, weights, tol)


def _parse_uncertainty(cp, fields: _Fields):
    if not cp.has_section("uncertainty"):
        return ()
    out = []
    for name, attrs in _split_dotted("uncertainty", cp, fields).items():
        key = lambda a: f"{name}.{a}"  # noqa: E731
        for attr in attrs:
            if attr not in ("grade_count", "minimum_threshold", "removal_grades"):
                fields.fail("uncertainty", key(attr), "unknown attribute")
        for req in ("grade_count", "minimum_threshold"):
            if req not in attrs:
                fields.fail("uncertainty", key(req), "missing required attribute")
        removal = frozenset(
            fields.integer("uncertainty", key("removal_grades"), g)
            for g in attrs.get("removal_grades", "").split(",") if g.strip())
        out.append(UncertaintyVariableSpec(
            name,
            fields.integer("uncertainty", key("grade_count"), attrs["grade_count"]),
            fields.real("uncertainty", key("minimum_threshold"), attrs["minimum_threshold"]),
            removal))
    return tuple(out)


def _parse_options(cp, fields: _Fields) -> dict:
    if not cp.has_section("options"):
        return {}
    opts = dict(cp.items("options"))
    known = {"sample_size_scaling", "sample_size_cap", "sample_size_value",
             "sample_size_range", "epsilon", "confidence_level", "interval_method"}
    for k in opts:
        if k not in known:
            fields.fail("options", k, "unknown option")
    out: dict[str, Any] = {}
    kind = fields.enum("options", "sample_size_scaling",
                       opts.get("sample_size_scaling", "constant"), SampleSizeScaling)
    cap = None
    if opts.get("sample_size_cap", "max").strip().lower() != "max":
        cap = fields.integer("options", "sample_size_cap", opts["sample_size_cap"])
    value = 1.0
    if "sample_size_value" in opts:
        value = fields.real("options", "sample_size_value", opts["sample_size_value"])
    expected = None
    if "sample_size_range" in opts:
        parts = [p for p in opts["sample_size_range"].split(",") if p.strip()]
        if len(parts) != 2:
            fields.fail("options", "sample_size_range", "expected 'min, max'")
        expected = tuple(fields.real("options", "sample_size_range", p) for p in parts)
    out["sample_size"] = SampleSizeSpec(kind, cap, value, expected)
    for k in ("epsilon", "confidence_level"):
        if k in opts:
            out[k] = fields.real("options", k, opts[k])
    if "interval_method" in opts:
        out["interval_method"] = opts["interval_method"].strip().lower()
    return out


def parse_schema(text: str, base_dir: Path | None = None, source: str = "<schema>") -> MetricSchema:
    """Parse configuration text into a schema without validating it."""
    if not text.strip():
        raise ConfigError(f"{source}: empty configuration file")
    cp = _parser()
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: parse error: {exc}") from exc
    fields = _Fields(text, source)
    for sec in cp.sections():
        if sec not in ("criteria", "weights", "uncertainty", "options"):
            raise ConfigError(f"{source}: unknown section [{sec}]")
    for sec in ("criteria", "weights"):
        if not cp.has_section(sec):
            raise ConfigError(f"{source}: missing required section [{sec}]")
    return MetricSchema(
        criteria=_parse_criteria(cp, fields, base_dir),
        weights=_parse_weights(cp, fields),
        uncertainty_vars=_parse_uncertainty(cp, fields),
        **_parse_options(cp, fields),
    )


def load_schema(path) -> MetricSchema:
    """Read, parse and validate a schema file.

    Raises ConfigError for unreadable or malformed files and
    SchemaValidationError (carrying the report) for invariant violations.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read schema {path}: {exc}") from exc
    schema = parse_schema(text, base_dir=path.parent, source=str(path))
    report = validate_schema(schema)
    if not report.ok:
        raise SchemaValidationError(report)
    return schema


# ------------------------------------------------------------------ writing

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dumps_schema(schema: MetricSchema) -> str:
    """Canonical text form; ``parse_schema(dumps_schema(s))`` equals ``s``."""
    out = ["[criteria]"]
    for c in schema.criteria:
        out.append(f"{c.name}.role = {c.role.value}")
        out.append(f"{c.name}.direction = {c.direction.value}")
        out.append(f"{c.name}.scaling = {c.scaling.kind.value}")
        out.append(f"{c.name}.missing = {c.missing_policy.value}")
        for k in sorted(c.scaling.params):
            out.append(f"{c.name}.{k} = {_fmt(c.scaling.params[k])}")
    out += ["", "[weights]", f"beta0 = {_fmt(schema.weights.beta0)}"]
    for name, beta in schema.weights.additional_weights:
        out.append(f"{name} = {_fmt(beta)}")
    out.append(f"sum_tolerance = {_fmt(schema.weights.sum_tolerance)}")
    if schema.uncertainty_vars:
        out += ["", "[uncertainty]"]
        for u in schema.uncertainty_vars:
            out.append(f"{u.name}.grade_count = {u.grade_count}")
            out.append(f"{u.name}.minimum_threshold = {_fmt(u.minimum_threshold)}")
            out.append(f"{u.name}.removal_grades = {', '.join(map(str, sorted(u.removal_grades)))}")
    ss = schema.sample_size
    out += ["", "[options]", f"sample_size_scaling = {ss.kind.value}",
            f"sample_size_cap = {'max' if ss.cap is None else ss.cap}",
            f"sample_size_value = {_fmt(ss.value)}"]
    if ss.expected_range is not None:
        out.append(f"sample_size_range = {_fmt(ss.expected_range[0])}, {_fmt(ss.expected_range[1])}")
    out += [f"epsilon = {_fmt(schema.epsilon)}",
            f"confidence_level = {_fmt(schema.confidence_level)}",
            f"interval_method = {schema.interval_method}", ""]
    return "\n".join(out)


def save_schema(schema: MetricSchema, path) -> None:
    Path(path).write_text(dumps_schema(schema), encoding="utf-8")


def schema_hash(schema: MetricSchema) -> str:
    h = hashlib.sha256(dumps_schema(schema).encode("utf-8"))
    for c in schema.criteria:
        if c.scaling.rubric is not None:
            h.update(c.scaling.rubric.fingerprint().encode("utf-8"))
    return h.hexdigest()
