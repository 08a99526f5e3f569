"""Command-line front end.

Exit codes: 0 success, 1 validation or data failure, 2 usage or I/O failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import shutil
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .dataset_io import emit_report, load_mapping, render_report
from .errors import ConfigError, RoamError, SchemaValidationError
from .pipeline import run, whatif
from .schema import FORMAT_VERSION, WeightSet, load_schema, parse_schema, validate_schema

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2
CONFIG_DIR_ENV = "ROAM_CONFIG_DIR"
EXAMPLE_FILES = ("schema.ini", "rubric.csv", "mapping.ini", "trials.csv", "expected_report.csv")


class UsageError(Exception):
    pass


def _resolve(path: str | None, what: str) -> Path:
    """Existing file path; relative paths fall back to $ROAM_CONFIG_DIR."""
    if path is None:
        raise UsageError(f"--{what} is required")
    p = Path(path)
    if p.is_file():
        return p
    base = os.environ.get(CONFIG_DIR_ENV)
    if base and not p.is_absolute() and (Path(base) / p).is_file():
        return Path(base) / p
    raise UsageError(f"{what} file not found: {path}")


def _load(args):
    schema = load_schema(_resolve(args.schema, "schema"))
    changes = {}
    if getattr(args, "confidence", None) is not None:
        changes["confidence_level"] = args.confidence
    if getattr(args, "epsilon", None) is not None:
        changes["epsilon"] = args.epsilon
    if getattr(args, "interval", None) is not None:
        changes["interval_method"] = args.interval
    if changes:
        schema = schema.with_options(**changes)
        report = validate_schema(schema)
        if not report.ok:
            raise SchemaValidationError(report)
    return schema


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_validate(args) -> int:
    path = _resolve(args.schema, "schema")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc))
    schema = parse_schema(text, base_dir=path.parent, source=str(path))
    report = validate_schema(schema)
    print(report.render())
    if report.ok and args.data:
        result = run(schema, _resolve(args.data, "data"), load_mapping(_resolve(args.mapping, "mapping")))
        for w in result.warnings:
            print(f"warning: {w}")
        print(f"rows: {len(result.rows)} ({sum(r.excluded for r in result.rows)} excluded)")
        for name, st in result.stats.criteria.items():
            print(f"{name}: min={st.min:g} max={st.max:g} q1={st.q1:g} q3={st.q3:g} iqr={st.iqr:g}")
        for d in result.ingest.diagnostics:
            print(f"note: {d}")
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_score(args) -> int:
    schema = _load(args)
    mapping = load_mapping(_resolve(args.mapping, "mapping"))
    result = run(schema, _resolve(args.data, "data"), mapping)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = render_report(result.rows, schema, args.format, echo=result.ingest.columns)
    _write(text, args.out)
    return EXIT_OK


def _parse_weight_spec(spec: str, tol: float) -> WeightSet:
    items = {}
    for part in spec.split(","):
        k, sep, v = part.partition("=")
        if not sep:
            raise UsageError(f"bad weight assignment {part!r}; expected name=value")
        try:
            items[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"bad weight value in {part!r}") from None
    if "beta0" not in items:
        raise UsageError(f"weight set {spec!r} lacks beta0")
    beta0 = items.pop("beta0")
    return WeightSet.from_mapping(beta0, items, tol)


def load_overrides(path, tol: float = 1e-9) -> dict[str, WeightSet]:
    """INI file: one section per alternative weight set."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from exc
    out = {}
    for sec in cp.sections():
        items = dict(cp.items(sec))
        if "beta0" not in items:
            raise ConfigError(f"{path}: [{sec}] lacks beta0")
        try:
            beta0 = float(items.pop("beta0"))
            t = float(items.pop("sum_tolerance", tol))
            out[sec] = WeightSet.from_mapping(beta0, {k: float(v) for k, v in items.items()}, t)
        except ValueError as exc:
            raise ConfigError(f"{path}: [{sec}]: {exc}") from exc
    return out


def cmd_whatif(args) -> int:
    schema = _load(args)
    tol = schema.weights.sum_tolerance
    sets = {}
    if args.weights_override:
        sets.update(load_overrides(_resolve(args.weights_override, "weights-override"), tol))
    for i, spec in enumerate(args.weights or (), 1):
        sets[f"set{i}"] = _parse_weight_spec(spec, tol)
    if not sets:
        raise UsageError("give --weights-override and/or --weights")
    result = run(schema, _resolve(args.data, "data"), load_mapping(_resolve(args.mapping, "mapping")))
    cols, rows = whatif(schema, result.records, sets)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow(["" if r[c] is None else (f"{r[c]:.6g}" if isinstance(r[c], float) else r[c])
                    for c in cols])
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_example(args) -> int:
    target = Path(args.directory)
    try:
        target.mkdir(parents=True, exist_ok=True)
        pkg = resources.files("roam") / "data"
        for name in EXAMPLE_FILES:
            with resources.as_file(pkg / name) as src:
                shutil.copyfile(src, target / name)
    except OSError as exc:
        raise UsageError(f"cannot write example into {target}: {exc}")
    print(f"wrote {', '.join(EXAMPLE_FILES)} to {target}")
    print(f"try: roam score --schema {target / 'schema.ini'} --data {target / 'trials.csv'} "
          f"--mapping {target / 'mapping.ini'}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import empirical_se
    from .uncertainty import aca_beta
    emp = empirical_se(args.p, args.n, args.trials, args.seed)
    aca = aca_beta(args.p, args.n, {}, 1e-3).sd
    print(f"p={args.p} n={args.n} trials={args.trials} seed={args.seed}")
    print(f"empirical_se={emp!r}")
    print(f"aca_sd={aca!r}")
    print(f"relative_gap={abs(emp - aca) / aca!r}")
    return EXIT_OK


def _unit_interval(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not strictly between 0 and 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="roam", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version",
                   version=f"roam {__version__} (config format {FORMAT_VERSION})")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp, data=True):
        sp.add_argument("--schema", help=f"schema file (relative paths also tried under ${CONFIG_DIR_ENV})")
        if data:
            sp.add_argument("--data", help="input CSV")
            sp.add_argument("--mapping", help="column mapping file")
            sp.add_argument("--out", default="-", help="output file (default: stdout)")

    v = sub.add_parser("validate", help="check a schema (and optionally a dataset)")
    common(v, data=False)
    v.add_argument("--data")
    v.add_argument("--mapping")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("score", help="score a dataset and write the report")
    common(s)
    s.add_argument("--format", choices=("table", "records"), default="table")
    s.add_argument("--confidence", type=_unit_interval)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--interval", choices=("normal", "beta"))
    s.set_defaults(func=cmd_score)

    w = sub.add_parser("whatif", help="compare rankings under alternative weights")
    common(w)
    w.add_argument("--weights-override", help="INI file, one section per weight set")
    w.add_argument("--weights", action="append",
                   help="inline set, e.g. beta0=0.5,cost=0.25,politics=0.25 (repeatable)")
    w.set_defaults(func=cmd_whatif)

    e = sub.add_parser("example", help="write the worked-example files into a directory")
    e.add_argument("directory")
    e.set_defaults(func=cmd_example)

    o = sub.add_parser("oracle")
    o.add_argument("--p", type=float, default=0.5)
    o.add_argument("--n", type=int, default=100)
    o.add_argument("--trials", type=int, default=10_000)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)
    # keep the oracle command out of the help listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"roam: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaValidationError as exc:
        print(exc.report.render(), file=sys.stderr)
        return EXIT_INVALID
    except RoamError as exc:
        print(f"roam: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"roam: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
