import os
import shutil

import pytest

from roam.cli import EXAMPLE_FILES, main
from roam.dataset_io import is_timestamp_line, read_records
from roam.oracle import brute_force_roam

from fixture_expectations import ROWS


@pytest.fixture
def example(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    d = tmp_path / "ex"
    assert main(["example", str(d)]) == 0
    return d


def args(d, *extra):
    return ["--schema", str(d / "schema.ini"), "--data", str(d / "trials.csv"),
            "--mapping", str(d / "mapping.ini"), *extra]


def test_validate_fixture(example, capsys):
    assert main(["validate", "--schema", str(example / "schema.ini")]) == 0
    assert "schema is valid" in capsys.readouterr().out


def test_validate_with_data_reports_ranges(example, capsys):
    assert main(["validate", *args(example)]) == 0
    out = capsys.readouterr().out
    assert "rows: 12 (1 excluded)" in out
    assert "cost: min=1000 max=5600 q1=1275 q3=2875 iqr=1600" in out


def _edit_schema(d, old, new):
    p = d / "schema.ini"
    text = p.read_text()
    assert old in text
    p.write_text(text.replace(old, new))
    return p


def test_validate_bad_sum(example, capsys):
    p = _edit_schema(example, "cost = 0.375", "cost = 0.475")
    assert main(["validate", "--schema", str(p)]) == 1
    assert "weight sum constraint" in capsys.readouterr().out


def test_validate_linear_range_warning(example, capsys):
    p = _edit_schema(example, "sample_size_range = 30, 200", "sample_size_range = 30, 2000")
    assert main(["validate", "--schema", str(p)]) == 0
    assert "multiple of ten" in capsys.readouterr().out


def test_score_reproduces_expected_report(example):
    out = example / "report.csv"
    assert main(["score", *args(example), "--out", str(out)]) == 0
    assert out.read_text() == (example / "expected_report.csv").read_text()


def test_score_twice_identical_modulo_timestamp(example, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH")
    a, b = example / "a.csv", example / "b.csv"
    main(["score", *args(example), "--out", str(a)])
    main(["score", *args(example), "--out", str(b)])
    strip = lambda p: [ln for ln in p.read_text().splitlines() if not is_timestamp_line(ln)]  # noqa: E731
    assert strip(a) == strip(b)


def test_higher_confidence_widens(example):
    lo, hi = example / "95.jsonl", example / "99.jsonl"
    main(["score", *args(example), "--format", "records", "--out", str(lo)])
    main(["score", *args(example), "--format", "records", "--confidence", "0.99", "--out", str(hi)])
    _, r95 = read_records(lo)
    _, r99 = read_records(hi)
    checked = 0
    for a, b in zip(r95, r99):
        if a["sd"]:
            assert b["ci_upper"] - b["ci_lower"] > a["ci_upper"] - a["ci_lower"]
            checked += 1
    assert checked == 11


def test_epsilon_flag(example):
    out = example / "e.jsonl"
    main(["score", *args(example), "--format", "records", "--epsilon", "0.01", "--out", str(out)])
    _, rows = read_records(out)
    assert rows[2]["ci_upper"] > 0.01  # metric-0 row now centred at 0.01


def test_bad_epsilon_is_validation_failure(example):
    assert main(["score", *args(example), "--epsilon", "0.7"]) == 1


def test_missing_mapping_is_usage_error(example, capsys):
    code = main(["score", "--schema", str(example / "schema.ini"), "--data",
                 str(example / "trials.csv"), "--mapping", str(example / "nope.ini")])
    assert code == 2
    assert "mapping file not found" in capsys.readouterr().err


def test_config_dir_env(example, monkeypatch, capsys):
    monkeypatch.setenv("ROAM_CONFIG_DIR", str(example))
    monkeypatch.chdir(example.parent)
    assert main(["validate", "--schema", "schema.ini"]) == 0


def _whatif(example, capsys, *extra):
    code = main(["whatif", *args(example), *extra])
    lines = capsys.readouterr().out.splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return code, rows


def test_whatif_baseline_no_rank_changes(example, capsys):
    code, rows = _whatif(example, capsys, "--weights", "beta0=0.5,cost=0.375,politics=0.125")
    assert code == 0
    assert {r["rank_change_set1"] for r in rows if r["rank_change_set1"]} == {"0"}


def oracle_ranks(beta0, b_cost, b_pol):
    metric = {rid: brute_force_roam([c, p], [e], beta0, [b_cost, b_pol])
              for rid, (e, c, p, *_rest) in ROWS.items()}
    order = sorted(metric, key=lambda rid: (-metric[rid], rid))
    return {rid: i for i, rid in enumerate(order, 1)}


def test_whatif_cost_up_politics_down_matches_oracle(example, capsys):
    code, rows = _whatif(example, capsys, "--weights", "beta0=0.5,cost=0.45,politics=0.05",
                         "--weights", "beta0=0.2,cost=0.1,politics=0.7")
    assert code == 0
    base = oracle_ranks(0.5, 0.375, 0.125)
    for i, ws in enumerate([(0.5, 0.45, 0.05), (0.2, 0.1, 0.7)], 1):
        alt = oracle_ranks(*ws)
        for r in rows:
            rid = int(r["id"])
            if rid not in ROWS:
                assert r[f"rank_set{i}"] == ""
                continue
            assert int(r[f"rank_set{i}"]) == alt[rid]
            assert int(r[f"rank_change_set{i}"]) == base[rid] - alt[rid]
    # the politics-heavy set must actually reorder something for this to bite
    alt2 = oracle_ranks(0.2, 0.1, 0.7)
    assert any(base[rid] != alt2[rid] for rid in ROWS)


def test_whatif_overrides_file(example, capsys):
    f = example / "ov.ini"
    f.write_text("[cost_heavy]\nbeta0 = 0.5\ncost = 0.45\npolitics = 0.05\n")
    code, rows = _whatif(example, capsys, "--weights-override", str(f))
    assert code == 0 and "rank_change_cost_heavy" in rows[0]


def test_whatif_rejects_zero_beta0(example, capsys):
    code = main(["whatif", *args(example), "--weights", "beta0=0,cost=0.5,politics=0.5"])
    assert code == 1
    assert "strictly positive" in capsys.readouterr().err


def test_whatif_needs_sets(example):
    assert main(["whatif", *args(example)]) == 2


def test_example_twice_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["example", str(a)]) == 0
    assert main(["example", str(b)]) == 0
    for name in EXAMPLE_FILES:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_example_unwritable_target(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["example", str(blocker / "sub")]) == 2


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_example_read_only_dir(tmp_path):
    ro = tmp_path / "ro"
    ro.mkdir()
    ro.chmod(0o500)
    try:
        assert main(["example", str(ro)]) == 2
    finally:
        ro.chmod(0o700)


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "roam 0.1.0" in capsys.readouterr().out


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_hidden_oracle_command(capsys):
    assert main(["oracle", "--p", "0.5", "--n", "100", "--trials", "2000"]) == 0
    out = capsys.readouterr().out
    assert "aca_sd=0.0497" in out


def test_console_script_installed():
    assert shutil.which("roam") is not None
