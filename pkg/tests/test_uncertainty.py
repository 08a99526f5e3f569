import math

import pytest
from hypothesis import given, strategies as st

from roam.errors import DataError
from roam.records import ScaledRecord
from roam.schema import UncertaintyVariableSpec
from roam.uncertainty import (aca_beta, confidence_interval, grade_weight_table,
                              uncertainty_weight, usability_weights, z_value)

from conftest import simple_schema

Z95 = 1.959963984540054  # tabulated two-sided 95% normal quantile


def closed_form_sd(mu, nu):
    return math.sqrt(mu * (1 - mu) / (nu + 1))


def test_usability_tables():
    assert usability_weights(3, 0.6) == {0: 1.0, 1: 0.8, 2: 0.6}
    assert usability_weights(2, 0.5) == {0: 1.0, 1: 0.5}
    table = usability_weights(5, 0.6)
    assert table == pytest.approx({0: 1.0, 1: 0.9, 2: 0.8, 3: 0.7, 4: 0.6}, abs=1e-15)


def test_grade_table_skips_removed_grades():
    var = UncertaintyVariableSpec("usability", 4, 0.6, frozenset({3}))
    assert grade_weight_table(var) == {0: 1.0, 1: 0.8, 2: 0.6}


@given(st.integers(2, 20), st.floats(0.01, 1))
def test_usability_non_increasing(g, t):
    table = usability_weights(g, t)
    ws = [table[i] for i in range(g)]
    assert ws[0] == 1.0 and ws[-1] == t
    assert all(b <= a for a, b in zip(ws, ws[1:]))


def _schema_with_usability():
    s = simple_schema()
    return s.__class__(s.criteria, s.weights,
                       (UncertaintyVariableSpec("usability", 4, 0.6, frozenset({3})),))


def test_uncertainty_weight_examples():
    s = _schema_with_usability()
    rec = ScaledRecord(1, {}, {}, 100, {"usability": 1}, scaled_sample_size=0.5)
    uw = uncertainty_weight(rec, s)
    assert uw.combined == pytest.approx(0.4, abs=1e-15)
    rec = ScaledRecord(1, {}, {}, 100, {"usability": 0}, scaled_sample_size=1.0)
    assert uncertainty_weight(rec, s).combined == 1.0
    rec = ScaledRecord(1, {}, {}, 100, {"usability": 2}, scaled_sample_size=1.0)
    assert uncertainty_weight(rec, s).variable_weights == {"usability": 0.6}


def test_missing_grade_is_hard_error():
    rec = ScaledRecord(5, {}, {}, 100, {}, scaled_sample_size=1.0)
    with pytest.raises(DataError, match="row 5"):
        uncertainty_weight(rec, _schema_with_usability())


@given(st.floats(0.01, 1), st.lists(st.floats(0.01, 1), max_size=4), st.floats(0.01, 0.99))
def test_combined_never_exceeds_factors(s_scaled, ws, extra):
    vars_ = tuple(UncertaintyVariableSpec(f"u{i}", 2, w) for i, w in enumerate(ws))
    base = simple_schema()
    schema = base.__class__(base.criteria, base.weights, vars_)
    rec = ScaledRecord(1, {}, {}, 10, {f"u{i}": 1 for i in range(len(ws))}, scaled_sample_size=s_scaled)
    uw = uncertainty_weight(rec, schema)
    assert all(uw.combined <= f for f in [s_scaled, *ws])
    # one more variable below 1 strictly lowers the weight
    more = schema.__class__(base.criteria, base.weights,
                            vars_ + (UncertaintyVariableSpec("z", 2, extra),))
    rec2 = ScaledRecord(1, {}, {}, 10, {**rec.uncertainty_grades, "z": 1}, scaled_sample_size=s_scaled)
    assert uncertainty_weight(rec2, more).combined < uw.combined


def test_aca_examples():
    b = aca_beta(0.5, 100, {}, 1e-3)
    assert (b.a, b.b) == (50, 50)
    assert b.sd == pytest.approx(0.049752, abs=1e-6)

    b = aca_beta(0.69375, 150, {"usability": 0.8}, 1e-3)
    assert b.nu == pytest.approx(120, abs=1e-12)
    assert b.a == pytest.approx(83.25, abs=1e-12)
    assert b.b == pytest.approx(36.75, abs=1e-12)
    assert b.sd == pytest.approx(closed_form_sd(0.69375, 120), abs=1e-15)
    assert b.sd == pytest.approx(0.041904, abs=1e-6)

    b = aca_beta(0.0, 100, {}, 1e-3)
    assert b.mu == 0.001
    assert b.sd == pytest.approx(0.003145, abs=1e-6)
    assert aca_beta(1.0, 100, {}, 1e-3).mu == 0.999


def test_epsilon_only_touches_exact_bounds():
    assert aca_beta(1e-4, 10, {}, 1e-3).mu == 1e-4


def test_nu_is_fractional_raw_sample_size():
    assert aca_beta(0.5, 150, [0.8], 1e-3).nu == pytest.approx(120.0)
    assert aca_beta(0.5, 7, [0.3], 1e-3).nu == pytest.approx(2.1)


@given(st.floats(1e-6, 1 - 1e-6), st.floats(1, 1e6), st.floats(0.01, 1))
def test_sd_identity_and_bound(mu, n, weight):
    b = aca_beta(mu, n, [weight], 1e-3)
    assert b.a + b.b == pytest.approx(b.nu, rel=1e-12)
    assert abs(b.sd - closed_form_sd(mu, b.nu)) <= 1e-12
    assert b.sd <= 0.5 / math.sqrt(b.nu + 1) + 1e-15


@given(st.floats(1e-6, 1 - 1e-6), st.floats(1, 1e5), st.floats(1.001, 10))
def test_sd_decreases_with_nu(mu, nu, factor):
    assert aca_beta(mu, nu * factor, {}).sd < aca_beta(mu, nu, {}).sd


@given(st.floats(1e-6, 0.5), st.floats(1, 1e5))
def test_sd_symmetric_and_peaks_at_half(mu, nu):
    a, b = aca_beta(mu, nu, {}).sd, aca_beta(1 - mu, nu, {}).sd
    assert a == pytest.approx(b, rel=1e-9)
    assert aca_beta(0.5, nu, {}).sd >= a * (1 - 1e-12)  # ulp noise next to mu = 0.5


def test_z_value():
    assert z_value(0.95) == pytest.approx(Z95, abs=1e-9)
    assert z_value(0.99) > z_value(0.95)


def test_confidence_interval_examples():
    b = aca_beta(0.69375, 150, [0.8], 1e-3)
    ci = confidence_interval(b, 0.95)
    assert ci.lower == pytest.approx(0.69375 - Z95 * b.sd, abs=1e-12)
    assert ci.lower == pytest.approx(0.61162, abs=1e-5)
    assert ci.upper == pytest.approx(0.77588, abs=1e-5)

    ci = confidence_interval(aca_beta(0.0, 100, {}, 1e-3), 0.95)
    assert ci.lower == 0.0
    assert ci.upper == pytest.approx(0.001 + Z95 * 0.0031450, abs=1e-6)


def test_interval_collapses_as_sd_vanishes():
    b = aca_beta(0.3, 10**15, {})
    ci = confidence_interval(b)
    assert ci.lower == pytest.approx(0.3, abs=1e-7)
    assert ci.upper == pytest.approx(0.3, abs=1e-7)


def test_beta_quantile_interval():
    b = aca_beta(0.69375, 150, [0.8])
    exact = confidence_interval(b, 0.95, method="beta")
    normal = confidence_interval(b, 0.95)
    assert 0 <= exact.lower < 0.69375 < exact.upper <= 1
    assert exact.lower == pytest.approx(normal.lower, abs=0.01)


@given(st.floats(0, 1), st.floats(1, 1e4), st.floats(0.5, 0.999))
def test_interval_clamped(metric, n, level):
    ci = confidence_interval(aca_beta(metric, n, {}), level)
    assert 0 <= ci.lower <= ci.upper <= 1
