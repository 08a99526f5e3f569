import pytest
from hypothesis import given, strategies as st

from roam.errors import RubricError
from roam.rubric import Rubric, grade_with_rubric, load_rubric, parse_rubric

# Percent-change thresholds for grades 1..4, copied by hand from the
# shipped rubric so the scan below does not go through the parser.
TABLE = {
    "Single species abundance": [0, 20, 35, 50],
    "Species richness": [0, 10, 15, 30],
}


def scan_grade(measure, change):
    met = [g for g, t in enumerate(TABLE[measure], 1) if change >= t]
    return max(met, default=0)


@pytest.fixture
def rubric(data_dir):
    return load_rubric(data_dir / "rubric.csv")


def test_shipped_rubric_shape(rubric):
    assert rubric.grade_labels[0] == "Not effective"
    assert rubric.grade_labels[-1] == "Extremely effective"
    assert {m: list(t) for m, t in rubric.rows} == TABLE


def test_richness_fifteen_percent_is_highly_effective(rubric):
    assert grade_with_rubric("species richness", "+15%", rubric) == 3


def test_decrease_is_not_effective(rubric):
    assert grade_with_rubric("Single species abundance", "decrease", rubric) == 0
    assert grade_with_rubric("Single species abundance", "Decreases", rubric) == 0
    assert grade_with_rubric("Single species abundance", -12, rubric) == 0


def test_between_thresholds(rubric):
    # 22% clears the 15% threshold but not 30%
    assert grade_with_rubric("Species richness", "+22%", rubric) == scan_grade("Species richness", 22) == 3
    assert grade_with_rubric("Species richness", "+12%", rubric) == scan_grade("Species richness", 12) == 2


def test_no_change_alias(rubric):
    assert grade_with_rubric("species_richness", "No change", rubric) == 1


@given(st.sampled_from(sorted(TABLE)), st.floats(-100, 200, allow_nan=False))
def test_matches_brute_force_scan(measure, change):
    rubric = load_rubric(__import__("conftest").DATA / "rubric.csv")
    assert grade_with_rubric(measure, change, rubric) == scan_grade(measure, change)


@given(st.sampled_from(sorted(TABLE)), st.floats(-100, 200), st.floats(-100, 200))
def test_monotone(measure, x, y):
    rubric = load_rubric(__import__("conftest").DATA / "rubric.csv")
    lo, hi = sorted((x, y))
    assert grade_with_rubric(measure, lo, rubric) <= grade_with_rubric(measure, hi, rubric)


def test_descending_row_means_lower_is_better():
    r = Rubric(("bad", "ok", "good"), (("days", (30.0, 10.0)),))
    assert grade_with_rubric("days", 45, r) == 0
    assert grade_with_rubric("days", 30, r) == 1
    assert grade_with_rubric("days", 3, r) == 2


def test_unknown_measure(rubric):
    with pytest.raises(RubricError, match="unknown reporting measure"):
        grade_with_rubric("biomass", 10, rubric)


def test_non_numeric(rubric):
    with pytest.raises(RubricError, match="non-numeric"):
        grade_with_rubric("Species richness", "lots", rubric)


def test_non_monotone_rejected():
    with pytest.raises(RubricError, match="monotone"):
        Rubric(("a", "b", "c", "d"), (("m", (0.0, 20.0, 10.0)),))


def test_value_table_and_errors():
    text = "[grades]\ngrade,label,value\n0,no,0\n1,some,0.2\n2,all,1\n[thresholds]\nmeasure,0,1,2\nm,,1,5\n"
    r = parse_rubric(text)
    assert [r.grade_value(g) for g in range(3)] == [0, 0.2, 1]
    with pytest.raises(RubricError):
        parse_rubric("[thresholds]\nmeasure,0,1\nm,,x\n")
    with pytest.raises(RubricError):
        parse_rubric("[grades]\ngrade,label\n0,a\n[thresholds]\nmeasure,0,1\nm,,1\n")
