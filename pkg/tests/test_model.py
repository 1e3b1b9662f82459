import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dochire.model import (
    BidProfile,
    QualityParams,
    QualityWeights,
    ValidationError,
    compute_quality,
    dump_instance,
    instance_violations,
    load_bids,
    load_instance,
    quality_contribution,
    quality_value,
    truthful_bids,
    validate_instance,
)

EQUAL_WEIGHTS = QualityWeights(*(Fraction(1, 4),) * 4)


def raw_fixture() -> dict:
    return {
        "weights": ["0.25", "0.25", "0.25", "0.25"],
        "hospital_budget": "10",
        "patient_budget": "8",
        "nodes": [
            {"id": 1, "neighbors": [3], "adapter_cost": "2", "consult_cost": "2", "quality": "5"},
            {"id": 2, "neighbors": [3], "adapter_cost": "1", "consult_cost": "1", "quality": "1"},
            {"id": 3, "neighbors": [1, 2, 4], "adapter_cost": "2.5", "consult_cost": "2.5", "quality": "3"},
            {"id": 4, "neighbors": [3, 5, 6], "adapter_cost": "2", "consult_cost": "2", "quality": "5"},
            {"id": 5, "neighbors": [4], "adapter_cost": "5", "consult_cost": "5", "quality": "4"},
            {"id": 6, "neighbors": [4], "adapter_cost": "4", "consult_cost": "4", "quality": "5"},
        ],
    }


def test_compute_quality_weighted_sum():
    params = QualityParams(Fraction(20), Fraction(30), Fraction(40), Fraction(50))
    weights = QualityWeights(
        Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)
    )
    # 2 + 6 + 12 + 20
    assert compute_quality(params, weights) == Fraction(40)
    assert compute_quality(params, EQUAL_WEIGHTS) == Fraction(35)


def test_quality_value_is_additive(fixture_e1):
    assert quality_value([1, 4], fixture_e1) == Fraction(10)
    assert quality_value([], fixture_e1) == Fraction(0)
    # Iterables are treated as sets: duplicates count once.
    assert quality_value([1, 1, 4], fixture_e1) == Fraction(10)
    assert quality_value(range(1, 7), fixture_e1) == Fraction(23)


def test_quality_contribution_is_own_quality(fixture_e1):
    assert quality_contribution(6, [1, 4], fixture_e1) == Fraction(5)
    assert quality_contribution(2, [], fixture_e1) == Fraction(1)
    with pytest.raises(ValidationError):
        quality_contribution(4, [1, 4], fixture_e1)


@given(
    left=st.sets(st.sampled_from(range(1, 7))),
    right=st.sets(st.sampled_from(range(1, 7))),
)
def test_quality_value_modularity(fixture_e1, left, right):
    union = quality_value(left | right, fixture_e1)
    inter = quality_value(left & right, fixture_e1)
    assert union + inter == quality_value(left, fixture_e1) + quality_value(right, fixture_e1)


def test_validate_accepts_fixture():
    inst = validate_instance(raw_fixture())
    assert inst.ids == (1, 2, 3, 4, 5, 6)
    assert inst.hospital_budget == Fraction(10)
    assert inst.patient_budget == Fraction(8)
    assert inst.profile(3).adapter_cost == Fraction(5, 2)
    assert inst.profile(3).quality == Fraction(3)
    # One-sided neighbor lists symmetrize.
    assert inst.graph.neighbors(5) == frozenset({4})
    assert inst.graph.neighbors(3) == frozenset({1, 2, 4})


def test_quality_object_form_uses_weights():
    raw = raw_fixture()
    raw["weights"] = ["0.1", "0.2", "0.3", "0.4"]
    raw["nodes"][0]["quality"] = {"q": "20", "sr": "30", "e": "40", "h": "50"}
    inst = validate_instance(raw)
    assert inst.profile(1).quality == Fraction(40)
    assert inst.profile(1).quality_params is not None
    assert inst.profile(2).quality_params is None


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda r: r.pop("weights"), "weights"),
        (lambda r: r.__setitem__("weights", ["0.5", "0.5", "0.5", "0.5"]), "sum"),
        (lambda r: r.__setitem__("weights", ["0.5", "0.5"]), "array of 4"),
        (lambda r: r.pop("hospital_budget"), "hospital_budget"),
        (lambda r: r.__setitem__("patient_budget", "-3"), "patient_budget"),
        (lambda r: r["nodes"][0].__setitem__("adapter_cost", "0"), "non-positive"),
        (lambda r: r["nodes"][1].__setitem__("id", 1), "duplicate"),
        (lambda r: r["nodes"][1].__setitem__("id", 9), "contiguous"),
        (lambda r: r["nodes"][0]["neighbors"].append(42), "42"),
        (lambda r: r["nodes"][0]["neighbors"].append(1), "self"),
        (lambda r: r["nodes"][2].__setitem__("quality", {"q": "1"}), "missing"),
    ],
)
def test_validate_rejects(mutate, needle):
    raw = raw_fixture()
    mutate(raw)
    violations = instance_violations(raw)
    assert violations, "expected at least one violation"
    assert any(needle in v for v in violations)


def test_validate_collects_all_violations():
    raw = raw_fixture()
    raw["weights"] = ["1", "1", "1", "1"]
    raw["hospital_budget"] = "nope"
    raw["nodes"][0]["adapter_cost"] = "-2"
    with pytest.raises(ValidationError) as exc:
        validate_instance(raw)
    assert len(exc.value.violations) >= 3


def test_dump_load_round_trip(tmp_path, fixture_e1):
    path = tmp_path / "copy.json"
    dump_instance(fixture_e1, str(path))
    again = load_instance(str(path))
    assert again == fixture_e1
    # Canonical form is stable: dumping the reload is byte-identical.
    path2 = tmp_path / "copy2.json"
    dump_instance(again, str(path2))
    assert path.read_bytes() == path2.read_bytes()
    assert path.read_bytes().endswith(b"\n")


def test_with_budgets_replaces_only_budgets(fixture_e1):
    changed = fixture_e1.with_budgets(Fraction(100), Fraction(7))
    assert changed.hospital_budget == Fraction(100)
    assert changed.patient_budget == Fraction(7)
    assert changed.profiles == fixture_e1.profiles
    assert changed.profile(4).quality == Fraction(5)


def test_truthful_bids_mirror_costs(fixture_e1):
    bids = truthful_bids(fixture_e1)
    assert bids.adapter_bids[3] == Fraction(5, 2)
    assert bids.consult_bids[6] == Fraction(4)
    assert set(bids.adapter_bids) == set(fixture_e1.ids)


def test_load_bids_partial_override(tmp_path, fixture_e1):
    path = tmp_path / "bids.json"
    path.write_text(json.dumps({"adapter_bids": {"3": "1.75"}}), encoding="utf-8")
    bids = load_bids(str(path), fixture_e1)
    assert bids.adapter_bids[3] == Fraction(7, 4)
    assert bids.adapter_bids[1] == Fraction(2)
    assert bids.consult_bids[3] == Fraction(5, 2)


@pytest.mark.parametrize(
    "doc",
    [
        {"adapter_bids": {"3": "0"}},
        {"adapter_bids": {"3": "-1"}},
        {"adapter_bids": {"99": "1"}},
        {"consult_bids": {"two": "1"}},
        {"consult_bids": "nope"},
    ],
)
def test_load_bids_rejects(tmp_path, fixture_e1, doc):
    path = tmp_path / "bids.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(ValidationError):
        load_bids(str(path), fixture_e1)


def test_bid_profile_is_plain_data(fixture_e1):
    bids = truthful_bids(fixture_e1)
    clone = BidProfile(
        adapter_bids=dict(bids.adapter_bids),
        consult_bids=dict(bids.consult_bids),
    )
    assert clone == bids
    assert copy.deepcopy(bids) == bids
