import csv
import math
from dataclasses import replace
from fractions import Fraction

import pytest

from dochire.sim import (
    CSV_HEADER,
    ExperimentRow,
    GenerationError,
    GeneratorConfig,
    aggregate_metrics,
    generate_instance,
    run_sweep,
    write_rows_csv,
)

SMALL = GeneratorConfig(
    n=10,
    min_degree_frac=Fraction(1, 5),
    max_degree_frac=Fraction(1, 2),
    hospital_budget=Fraction(120),
    patient_budget=Fraction(110),
    seed=6,
)


def _degrees(instance):
    return {ec: len(instance.graph.neighbors(ec)) for ec in instance.ids}


def test_same_config_same_instance():
    assert generate_instance(SMALL) == generate_instance(SMALL)


def test_seed_changes_instance():
    variants = {
        tuple(sorted(_degrees(generate_instance(replace(SMALL, seed=s))).items()))
        for s in range(1, 7)
    }
    assert len(variants) > 1


def test_degrees_respect_bounds():
    config = GeneratorConfig(
        n=40, min_degree_frac=Fraction(1, 10), max_degree_frac=Fraction(1, 4), seed=3
    )
    instance = generate_instance(config)
    lo = math.ceil(Fraction(1, 10) * 40)
    hi = math.floor(Fraction(1, 4) * 40)
    for ec, degree in _degrees(instance).items():
        assert lo <= degree <= hi, (ec, degree)


def test_costs_and_quality_in_range():
    instance = generate_instance(SMALL)
    for p in instance.profiles:
        assert Fraction(30) <= p.adapter_cost <= Fraction(50)
        assert Fraction(35) <= p.consult_cost <= Fraction(50)
        assert Fraction(20) <= p.quality <= Fraction(50)
        # Whole-cent granularity.
        assert (p.adapter_cost * 100).denominator == 1
    assert instance.hospital_budget == Fraction(120)
    assert instance.patient_budget == Fraction(110)


@pytest.mark.parametrize(
    "config",
    [
        GeneratorConfig(n=8),  # default max frac floors to degree 0
        GeneratorConfig(n=10, min_degree_frac=Fraction(1, 2), max_degree_frac=Fraction(1, 5)),
        GeneratorConfig(n=10, min_degree_frac=Fraction(0), max_degree_frac=Fraction(1, 5)),
        GeneratorConfig(n=10, min_degree_frac=Fraction(1, 5), max_degree_frac=Fraction(1)),
        GeneratorConfig(n=0),
    ],
)
def test_infeasible_configs_rejected(config):
    with pytest.raises(GenerationError):
        generate_instance(config)


def test_non_cent_ranges_rejected():
    config = replace(SMALL, quality_range=(Fraction(1, 3), Fraction(2)))
    with pytest.raises(GenerationError):
        generate_instance(config)


def test_sweep_shape_and_order():
    rows = run_sweep(SMALL, budgets=[Fraction(50), Fraction(100)], seeds=[1, 2])
    assert len(rows) == 3 * 2 * 2
    keys = [(r.mechanism, r.budget, r.seed) for r in rows]
    assert keys == sorted(keys)
    assert {r.mechanism for r in rows} == {"notbc", "random", "tbc"}
    for row in rows:
        assert row.li_total_payment <= row.budget
        assert row.ds_total_payment <= row.budget
        assert row.interested_set_size >= row.li_winners
        assert row.hired_count == row.ds_winners


def test_sweep_is_deterministic():
    once = run_sweep(SMALL, budgets=[Fraction(80)], seeds=[3, 4])
    again = run_sweep(SMALL, budgets=[Fraction(80)], seeds=[3, 4])
    assert once == again


def test_sweep_rejects_bad_args():
    with pytest.raises(ValueError):
        run_sweep(SMALL, budgets=[], seeds=[1])
    with pytest.raises(ValueError):
        run_sweep(SMALL, budgets=[Fraction(50)], seeds=[1], mechanisms=["vcg"])


def _row(mechanism, budget, seed, interested, hired, li, ds):
    return ExperimentRow(
        mechanism=mechanism,
        budget=budget,
        seed=seed,
        interested_set_size=interested,
        hired_count=hired,
        li_total_payment=li,
        ds_total_payment=ds,
        li_winners=interested,
        ds_winners=hired,
    )


def test_aggregate_hand_recount():
    rows = [
        _row("tbc", Fraction(100), 1, 4, 2, Fraction(30), Fraction(10)),
        _row("tbc", Fraction(100), 2, 6, 4, Fraction(50), Fraction(20)),
        _row("tbc", Fraction(200), 1, 8, 1, Fraction(70), Fraction(5)),
    ]
    cells = aggregate_metrics(rows)
    assert [(c.mechanism, c.budget, c.count) for c in cells] == [
        ("tbc", Fraction(100), 2),
        ("tbc", Fraction(200), 1),
    ]
    first = cells[0]
    assert first.mean_interested == Fraction(5)
    assert first.std_interested == pytest.approx(1.0)
    assert first.mean_li_payment == Fraction(40)
    assert first.std_li_payment == pytest.approx(10.0)
    # Single-row cell: zero spread.
    assert cells[1].std_hired == 0.0


def test_aggregate_rejects_empty():
    with pytest.raises(ValueError):
        aggregate_metrics([])


def test_csv_format(tmp_path):
    rows = run_sweep(SMALL, budgets=[Fraction(50)], seeds=[1])
    path = tmp_path / "rows.csv"
    write_rows_csv(rows, str(path))
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1].startswith("notbc,50.000000,1,")
    with open(path, newline="", encoding="utf-8") as fh:
        parsed = list(csv.DictReader(fh))
    assert len(parsed) == len(rows)
    for record in parsed:
        whole, dot, frac = record["li_total_payment"].partition(".")
        assert dot == "." and len(frac) == 6
        int(record["interested_set_size"])
