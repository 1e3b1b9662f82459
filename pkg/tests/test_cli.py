import json

import pytest

from dochire.cli import execute_command
from dochire.model import load_instance

from conftest import FIXTURE_E1


def run_cli(capsys, *argv):
    code = execute_command(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_arguments_is_usage_error(capsys):
    code, _, _ = run_cli(capsys)
    assert code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "audit")
    assert code == 2


def test_run_tbc_golden_json(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--instance", FIXTURE_E1, "--mechanism", "tbc"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["mechanism"] == "tbc"
    assert doc["fold1"]["winners"] == [4, 3]
    assert doc["fold1"]["payments"] == {"3": "5", "4": "10/3"}
    assert doc["fold1"]["total_payment"] == "25/3"
    assert doc["fold1"]["candidate_set"] == [1, 2, 3, 4, 5, 6]
    assert doc["fold2"]["winners"] == [1, 4]
    assert doc["fold2"]["payments"] == {"1": "4", "4": "4"}
    assert doc["fold2"]["sorted_order"] == [1, 4, 6, 3, 2, 5]
    assert "trace" not in doc


def test_run_tbc_trace(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--instance", FIXTURE_E1, "--mechanism", "tbc", "--trace"
    )
    assert code == 0
    doc = json.loads(out)
    points = doc["trace"]["4"]
    assert [p["position"] for p in points] == [1, 2, 3]
    assert points[0]["position_cost"] == "2.5"
    assert points[2]["position_cost"] is None
    assert points[2]["share_cap"] == "10/3"
    assert points[2]["value"] == "10/3"


def test_run_notbc(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--instance", FIXTURE_E1, "--mechanism", "notbc"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["fold1"]["winners"] == [4, 3, 1, 2]
    assert doc["fold1"]["total_payment"] == "7.5"
    assert doc["fold2"]["winners"] == [1, 4, 6]


def test_run_random_reports_seed(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--instance", FIXTURE_E1, "--mechanism", "random", "--seed", "4"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 4
    assert doc["fold1"]["total_payment"] is not None


def test_run_with_bid_overrides(capsys, tmp_path):
    bids = tmp_path / "bids.json"
    bids.write_text(json.dumps({"adapter_bids": {"3": "4"}}), encoding="utf-8")
    code, out, _ = run_cli(
        capsys,
        "run", "--instance", FIXTURE_E1, "--bids", str(bids), "--mechanism", "tbc",
    )
    assert code == 0
    doc = json.loads(out)
    # At a declared cost of 4, node 3 no longer makes its halved share.
    assert 3 not in doc["fold1"]["winners"]


def test_run_output_file_is_reproducible(capsys, tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    for path in (first, second):
        code, out, _ = run_cli(
            capsys,
            "run", "--instance", FIXTURE_E1, "--mechanism", "tbc",
            "--trace", "--out", str(path),
        )
        assert code == 0
        assert out == ""
    assert first.read_bytes() == second.read_bytes()


def test_run_errors_exit_2(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "run", "--instance", str(tmp_path / "nope.json"), "--mechanism", "tbc"
    )
    assert code == 2 and err
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run_cli(
        capsys, "run", "--instance", str(broken), "--mechanism", "tbc"
    )
    assert code == 2 and "error" in err


def test_gen_round_trip(capsys, tmp_path):
    out = tmp_path / "gen.json"
    code, _, _ = run_cli(
        capsys,
        "gen", "--n", "12", "--seed", "5",
        "--hospital-budget", "300", "--patient-budget", "250",
        "--out", str(out),
    )
    assert code == 0
    instance = load_instance(str(out))
    assert len(instance.ids) == 12
    assert str(instance.hospital_budget) == "300"
    assert str(instance.patient_budget) == "250"

    again = tmp_path / "gen2.json"
    code, _, _ = run_cli(
        capsys,
        "gen", "--n", "12", "--seed", "5",
        "--hospital-budget", "300", "--patient-budget", "250",
        "--out", str(again),
    )
    assert code == 0
    assert out.read_bytes() == again.read_bytes()


def test_gen_infeasible_exits_2(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "gen", "--n", "3", "--out", str(tmp_path / "x.json")
    )
    assert code == 2 and "error" in err


def test_gen_bad_budget_exits_2(capsys, tmp_path):
    code, _, err = run_cli(
        capsys,
        "gen", "--n", "12", "--hospital-budget", "12oz",
        "--out", str(tmp_path / "x.json"),
    )
    assert code == 2 and "error" in err


def test_gen_unwritable_path_exits_2(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "gen", "--n", "12", "--out", str(tmp_path / "missing" / "x.json")
    )
    assert code == 2 and "io error" in err


def test_sweep_csv_and_aggregate(capsys, tmp_path):
    rows_path = tmp_path / "rows.csv"
    agg_path = tmp_path / "agg.csv"
    code, _, _ = run_cli(
        capsys,
        "sweep", "--n", "10", "--seeds", "2", "--budgets", "50:100:50",
        "--out", str(rows_path), "--aggregate-out", str(agg_path),
    )
    assert code == 0
    lines = rows_path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("mechanism,budget,seed,")
    assert len(lines) == 1 + 3 * 2 * 2
    agg_lines = agg_path.read_text(encoding="utf-8").splitlines()
    assert len(agg_lines) == 1 + 3 * 2

    again = tmp_path / "rows2.csv"
    code, _, _ = run_cli(
        capsys,
        "sweep", "--n", "10", "--seeds", "2", "--budgets", "50:100:50",
        "--out", str(again),
    )
    assert code == 0
    assert rows_path.read_bytes() == again.read_bytes()


@pytest.mark.parametrize("budgets", ["100:50:10", "100", "10:20:0", "a:b:c"])
def test_sweep_bad_budget_ranges_exit_2(capsys, tmp_path, budgets):
    code, _, err = run_cli(
        capsys, "sweep", "--n", "10", "--budgets", budgets, "--out", str(tmp_path / "x.csv")
    )
    assert code == 2 and "error" in err


def test_verify_setfn_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "setfn", "--trials", "5", "--max-size", "10"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "setfn"
    assert doc["violations"] == []


def test_verify_outcome_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "outcome", "--trials", "3", "--max-size", "8"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["checked"] == 3
    assert doc["violations"] == []


def test_verify_deviation_exit_matches_findings(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--suite", "deviation", "--mechanism", "notbc",
        "--trials", "2", "--max-size", "6",
    )
    doc = json.loads(out)
    found = bool(doc["profitable_deviations"]) or bool(doc["monotonicity_witnesses"])
    assert code == (1 if found else 0)


def test_verify_out_file_prints_summary(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "verify", "--suite", "setfn", "--trials", "5", "--max-size", "10",
        "--out", str(report),
    )
    assert code == 0
    assert "setfn suite: PASS" in out
    assert json.loads(report.read_text(encoding="utf-8"))["suite"] == "setfn"
