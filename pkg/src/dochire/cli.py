"""Command-line frontend.

Subcommands: gen (write a random instance file), run (one mechanism on one
instance, JSON outcome), sweep (budget-sweep CSV), verify (run a property
suite). Exit codes: 0 success, 1 verify found violations, 2 usage, I/O, or
validation errors. Every command is a pure function of its flags, so
reruns produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .mechanisms import (
    run_notbc,
    run_random,
    run_tbc,
    tbc_ds_allocate,
    tbc_ds_price,
    tbc_li_allocate,
    tbc_li_price,
)
from .model import (
    Instance,
    Outcome,
    ValidationError,
    dump_instance,
    load_bids,
    load_instance,
    truthful_bids,
)
from .money import MoneyError, format_money, parse_money
from .sim import (
    GenerationError,
    GeneratorConfig,
    aggregate_metrics,
    generate_instance,
    run_sweep,
    write_rows_csv,
)
from .suites import deviation_suite, outcome_suite, setfn_suite

__all__ = ["execute_command", "main"]


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dochire",
        description="Budget-feasible two-fold doctor-hiring mechanisms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--n", type=int, required=True, help="number of doctors")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--hospital-budget", default="500")
    gen.add_argument("--patient-budget", default="500")
    gen.add_argument("--out", required=True, help="instance file to write")

    run = sub.add_parser("run", help="run one mechanism on an instance")
    run.add_argument("--instance", required=True)
    run.add_argument("--bids", help="bid-override file (defaults to true costs)")
    run.add_argument("--mechanism", choices=("notbc", "tbc", "random"), required=True)
    run.add_argument("--seed", type=int, default=1, help="seed for the random mechanism")
    run.add_argument("--trace", action="store_true", help="include pricing traces (tbc)")
    run.add_argument("--out", help="write JSON here instead of stdout")

    sweep = sub.add_parser("sweep", help="budget-sweep experiment CSV")
    sweep.add_argument("--n", type=int, default=200)
    sweep.add_argument("--seeds", type=int, default=30, help="number of seeds (1..N)")
    sweep.add_argument("--budgets", default="100:1000:100", help="lo:hi:step")
    sweep.add_argument("--out", required=True, help="CSV file to write")
    sweep.add_argument("--aggregate-out", help="also write per-cell means CSV here")

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("--suite", choices=("outcome", "setfn", "deviation"), required=True)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=1)
    verify.add_argument("--max-size", type=int, default=0, help="0 = suite default")
    verify.add_argument(
        "--mechanism",
        choices=("tbc", "notbc"),
        default="tbc",
        help="mechanism for the deviation suite",
    )
    verify.add_argument("--out", help="write the JSON report here")
    return parser


def _money_doc(value) -> Any:
    return format_money(value) if value is not None else None


def _outcome_doc(outcome: Outcome) -> dict[str, Any]:
    doc: dict[str, Any] = {"winners": [int(ec) for ec in outcome.winners]}
    if outcome.payments is not None:
        doc["payments"] = {str(ec): format_money(p) for ec, p in outcome.payments.items()}
        doc["total_payment"] = _money_doc(outcome.total_payment)
    if outcome.informed is not None:
        doc["informed"] = sorted(int(ec) for ec in outcome.informed)
    if outcome.candidate_set is not None:
        doc["candidate_set"] = sorted(int(ec) for ec in outcome.candidate_set)
    if outcome.sorted_order is not None:
        doc["sorted_order"] = [int(ec) for ec in outcome.sorted_order]
    return doc


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    config = GeneratorConfig(
        n=args.n,
        hospital_budget=parse_money(args.hospital_budget),
        patient_budget=parse_money(args.patient_budget),
        seed=args.seed,
    )
    instance = generate_instance(config)
    dump_instance(instance, args.out)
    return 0


def _cmd_run(args) -> int:
    instance = load_instance(args.instance)
    bids = load_bids(args.bids, instance) if args.bids else truthful_bids(instance)
    doc: dict[str, Any] = {"mechanism": args.mechanism}
    if args.mechanism == "notbc":
        fold1, fold2 = run_notbc(instance, bids)
    elif args.mechanism == "random":
        fold1, fold2 = run_random(instance, bids, args.seed)
        doc["seed"] = args.seed
    else:
        fold1_alloc = tbc_li_allocate(instance, bids)
        li_payments, traces = tbc_li_price(instance, bids, fold1_alloc.winners)
        fold1 = Outcome(
            winners=fold1_alloc.winners,
            payments=li_payments,
            total_payment=sum(li_payments.values(), Fraction(0)),
            informed=fold1_alloc.informed,
            candidate_set=fold1_alloc.candidate_set,
        )
        fold2_alloc = tbc_ds_allocate(sorted(fold1.candidate_set or ()), instance, bids)
        ds_payments = tbc_ds_price(
            fold2_alloc.winners, fold2_alloc.sorted_order or (), instance, bids
        )
        fold2 = Outcome(
            winners=fold2_alloc.winners,
            payments=ds_payments,
            total_payment=sum(ds_payments.values(), Fraction(0)),
            sorted_order=fold2_alloc.sorted_order,
        )
        if args.trace:
            doc["trace"] = {
                str(ec): [
                    {
                        "position": point.position,
                        "position_cost": _money_doc(point.position_cost),
                        "share_cap": format_money(point.share_cap),
                        "value": format_money(point.value),
                    }
                    for point in trace.points
                ]
                for ec, trace in traces.items()
            }
    doc["fold1"] = _outcome_doc(fold1)
    doc["fold2"] = _outcome_doc(fold2)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _parse_budget_range(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--budgets must be lo:hi:step, got {text!r}")
    lo, hi, step = (parse_money(p) for p in parts)
    if step <= 0 or hi < lo:
        raise _UsageError(f"empty budget range {text!r}")
    budgets = []
    value = lo
    while value <= hi:
        budgets.append(value)
        value += step
    return budgets


def _cmd_sweep(args) -> int:
    if args.seeds < 1:
        raise _UsageError("--seeds must be at least 1")
    config = GeneratorConfig(n=args.n)
    rows = run_sweep(config, _parse_budget_range(args.budgets), list(range(1, args.seeds + 1)))
    write_rows_csv(rows, args.out)
    if args.aggregate_out:
        aggregates = aggregate_metrics(rows)
        with open(args.aggregate_out, "w", encoding="utf-8") as fh:
            fh.write(
                "mechanism,budget,count,mean_interested,std_interested,"
                "mean_hired,std_hired,mean_li_payment,std_li_payment,"
                "mean_ds_payment,std_ds_payment\n"
            )
            for agg in aggregates:
                fh.write(
                    f"{agg.mechanism},{format_money(agg.budget)},{agg.count},"
                    f"{float(agg.mean_interested):.6f},{agg.std_interested:.6f},"
                    f"{float(agg.mean_hired):.6f},{agg.std_hired:.6f},"
                    f"{float(agg.mean_li_payment):.6f},{agg.std_li_payment:.6f},"
                    f"{float(agg.mean_ds_payment):.6f},{agg.std_ds_payment:.6f}\n"
                )
    return 0


def _violation_doc(violation) -> dict[str, Any]:
    witness = {
        key: (format_money(v) if isinstance(v, Fraction) else v)
        for key, v in violation.witness.items()
    }
    return {"name": violation.name, "witness": witness}


def _cmd_verify(args) -> int:
    if args.suite == "outcome":
        result = outcome_suite(
            instances=args.trials, seed=args.seed, max_size=args.max_size or 50
        )
        doc = {
            "suite": "outcome",
            "checked": result.checked,
            "violations": [_violation_doc(v) for v in result.violations],
        }
        failed = not result.ok
    elif args.suite == "setfn":
        result = setfn_suite(
            graphs=10, trials=args.trials, seed=args.seed, max_size=args.max_size or 30
        )
        doc = {
            "suite": "setfn",
            "checked": result.checked,
            "violations": [_violation_doc(v) for v in result.violations],
        }
        failed = not result.ok
    else:
        result = deviation_suite(
            mechanisms=(args.mechanism,),
            instances=args.trials,
            seed=args.seed,
            max_size=args.max_size or 8,
        )
        reports = result.reports[args.mechanism]
        doc = {
            "suite": "deviation",
            "mechanism": args.mechanism,
            "checked": result.checked,
            "profitable_deviations": [
                {
                    "agent": int(r.agent),
                    "fold": r.fold,
                    "true_bid": format_money(r.true_bid),
                    "deviant_bid": format_money(r.deviant_bid),
                    "gain": format_money(r.gain),
                }
                for r in reports
            ],
            "monotonicity_witnesses": [
                {
                    "agent": int(w.agent),
                    "fold": w.fold,
                    "kind": w.kind,
                    "true_bid": format_money(w.true_bid),
                    "deviant_bid": format_money(w.deviant_bid),
                }
                for w in result.monotonicity
            ],
        }
        failed = bool(reports) or bool(result.monotonicity)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    if args.out:
        summary = "FAIL" if failed else "PASS"
        sys.stdout.write(f"{doc['suite']} suite: {summary} ({doc['checked']} checked)\n")
    return 1 if failed else 0


def execute_command(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through.
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_verify(args)
    except (_UsageError, ValidationError, GenerationError, MoneyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(execute_command())


if __name__ == "__main__":  # pragma: no cover
    main()
