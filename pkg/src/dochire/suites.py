"""Generated-instance test suites behind the verify CLI and the
acceptance gate: feasibility/rationality sweeps, set-function shape
sweeps, and misreport searches over small markets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .mechanisms import run_notbc, run_random, run_tbc
from .model import Instance, truthful_bids
from .rng import SplitMix64, derive_seed
from .sim import GeneratorConfig, generate_instance
from .verify import (
    DeviationGrid,
    DeviationReport,
    MonotonicityWitness,
    Violation,
    check_outcome_properties,
    check_set_function_properties,
    deviation_search,
)

__all__ = [
    "SuiteResult",
    "DeviationSuiteResult",
    "suite_instance",
    "outcome_suite",
    "setfn_suite",
    "deviation_suite",
]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checked: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class DeviationSuiteResult:
    checked: int
    reports: Mapping[str, tuple[DeviationReport, ...]]
    monotonicity: tuple[MonotonicityWitness, ...]

    def ok_for(self, mechanism: str) -> bool:
        return not self.reports.get(mechanism, ())


def suite_instance(index: int, master_seed: int, max_size: int) -> Instance:
    """Deterministic random small instance #index of a suite.

    Sizes cycle over [4, max_size]; degree bounds widen for tiny graphs so
    a feasible degree sequence always exists; budgets are drawn wide enough
    to cover both starved and saturated markets.
    """
    if max_size < 4:
        raise ValueError("max_size must be at least 4")
    rng = SplitMix64(derive_seed(master_seed, 1000 + index))
    n = 4 + rng.randbelow(max_size - 3)
    if n <= 12:
        fracs = (Fraction(3, 10), Fraction(7, 10))
    else:
        fracs = (Fraction(1, 10), Fraction(1, 2))
    hospital = Fraction(rng.uniform_int(40, 60 + 30 * n))
    patient = Fraction(rng.uniform_int(40, 60 + 30 * n))
    config = GeneratorConfig(
        n=n,
        min_degree_frac=fracs[0],
        max_degree_frac=fracs[1],
        hospital_budget=hospital,
        patient_budget=patient,
        seed=derive_seed(master_seed, 2000 + index),
    )
    return generate_instance(config)


def outcome_suite(instances: int = 1000, seed: int = 1, max_size: int = 50) -> SuiteResult:
    """Feasibility + rationality of every mechanism on both folds across
    `instances` generated markets."""
    violations: list[Violation] = []
    for index in range(instances):
        instance = suite_instance(index, seed, max_size)
        bids = truthful_bids(instance)
        runs = {
            "notbc": run_notbc(instance, bids),
            "tbc": run_tbc(instance, bids),
            "random": run_random(instance, bids, seed=derive_seed(seed, 3000 + index)),
        }
        for mechanism, (fold1, fold2) in runs.items():
            for fold, outcome, budget in (
                (1, fold1, instance.hospital_budget),
                (2, fold2, instance.patient_budget),
            ):
                report = check_outcome_properties(instance, bids, outcome, budget, fold)
                for violation in report.violations:
                    witness = dict(violation.witness)
                    witness.update(instance_index=index, mechanism=mechanism, fold=fold)
                    violations.append(Violation(violation.name, witness))
    return SuiteResult("outcome", instances, tuple(violations))


def setfn_suite(
    graphs: int = 10, trials: int = 500, seed: int = 1, max_size: int = 30
) -> SuiteResult:
    """Coverage monotonicity/submodularity and quality modularity over
    random (A subset of B, i) triples on generated instances."""
    violations: list[Violation] = []
    for index in range(graphs):
        instance = suite_instance(index, seed, max_size)
        report = check_set_function_properties(
            instance, trials, derive_seed(seed, 4000 + index)
        )
        for violation in report.violations:
            witness = dict(violation.witness)
            witness.update(instance_index=index)
            violations.append(Violation(violation.name, witness))
    return SuiteResult("setfn", graphs * trials, tuple(violations))


def deviation_suite(
    mechanisms: Sequence[str] = ("tbc", "notbc"),
    instances: int = 200,
    seed: int = 1,
    max_size: int = 8,
    grid: DeviationGrid | None = None,
) -> DeviationSuiteResult:
    """Full misreport grid for every agent of every generated market, both
    folds; collects profitable deviations per mechanism plus fold-1
    allocation-monotonicity witnesses for the threshold mechanism."""
    reports: dict[str, list[DeviationReport]] = {m: [] for m in mechanisms}
    witnesses: list[MonotonicityWitness] = []
    for index in range(instances):
        instance = suite_instance(index, seed, max_size)
        for mechanism in mechanisms:
            for agent in instance.ids:
                result = deviation_search(instance, mechanism, agent, grid)
                reports[mechanism].extend(result.reports)
                witnesses.extend(result.monotonicity)
    return DeviationSuiteResult(
        checked=instances,
        reports={m: tuple(r) for m, r in reports.items()},
        monotonicity=tuple(witnesses),
    )
