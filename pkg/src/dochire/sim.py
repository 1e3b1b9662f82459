"""Random-instance generation and the budget-sweep experiment.

Instances follow the experimental setup the mechanisms are compared under:
a degree-bounded random graph (every degree between fixed fractions of n),
uniform adapter costs, consultancy costs, and scalar qualities. The graph
model is pinned for reproducibility: degrees are sampled uniformly in the
bound interval, realized by largest-first matching, then randomized by
double-edge switches; all randomness flows from SplitMix64 subseeds, so a
config is a complete recipe for its instance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import EcId, SocialGraph
from .mechanisms import run_notbc, run_random, run_tbc
from .model import EcProfile, Instance, QualityWeights, truthful_bids
from .money import Money, format_money_fixed
from .rng import SplitMix64, derive_seed

__all__ = [
    "GeneratorConfig",
    "GenerationError",
    "ExperimentRow",
    "AggregateRow",
    "MECHANISMS",
    "generate_instance",
    "run_sweep",
    "aggregate_metrics",
    "write_rows_csv",
    "CSV_HEADER",
]

MECHANISMS = ("notbc", "random", "tbc")

CSV_HEADER = (
    "mechanism,budget,seed,interested_set_size,hired_count,"
    "li_total_payment,ds_total_payment,li_winners,ds_winners"
)

# Subseed streams.
_DEGREES, _SWITCH, _ADAPTER, _CONSULT, _QUALITY, _PARITY = 11, 12, 13, 14, 15, 16


class GenerationError(ValueError):
    """Raised for configs that cannot produce a valid instance."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Recipe for one random instance.

    Degree bounds are fractions of n; cost/quality ranges are inclusive and
    sampled at whole-cent granularity so every drawn value is exact.
    """

    n: int
    min_degree_frac: Fraction = Fraction(1, 100)
    max_degree_frac: Fraction = Fraction(1, 10)
    adapter_cost_range: tuple[Money, Money] = (Fraction(30), Fraction(50))
    consult_cost_range: tuple[Money, Money] = (Fraction(35), Fraction(50))
    quality_range: tuple[Fraction, Fraction] = (Fraction(20), Fraction(50))
    hospital_budget: Money = Fraction(500)
    patient_budget: Money = Fraction(500)
    seed: int = 1


@dataclass(frozen=True)
class ExperimentRow:
    """One (mechanism, budget, seed) measurement of the two-fold pipeline."""

    mechanism: str
    budget: Money
    seed: int
    interested_set_size: int
    hired_count: int
    li_total_payment: Money
    ds_total_payment: Money
    li_winners: int
    ds_winners: int


@dataclass(frozen=True)
class AggregateRow:
    """Per-(mechanism, budget) means and standard deviations."""

    mechanism: str
    budget: Money
    count: int
    mean_interested: Fraction
    std_interested: float
    mean_hired: Fraction
    std_hired: float
    mean_li_payment: Fraction
    std_li_payment: float
    mean_ds_payment: Fraction
    std_ds_payment: float


def _degree_bounds(config: GeneratorConfig) -> tuple[int, int]:
    if not (0 < config.min_degree_frac <= config.max_degree_frac < 1):
        raise GenerationError("degree fractions must satisfy 0 < min <= max < 1")
    lo = math.ceil(config.min_degree_frac * config.n)
    hi = math.floor(config.max_degree_frac * config.n)
    if lo < 1 or hi < lo or hi > config.n - 1:
        raise GenerationError(
            f"infeasible degree bounds [{lo}, {hi}] for n={config.n}"
        )
    return lo, hi


def _sample_degrees(config: GeneratorConfig, lo: int, hi: int) -> list[int]:
    rng = SplitMix64(derive_seed(config.seed, _DEGREES))
    degrees = [rng.uniform_int(lo, hi) for _ in range(config.n)]
    if sum(degrees) % 2 == 1:
        parity = SplitMix64(derive_seed(config.seed, _PARITY))
        for _ in range(4 * config.n):
            idx = parity.randbelow(config.n)
            if degrees[idx] < hi:
                degrees[idx] += 1
                return degrees
            if degrees[idx] > lo:
                degrees[idx] -= 1
                return degrees
        raise GenerationError("parity-impossible degree sequence")
    return degrees


def _realize_degrees(degrees: Sequence[int]) -> set[tuple[int, int]]:
    """Largest-first greedy realization (0-based endpoints), or error."""
    n = len(degrees)
    remaining = [[d, i] for i, d in enumerate(degrees)]
    edges: set[tuple[int, int]] = set()
    for _ in range(n):
        remaining.sort(key=lambda t: (-t[0], t[1]))
        d, v = remaining[0]
        if d == 0:
            break
        if d > n - 1 or d > len(remaining) - 1:
            raise GenerationError("degree sequence not realizable")
        remaining[0][0] = 0
        for k in range(1, d + 1):
            if remaining[k][0] == 0:
                raise GenerationError("degree sequence not realizable")
            remaining[k][0] -= 1
            u = remaining[k][1]
            edges.add((min(v, u), max(v, u)))
    if any(t[0] != 0 for t in remaining):
        raise GenerationError("degree sequence not realizable")
    return edges


def _switch_edges(edges: set[tuple[int, int]], seed: int) -> set[tuple[int, int]]:
    """Randomize by double-edge switches; preserves every degree exactly."""
    rng = SplitMix64(derive_seed(seed, _SWITCH))
    edge_list = sorted(edges)
    edge_set = set(edge_list)
    count = len(edge_list)
    if count < 2:
        return edge_set
    for _ in range(10 * count):
        i = rng.randbelow(count)
        j = rng.randbelow(count)
        if i == j:
            continue
        a, b = edge_list[i]
        c, d = edge_list[j]
        if rng.randbelow(2):
            c, d = d, c
        # Propose (a,c) and (b,d).
        if a == c or b == d:
            continue
        e1 = (min(a, c), max(a, c))
        e2 = (min(b, d), max(b, d))
        if e1 in edge_set or e2 in edge_set:
            continue
        edge_set.discard(edge_list[i])
        edge_set.discard(edge_list[j])
        edge_set.add(e1)
        edge_set.add(e2)
        edge_list[i] = e1
        edge_list[j] = e2
    return edge_set


def _sample_money_range(
    bounds: tuple[Fraction, Fraction], n: int, seed: int, stream: int, what: str
) -> list[Fraction]:
    lo, hi = bounds
    if lo <= 0 or hi < lo:
        raise GenerationError(f"{what} range must be positive and nonempty")
    lo_cents = lo * 100
    hi_cents = hi * 100
    if lo_cents.denominator != 1 or hi_cents.denominator != 1:
        raise GenerationError(f"{what} range endpoints must be whole cents")
    rng = SplitMix64(derive_seed(seed, stream))
    return [
        Fraction(rng.uniform_int(int(lo_cents), int(hi_cents)), 100) for _ in range(n)
    ]


def generate_instance(config: GeneratorConfig) -> Instance:
    """Seed-deterministic instance: same config, same instance, always."""
    if config.n < 1:
        raise GenerationError("n must be at least 1")
    lo, hi = _degree_bounds(config)
    degrees = _sample_degrees(config, lo, hi)
    edges = _switch_edges(_realize_degrees(degrees), config.seed)

    adjacency: dict[EcId, set[EcId]] = {EcId(i + 1): set() for i in range(config.n)}
    for u, v in edges:
        adjacency[EcId(u + 1)].add(EcId(v + 1))
        adjacency[EcId(v + 1)].add(EcId(u + 1))
    graph = SocialGraph(
        nodes=frozenset(adjacency),
        adjacency={v: frozenset(s) for v, s in adjacency.items()},
    )

    adapter = _sample_money_range(
        config.adapter_cost_range, config.n, config.seed, _ADAPTER, "adapter cost"
    )
    consult = _sample_money_range(
        config.consult_cost_range, config.n, config.seed, _CONSULT, "consult cost"
    )
    quality = _sample_money_range(
        config.quality_range, config.n, config.seed, _QUALITY, "quality"
    )
    profiles = tuple(
        EcProfile(
            id=EcId(i + 1),
            adapter_cost=adapter[i],
            consult_cost=consult[i],
            quality=quality[i],
        )
        for i in range(config.n)
    )
    quarter = Fraction(1, 4)
    return Instance(
        graph=graph,
        profiles=profiles,
        weights=QualityWeights(quarter, quarter, quarter, quarter),
        hospital_budget=config.hospital_budget,
        patient_budget=config.patient_budget,
    )


def run_sweep(
    config: GeneratorConfig,
    budgets: Sequence[Money],
    seeds: Sequence[int],
    mechanisms: Iterable[str] = MECHANISMS,
) -> list[ExperimentRow]:
    """One row per (mechanism, budget, seed), both budgets set to the swept
    value; rows in canonical order."""
    chosen = sorted(set(mechanisms))
    unknown = [m for m in chosen if m not in MECHANISMS]
    if unknown:
        raise ValueError(f"unknown mechanisms: {unknown}")
    if not budgets or not seeds or not chosen:
        raise ValueError("budgets, seeds, and mechanisms must be nonempty")

    rows: list[ExperimentRow] = []
    for seed in seeds:
        base = generate_instance(replace(config, seed=seed))
        bids = truthful_bids(base)
        for budget in budgets:
            instance = base.with_budgets(budget, budget)
            for mechanism in chosen:
                if mechanism == "notbc":
                    fold1, fold2 = run_notbc(instance, bids)
                elif mechanism == "tbc":
                    fold1, fold2 = run_tbc(instance, bids)
                else:
                    fold1, fold2 = run_random(instance, bids, seed)
                rows.append(
                    ExperimentRow(
                        mechanism=mechanism,
                        budget=budget,
                        seed=seed,
                        interested_set_size=len(fold1.candidate_set or ()),
                        hired_count=len(fold2.winners),
                        li_total_payment=fold1.total_payment or Fraction(0),
                        ds_total_payment=fold2.total_payment or Fraction(0),
                        li_winners=len(fold1.winners),
                        ds_winners=len(fold2.winners),
                    )
                )
    rows.sort(key=lambda r: (r.mechanism, r.budget, r.seed))
    return rows


def _mean(values: Sequence[Fraction]) -> Fraction:
    return sum(values, Fraction(0)) / len(values)


def _std(values: Sequence[Fraction], mean: Fraction) -> float:
    var = sum(((v - mean) ** 2 for v in values), Fraction(0)) / len(values)
    return math.sqrt(var)


def aggregate_metrics(rows: Sequence[ExperimentRow]) -> list[AggregateRow]:
    """Group rows by (mechanism, budget); population standard deviations."""
    if not rows:
        raise ValueError("no rows to aggregate")
    groups: dict[tuple[str, Money], list[ExperimentRow]] = {}
    for row in rows:
        groups.setdefault((row.mechanism, row.budget), []).append(row)
    out: list[AggregateRow] = []
    for (mechanism, budget) in sorted(groups):
        cell = groups[(mechanism, budget)]
        metrics = {
            "interested": [Fraction(r.interested_set_size) for r in cell],
            "hired": [Fraction(r.hired_count) for r in cell],
            "li": [r.li_total_payment for r in cell],
            "ds": [r.ds_total_payment for r in cell],
        }
        means = {k: _mean(v) for k, v in metrics.items()}
        out.append(
            AggregateRow(
                mechanism=mechanism,
                budget=budget,
                count=len(cell),
                mean_interested=means["interested"],
                std_interested=_std(metrics["interested"], means["interested"]),
                mean_hired=means["hired"],
                std_hired=_std(metrics["hired"], means["hired"]),
                mean_li_payment=means["li"],
                std_li_payment=_std(metrics["li"], means["li"]),
                mean_ds_payment=means["ds"],
                std_ds_payment=_std(metrics["ds"], means["ds"]),
            )
        )
    return out


def write_rows_csv(rows: Sequence[ExperimentRow], path: str) -> None:
    """Pinned header; money cells with exactly six fractional digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in rows:
            writer.writerow(
                [
                    r.mechanism,
                    format_money_fixed(r.budget),
                    r.seed,
                    r.interested_set_size,
                    r.hired_count,
                    format_money_fixed(r.li_total_payment),
                    format_money_fixed(r.ds_total_payment),
                    r.li_winners,
                    r.ds_winners,
                ]
            )
