"""Executable property checks: feasibility, rationality, set-function
shape, and a brute-force misreport search.

Everything here treats violations as data, not exceptions: checks return
reports carrying replayable witnesses, and the misreport search reruns a
mechanism over a bid grid while utilities are always measured against the
TRUE costs from the instance (mechanisms only ever see the bid profile).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .graph import EcId, SocialGraph, activation_value
from .mechanisms import run_notbc, run_tbc, tbc_li_price
from .model import BidProfile, Instance, Outcome, quality_value, truthful_bids
from .money import Money

__all__ = [
    "Violation",
    "PropertyReport",
    "DeviationReport",
    "MonotonicityWitness",
    "DeviationGrid",
    "DeviationSearchResult",
    "check_outcome_properties",
    "check_set_function_properties",
    "deviation_search",
]


@dataclass(frozen=True)
class Violation:
    """One failed check with enough context to replay it."""

    name: str
    witness: Mapping[str, Any]


@dataclass(frozen=True)
class PropertyReport:
    name: str
    trials: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class DeviationReport:
    """A strictly profitable misreport found by the search."""

    agent: EcId
    fold: int
    true_bid: Money
    deviant_bid: Money
    truthful_utility: Money
    deviant_utility: Money
    gain: Fraction


@dataclass(frozen=True)
class MonotonicityWitness:
    """An allocation flip in the wrong direction: a winner ejected by
    lowering its bid, or a loser admitted by raising it."""

    agent: EcId
    fold: int
    kind: str
    true_bid: Money
    deviant_bid: Money


def _default_multipliers() -> tuple[Fraction, ...]:
    # 25 evenly spaced multiples of the true bid over [0.2x, 3x], plus the
    # identity 1x so the zero-gain case is always probed.
    lo, hi, steps = Fraction(1, 5), Fraction(3), 25
    step = (hi - lo) / (steps - 1)
    values = {lo + k * step for k in range(steps)}
    values.add(Fraction(1))
    return tuple(sorted(values))


@dataclass(frozen=True)
class DeviationGrid:
    """Finite deviant-bid grid: multiples of the true bid, optionally
    extended with the exact threshold values observed in the truthful
    run's pricing data (the knife-edges where allocation flips)."""

    multipliers: tuple[Fraction, ...] = field(default_factory=_default_multipliers)
    include_trace_thresholds: bool = True


@dataclass(frozen=True)
class DeviationSearchResult(Sequence):
    """Sequence of profitable DeviationReports, plus any allocation
    monotonicity witnesses seen along the way."""

    reports: tuple[DeviationReport, ...]
    monotonicity: tuple[MonotonicityWitness, ...]

    def __iter__(self):
        return iter(self.reports)

    def __len__(self) -> int:
        return len(self.reports)

    def __getitem__(self, item):
        return self.reports[item]


def check_outcome_properties(
    instance: Instance,
    bids: BidProfile,
    outcome: Outcome,
    budget: Money,
    fold: int = 1,
) -> PropertyReport:
    """Feasibility and rationality of one fold's outcome.

    Checks: total payment within `budget`; every winner paid at least its
    declared bid (fold picks which bid vector applies); the payment map
    keyed exactly by the winners; the recorded total consistent.
    """
    bid_map = bids.adapter_bids if fold == 1 else bids.consult_bids
    violations: list[Violation] = []
    payments = outcome.payments or {}
    total = sum(payments.values(), Fraction(0))
    if outcome.total_payment is not None and outcome.total_payment != total:
        violations.append(
            Violation("total-consistency", {"recorded": outcome.total_payment, "sum": total})
        )
    if total > budget:
        violations.append(
            Violation("budget-feasibility", {"total": total, "budget": budget, "fold": fold})
        )
    if set(payments) != set(outcome.winners):
        violations.append(
            Violation(
                "payment-keys",
                {"winners": sorted(outcome.winners), "paid": sorted(payments)},
            )
        )
    for ec in outcome.winners:
        paid = payments.get(ec)
        if paid is not None and paid < bid_map[ec]:
            violations.append(
                Violation(
                    "individual-rationality",
                    {"agent": ec, "paid": paid, "bid": bid_map[ec], "fold": fold},
                )
            )
    return PropertyReport("outcome", 1, tuple(violations))


def _sample_chain(rng, universe: Sequence) -> tuple[set, set, Any] | None:
    """Random (A subset of B, outsider i); None if no outsider exists."""
    inner: set = set()
    outer: set = set()
    for item in universe:
        bucket = rng.randbelow(4)
        if bucket == 0:
            inner.add(item)
            outer.add(item)
        elif bucket == 1:
            outer.add(item)
    outside = [item for item in universe if item not in outer]
    if not outside:
        return None
    return inner, outer, outside[rng.randbelow(len(outside))]


def _check_coverage_shape(
    value_fn: Callable[[set], int],
    universe: Sequence,
    trials: int,
    rng,
    violations: list[Violation],
) -> None:
    """Monotone value and diminishing marginal returns on random chains."""
    for _ in range(trials):
        sampled = _sample_chain(rng, universe)
        if sampled is None:
            continue
        inner, outer, item = sampled
        v_inner = value_fn(inner)
        v_outer = value_fn(outer)
        if v_inner > v_outer:
            violations.append(
                Violation(
                    "monotone",
                    {"A": sorted(inner), "B": sorted(outer), "vA": v_inner, "vB": v_outer},
                )
            )
        gain_inner = value_fn(inner | {item}) - v_inner
        gain_outer = value_fn(outer | {item}) - v_outer
        if gain_inner < gain_outer:
            violations.append(
                Violation(
                    "submodular",
                    {
                        "A": sorted(inner),
                        "B": sorted(outer),
                        "i": item,
                        "gain_at_A": gain_inner,
                        "gain_at_B": gain_outer,
                    },
                )
            )


def _check_additive_shape(
    value_fn: Callable[[set], Fraction],
    universe: Sequence,
    trials: int,
    rng,
    violations: list[Violation],
) -> None:
    """D(A|B) + D(A&B) == D(A) + D(B) on random pairs."""
    for _ in range(trials):
        a: set = set()
        b: set = set()
        for item in universe:
            bucket = rng.randbelow(4)
            if bucket in (0, 1):
                a.add(item)
            if bucket in (0, 2):
                b.add(item)
        lhs = value_fn(a | b) + value_fn(a & b)
        rhs = value_fn(a) + value_fn(b)
        if lhs != rhs:
            violations.append(
                Violation("modular", {"A": sorted(a), "B": sorted(b), "lhs": lhs, "rhs": rhs})
            )


def check_set_function_properties(subject, trials: int, seed: int) -> PropertyReport:
    """Shape checks for the two value functions.

    subject may be a SocialGraph (coverage checks), an Instance (coverage
    checks on its graph plus modularity of total quality), or a tuple
    (value_fn, universe, kind) with kind "coverage" or "additive" for
    checking an arbitrary function, e.g. a deliberately broken test double.
    """
    from .rng import SplitMix64

    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = SplitMix64(seed)
    violations: list[Violation] = []
    if isinstance(subject, SocialGraph):
        universe = sorted(subject.nodes)
        for ec in universe:
            if activation_value([ec], subject) != len(subject.neighbors(ec)):
                violations.append(Violation("singleton-value", {"i": ec}))
        _check_coverage_shape(
            lambda s: activation_value(s, subject), universe, trials, rng, violations
        )
        name = "coverage-shape"
    elif isinstance(subject, Instance):
        graph = subject.graph
        universe = sorted(graph.nodes)
        _check_coverage_shape(
            lambda s: activation_value(s, graph), universe, trials, rng, violations
        )
        _check_additive_shape(
            lambda s: quality_value(s, subject), universe, trials, rng, violations
        )
        name = "value-function-shape"
    else:
        value_fn, universe, kind = subject
        universe = sorted(universe)
        if kind == "coverage":
            _check_coverage_shape(value_fn, universe, trials, rng, violations)
        elif kind == "additive":
            _check_additive_shape(value_fn, universe, trials, rng, violations)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        name = f"{kind}-shape"
    return PropertyReport(name, trials, tuple(violations))


def _run_mechanism(mechanism: str, instance: Instance, bids: BidProfile):
    if mechanism == "notbc":
        return run_notbc(instance, bids)
    if mechanism == "tbc":
        return run_tbc(instance, bids)
    raise ValueError(f"unknown mechanism {mechanism!r}")


def _fold_view(outcomes, fold: int) -> Outcome:
    return outcomes[0] if fold == 1 else outcomes[1]


def _utility(outcome: Outcome, agent: EcId, true_cost: Money) -> Fraction:
    if outcome.payments and agent in outcome.payments:
        return outcome.payments[agent] - true_cost
    return Fraction(0)


def _harvest_thresholds(instance: Instance, bids: BidProfile) -> set[Fraction]:
    """Exact bid-space boundary values from the truthful threshold-payment
    run: every position cost, share cap, point value and payment of the
    fold-1 traces, plus the fold-2 payment terms."""
    values: set[Fraction] = set()
    fold1, fold2 = run_tbc(instance, bids)
    _, traces = tbc_li_price(instance, bids, fold1.winners)
    for trace in traces.values():
        values.add(trace.payment)
        for point in trace.points:
            if point.position_cost is not None:
                values.add(point.position_cost)
            values.add(point.share_cap)
            values.add(point.value)
    if fold2.payments:
        values.update(fold2.payments.values())
        total_quality = quality_value(fold2.winners, instance)
        if total_quality > 0:
            for ec in fold2.winners:
                values.add(
                    instance.profile(ec).quality * instance.patient_budget / total_quality
                )
    return {v for v in values if v > 0}


def deviation_search(
    instance: Instance,
    mechanism: str,
    agent: EcId,
    grid: DeviationGrid | None = None,
) -> DeviationSearchResult:
    """Try every grid bid for `agent` in both folds of `mechanism`.

    A report is emitted for every strictly profitable misreport (utility
    measured against true costs, per the fold whose bid was altered).
    Fold-1 allocation flips in the wrong direction are collected as
    monotonicity witnesses for the threshold mechanism.
    """
    if mechanism not in ("notbc", "tbc"):
        raise ValueError(f"unknown mechanism {mechanism!r}")
    if agent not in instance.ids:
        raise ValueError(f"unknown agent {agent}")
    grid = grid or DeviationGrid()
    truthful = truthful_bids(instance)
    baseline = _run_mechanism(mechanism, instance, truthful)
    thresholds: set[Fraction] = set()
    if grid.include_trace_thresholds and mechanism == "tbc":
        thresholds = _harvest_thresholds(instance, truthful)

    reports: list[DeviationReport] = []
    witnesses: list[MonotonicityWitness] = []
    profile = instance.profile(agent)
    for fold in (1, 2):
        true_cost = profile.adapter_cost if fold == 1 else profile.consult_cost
        true_bid = (truthful.adapter_bids if fold == 1 else truthful.consult_bids)[agent]
        base_outcome = _fold_view(baseline, fold)
        base_utility = _utility(base_outcome, agent, true_cost)
        was_winner = agent in base_outcome.winners

        candidates = {true_bid * mult for mult in grid.multipliers}
        candidates |= thresholds
        for deviant in sorted(candidates):
            if deviant <= 0 or deviant == true_bid:
                continue
            if fold == 1:
                adapter = dict(truthful.adapter_bids)
                adapter[agent] = deviant
                dev_bids = BidProfile(adapter_bids=adapter, consult_bids=truthful.consult_bids)
            else:
                consult = dict(truthful.consult_bids)
                consult[agent] = deviant
                dev_bids = BidProfile(adapter_bids=truthful.adapter_bids, consult_bids=consult)
            dev_outcome = _fold_view(_run_mechanism(mechanism, instance, dev_bids), fold)
            dev_utility = _utility(dev_outcome, agent, true_cost)
            gain = dev_utility - base_utility
            if gain > 0:
                reports.append(
                    DeviationReport(
                        agent=agent,
                        fold=fold,
                        true_bid=true_bid,
                        deviant_bid=deviant,
                        truthful_utility=base_utility,
                        deviant_utility=dev_utility,
                        gain=gain,
                    )
                )
            if mechanism == "tbc" and fold == 1:
                now_winner = agent in dev_outcome.winners
                if was_winner and deviant < true_bid and not now_winner:
                    witnesses.append(
                        MonotonicityWitness(
                            agent, fold, "lowered-winner-ejected", true_bid, deviant
                        )
                    )
                if not was_winner and deviant > true_bid and now_winner:
                    witnesses.append(
                        MonotonicityWitness(
                            agent, fold, "raised-loser-admitted", true_bid, deviant
                        )
                    )
    reports.sort(key=lambda r: (r.agent, r.fold, r.deviant_bid))
    return DeviationSearchResult(tuple(reports), tuple(witnesses))
