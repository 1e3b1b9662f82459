"""Threshold-payment two-fold mechanism.

Allocation is proportional-share greedy: a candidate wins only while its
bid stays within its share of the budget, scaled by marginal value. Fold 1
halves the budget in the winning condition (the classic price of making
threshold payments affordable); fold 2 scans a quality-sorted list and
skips over failures instead of stopping.

Payments never look at the winner's own bid. Fold 1 reruns the greedy on
the market without the winner and takes, over every position of that run,
the best bid that would still have won there; fold 2 pays the minimum of
the proportional budget share and the ratio threshold set by the first
rejected candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..graph import EcId
from ..kernels import RULE_FULL_SHARE, RULE_HALF_SHARE, GreedyStep, coverage_greedy
from ..model import BidProfile, Instance, Outcome
from ..money import Money
from ._market import LeaderMarket, build_leader_market, fold1_outcome

__all__ = [
    "TracePoint",
    "PricingTrace",
    "tbc_li_allocate",
    "tbc_li_price",
    "tbc_ds_allocate",
    "tbc_ds_price",
    "run_tbc",
]


@dataclass(frozen=True)
class TracePoint:
    """One evaluation position of a fold-1 payment run.

    position_cost: the bid at which the priced winner would displace the
    doctor standing at this position (None = unbounded, the position held a
    zero-marginal doctor). share_cap: the winner's proportional share of
    the budget at this position. value: min of the two, the position's
    offer to the winner.
    """

    position: int
    position_cost: Money | None
    share_cap: Money
    value: Money


@dataclass(frozen=True)
class PricingTrace:
    winner: EcId
    points: tuple[TracePoint, ...]
    payment: Money


def tbc_li_allocate(instance: Instance, bids: BidProfile) -> Outcome:
    """Leader fold allocation: greedy ratio order, half-budget share
    condition, stop at the first failure."""
    market = build_leader_market(instance, bids)
    run = coverage_greedy(
        market.masks,
        market.bid_nums,
        market.all_indices,
        RULE_HALF_SHARE,
        market.budget_num,
    )
    return fold1_outcome(run.order, run.informed_indices, None)


def _points_for_winner(
    market: LeaderMarket, winner_index: int, steps: Sequence[GreedyStep]
) -> list[TracePoint]:
    budget_num = market.budget_num
    den = market.den
    points: list[TracePoint] = []
    for j, step in enumerate(steps, start=1):
        if step.obs_marginal == 0:
            # The winner adds nothing at this position; it offers 0.
            zero = Fraction(0)
            points.append(TracePoint(j, zero, zero, zero))
            continue
        share_cap = Fraction(budget_num * step.obs_marginal, den * step.obs_informed_with)
        if step.marginal == 0:
            # Displacing a zero-marginal doctor has no finite cost bound.
            points.append(TracePoint(j, None, share_cap, share_cap))
            continue
        position_cost = Fraction(
            step.obs_marginal * market.bid_nums[step.index], step.marginal * den
        )
        points.append(TracePoint(j, position_cost, share_cap, min(position_cost, share_cap)))
    return points


def tbc_li_price(
    instance: Instance, bids: BidProfile, winners: Sequence[EcId]
) -> tuple[dict[EcId, Money], dict[EcId, PricingTrace]]:
    """Threshold payments for fold-1 winners.

    Winner i is removed as a bidder (it stays informable: payments delete
    the report, not the doctor) and the greedy rerun uses the full-budget
    share condition, extended by the first losing candidate. Each position
    offers min{position_cost, share_cap}; i is paid the best offer.
    """
    market = build_leader_market(instance, bids)
    payments: dict[EcId, Money] = {}
    traces: dict[EcId, PricingTrace] = {}
    for ec in winners:
        winner_index = ec - 1
        pool = [i for i in market.all_indices if i != winner_index]
        run = coverage_greedy(
            market.masks,
            market.bid_nums,
            pool,
            RULE_FULL_SHARE,
            market.budget_num,
            observer=winner_index,
        )
        positions = list(run.steps)
        if run.loser is not None:
            positions.append(run.loser)
        if positions:
            points = _points_for_winner(market, winner_index, positions)
            payment = max(p.value for p in points)
        else:
            # Empty market: the lone hypothetical position caps at the full
            # budget share, which for the first position is the budget.
            payment = market.money(market.budget_num)
            points = [TracePoint(1, None, payment, payment)]
        payments[ec] = payment
        traces[ec] = PricingTrace(winner=ec, points=tuple(points), payment=payment)
    return payments, traces


def tbc_ds_allocate(candidates: Iterable[EcId], instance: Instance, bids: BidProfile) -> Outcome:
    """Hiring fold allocation: quality-per-bid sort, proportional-share
    filter, scanning the whole list (failures are skipped, not terminal)."""
    order = sorted(
        candidates,
        key=lambda ec: (-(instance.profile(ec).quality / bids.consult_bids[ec]), ec),
    )
    budget = instance.patient_budget
    winners: list[EcId] = []
    total_quality = Fraction(0)
    for ec in order:
        quality = instance.profile(ec).quality
        bid = bids.consult_bids[ec]
        # bid/B' <= Q/(Q + D(winners)), cross-multiplied; zero-quality
        # doctors always fail (their share of the budget is zero).
        if quality > 0 and bid * (quality + total_quality) <= budget * quality:
            winners.append(ec)
            total_quality += quality
    return Outcome(
        winners=tuple(winners),
        payments=None,
        sorted_order=tuple(order),
    )


def tbc_ds_price(
    winners: Sequence[EcId],
    sorted_order: Sequence[EcId],
    instance: Instance,
    bids: BidProfile,
) -> dict[EcId, Money]:
    """Fold-2 payments: min of proportional budget share and the ratio
    threshold set by the candidate right after the last accepted one."""
    if not winners:
        return {}
    total_quality = sum(
        (instance.profile(ec).quality for ec in winners), Fraction(0)
    )
    last_pos = max(sorted_order.index(ec) for ec in winners)
    successor = sorted_order[last_pos + 1] if last_pos + 1 < len(sorted_order) else None
    threshold_ratio: Fraction | None = None
    if successor is not None:
        succ_quality = instance.profile(successor).quality
        if succ_quality > 0:
            threshold_ratio = bids.consult_bids[successor] / succ_quality
    payments: dict[EcId, Money] = {}
    for ec in winners:
        quality = instance.profile(ec).quality
        share = quality * instance.patient_budget / total_quality
        if threshold_ratio is None:
            payments[ec] = share
        else:
            payments[ec] = min(share, quality * threshold_ratio)
    return payments


def run_tbc(instance: Instance, bids: BidProfile) -> tuple[Outcome, Outcome]:
    """Both folds, allocation plus payments."""
    fold1_alloc = tbc_li_allocate(instance, bids)
    li_payments, _ = tbc_li_price(instance, bids, fold1_alloc.winners)
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
    return fold1, fold2
