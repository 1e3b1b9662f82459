"""Pay-your-bid two-fold mechanism.

Fold 1 greedily takes the best coverage-gain-per-bid doctor and keeps any
it can still afford, deducting bids from the hospital budget as it goes;
fold 2 does the same with quality-per-bid under the patient budget. Winners
are paid exactly what they declared, which is what makes the mechanism
manipulable: a winner with budget slack can overbid and pocket the slack.
"""

from __future__ import annotations

from fractions import Fraction

from ..graph import EcId
from ..kernels import RULE_AFFORD, coverage_greedy
from ..model import BidProfile, Instance, Outcome
from ._market import build_leader_market, fold1_outcome

__all__ = ["notbc_li", "notbc_ds", "run_notbc"]


def notbc_li(instance: Instance, bids: BidProfile) -> Outcome:
    """Leader fold: greedy ratio order, affordability-only filter, pay bids."""
    market = build_leader_market(instance, bids)
    run = coverage_greedy(
        market.masks,
        market.bid_nums,
        market.all_indices,
        RULE_AFFORD,
        market.budget_num,
    )
    payments = {EcId(i + 1): bids.adapter_bids[EcId(i + 1)] for i in run.order}
    return fold1_outcome(run.order, run.informed_indices, payments)


def notbc_ds(candidates, instance: Instance, bids: BidProfile) -> Outcome:
    """Hiring fold: greedy quality-per-bid with affordability filter.

    The quality function is additive, so the round-by-round argmax equals a
    single descending sort (ties to the lower id).
    """
    order = sorted(
        candidates,
        key=lambda ec: (-(instance.profile(ec).quality / bids.consult_bids[ec]), ec),
    )
    remaining = instance.patient_budget
    winners: list[EcId] = []
    payments: dict[EcId, Fraction] = {}
    for ec in order:
        bid = bids.consult_bids[ec]
        if bid <= remaining:
            winners.append(ec)
            payments[ec] = bid
            remaining -= bid
    return Outcome(
        winners=tuple(winners),
        payments=payments,
        total_payment=sum(payments.values(), Fraction(0)),
        sorted_order=tuple(order),
    )


def run_notbc(instance: Instance, bids: BidProfile) -> tuple[Outcome, Outcome]:
    """Both folds: leaders under the hospital budget, then hires from the
    leaders-plus-informed candidate set under the patient budget."""
    fold1 = notbc_li(instance, bids)
    fold2 = notbc_ds(sorted(fold1.candidate_set or ()), instance, bids)
    return fold1, fold2
