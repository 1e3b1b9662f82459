"""Shared plumbing: instances to kernel-ready integer markets."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..graph import EcId
from ..model import BidProfile, Instance, Outcome

__all__ = ["LeaderMarket", "build_leader_market", "fold1_outcome"]


class LeaderMarket:
    """Fold-1 view of an instance: bit masks plus integer bid numerators.

    Doctor with id i sits at index i-1; mask bit u-1 means "can inform
    doctor u". All money shares one denominator so kernel arithmetic is
    exact integer work.
    """

    def __init__(self, instance: Instance, bids: BidProfile):
        m = len(instance.profiles)
        self.instance = instance
        self.masks: list[int] = [0] * m
        for p in instance.profiles:
            mask = 0
            for u in instance.graph.neighbors(p.id):
                mask |= 1 << (u - 1)
            self.masks[p.id - 1] = mask
        values = [bids.adapter_bids[p.id] for p in instance.profiles]
        values.append(instance.hospital_budget)
        self.den = math.lcm(*(v.denominator for v in values)) if values else 1
        self.bid_nums: list[int] = [
            int(v * self.den) for v in values[:-1]
        ]
        self.budget_num = int(instance.hospital_budget * self.den)
        self.all_indices = list(range(m))

    def money(self, numerator: int) -> Fraction:
        return Fraction(numerator, self.den)


def build_leader_market(instance: Instance, bids: BidProfile) -> LeaderMarket:
    return LeaderMarket(instance, bids)


def fold1_outcome(
    winner_indices: Sequence[int],
    informed_indices: Iterable[int],
    payments: Mapping[EcId, Fraction] | None,
) -> Outcome:
    winners = tuple(EcId(i + 1) for i in winner_indices)
    informed = frozenset(EcId(i + 1) for i in informed_indices)
    return Outcome(
        winners=winners,
        payments=payments,
        total_payment=sum(payments.values(), Fraction(0)) if payments is not None else None,
        informed=informed,
        candidate_set=frozenset(winners) | informed,
    )
