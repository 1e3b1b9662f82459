"""Random benchmark mechanism: seeded permutation, pay-your-bid.

The comparison baseline for the experiments: doctors are taken in a
seed-determined uniform random order and kept whenever the remaining budget
still covers their bid, mirroring the pay-your-bid fold semantics so the
three mechanisms differ only in how they order and filter.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import Iterable, Mapping

from ..graph import EcId
from ..model import BidProfile, Instance, Outcome
from ..money import Money
from ..rng import SplitMix64, derive_seed

__all__ = ["random_select", "run_random"]

# Stream tags for the two folds' subseeds.
_LEADER_STREAM = 1
_HIRE_STREAM = 2


def random_select(
    candidates: Iterable[EcId],
    budget: Money,
    bids: Mapping[EcId, Money],
    seed: int,
) -> Outcome:
    """Scan a seeded uniform permutation of `candidates`, selecting every
    doctor whose bid fits the remaining budget; winners are paid their bid."""
    permutation = sorted(candidates)
    SplitMix64(seed).shuffle(permutation)
    remaining = budget
    winners: list[EcId] = []
    payments: dict[EcId, Money] = {}
    for ec in permutation:
        bid = bids[ec]
        if bid <= remaining:
            winners.append(ec)
            payments[ec] = bid
            remaining -= bid
    return Outcome(
        winners=tuple(winners),
        payments=payments,
        total_payment=sum(payments.values(), Fraction(0)),
    )


def run_random(instance: Instance, bids: BidProfile, seed: int) -> tuple[Outcome, Outcome]:
    """Two-fold random baseline: random leaders under the hospital budget,
    then random hires from the leaders-plus-informed set under the patient
    budget. Each fold gets its own subseed of `seed`."""
    fold1 = random_select(
        instance.ids,
        instance.hospital_budget,
        bids.adapter_bids,
        derive_seed(seed, _LEADER_STREAM),
    )
    informed: frozenset[EcId] = frozenset(
        u for ec in fold1.winners for u in instance.graph.neighbors(ec)
    )
    fold1 = replace(
        fold1,
        informed=informed,
        candidate_set=frozenset(fold1.winners) | informed,
    )
    fold2 = random_select(
        sorted(fold1.candidate_set or ()),
        instance.patient_budget,
        bids.consult_bids,
        derive_seed(seed, _HIRE_STREAM),
    )
    return fold1, fold2
