"""Pure-Python twin of the coverage-greedy kernel.

Masks are arbitrary-size Python ints, so this twin has no magnitude limits;
it is the exactness reference the compiled core is tested against.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["coverage_greedy_py", "pack_masks"]

_AFFORD, _HALF, _FULL = 0, 1, 2


def coverage_greedy_py(
    masks: Sequence[int],
    bids_num: Sequence[int],
    pool: Sequence[int],
    rule: int,
    budget_num: int,
    observer: int,
):
    """See kernels.coverage_greedy for the contract. pool must be ascending."""
    covered = 0
    informed = 0
    obs_mask = masks[observer] if observer >= 0 else 0
    remaining = budget_num
    active = list(pool)
    order: list[int] = []
    steps: list[tuple[int, int, int, int, int]] = []
    loser: tuple[int, int, int, int, int] | None = None

    while active:
        # Argmax of marginal/bid; strict improvement keeps the lowest index
        # on ties because `active` stays ascending.
        best_pos = -1
        best_m = 0
        best_bid = 1
        for pos, idx in enumerate(active):
            m = (masks[idx] | covered).bit_count() - informed
            if best_pos < 0 or m * best_bid > best_m * bids_num[idx]:
                best_pos, best_m, best_bid = pos, m, bids_num[idx]
        idx = active.pop(best_pos)
        m = best_m

        if rule == _AFFORD:
            ok = best_bid <= remaining
        else:
            factor = 2 if rule == _HALF else 1
            # Zero-marginal candidates always fail the share rules: the
            # proportional share of a worthless doctor is zero.
            ok = m > 0 and factor * best_bid * (m + informed) <= budget_num * m

        if observer >= 0:
            obs_with = (covered | obs_mask).bit_count()
            obs_m = obs_with - informed
        else:
            obs_with = obs_m = 0
        step = (idx, m, informed, obs_m, obs_with)

        if ok:
            order.append(idx)
            steps.append(step)
            covered |= masks[idx]
            informed = covered.bit_count()
            if rule == _AFFORD:
                remaining -= best_bid
        elif rule == _AFFORD:
            continue  # unaffordable doctors are dropped; the scan goes on
        else:
            loser = step
            break

    informed_indices = []
    bits = covered
    position = 0
    while bits:
        low = bits & -bits
        informed_indices.append(low.bit_length() - 1)
        bits ^= low
        position += 1
    return order, steps, loser, informed, informed_indices


def pack_masks(masks: Sequence[int], n_bits: int):
    """Pack big-int masks into a (len, words) uint64 array for the compiled twin."""
    import numpy as np

    words = max(1, (n_bits + 63) // 64)
    out = np.zeros((len(masks), words), dtype=np.uint64)
    for i, mask in enumerate(masks):
        blob = int(mask).to_bytes(words * 8, "little")
        out[i, :] = np.frombuffer(blob, dtype=np.uint64)
    return out
