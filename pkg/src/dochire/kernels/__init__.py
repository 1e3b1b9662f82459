"""Coverage-greedy kernel with a compiled core and a pure-Python twin.

Every leader-fold mechanism run reduces to the same loop: repeatedly pick
the pooled doctor with the best coverage-gain-per-bid ratio and test it
against a budget rule. The loop is O(m^2) set unions, so a Cython core is
built at install time; a pure-Python big-int twin is the fallback and the
reference for differential tests.

Selection of the twin: the DOCHIRE_KERNEL environment variable may force
"python" or "compiled"; the default "auto" uses the compiled core when it
imported and the call's integer magnitudes fit in signed 64-bit arithmetic
(oversized bids fall back to the exact big-int twin).

All money enters as integer numerators over one common denominator, so both
twins are exact; results are integers and indices only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from . import pyimpl

try:  # compiled twin is optional
    from . import _cov  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build host
    _cov = None

__all__ = [
    "GreedyStep",
    "GreedyRun",
    "RULE_AFFORD",
    "RULE_HALF_SHARE",
    "RULE_FULL_SHARE",
    "coverage_greedy",
    "active_kernel",
    "compiled_available",
]

# Budget rules for one greedy run.
RULE_AFFORD = "afford"  # select iff bid <= remaining budget, deduct; scan all
RULE_HALF_SHARE = "half_share"  # select iff 2*bid*(M+I) <= B*M; stop at first failure
RULE_FULL_SHARE = "full_share"  # select iff bid*(M+I) <= B*M; first failure is the loser

_RULE_CODES = {RULE_AFFORD: 0, RULE_HALF_SHARE: 1, RULE_FULL_SHARE: 2}

# Signed-64 headroom: products must stay below 2^62 (factor 2 in half_share).
_LIMIT = 1 << 62


@dataclass(frozen=True)
class GreedyStep:
    """One evaluated position of a greedy run.

    `obs_marginal` / `obs_informed_with` describe a fixed observer doctor
    against the coverage standing before this position (used to price a
    winner against the market that excludes it); both are 0 when no
    observer was passed.
    """

    index: int
    marginal: int
    informed_before: int
    obs_marginal: int
    obs_informed_with: int


@dataclass(frozen=True)
class GreedyRun:
    order: tuple[int, ...]
    steps: tuple[GreedyStep, ...]
    loser: GreedyStep | None
    informed_final: int
    informed_indices: tuple[int, ...]


def compiled_available() -> bool:
    return _cov is not None


def _fits_int64(bids_num: Sequence[int], budget_num: int, n_bits: int) -> bool:
    span = n_bits + 1
    if budget_num >= _LIMIT // max(span, 1):
        return False
    top = max(bids_num, default=0)
    return top < _LIMIT // max(2 * span, 1)


def active_kernel(bids_num: Sequence[int] = (), budget_num: int = 0, n_bits: int = 0) -> str:
    """Which twin a call with these magnitudes would use."""
    mode = os.environ.get("DOCHIRE_KERNEL", "auto")
    if mode == "python":
        return "python"
    if mode == "compiled":
        if _cov is None:
            raise RuntimeError("compiled kernel requested but not available")
        if not _fits_int64(bids_num, budget_num, n_bits):
            raise ValueError("magnitudes exceed the compiled kernel's 64-bit range")
        return "compiled"
    if mode != "auto":
        raise ValueError(f"bad DOCHIRE_KERNEL value: {mode!r}")
    if _cov is not None and _fits_int64(bids_num, budget_num, n_bits):
        return "compiled"
    return "python"


def coverage_greedy(
    masks: Sequence[int],
    bids_num: Sequence[int],
    pool: Sequence[int],
    rule: str,
    budget_num: int,
    observer: int = -1,
) -> GreedyRun:
    """Run one greedy pass over `pool` (doctor indices into `masks`).

    masks[i] is a bitmask of the node indices doctor i can inform; bids and
    the budget are integer numerators over one shared denominator. The
    observer, if any, must not be in the pool.
    """
    if rule not in _RULE_CODES:
        raise ValueError(f"unknown rule {rule!r}")
    if observer >= 0 and observer in set(pool):
        raise ValueError("observer must not be in the pool")
    n_bits = len(masks)
    if active_kernel(bids_num, budget_num, n_bits) == "compiled":
        raw = _cov.coverage_greedy_packed(
            pyimpl.pack_masks(masks, n_bits),
            list(bids_num),
            sorted(pool),
            _RULE_CODES[rule],
            budget_num,
            observer,
        )
    else:
        raw = pyimpl.coverage_greedy_py(
            masks, bids_num, sorted(pool), _RULE_CODES[rule], budget_num, observer
        )
    order, steps, loser, informed_final, informed_indices = raw
    return GreedyRun(
        order=tuple(order),
        steps=tuple(GreedyStep(*s) for s in steps),
        loser=GreedyStep(*loser) if loser is not None else None,
        informed_final=informed_final,
        informed_indices=tuple(informed_indices),
    )
