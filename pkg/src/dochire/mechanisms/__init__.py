"""The three hiring mechanisms: pay-your-bid, threshold-payment, random."""

from .baseline import random_select, run_random
from .notbc import notbc_ds, notbc_li, run_notbc
from .tbc import (
    PricingTrace,
    TracePoint,
    run_tbc,
    tbc_ds_allocate,
    tbc_ds_price,
    tbc_li_allocate,
    tbc_li_price,
)

__all__ = [
    "notbc_li",
    "notbc_ds",
    "run_notbc",
    "PricingTrace",
    "TracePoint",
    "tbc_li_allocate",
    "tbc_li_price",
    "tbc_ds_allocate",
    "tbc_ds_price",
    "run_tbc",
    "random_select",
    "run_random",
]
