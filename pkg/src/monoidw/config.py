"""Size guards shared across modules."""

import os

# exhaustive divisor search; MONOIDW_SIZE_GUARD overrides
DIVIDES_GUARD = 12
PRODUCT_CAP = 10**6
REES_CAP = 10**5
STATE_GUARD = 10**6
MONOID_GUARD = 5000   # dense n x n int64 tables: 200 MB at the limit
SYNC_DELAY_MAX = 8


def divides_guard() -> int:
    raw = os.environ.get("MONOIDW_SIZE_GUARD")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DIVIDES_GUARD
