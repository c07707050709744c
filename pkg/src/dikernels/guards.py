"""Size guards for the exponential-time oracles.

Every brute-force routine takes an explicit ``max_n``; when it is not given,
the limit comes from ``DIKERNELS_MAX_N`` or the routine's own default.
"""

from __future__ import annotations

import os

ENV_VAR = "DIKERNELS_MAX_N"


class SizeGuardExceeded(ValueError):
    """Instance too large for exhaustive enumeration."""


def size_guard(default: int) -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None


def check_size(n: int, max_n: int | None, default: int, what: str = "instance") -> None:
    limit = size_guard(default) if max_n is None else max_n
    if n > limit:
        raise SizeGuardExceeded(f"{what} has {n} vertices; the guard allows at most {limit} (set {ENV_VAR} to override)")
