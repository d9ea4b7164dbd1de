"""Resource caps shared across solvers.

All enumeration caps can be overridden at once through the
HAPPY_MAX_SUBSETS environment variable; the subset-sum DP memory budget
through HAPPY_MWP_MEMORY_BYTES.  Caps are read at call time so tests can
adjust the environment without reimporting.
"""

import os

DEFAULT_ENUM_CAP = 20_000_000
DEFAULT_GROUND_CAP = 25
DEFAULT_MWP_MEMORY_BYTES = 2 * 1024**3


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    return value if value > 0 else None


def enum_cap() -> int:
    """Max number of colorings / subsets an enumerating solver may visit."""
    return _env_int("HAPPY_MAX_SUBSETS") or DEFAULT_ENUM_CAP


def ground_cap() -> int:
    """Max ground-set size for the subset DPs (table size 2^|N|)."""
    override = _env_int("HAPPY_MAX_SUBSETS")
    if override is not None:
        # interpret the override as a table-size bound
        bits = max(override.bit_length() - 1, 1)
        return bits
    return DEFAULT_GROUND_CAP


def mwp_memory_budget() -> int:
    return _env_int("HAPPY_MWP_MEMORY_BYTES") or DEFAULT_MWP_MEMORY_BYTES
