"""Enumeration caps, overridable through the CUBICLAT_CAP environment variable."""
from __future__ import annotations

import os

DEFAULT_GROUP_CAP = 10**4
ISOMETRY_RANK_CAP = 8
INTERSECTION_RANK_CAP = 4
PRIME_SEARCH_CAP = 10**6
MOD3_NVARS_CAP = 12


def group_cap() -> int:
    value = os.environ.get("CUBICLAT_CAP")
    return int(value) if value else DEFAULT_GROUP_CAP
