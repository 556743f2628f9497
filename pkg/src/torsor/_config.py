"""Runtime switches read from the environment."""
from __future__ import annotations

import os


def _flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in ("0", "false", "no", "off", "")


def use_numba() -> bool:
    """True when compiled kernels should be used (``TORSOR_NUMBA``, default on)."""
    if not _flag("TORSOR_NUMBA", True):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover
        return False
    return True


def max_ring_size() -> int:
    return int(os.environ.get("TORSOR_MAX_RING_SIZE", "4096"))


def seed() -> int:
    return int(os.environ.get("TORSOR_SEED", "20240611"))


# rings up to this order get every (a, b, c) triple checked; larger ones are sampled
EXHAUSTIVE_AXIOM_LIMIT = 256
