"""Backend selection for the search kernels.

The compiled module is used when it imported and the instance fits in
64-bit words; everything else goes through the pure-Python twin.
"""

from __future__ import annotations

import logging

from . import _kernels_py

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_forced: str | None = None


def use_backend(name: str | None) -> None:
    """Force ``"python"`` or ``"cython"``; ``None`` restores the default."""
    global _forced
    if name not in (None, "python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "cython" and _compiled is None:
        raise RuntimeError("compiled kernels are not available")
    _forced = name


def active_backend() -> str:
    return _forced or BACKEND


def _pick(fits: bool):
    if active_backend() == "cython" and fits:
        return _compiled
    return _kernels_py


def weight_search(n, cons_x, cons_z, rhs, excl, max_weight, limit, min_weight=1):
    fits = n <= 64 and len(cons_x) <= 64
    return _pick(fits).weight_search(
        n, list(cons_x), list(cons_z), rhs, list(excl), max_weight, limit, min_weight
    )


def coset_min_weight(n, v0x, v0z, basis_x, basis_z, limit):
    fits = n <= 64 and len(basis_x) <= 62
    return _pick(fits).coset_min_weight(n, v0x, v0z, list(basis_x), list(basis_z), limit)
