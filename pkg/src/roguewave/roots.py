"""Bracketed bisection for monotone functions."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .exceptions import ConvergenceError, NoSolutionError

MAX_ITER = 200


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 0.0,
    ftol: float = 0.0,
    max_iter: int = MAX_ITER,
) -> float:
    """Find a root of ``f`` on ``[lo, hi]`` by bisection.

    The endpoints must give values of opposite sign (or one of them must be
    an exact zero). Iteration stops when the bracket is narrower than
    ``xtol``, when ``|f(mid)| <= ftol``, or when the midpoint no longer
    moves in floating point.

    Raises:
        NoSolutionError: if ``f(lo)`` and ``f(hi)`` share a sign.
        ConvergenceError: if ``max_iter`` is exhausted with ``xtol > 0``
            still unmet.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if math.isnan(flo) or math.isnan(fhi) or (flo > 0) == (fhi > 0):
        raise NoSolutionError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0 or abs(fmid) <= ftol:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= xtol:
            return 0.5 * (lo + hi)
    if xtol > 0.0:
        raise ConvergenceError(f"bisection did not reach xtol={xtol} in {max_iter} steps")
    return 0.5 * (lo + hi)


def bisect_increasing(
    f: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    max_iter: int = MAX_ITER,
) -> np.ndarray:
    """Vectorized bisection solving ``f(u) = target`` for increasing ``f``.

    Every entry of ``target`` must satisfy ``f(lo) <= target <= f(hi)``;
    this is the caller's job. Runs until no bracket can shrink further.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        above = f(mid) > target
        hi = np.where(active & above, mid, hi)
        lo = np.where(active & ~above, mid, lo)
    else:
        if ((0.5 * (lo + hi) > lo) & (0.5 * (lo + hi) < hi)).any():
            raise ConvergenceError("vectorized bisection hit the iteration cap")
    return 0.5 * (lo + hi)


def expand_upper(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    limit: float,
    factor: float = 2.0,
) -> float:
    """Grow ``hi`` geometrically (distance from ``lo``) until ``f`` changes sign.

    Returns the first ``hi`` with ``sign(f(hi)) != sign(f(lo))``.

    Raises:
        NoSolutionError: once ``hi`` would pass ``limit``.
    """
    flo = f(lo)
    width = hi - lo
    while True:
        fhi = f(hi)
        if fhi == 0.0 or (fhi > 0) != (flo > 0):
            return hi
        if hi >= limit:
            raise NoSolutionError(f"no sign change below {limit!r}")
        width *= factor
        hi = min(lo + width, limit)
