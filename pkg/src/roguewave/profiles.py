"""Traveling-wave profiles of the two branches and their inversion.

Each branch is a traveling solution ``q(x - s t)`` of the frictional
shallow-water system whose states stay on one phase-plane line
``m = a q - b``. Along it the momentum balance reduces to an ODE for the
inverse profile ``x = psi(q)``:

    psi'(q) = (b**2 - g q**3) / (k (a q - b) |a q - b|)

With ``b**2 = g q_c**3`` (``q_c`` is ``q_star`` East, ``q_ref`` West) and
``a q - b = a (q - q_r)`` (``q_r`` is ``q_star`` East, ``q_0`` West) this
integrates in closed form. Both closed forms are written in the offset
``d = q - q_r`` so the logarithmic tails keep full relative precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate

from .exceptions import DomainError, OracleError
from .model import WaveConfig, WaveLine
from .roots import bisect_increasing


class Side(enum.Enum):
    WEST = "W"
    EAST = "E"


@dataclass(frozen=True)
class ProfileBranch:
    """One side of the wave.

    Depths live in ``(q_min, q_max]``; ``psi(q_anchor) = 0``. The branch
    translates East at ``speed``.
    """

    side: Side
    line: WaveLine
    q_min: float
    q_max: float
    q_anchor: float
    speed: float
    q_crit: float

    def flux(self, q):
        return self.line.flux(q)


def east_branch(config: WaveConfig) -> ProfileBranch:
    return ProfileBranch(
        side=Side.EAST, line=config.east_line, q_min=config.q_star, q_max=config.q_p,
        q_anchor=config.q_p, speed=config.c_star, q_crit=config.q_star,
    )


def west_branch(config: WaveConfig) -> ProfileBranch:
    return ProfileBranch(
        side=Side.WEST, line=config.west_line, q_min=config.q_0, q_max=config.q_ref,
        q_anchor=config.q_p, speed=config.a_ref, q_crit=config.q_ref,
    )


def branch(side: Side | str, config: WaveConfig) -> ProfileBranch:
    side = Side(side) if not isinstance(side, Side) else side
    return west_branch(config) if side is Side.WEST else east_branch(config)


def _check_domain(q, lo, hi, name):
    q = np.asarray(q, dtype=float)
    if not np.all((q > lo) & (q <= hi)):
        bad = q[~((q > lo) & (q <= hi))].ravel()[0]
        raise DomainError(f"{name}: depth {bad!r} outside ({lo!r}, {hi!r}]")
    return q


def _scalar(result, like):
    return float(result) if np.ndim(like) == 0 else result


def psi_prime(q, branch: ProfileBranch, config: WaveConfig):
    """Slope ``dx/dq`` of the inverse profile on ``branch``."""
    qa = _check_domain(q, branch.q_min, branch.q_max, f"psi_prime[{branch.side.name}]")
    qc, a, d = branch.q_crit, branch.line.a, qa - branch.q_min
    num = config.g * (qc - qa) * (qc * qc + qc * qa + qa * qa)
    out = num / (config.k * a * a * d * np.abs(d))
    return _scalar(out, q)


def _psi_east_d(d, config: WaveConfig):
    qs, k = config.q_star, config.k
    dp = config.q_p - qs
    q = qs + d
    return (
        (3.0 * qs / k) * np.log(dp / d)
        + (2.0 / k) * (dp - d)
        + (dp - d) * (config.q_p + q) / (2.0 * k * qs)
    )


def _psi_west_d(d, config: WaveConfig):
    q0, qr, qp = config.q_0, config.q_ref, config.q_p
    dp = qp - q0
    q = q0 + d
    return config.friction_scale * (
        (dp - d) * (qp + q) / (2.0 * qr)
        + (2.0 * q0 / qr) * (dp - d)
        - (3.0 * q0 * q0 / qr) * np.log(d / dp)
        + (qr**3 - q0**3) * (d - dp) / (qr * d * dp)
    )


def psi_east(q, config: WaveConfig):
    """Position of depth ``q`` on the initial East profile (``q_star < q <= q_p``)."""
    qa = _check_domain(q, config.q_star, config.q_p, "psi_east")
    return _scalar(_psi_east_d(qa - config.q_star, config), q)


def psi_west(q, config: WaveConfig):
    """Position of depth ``q`` on the initial West profile (``q_0 < q <= q_ref``).

    Depths above ``q_p`` give the continuation of the West profile past the
    junction, which forms the left face of the crest once the shock grows.
    """
    qa = _check_domain(q, config.q_0, config.q_ref, "psi_west")
    return _scalar(_psi_west_d(qa - config.q_0, config), q)


def psi(q, branch: ProfileBranch, config: WaveConfig):
    if branch.side is Side.EAST:
        return psi_east(q, config)
    return psi_west(q, config)


def quadrature_oracle(q: float, branch: ProfileBranch, config: WaveConfig) -> float:
    """Integrate ``psi_prime`` numerically from the anchor to ``q``.

    Independent check on the closed forms. The integral runs in
    ``s = log(q - q_min)`` so the tail singularity becomes a smooth
    integrand.
    """
    q = float(_check_domain(q, branch.q_min, branch.q_max, "quadrature_oracle"))
    if q == branch.q_anchor:
        return 0.0
    q_min = branch.q_min

    def integrand(s):
        d = math.exp(s)
        return psi_prime(q_min + d, branch, config) * d

    s0, s1 = math.log(branch.q_anchor - q_min), math.log(q - q_min)
    val, err, info = sp_integrate.quad(
        integrand, s0, s1, epsabs=1e-13, epsrel=1e-13, limit=500, full_output=True
    )[:3]
    if err > 1e-9 * abs(val) + 1e-9:
        raise OracleError(f"quadrature did not converge at q={q}: err={err:.3e}")
    return val


# Slack (m) for positions computed as x - speed * t that land a rounding
# error outside the branch image.
_EDGE_TOL = 1e-6


def _d_floor(q_root: float) -> float:
    return 2.0 * float(np.spacing(q_root))


def invert_profile(x_shifted, branch: ProfileBranch, config: WaveConfig):
    """Depth ``q`` with ``psi(q) = x_shifted`` on ``branch``.

    Solved by bisection in ``log(q - q_min)``. Positions beyond the point
    where the tail offset drops below two ulps of ``q_min`` return
    ``q_min`` plus that offset instead of iterating on a vanishing log
    argument.
    """
    x = np.asarray(x_shifted, dtype=float)
    if config.flat:
        return _scalar(np.full(x.shape, config.q_star), x_shifted)
    q_root = branch.q_min
    d_top = branch.q_max - q_root
    d_floor = _d_floor(q_root)
    s_lo, s_hi = math.log(d_floor), math.log(d_top)

    if branch.side is Side.EAST:
        if np.any(x < -_EDGE_TOL) or np.any(np.isnan(x)):
            raise DomainError("East branch: x_shifted must be >= 0")
        x = np.maximum(x, 0.0)
        x_tail = float(_psi_east_d(d_floor, config))
        target = -np.minimum(x, x_tail)
        f = lambda s: -_psi_east_d(np.exp(s), config)  # noqa: E731
    else:
        x_top = float(_psi_west_d(d_top, config))
        if np.any(x > x_top + _EDGE_TOL) or np.any(np.isnan(x)):
            raise DomainError(f"West branch: x_shifted must be <= psi_W(q_ref) = {x_top}")
        x = np.minimum(x, x_top)
        x_tail = float(_psi_west_d(d_floor, config))
        target = np.maximum(x, x_tail)
        f = lambda s: _psi_west_d(np.exp(s), config)  # noqa: E731

    s = bisect_increasing(f, target, s_lo, s_hi)
    d = np.exp(s)
    # Exact anchor hits (x == 0) should return q_p itself.
    q = np.where(x == 0.0, branch.q_anchor, q_root + d)
    q = np.minimum(q, branch.q_max)
    return _scalar(q, x_shifted)


def profile_depth(x, t: float, branch: ProfileBranch, config: WaveConfig):
    """Depth of ``branch`` at position ``x`` and time ``t``."""
    return invert_profile(np.asarray(x, dtype=float) - branch.speed * t, branch, config)


def profile_extent(config: WaveConfig) -> float:
    """Distance between the two ``1/e`` relaxation points of the initial profile."""
    if config.flat:
        return 0.0
    d_e = (config.q_p - config.q_star) / math.e
    d_w = (config.q_p - config.q_0) / math.e
    return float(_psi_east_d(d_e, config) - _psi_west_d(d_w, config))


__all__ = [
    "Side", "ProfileBranch", "east_branch", "west_branch", "branch",
    "psi_prime", "psi_east", "psi_west", "psi", "quadrature_oracle",
    "invert_profile", "profile_depth", "profile_extent",
]
