"""Shock at the crest: jump relation, mass bookkeeping and time evolution.

Once the West branch (faster, speed ``a_ref``) overtakes the East branch
(speed ``c_star``), the crest is a discontinuity at ``x0(t)``. Left of it
the depth follows the West profile continued above ``q_p``; right of it
the East profile. Three relations tie ``(x0, q_l, q_r)`` together:

    psi_W(q_l) = x0 - a_ref t
    psi_E(q_r) = x0 - c_star t
    (q_l - q_r) sqrt(g (q_l + q_r) / (2 q_l q_r)) = u_l - u_r

:func:`solve_shock_system` solves them by dichotomy on ``x0``.
:func:`locate_shock` is the mass-balance alternative: it looks for the
``x0`` at which the water between two material points equals its initial
value. The stitched field is not an exact weak solution, so that balance
carries a small positive excess at every admissible ``x0``;
:func:`locate_shock` reports this as :class:`MassBalanceError` rather than
returning a spurious position. :func:`simulate` therefore locates the shock
with the three-equation system and records the mass defect as a
diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import integrate as sp_integrate

from .exceptions import (
    BracketError,
    DomainError,
    IntegrationError,
    LocusError,
    NoSolutionError,
    OracleError,
    TrajectoryError,
)
from .model import WaveConfig
from .profiles import (
    east_branch,
    invert_profile,
    profile_depth,
    psi_prime,
    psi_west,
    west_branch,
)
from .quadrature import integrate
from .roots import bisect

COLLAPSE_EPS = 1e-3
NO_COLLAPSE = math.inf
DEFAULT_X1 = -5.0e4
DEFAULT_X2 = 5.0e4


class MassBalanceError(NoSolutionError):
    """``F(x0) = M0`` has no root on the admissible shock bracket.

    Attributes:
        excess: smallest ``F(x0) - M0`` over the bracket (m^2).
        x0: position where that smallest excess occurs.
    """

    def __init__(self, msg, excess, x0):
        super().__init__(msg)
        self.excess = excess
        self.x0 = x0


@dataclass(frozen=True)
class ShockState:
    t: float
    x0: float
    q_l: float
    q_r: float
    m_l: float
    m_r: float
    amplitude: float
    speed: float
    mass_rel_error: float = math.nan


@dataclass(frozen=True)
class TrajectoryPair:
    x1: float
    x2: float
    t: float = 0.0


@dataclass
class SimulationRecord:
    config: WaveConfig
    m0: float
    states: list = field(default_factory=list)
    trajectories: list = field(default_factory=list)
    collapse_time: float = NO_COLLAPSE
    collapsed: bool = False

    @property
    def times(self):
        return [s.t for s in self.states]


# ---------------------------------------------------------------- jump relation


def rh_residual(q_l, q_r, config: WaveConfig):
    """Rankine-Hugoniot mismatch (m/s) between a West state and an East state.

    Written with the line fluxes substituted, i.e. ``u_l = a_ref (1 - q_0/q_l)``
    and ``u_r = c_star (1 - q_star/q_r)``.
    """
    q_l = np.asarray(q_l, dtype=float)
    q_r = np.asarray(q_r, dtype=float)
    if np.any(q_l <= 0) or np.any(q_r <= 0):
        raise DomainError("depths must be positive")
    a, c = config.a_ref, config.c_star
    res = (
        (q_l - q_r) * np.sqrt(config.g * (q_r + q_l) / (2.0 * q_r * q_l))
        + a * config.q_0 / q_l
        - c * config.q_star / q_r
        - (a - c)
    )
    return float(res) if res.ndim == 0 else res


def rh_solve_qr(q_l: float, config: WaveConfig) -> float:
    """East-line partner ``q_r`` of a West-line state ``q_l`` across a shock.

    Raises:
        DomainError: ``q_l`` outside ``[q_p, q_ref]``.
        LocusError: no partner in ``[q_star, q_p]``.
    """
    if not config.q_p <= q_l <= config.q_ref:
        raise DomainError(f"q_l={q_l} outside [q_p, q_ref]")
    if q_l == config.q_p:
        return config.q_p
    f = lambda qr: rh_residual(q_l, qr, config)  # noqa: E731
    try:
        return bisect(f, config.q_star, config.q_p)
    except NoSolutionError as exc:
        raise LocusError(f"no Rankine-Hugoniot partner for q_l={q_l}: {exc}") from exc


def rh_locus(n_samples: int, config: WaveConfig):
    """Rows ``(q_l, m_l, q_r, m_r)`` along the shock locus from ``P``.

    ``q_l`` is uniform on ``[q_p, q_ref]``.
    """
    if n_samples < 2:
        raise DomainError("n_samples must be >= 2")
    rows = []
    for q_l in np.linspace(config.q_p, config.q_ref, n_samples):
        q_l = float(q_l)
        q_r = rh_solve_qr(q_l, config)
        rows.append((q_l, config.west_line.flux(q_l), q_r, config.east_line.flux(q_r)))
    return rows


def shock_speed(q_l: float, q_r: float, m_l: float, m_r: float) -> float:
    """Mass-jump speed ``(m_l - m_r) / (q_l - q_r)``."""
    if q_l == q_r:
        raise DomainError("shock speed undefined for a zero-amplitude jump")
    return (m_l - m_r) / (q_l - q_r)


def shock_speed_limit(config: WaveConfig) -> float:
    """Speed of an infinitesimal shock born at ``P``.

    Linearizing the jump relation about ``P`` fixes the ratio of the left
    and right depth perturbations; the mass-jump speed is then the
    corresponding weighted mean of ``a_ref`` and ``c_star``.
    """
    qp, g = config.q_p, config.g
    cp_qp = math.sqrt(g * qp) * qp
    left = config.a_ref * config.q_0 - cp_qp  # coefficient of dq_l
    right = cp_qp - config.c_star * config.q_star  # coefficient of dq_r
    # dq_r / dq_l = -left / right  (dq_r < 0 for dq_l > 0)
    ratio = left / right
    return (config.a_ref + config.c_star * ratio) / (1.0 + ratio)


def lax_margins(state: ShockState, config: WaveConfig):
    """``(u_l + c_l - s, s - u_r - c_r)``; both non-negative for a Lax 2-shock."""
    g = config.g
    u_l, u_r = state.m_l / state.q_l, state.m_r / state.q_r
    s = state.speed
    return (
        u_l + math.sqrt(g * state.q_l) - s,
        s - (u_r + math.sqrt(g * state.q_r)),
    )


# ---------------------------------------------------------------- mass integrals


def _excess_integral(side, a: float, b: float, t: float, config: WaveConfig) -> float:
    # Integrates q - q_star; the constant part is added exactly by the caller.
    if a == b:
        return 0.0
    br = west_branch(config) if side == "W" else east_branch(config)
    f = lambda x: profile_depth(x, t, br, config) - config.q_star  # noqa: E731
    scale = abs(b - a) * max(config.q_p - config.q_star, 1.0)
    try:
        return integrate(f, a, b, rtol=1e-11, atol=1e-12 * scale)
    except OracleError as exc:
        raise IntegrationError(str(exc)) from exc


def initial_mass(x1: float, x2: float, config: WaveConfig) -> float:
    """Water between ``x1 < 0 < x2`` in the initial profile."""
    if not x1 <= 0.0 <= x2:
        raise DomainError(f"need x1 <= 0 <= x2, got x1={x1}, x2={x2}")
    if config.flat:
        return config.q_star * (x2 - x1)
    west = _excess_integral("W", x1, 0.0, 0.0, config)
    east = _excess_integral("E", 0.0, x2, 0.0, config)
    return config.q_star * (x2 - x1) + west + east


def initial_mass_by_depth(x1: float, x2: float, config: WaveConfig) -> float:
    """Same quantity as :func:`initial_mass` by the change of variable ``x = psi(q)``.

    ``int q dx = int q psi'(q) dq``, integrated with SciPy in
    ``log(q - q_min)`` so the tails stay smooth.
    """
    if config.flat:
        return config.q_star * (x2 - x1)
    qs = config.q_star
    total = qs * (x2 - x1)
    for br, x in ((west_branch(config), x1), (east_branch(config), x2)):
        if x == 0.0:
            continue
        q_end = float(invert_profile(x, br, config))
        q_min = br.q_min

        def integrand(s, br=br, q_min=q_min):
            d = math.exp(s)
            q = q_min + d
            return (q - qs) * psi_prime(q, br, config) * d

        s0, s1 = math.log(config.q_p - q_min), math.log(q_end - q_min)
        val, err = sp_integrate.quad(integrand, s0, s1, epsabs=1e-9, epsrel=1e-13, limit=500)
        # West runs from q(x1) up to q_p, i.e. against the s0 -> s1 direction.
        total += -val if br.side.value == "W" else val
    return total


def _velocity_west(x, t, config: WaveConfig):
    q = profile_depth(x, t, west_branch(config), config)
    return config.a_ref - config.q_ref * config.c_ref / q


def _velocity_east(x, t, config: WaveConfig):
    q = profile_depth(x, t, east_branch(config), config)
    return config.c_star * (1.0 - config.q_star / q)


def advance_trajectories(pair: TrajectoryPair, dt: float, config: WaveConfig) -> TrajectoryPair:
    """One trapezoid (Heun) step of both material points."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    if config.flat:
        return TrajectoryPair(pair.x1, pair.x2, pair.t + dt)
    t0, t1 = pair.t, pair.t + dt
    try:
        v1 = _velocity_west(pair.x1, t0, config)
        v2 = _velocity_east(pair.x2, t0, config)
        p1 = pair.x1 + dt * v1
        p2 = pair.x2 + dt * v2
        x1 = pair.x1 + 0.5 * dt * (v1 + _velocity_west(p1, t1, config))
        x2 = pair.x2 + 0.5 * dt * (v2 + _velocity_east(p2, t1, config))
    except DomainError as exc:
        raise TrajectoryError(f"trajectory left its profile at t={t1}: {exc}") from exc
    return TrajectoryPair(float(x1), float(x2), t1)


def mass_between(x1: float, x2: float, x0: float, t: float, config: WaveConfig) -> float:
    """``F(x0)``: West water on ``[x1, x0]`` plus East water on ``[x0, x2]`` at time ``t``."""
    if not x1 <= x0 <= x2:
        raise BracketError(f"x0={x0} not within [{x1}, {x2}]")
    if config.flat:
        return config.q_star * (x2 - x1)
    west = _excess_integral("W", x1, x0, t, config)
    east = _excess_integral("E", x0, x2, t, config)
    return config.q_star * (x2 - x1) + west + east


def admissible_bracket(t: float, config: WaveConfig):
    """Shock positions keeping ``q_r <= q_p <= q_l <= q_ref`` at time ``t``."""
    lo = config.a_ref * t
    return lo, lo + float(psi_west(config.q_ref, config))


# ---------------------------------------------------------------- shock location


def _state_at(t: float, x0: float, config: WaveConfig, q_l=None, q_r=None) -> ShockState:
    if q_l is None:
        q_l = float(profile_depth(x0, t, west_branch(config), config))
    if q_r is None:
        q_r = float(profile_depth(x0, t, east_branch(config), config))
    m_l = float(config.west_line.flux(q_l))
    m_r = float(config.east_line.flux(q_r))
    if q_l != q_r:
        s = shock_speed(q_l, q_r, m_l, m_r)
    else:
        s = shock_speed_limit(config) if not config.flat else config.c_star
    return ShockState(t=t, x0=x0, q_l=q_l, q_r=q_r, m_l=m_l, m_r=m_r,
                      amplitude=q_l - q_r, speed=s)


def _initial_state(config: WaveConfig) -> ShockState:
    return _state_at(0.0, 0.0, config, q_l=config.q_p, q_r=config.q_p)


def check_ordering(state: ShockState, config: WaveConfig, slack: float = 1e-9):
    """Assert ``q_star <= q_r <= q_p <= q_l <= q_ref`` (``slack`` in metres)."""
    c = config
    if not (c.q_star - slack <= state.q_r <= c.q_p + slack
            and c.q_p - slack <= state.q_l <= c.q_ref + slack):
        raise AssertionError(
            f"ordering violated at t={state.t}: q_star={c.q_star}, q_r={state.q_r}, "
            f"q_p={c.q_p}, q_l={state.q_l}, q_ref={c.q_ref}"
        )


def solve_shock_system(t: float, config: WaveConfig, bracket=None) -> ShockState:
    """Shock from the three-equation system, by dichotomy on ``x0``.

    At each candidate ``x0`` the two profile inversions give ``q_l`` and
    ``q_r``; the sign of the jump residual decides which half to keep.

    Raises:
        NoSolutionError: the residual does not change sign on ``bracket``
            (default: :func:`admissible_bracket`).
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0 or config.flat:
        return replace(_initial_state(config), t=t, x0=config.c_star * t if config.flat else 0.0)
    lo, hi = bracket if bracket is not None else admissible_bracket(t, config)
    west, east = west_branch(config), east_branch(config)
    top = float(psi_west(config.q_ref, config))

    def depths(x0):
        q_l = float(invert_profile(min(x0 - config.a_ref * t, top), west, config))
        q_r = float(invert_profile(max(x0 - config.c_star * t, 0.0), east, config))
        return q_l, q_r

    def residual(x0):
        q_l, q_r = depths(x0)
        return rh_residual(q_l, q_r, config)

    try:
        x0 = bisect(residual, lo, hi)
    except NoSolutionError as exc:
        raise NoSolutionError(f"degenerate configuration at t={t}: {exc}") from exc
    q_l, q_r = depths(x0)
    return _state_at(t, x0, config, q_l=q_l, q_r=q_r)


def locate_shock(
    t: float, pair: TrajectoryPair, m0: float, config: WaveConfig, rtol: float = 1e-10
) -> ShockState:
    """Shock position from the mass balance ``F(x0) = M0``.

    ``F`` is increasing on the admissible bracket (``q_W >= q_p >= q_E``
    there), so bisection applies once the bracket straddles ``M0``.

    Raises:
        BracketError: the material points do not enclose the bracket.
        MassBalanceError: ``F(x0) - M0`` keeps one sign on the bracket.
    """
    if t == 0 or config.flat:
        state = solve_shock_system(t, config)
        return replace(state, mass_rel_error=0.0)
    lo, hi = admissible_bracket(t, config)
    if not pair.x1 < lo and hi < pair.x2:
        raise BracketError(
            f"material points [{pair.x1}, {pair.x2}] do not enclose the shock "
            f"bracket [{lo}, {hi}]; decrease x1 or increase x2"
        )
    g = lambda x0: mass_between(pair.x1, pair.x2, x0, t, config) - m0  # noqa: E731
    g_lo, g_hi = g(lo), g(hi)
    if g_hi < g_lo:
        raise AssertionError("mass functional is not increasing on the shock bracket")
    if g_lo > 0 or g_hi < 0:
        best_x, best = (lo, g_lo) if g_lo > 0 else (hi, g_hi)
        raise MassBalanceError(
            f"F(x0) - M0 keeps one sign on [{lo:.3f}, {hi:.3f}] at t={t}: "
            f"smallest excess {best:.6g} m^2 ({best / m0:.3e} relative) at x0={best_x:.3f}",
            excess=best, x0=best_x,
        )
    x0 = bisect(g, lo, hi, ftol=rtol * m0)
    state = _state_at(t, x0, config)
    return replace(state, mass_rel_error=g(x0) / m0)


def mass_defect(state: ShockState, pair: TrajectoryPair, m0: float, config: WaveConfig) -> float:
    """Relative mass error ``(F(x0) - M0) / M0`` of a located shock."""
    if not pair.x1 < state.x0 < pair.x2 and not config.flat:
        raise BracketError(
            f"shock x0={state.x0} outside material points [{pair.x1}, {pair.x2}]; "
            "decrease x1 or increase x2"
        )
    if state.t == 0 or config.flat:
        return 0.0
    return (mass_between(pair.x1, pair.x2, state.x0, state.t, config) - m0) / m0


# ---------------------------------------------------------------- collapse and runs


@dataclass(frozen=True)
class Collapse:
    """Times at which the shock reaches either end of its locus.

    ``NO_COLLAPSE`` (``inf``) marks an event not reached before the horizon.
    """

    t: float
    t_left: float
    t_right: float
    state: ShockState | None


def _event_time(event, horizon: float, tol: float) -> float:
    if not event(horizon):
        return NO_COLLAPSE
    lo, hi = 0.0, horizon
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if event(mid):
            hi = mid
        else:
            lo = mid
    return hi


def detect_collapse(
    config: WaveConfig, horizon: float = 1.0e6, tol: float = 1.0, eps: float = COLLAPSE_EPS
) -> Collapse:
    """First time ``q_l >= q_ref - eps`` or ``q_r <= q_star + eps``.

    Both events are located separately, each by bisection over ``t`` to
    ``tol`` seconds.
    """
    if config.flat:
        return Collapse(NO_COLLAPSE, NO_COLLAPSE, NO_COLLAPSE, None)
    cache = {}

    def state(t):
        if t not in cache:
            cache[t] = solve_shock_system(t, config)
        return cache[t]

    t_left = _event_time(lambda t: state(t).q_l >= config.q_ref - eps, horizon, tol)
    t_right = _event_time(lambda t: state(t).q_r <= config.q_star + eps, horizon, tol)
    t_c = min(t_left, t_right)
    return Collapse(t_c, t_left, t_right, state(t_c) if math.isfinite(t_c) else None)


def default_x2(t_end: float, config: WaveConfig) -> float:
    """Right material point clearing the whole admissible shock bracket at ``t_end``."""
    if config.flat:
        return DEFAULT_X2
    return max(DEFAULT_X2, admissible_bracket(t_end, config)[1] + DEFAULT_X2)


def default_output_times(t_end: float, every: float = 100.0):
    n = int(math.floor(t_end / every + 1e-9))
    times = [i * every for i in range(n + 1)]
    if times[-1] < t_end:
        times.append(t_end)
    return times


def simulate(
    t_end: float,
    dt: float,
    output_times: Sequence[float] | None,
    config: WaveConfig,
    x1: float = DEFAULT_X1,
    x2: float | None = None,
    method: str = "system",
    eps: float = COLLAPSE_EPS,
) -> SimulationRecord:
    """Advance the material points and record the shock at each output time.

    ``method`` is ``"system"`` (three-equation dichotomy) or ``"mass"``
    (mass balance, see :func:`locate_shock`). Either way the mass defect
    between the material points is recorded on every state. The run stops
    at the first output time where the shock has reached the end of its
    locus.

    ``x2`` defaults to :func:`default_x2`, far enough East that the shock
    never overtakes it before ``t_end``.
    """
    if x2 is None:
        x2 = default_x2(t_end, config)
    if method not in ("system", "mass"):
        raise ValueError(f"unknown method {method!r}")
    if not x1 < 0.0 < x2:
        raise DomainError("need x1 < 0 < x2")
    if not dt > 0:
        raise DomainError("dt must be positive")
    times = sorted(set(default_output_times(t_end) if output_times is None else output_times))
    if times and (times[0] < 0 or times[-1] > t_end + 1e-9):
        raise DomainError("output times must lie in [0, t_end]")

    m0 = initial_mass(x1, x2, config)
    record = SimulationRecord(config=config, m0=m0)
    pair = TrajectoryPair(x1, x2, 0.0)
    for t_out in times:
        while pair.t < t_out - 1e-9:
            pair = advance_trajectories(pair, min(dt, t_out - pair.t), config)
        if method == "mass":
            state = locate_shock(t_out, pair, m0, config)
        else:
            state = solve_shock_system(t_out, config)
            state = replace(state, mass_rel_error=mass_defect(state, pair, m0, config))
        if not config.flat:
            check_ordering(state, config)
        record.states.append(state)
        record.trajectories.append(pair)
        if not config.flat and (state.q_l >= config.q_ref - eps or state.q_r <= config.q_star + eps):
            record.collapsed = True
            record.collapse_time = t_out
            break
    return record


__all__ = [
    "ShockState", "TrajectoryPair", "SimulationRecord", "Collapse", "MassBalanceError",
    "rh_residual", "rh_solve_qr", "rh_locus", "shock_speed", "shock_speed_limit",
    "lax_margins", "initial_mass", "initial_mass_by_depth", "advance_trajectories",
    "mass_between", "admissible_bracket", "solve_shock_system", "locate_shock",
    "mass_defect", "check_ordering", "detect_collapse", "simulate",
    "default_output_times", "default_x2", "NO_COLLAPSE",
]
