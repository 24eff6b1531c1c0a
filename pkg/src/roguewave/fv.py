"""First-order finite-volume solver used to cross-check the analytic wave.

Conservative form of the frictional shallow-water system on a flat bed:

    q_t + m_x = 0
    m_t + (m**2 / q + g q**2 / 2)_x = -k |u| u

Rusanov (local Lax-Friedrichs) interface fluxes, explicit friction,
zero-gradient boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, SolverFailure
from .model import WaveConfig
from .profiles import east_branch, profile_depth, west_branch
from .shock import solve_shock_system


@dataclass(frozen=True)
class FvGrid:
    x_left: float
    dx: float
    cells: np.ndarray  # shape (n, 2): columns q, m
    t: float = 0.0

    def __post_init__(self):
        if not self.dx > 0:
            raise DomainError("dx must be positive")
        if np.any(self.cells[:, 0] <= 0):
            raise SolverFailure(f"non-positive depth at t={self.t}")

    @property
    def q(self) -> np.ndarray:
        return self.cells[:, 0]

    @property
    def m(self) -> np.ndarray:
        return self.cells[:, 1]

    @property
    def x(self) -> np.ndarray:
        return self.x_left + self.dx * (np.arange(len(self.cells)) + 0.5)

    @property
    def mass(self) -> float:
        return float(self.q.sum() * self.dx)


def analytic_field(x, t: float, config: WaveConfig):
    """Depth and flux of the analytic wave at positions ``x`` and time ``t``.

    West of the shock the West branch applies, East of it the East branch.
    """
    x = np.asarray(x, dtype=float)
    if config.flat:
        return np.full(x.shape, config.q_star), np.zeros(x.shape)
    x0 = solve_shock_system(t, config).x0
    left = x < x0
    q = np.empty(x.shape)
    if left.any():
        q[left] = profile_depth(x[left], t, west_branch(config), config)
    if (~left).any():
        q[~left] = profile_depth(x[~left], t, east_branch(config), config)
    m = np.where(left, config.west_line.flux(q), config.east_line.flux(q))
    return q, m


def init_from_analytic(
    t: float, x_left: float, x_right: float, dx: float, config: WaveConfig
) -> FvGrid:
    """Grid holding the analytic wave at time ``t``, sampled at cell midpoints."""
    n = int(round((x_right - x_left) / dx))
    if n < 1:
        raise DomainError("grid needs at least one cell")
    x = x_left + dx * (np.arange(n) + 0.5)
    q, m = analytic_field(x, t, config)
    return FvGrid(x_left=x_left, dx=dx, cells=np.column_stack([q, m]), t=t)


def _physical_flux(q, m, g):
    return m, m * m / q + 0.5 * g * q * q


def interface_fluxes(grid: FvGrid, g: float):
    """Rusanov fluxes at the ``n + 1`` cell faces and the largest wave speed.

    Returns ``(fq, fm, smax)``; faces 0 and n use the zero-gradient ghosts.
    """
    q = np.concatenate([grid.q[:1], grid.q, grid.q[-1:]])
    m = np.concatenate([grid.m[:1], grid.m, grid.m[-1:]])
    u = m / q
    speed = np.abs(u) + np.sqrt(g * q)
    f0, f1 = _physical_flux(q, m, g)
    alpha = np.maximum(speed[:-1], speed[1:])
    fq = 0.5 * (f0[:-1] + f0[1:]) - 0.5 * alpha * (q[1:] - q[:-1])
    fm = 0.5 * (f1[:-1] + f1[1:]) - 0.5 * alpha * (m[1:] - m[:-1])
    return fq, fm, float(speed.max())


def fv_step(grid: FvGrid, cfl: float, config: WaveConfig, dt_max: float | None = None) -> FvGrid:
    """One explicit step with ``dt = cfl dx / max(|u| + c)`` (capped at ``dt_max``)."""
    if not 0 < cfl <= 0.9:
        raise DomainError(f"cfl must be in (0, 0.9], got {cfl}")
    fq, fm, smax = interface_fluxes(grid, config.g)
    dt = cfl * grid.dx / smax
    if dt_max is not None:
        dt = min(dt, dt_max)
    r = dt / grid.dx
    q = grid.q - r * (fq[1:] - fq[:-1])
    u = grid.m / grid.q
    m = grid.m - r * (fm[1:] - fm[:-1]) - dt * config.k * np.abs(u) * u
    if not np.all(np.isfinite(q)) or np.any(q <= 0):
        raise SolverFailure(f"vacuum or non-finite depth after step at t={grid.t + dt}")
    return FvGrid(grid.x_left, grid.dx, np.column_stack([q, m]), grid.t + dt)


def advance(grid: FvGrid, t_end: float, cfl: float, config: WaveConfig) -> FvGrid:
    """Step ``grid`` until ``t_end`` (the last step is shortened to land on it)."""
    while grid.t < t_end:
        remaining = t_end - grid.t
        if remaining <= 1e-12 * max(1.0, t_end):
            break
        grid = fv_step(grid, cfl, config, dt_max=remaining)
    return grid


def comparison_window(grid: FvGrid, t: float, config: WaveConfig):
    """Cells not yet reached by signals from the boundaries since the grid start.

    ``t`` is the time elapsed since initialisation.
    """
    reach = (config.m_ref / config.q_ref + config.c_ref) * t
    x = grid.x
    lo = grid.x_left + reach
    hi = grid.x_left + grid.dx * len(x) - reach
    return (x > lo) & (x < hi)


def compare_profiles(grid: FvGrid, t: float, config: WaveConfig, t_start: float = 0.0, mask=None):
    """L1 (mean absolute) and L-infinity depth errors against the analytic wave.

    The analytic field uses the three-equation shock position at ``t``.
    Unless ``mask`` is given, only cells outside the boundaries' domain of
    influence since ``t_start`` are compared.
    """
    if abs(grid.t - t) > 1e-9 * max(1.0, t):
        raise DomainError(f"grid is at t={grid.t}, not {t}")
    if mask is None:
        mask = comparison_window(grid, t - t_start, config)
    q_exact, _ = analytic_field(grid.x[mask], t, config)
    err = np.abs(grid.q[mask] - q_exact)
    if err.size == 0:
        raise DomainError("comparison window is empty; enlarge the grid")
    return float(err.mean()), float(err.max())


def step_mass_defect(before: FvGrid, after: FvGrid, g: float) -> float:
    """Relative mismatch between the mass change of one step and its boundary fluxes."""
    fq, _, _ = interface_fluxes(before, g)
    dt = after.t - before.t
    expected = -dt * (fq[-1] - fq[0])
    actual = after.q.sum() * after.dx - before.q.sum() * before.dx
    return abs(actual - expected) / before.mass


def advance_checked(grid: FvGrid, t_end: float, cfl: float, config: WaveConfig):
    """:func:`advance` that also returns the worst per-step mass defect."""
    worst = 0.0
    while grid.t < t_end:
        remaining = t_end - grid.t
        if remaining <= 1e-12 * max(1.0, t_end):
            break
        new = fv_step(grid, cfl, config, dt_max=remaining)
        worst = max(worst, step_mass_defect(grid, new, config.g))
        grid = new
    return grid, worst


def validation_domain(t_end: float, config: WaveConfig, margin: float = 1.0e4):
    """Grid extent that keeps the shock at ``t_end`` clear of boundary effects."""
    reach = (config.m_ref / config.q_ref + config.c_ref) * t_end
    x_shock = 0.0 if config.flat else solve_shock_system(t_end, config).x0
    return -(reach + margin), x_shock + reach + margin


def convergence_study(config: WaveConfig, dx: float, cfl: float, t_end: float):
    """Errors at ``dx`` and ``dx / 2`` and the observed L1 order between them."""
    x_left, x_right = validation_domain(t_end, config)
    runs = []
    for h in (dx, dx / 2.0):
        grid = init_from_analytic(0.0, x_left, x_right, h, config)
        grid, worst = advance_checked(grid, t_end, cfl, config)
        l1, linf = compare_profiles(grid, t_end, config)
        runs.append({"dx": h, "l1": l1, "linf": linf, "max_step_mass_defect": worst,
                     "cells": len(grid.cells)})
    a, b = runs[0]["l1"], runs[1]["l1"]
    if a == 0.0 and b == 0.0:
        order = math.inf
    elif b == 0.0:
        order = math.inf
    else:
        order = math.log2(a / b)
    return {"x_left": x_left, "x_right": x_right, "runs": runs, "l1_order": order}
