"""Physical constants, phase-plane wave lines and scenario construction.

A scenario is fixed by the far-east depth ``q_star``, the far-west depth
``q_0`` and the West reference depth ``q_ref``. Both far states are at
rest. The East branch lives on the line through ``(q_star, 0)`` with slope
``c_star``; the West branch on the line through ``(q_0, 0)`` with slope
``a_ref``. The two lines cross at the junction depth ``q_p``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .exceptions import AdmissibilityError, ConfigurationError, DomainError
from .roots import bisect, expand_upper

G_DEFAULT = 9.81
SONIC_SPEED_WATER = 1647.0
K_DEFAULT = 0.45
N_INTERACTIONS_DEFAULT = 25


@dataclass(frozen=True)
class PhysicalConstants:
    g: float = G_DEFAULT
    c_s: float = SONIC_SPEED_WATER
    k: float = K_DEFAULT
    n_interactions: int = N_INTERACTIONS_DEFAULT

    def __post_init__(self):
        if not self.g > 0:
            raise DomainError(f"g must be positive, got {self.g}")
        if not self.c_s > 0:
            raise DomainError(f"c_s must be positive, got {self.c_s}")
        if not self.k > 0:
            raise DomainError(f"k must be positive, got {self.k}")
        if int(self.n_interactions) != self.n_interactions or self.n_interactions < 1:
            raise DomainError(f"n_interactions must be an integer >= 1, got {self.n_interactions}")


@dataclass(frozen=True)
class OceanState:
    q: float
    m: float = 0.0

    def __post_init__(self):
        if not self.q > 0:
            raise DomainError(f"depth must be positive, got {self.q}")
        if not math.isfinite(self.m):
            raise DomainError(f"flux must be finite, got {self.m}")

    @property
    def u(self) -> float:
        return self.m / self.q


@dataclass(frozen=True)
class WaveLine:
    """Phase-plane line ``m = a*q - b`` through ``anchor``."""

    a: float
    b: float
    anchor: OceanState

    def __post_init__(self):
        m = self.a * self.anchor.q - self.b
        scale = max(abs(self.b), abs(self.a * self.anchor.q), 1.0)
        if abs(m - self.anchor.m) > 1e-12 * scale:
            raise ConfigurationError("anchor state is not on the wave line")

    @classmethod
    def through(cls, a: float, anchor: OceanState) -> "WaveLine":
        return cls(a=a, b=a * anchor.q - anchor.m, anchor=anchor)

    def flux(self, q):
        return self.a * q - self.b


@dataclass(frozen=True)
class WaveConfig:
    """A fully solved scenario. Build it with :func:`build_configuration`."""

    q_star: float
    q_0: float
    q_ref: float
    q_p: float
    c_star: float
    c_ref: float
    a_ref: float
    m_ref: float
    froude_ref: float
    k: float
    g: float
    east_line: WaveLine = field(repr=False)
    west_line: WaveLine = field(repr=False)

    @property
    def flat(self) -> bool:
        """True for the degenerate still-water scenario ``q_0 == q_star``."""
        return self.q_0 == self.q_star

    @property
    def xi_0(self) -> float:
        return self.q_0 / self.q_ref

    @property
    def friction_scale(self) -> float:
        """``K = 1 / (k (F_ref + 1)^2)``, the West-branch length factor."""
        return 1.0 / (self.k * (self.froude_ref + 1.0) ** 2)


def celerity(q, g: float = G_DEFAULT):
    """Gravity-wave speed ``sqrt(g q)``."""
    if isinstance(q, (int, float)):
        if q < 0:
            raise DomainError(f"negative depth {q}")
        return math.sqrt(g * q)
    import numpy as np

    q = np.asarray(q, dtype=float)
    if (q < 0).any():
        raise DomainError("negative depth")
    return np.sqrt(g * q)


def min_wavelength(h: float, n: float, consts: PhysicalConstants = PhysicalConstants()) -> float:
    """Shortest wavelength admitting ``n`` sonic round trips over depth ``h``.

    A horizontal distance ``lambda`` must be long enough for ``n`` acoustic
    back-and-forth trips between bottom and surface while a gravity wave
    crosses it: ``lambda >= 2 n h sqrt(g h) / c_s``.
    """
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    return 2.0 * n * h * math.sqrt(consts.g * h) / consts.c_s


def build_configuration(
    q_star: float,
    q_0: float,
    q_ref: float,
    consts: PhysicalConstants = PhysicalConstants(),
) -> WaveConfig:
    """Solve the West reference state and the junction depth.

    The West line passes through ``(q_0, 0)`` and ``(q_ref, m_ref)`` with
    slope ``a_ref = m_ref / q_ref + c_ref``; together these give
    ``a_ref = c_ref q_ref / q_0``. The junction ``q_p`` is where it meets
    the East line ``m = c_star (q - q_star)``.

    ``q_0 == q_star`` (with ``q_ref == q_star``) yields the flat still-water
    scenario.

    Raises:
        ConfigurationError: naming the first violated inequality of
            ``q_star < q_0 < q_p < q_ref``.
    """
    g, k = consts.g, consts.k
    if not q_star > 0:
        raise ConfigurationError(f"q_star > 0 violated (q_star={q_star})")
    if q_0 < q_star:
        raise ConfigurationError(f"q_star < q_0 violated (q_star={q_star}, q_0={q_0})")
    c_star = math.sqrt(g * q_star)
    east = WaveLine.through(c_star, OceanState(q_star, 0.0))

    if q_0 == q_star:
        if q_ref != q_star:
            raise ConfigurationError(
                f"flat scenario q_0 == q_star requires q_ref == q_star (q_ref={q_ref})"
            )
        return WaveConfig(
            q_star=q_star, q_0=q_0, q_ref=q_star, q_p=q_star, c_star=c_star,
            c_ref=c_star, a_ref=c_star, m_ref=0.0, froude_ref=0.0, k=k, g=g,
            east_line=east, west_line=east,
        )

    if not q_ref > q_0:
        raise ConfigurationError(f"q_0 < q_ref violated (q_0={q_0}, q_ref={q_ref})")
    c_ref = math.sqrt(g * q_ref)
    a_ref = c_ref * q_ref / q_0
    m_ref = a_ref * (q_ref - q_0)
    froude_ref = (q_ref - q_0) / q_0
    west = WaveLine.through(a_ref, OceanState(q_ref, m_ref))
    q_p = (a_ref * q_0 - c_star * q_star) / (a_ref - c_star)
    if not q_0 < q_p:
        raise ConfigurationError(f"q_0 < q_p violated (q_0={q_0}, q_p={q_p})")
    if not q_p < q_ref:
        raise ConfigurationError(
            f"q_p < q_ref violated (q_p={q_p}, q_ref={q_ref}); q_ref is too small"
        )
    return WaveConfig(
        q_star=q_star, q_0=q_0, q_ref=q_ref, q_p=q_p, c_star=c_star, c_ref=c_ref,
        a_ref=a_ref, m_ref=m_ref, froude_ref=froude_ref, k=k, g=g,
        east_line=east, west_line=west,
    )


def max_qref_residual(q_ref: float, q_star: float, q_0: float, g: float = G_DEFAULT) -> float:
    """Jump mismatch between ``(q_ref, u_ref)`` and still water at ``q_star``.

    Zero when a single shock can connect the top of the West line to the
    far-east rest state.
    """
    u_ref = math.sqrt(g * q_ref) * (q_ref - q_0) / q_0
    jump = (q_ref - q_star) * math.sqrt(g * (q_ref + q_star) / (2.0 * q_ref * q_star))
    return u_ref - jump


def solve_max_qref(
    q_star: float, q_0: float, consts: PhysicalConstants = PhysicalConstants()
) -> float:
    """Largest admissible West reference depth for the given far states.

    This is the ``q_ref`` at which the shock reaches the top of the West
    line and the far-east rest state simultaneously.

    Raises:
        NoSolutionError: if no sign change appears below ``10 * q_0``.
    """
    if q_0 < q_star:
        raise ConfigurationError(f"q_star < q_0 violated (q_star={q_star}, q_0={q_0})")
    if q_0 == q_star:
        return q_star
    g = consts.g
    f = lambda r: max_qref_residual(r, q_star, q_0, g)  # noqa: E731
    hi = expand_upper(f, q_0, q_0 + (q_0 - q_star), limit=10.0 * q_0)
    return bisect(f, q_0, hi)


@dataclass(frozen=True)
class Admissibility:
    lambda_min: float
    extent: float
    ok: bool


def check_admissibility(
    config: WaveConfig,
    consts: PhysicalConstants = PhysicalConstants(),
    strict: bool = False,
) -> Admissibility:
    """Compare the profile's extent with the minimum shallow-water wavelength.

    The extent is the distance between the two points where each branch has
    relaxed to ``1/e`` of its crest excess over the far-field depth.
    A short profile triggers a ``UserWarning``, or
    :class:`AdmissibilityError` when ``strict`` is set.
    """
    from .profiles import profile_extent

    lam = min_wavelength(config.q_star, consts.n_interactions, consts)
    extent = profile_extent(config)
    ok = extent >= lam
    if not ok:
        msg = (
            f"profile extent {extent:.1f} m is below the minimum wavelength "
            f"{lam:.1f} m for N={consts.n_interactions}"
        )
        if strict:
            raise AdmissibilityError(msg)
        warnings.warn(msg, stacklevel=2)
    return Admissibility(lambda_min=lam, extent=extent, ok=ok)


__all__ = [
    "PhysicalConstants", "OceanState", "WaveLine", "WaveConfig", "Admissibility",
    "celerity", "min_wavelength", "build_configuration", "solve_max_qref",
    "max_qref_residual", "check_admissibility",
]
