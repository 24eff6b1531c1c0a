"""Rogue-wave construction for the frictional shallow-water equations.

Two traveling profiles of slightly different speed are joined at a
crest; the faster West profile overtakes the East one and the crest
becomes a growing shock. The package builds the scenario, evaluates and
inverts both profiles, tracks the shock, and cross-checks the result
with a finite-volume solver.
"""

from .exceptions import (
    AdmissibilityError,
    BracketError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    IntegrationError,
    LocusError,
    NoSolutionError,
    OracleError,
    RogueWaveError,
    SolverFailure,
    TrajectoryError,
)
from .model import (
    OceanState,
    PhysicalConstants,
    WaveConfig,
    WaveLine,
    build_configuration,
    celerity,
    check_admissibility,
    min_wavelength,
    solve_max_qref,
)
from .profiles import (
    ProfileBranch,
    Side,
    east_branch,
    invert_profile,
    profile_depth,
    psi_east,
    psi_prime,
    psi_west,
    quadrature_oracle,
    west_branch,
)
from .shock import (
    MassBalanceError,
    ShockState,
    SimulationRecord,
    TrajectoryPair,
    detect_collapse,
    initial_mass,
    locate_shock,
    mass_between,
    rh_locus,
    rh_residual,
    rh_solve_qr,
    shock_speed,
    simulate,
    solve_shock_system,
)

__version__ = "0.1.0"
