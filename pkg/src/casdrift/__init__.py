"""Casimir-Lifshitz computations for media with low carrier density.

Free energy, pressure and entropy between planar semi-spaces of intrinsic
semiconductors or dielectrics, using reflection amplitudes that account for
Debye-Hueckel screening and carrier drift, cross-validated against local
Fresnel models and the spatial-dispersion (nonlocal) formulation.
"""

__version__ = "0.1.0"

from .errors import (
    CasdriftError,
    ConfigError,
    DomainError,
    EvaluationError,
    IntegrationError,
    ModelValidityError,
    NormalizationError,
    OracleError,
    ProbeError,
    SummationError,
)
from .lifshitz import (
    Geometry,
    Plate,
    SummationResult,
    Tolerances,
    free_energy_per_area,
    g_mode,
    pc_n0_ratio_asymptote,
    pressure,
    ratio_to_bare,
)
from .materials import (
    BUILTIN,
    GE,
    SI,
    MaterialSpec,
    MaterialState,
    SellmeierPermittivity,
    band_gap,
    bare_eps,
    carrier_density,
    get_material,
    material_state,
    omega_c,
    relaxation_time,
)
from .phys import CODATA2018, Constants, matsubara_xi, sigma_gaussian, thermal_wavelength
from .reflection import (
    Bare,
    Conductivity,
    Drift,
    DriftQuantities,
    IdealMetal,
    Mode,
    Nonlocal,
    ReflectionModel,
    amplitude_fn,
    chi,
    drift_quantities,
    eta_L,
    eta_T,
    r_oracle_bc,
    r_te,
    r_tm,
)
from .spatial import (
    HFunctions,
    PermittivityTensor,
    H_te,
    H_tm,
    eps_par_drift,
    eps_perp_drift,
    h_integrals,
    make_drift_tensor,
    r_from_H,
    r_from_H_tilde,
    unit_tensor,
    verify_equivalence,
)
from .thermo import EntropyPoint, GProbe, NernstReport, entropy, g_probe, nernst_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
