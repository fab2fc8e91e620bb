"""Imaginary-axis reflection amplitudes for a vacuum/medium interface.

Four models of the medium's low-frequency response are supported:

* ``Bare``          -- textbook Fresnel with the bare permittivity only;
* ``Conductivity``  -- Fresnel with an additive dc-conduction term
                       ``eps(i xi) = eps_bare(i xi) + 4 pi sigma0 / xi``;
* ``Drift``         -- amplitudes of the screened drifting-carrier theory
                       (linearized transport equation coupled to Maxwell),
                       with Debye-Hueckel screening and diffusion;
* ``Nonlocal``      -- the same physics phrased through a spatially
                       dispersive permittivity tensor (see
                       :mod:`casdrift.spatial`).

Everything is evaluated directly on the imaginary frequency axis
(omega = i xi, xi >= 0), where all quantities are real and the decay
wavevectors gamma0, eta_T, eta_L are positive; no complex arithmetic or
branch-cut choices are needed.

Inside the medium the field splits into a transverse branch decaying as
``exp(eta_T z)`` and a longitudinal (density-oscillation) branch decaying as
``exp(eta_L z)``::

    eta_L^2 = k^2 + 4 pi e^2 n0 / (eps(i xi) kB T) + xi (1 + xi tau) / (v_T^2 tau)
    eta_T^2 = k^2 + [eps(i xi) + 4 pi sigma(i xi)/xi] xi^2 / c^2,
              sigma(i xi) = sigma0 / (1 + xi tau)

The TM amplitude is ``(eps g0 - chi)/(eps g0 + chi)`` with the surface
response ``chi = [k^2 + eps (xi/c)^2 (eta_L eta_T - k^2)/(eta_T^2 - k^2)] / eta_L``;
the TE amplitude is the ordinary Fresnel form ``(g0 - eta_T)/(g0 + eta_T)``.
Static (xi = 0) values are never obtained by substituting xi = 0 into the
xi-singular expressions; each model has an explicit analytic static branch.

A numerical boundary-condition solver (:func:`r_oracle_bc`) re-derives the
amplitudes by matching E_x, H_y and eps E_z (TM) respectively E_y, H_x (TE)
across the interface, and serves as the independent oracle for the closed
forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import mpmath as mp

from . import phys
from .errors import DomainError, EvaluationError, OracleError
from .materials import MaterialSpec, MaterialState, _material_state_cached

__all__ = [
    "Mode",
    "DriftQuantities",
    "Bare",
    "Conductivity",
    "Drift",
    "Nonlocal",
    "IdealMetal",
    "ReflectionModel",
    "eta_L",
    "eta_T",
    "chi",
    "drift_quantities",
    "r_tm",
    "r_te",
    "amplitude_fn",
    "r_oracle_bc",
]

_FOURPI = 4.0 * math.pi


@dataclass(frozen=True)
class Mode:
    """One evaluation point (xi, k) on the imaginary-frequency / k grid.

    xi [rad/s] >= 0 is the imaginary frequency, k [1/cm] > 0 the wavevector
    projection on the interface plane.  gamma0 = sqrt(k^2 + xi^2/c^2) is the
    vacuum decay wavevector, always >= k.
    """

    xi: float
    k: float

    def __post_init__(self):
        if not math.isfinite(self.xi) or self.xi < 0.0:
            raise DomainError(f"xi must be finite and >= 0, got {self.xi!r}")
        if not math.isfinite(self.k) or self.k <= 0.0:
            raise DomainError(f"k must be finite and > 0, got {self.k!r}")

    @property
    def gamma0(self) -> float:
        return math.hypot(self.k, self.xi / phys.C_LIGHT)


@dataclass(frozen=True)
class DriftQuantities:
    """Decay wavevectors and TM surface response of the drift model [1/cm]."""

    eta_L: float
    eta_T: float
    chi: float


# --- model tags -------------------------------------------------------------

@dataclass(frozen=True)
class Bare:
    """Fresnel amplitudes with the bare permittivity."""


@dataclass(frozen=True)
class Conductivity:
    """Fresnel amplitudes with an additive dc conduction term 4 pi sigma0/xi.

    sigma0 is the dc conductivity in Gaussian units [1/s]; it is an explicit
    input (measured values rather than the transport fit).
    """

    sigma0: float

    def __post_init__(self):
        if not math.isfinite(self.sigma0) or self.sigma0 < 0.0:
            raise DomainError(f"sigma0 must be finite and >= 0, got {self.sigma0!r}")


@dataclass(frozen=True)
class Drift:
    """Screened drifting-carrier amplitudes."""


@dataclass(frozen=True)
class Nonlocal:
    """Drift physics routed through the spatial-dispersion tensor machinery."""


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector: r_tm = 1 (r_te = -1 for xi > 0, 0 at xi = 0).

    Not a physical model of this theory; used to build reference terms
    (e.g. the perfectly conducting n = 0 TM contribution).
    """


ReflectionModel = Union[Bare, Conductivity, Drift, Nonlocal, IdealMetal]


# --- drift-model building blocks --------------------------------------------

def _defects(mode: Mode, state: MaterialState, eps_bar: float):
    """(w, X, Y): w = (xi/c)^2, X = eta_T^2 - k^2, Y = eta_L^2 - k^2.

    Computed directly from the material quantities so that downstream
    differences (eta^2 - k^2) carry no cancellation error.
    """
    xi = mode.xi
    w = (xi / phys.C_LIGHT) ** 2
    one_xt = 1.0 + xi * state.tau
    X = eps_bar * w + _FOURPI * state.sigma0 * xi / (phys.C_LIGHT**2 * one_xt)
    Y = (
        _FOURPI * phys.E_CHARGE**2 * state.n0 / (eps_bar * phys.K_B * state.T)
        + xi * one_xt / state.D
    )
    return w, X, Y


def eta_L(mode: Mode, state: MaterialState, eps_bar: float) -> float:
    """Longitudinal decay wavevector [1/cm].

    sqrt(k^2 + 4 pi e^2 n0/(eps kB T) + xi (1 + xi tau)/(v_T^2 tau)); at
    xi = 0 this is sqrt(k^2 + kappa^2) when eps_bar is the static value.
    """
    _, _, Y = _defects(mode, state, eps_bar)
    return math.sqrt(mode.k**2 + Y)


def eta_T(mode: Mode, state: MaterialState, eps_bar: float) -> float:
    """Transverse decay wavevector [1/cm]; tends to k as xi -> 0."""
    _, X, _ = _defects(mode, state, eps_bar)
    return math.sqrt(mode.k**2 + X)


def chi(mode: Mode, etaL: float, etaT: float, eps_bar: float) -> float:
    """TM surface response chi [1/cm] (textbook form).

    (1/eta_L) [k^2 + eps (xi/c)^2 (eta_L eta_T - k^2)/(eta_T^2 - k^2)].
    The denominator eta_T^2 - k^2 vanishes only at xi = 0 (use the static
    branch there) or for unphysical eps < 1.
    """
    k2 = mode.k**2
    den = etaT * etaT - k2
    if den <= 0.0:
        raise EvaluationError(
            "degenerate eta_T^2 - k^2 <= 0 in chi; physical media with "
            "eps >= 1 and xi > 0 cannot reach this",
            k=mode.k, xi=mode.xi,
        )
    w = (mode.xi / phys.C_LIGHT) ** 2
    return (k2 + eps_bar * w * (etaL * etaT - k2) / den) / etaL


def drift_quantities(mode: Mode, state: MaterialState, eps_bar: float) -> DriftQuantities:
    """eta_L, eta_T and chi evaluated in a cancellation-free arrangement.

    Writing X = eta_T^2 - k^2 and Y = eta_L^2 - k^2, the chi bracket is
    rearranged as
        eta_L eta_T - k^2 = (k^2 (X + Y) + X Y) / (eta_L eta_T + k^2),
    which keeps the sigma0 = 0 identity chi == eta_T exact in floating
    point.  At xi = 0 the analytic static values (eta_T = k,
    chi = k^2/eta_L) are returned directly.
    """
    k = mode.k
    k2 = k * k
    w, X, Y = _defects(mode, state, eps_bar)
    etaL_v = math.sqrt(k2 + Y)
    if mode.xi == 0.0:
        return DriftQuantities(eta_L=etaL_v, eta_T=k, chi=k2 / etaL_v)
    etaT_v = math.sqrt(k2 + X)
    cross = (k2 * (X + Y) + X * Y) / (etaL_v * etaT_v + k2)  # eta_L eta_T - k^2
    chi_v = (k2 + eps_bar * w * cross / X) / etaL_v
    return DriftQuantities(eta_L=etaL_v, eta_T=etaT_v, chi=chi_v)


# --- Fresnel helpers ---------------------------------------------------------

def _fresnel_pair(k: float, w: float, eps: float, X: float):
    """(r_tm, r_te) for a local permittivity eps at xi > 0.

    X = eps-induced transverse defect (eta^2 - k^2) is supplied separately
    so conduction terms enter without cancellation.  The TM numerator uses
    (eps g0)^2 - eta^2 = (eps - 1)(k^2 (eps + 1) + eps w) + (eps w - X),
    exact for X = eps w, which keeps r == 0 at eps == 1 exact.
    """
    g = math.sqrt(k * k + w)
    eta = math.sqrt(k * k + X)
    num_tm = (eps - 1.0) * (k * k * (eps + 1.0) + eps * w) + (eps * w - X)
    r_tm_v = num_tm / ((eps * g + eta) ** 2)
    r_te_v = (w - X) / ((g + eta) ** 2)
    return r_tm_v, r_te_v


def _drift_static_tm(k: float, eps0: float, kappa: float) -> float:
    q = math.hypot(k, kappa)
    return (eps0 * q - k) / (eps0 * q + k)


# --- per-model amplitude providers -------------------------------------------

@lru_cache(maxsize=256)
def amplitude_fn(model: ReflectionModel, spec: MaterialSpec, T: float) -> Callable:
    """Build ``pair(xi, k) -> (r_tm, r_te)`` for one plate at temperature T.

    The returned closure owns the material state (computed once) and the
    per-model static branches; it is pure and safe to call from concurrent
    workers.  This is the hot path used by the Lifshitz summation; the
    spec-level ``r_tm``/``r_te`` operations delegate to it.
    """
    if isinstance(model, IdealMetal):
        def pair_ideal(xi: float, k: float):
            return (1.0, 0.0) if xi == 0.0 else (1.0, -1.0)
        return pair_ideal

    perm = spec.permittivity
    eps0 = perm.eps0

    if isinstance(model, Bare):
        def pair_bare(xi: float, k: float):
            if xi == 0.0:
                return (eps0 - 1.0) / (eps0 + 1.0), 0.0
            eps = perm.at(xi)
            w = (xi / phys.C_LIGHT) ** 2
            return _fresnel_pair(k, w, eps, eps * w)
        return pair_bare

    if isinstance(model, Conductivity):
        sigma0 = model.sigma0

        def pair_cond(xi: float, k: float):
            if xi == 0.0:
                # 4 pi sigma0 / xi diverges: perfect TM reflector.
                return (1.0 if sigma0 > 0.0 else (eps0 - 1.0) / (eps0 + 1.0)), 0.0
            eps = perm.at(xi) + _FOURPI * sigma0 / xi
            w = (xi / phys.C_LIGHT) ** 2
            X = perm.at(xi) * w + _FOURPI * sigma0 * xi / phys.C_LIGHT**2
            return _fresnel_pair(k, w, eps, X)
        return pair_cond

    if isinstance(model, Drift):
        state = _material_state_cached(spec, T)

        def pair_drift(xi: float, k: float):
            if xi == 0.0:
                return _drift_static_tm(k, eps0, state.kappa), 0.0
            eps = perm.at(xi)
            mode = Mode(xi=xi, k=k)
            dq = drift_quantities(mode, state, eps)
            g = mode.gamma0
            r_tm_v = (eps * g - dq.chi) / (eps * g + dq.chi)
            # TE via the defect form: w - X has no cancellation, unlike
            # gamma0 - eta_T when both tend to k.
            w, X, _ = _defects(mode, state, eps)
            r_te_v = (w - X) / ((g + dq.eta_T) ** 2)
            return r_tm_v, r_te_v
        return pair_drift

    if isinstance(model, Nonlocal):
        from . import spatial  # deferred: spatial depends on this module

        state = _material_state_cached(spec, T)
        tensor = spatial.make_drift_tensor(spec, T)

        def pair_nonlocal(xi: float, k: float):
            if xi == 0.0:
                return _drift_static_tm(k, eps0, state.kappa), 0.0
            mode = Mode(xi=xi, k=k)
            hf = spatial.h_integrals(tensor, mode, method="closed")
            return (spatial.r_from_H_tilde(hf.H_tm_tilde),
                    spatial.r_from_H_tilde(hf.H_te_tilde))
        return pair_nonlocal

    raise DomainError(f"unknown reflection model {model!r}")


def r_tm(model: ReflectionModel, mode: Mode, spec: MaterialSpec, T: float) -> float:
    """TM reflection amplitude for the given model at (xi, k)."""
    return amplitude_fn(model, spec, T)(mode.xi, mode.k)[0]


def r_te(model: ReflectionModel, mode: Mode, spec: MaterialSpec, T: float) -> float:
    """TE reflection amplitude for the given model at (xi, k).

    Zero at xi = 0 for every model with finite conductivity: the static TE
    field is purely magnetic and fully penetrates a nonmagnetic medium.
    """
    return amplitude_fn(model, spec, T)(mode.xi, mode.k)[1]


# --- boundary-condition oracle ------------------------------------------------

def r_oracle_bc(mode: Mode, etaL, etaT, eps_bar, full: bool = False):
    """Reflection amplitudes from direct numerical boundary matching.

    TM: the reflected field has two Cartesian amplitudes (r_x, r_z) tied by
    the vacuum divergence constraint, and the transmitted field has the two
    branch amplitudes (A_T, A_L); continuity of E_x, H_y and eps E_z closes
    a 4x4 linear system.  TE: unknowns (r, B, A_long) where A_long is the
    longitudinal-branch amplitude of the in-plane field component; the
    gradient source term has no y-projection, so A_long cannot feed the TE
    far field, and continuity of E_x pins it to zero -- the solve makes that
    explicit rather than assuming it.

    The solves run in 40-digit arithmetic (the TE amplitude can sit nine
    decades below gamma0 - eta_T's operands, so an oracle certifying 1e-9
    relative agreement must carry far more precision than the target).
    Inputs may be floats or mpmath values; high-precision eta inputs give
    oracle output limited only by the inputs themselves.

    Returns (r_tm, r_te); with ``full=True`` also a dict of the solved
    medium amplitudes for inspection.
    """
    if mode.xi <= 0.0:
        raise DomainError("boundary-condition oracle requires xi > 0")
    with mp.workdps(40):
        k = mp.mpf(mode.k)
        xi = mp.mpf(mode.xi)
        c = mp.mpf(phys.C_LIGHT)
        g = mp.sqrt(k * k + (xi / c) ** 2)
        etaL_m = mp.mpf(etaL)
        etaT_m = mp.mpf(etaT)
        eps_m = mp.mpf(eps_bar)

        # TM system; unknowns (r_x, r_z, A_T, A_L), incident field
        # normalized to unit z-amplitude
        M = mp.zeros(4, 4)
        b = mp.zeros(4, 1)
        # vacuum divergence of the reflected field
        M[0, 0] = k
        M[0, 1] = g
        # E_x continuity: g/k + r_x = A_T + A_L
        M[1, 0] = mp.mpf(1)
        M[1, 2] = mp.mpf(-1)
        M[1, 3] = mp.mpf(-1)
        b[1] = -g / k
        # eps E_z continuity: 1 + r_z = eps (k A_T/eta_T + eta_L A_L/k)
        M[2, 1] = mp.mpf(1)
        M[2, 2] = -eps_m * k / etaT_m
        M[2, 3] = -eps_m * etaL_m / k
        b[2] = mp.mpf(-1)
        # H_y continuity:
        # -xi/(ck) + (c/xi)(g r_x + k r_z) = -(c/xi)(etaT^2 - k^2) A_T/etaT
        M[3, 0] = (c / xi) * g
        M[3, 1] = (c / xi) * k
        M[3, 2] = (c / xi) * (etaT_m * etaT_m - k * k) / etaT_m
        b[3] = xi / (c * k)
        try:
            sol = mp.lu_solve(M, b)
        except (ZeroDivisionError, ValueError) as exc:
            raise OracleError(f"singular TM boundary system: {exc}",
                              k=mode.k, xi=mode.xi) from exc
        r_x, r_z, A_T, A_L = (sol[i] for i in range(4))

        # TE system; unknowns (r, B, A_long)
        N = mp.zeros(3, 3)
        d = mp.zeros(3, 1)
        # E_y continuity: 1 + r = B (no y-projection of the gradient term)
        N[0, 0] = mp.mpf(1)
        N[0, 1] = mp.mpf(-1)
        d[0] = mp.mpf(-1)
        # H_x continuity: g (1 - r) = etaT B
        N[1, 0] = g
        N[1, 1] = etaT_m
        d[1] = g
        # E_x continuity: vacuum TE has no x-component
        N[2, 2] = mp.mpf(1)
        try:
            te_sol = mp.lu_solve(N, d)
        except (ZeroDivisionError, ValueError) as exc:
            raise OracleError(f"singular TE boundary system: {exc}",
                              k=mode.k, xi=mode.xi) from exc
        r_te_v, B, A_long = (te_sol[i] for i in range(3))

        if full:
            return float(r_z), float(r_te_v), {
                "r_x": float(r_x), "A_T": float(A_T), "A_L": float(A_L),
                "B": float(B), "A_long": float(A_long),
            }
        return float(r_z), float(r_te_v)
