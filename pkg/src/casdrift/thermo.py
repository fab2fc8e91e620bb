"""Entropy S(T) = -d(E/A)/dT and the numerical Nernst-theorem checks.

The entropy is obtained by central finite differences of the full free
energy with Richardson extrapolation over step sizes (h, h/2), so ALL
temperature dependence is captured at once: the explicit Matsubara grid and
the implicit dependence of the reflection amplitudes through the material
state (carrier density, screening, relaxation).  Analytic low-temperature
decompositions are deliberately not implemented; their predictions (TE
contribution vanishing like T^2 with a negative coefficient, TM linear in T
with a positive slope, S -> 0 overall) are checked instead through
finite-difference probes of the mode function

    g^p(i xi, k) = ln[1 - r1 r2 exp(-2 d gamma0)]

near xi = 0 and through entropy sweeps down to desk-scale temperatures
(the Matsubara cap stops a little short of T = 0; the Nernst statement is
verified as a trend and reported as such).

Entropy evaluations default to tighter engine tolerances than plain energy
runs: the finite difference divides the free-energy noise by the step, and
low-temperature entropies are small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import phys
from .errors import DomainError, ProbeError
from .lifshitz import Geometry, Tolerances, free_energy_per_area, g_mode
from .reflection import Mode, ReflectionModel

__all__ = [
    "EntropyPoint",
    "GProbe",
    "NernstReport",
    "entropy",
    "g_probe",
    "nernst_sweep",
]

FD_STEP_FLOOR = 0.25          # K
ENTROPY_TOL = Tolerances(quad_rel=1.0e-10, sum_rel=1.0e-12)


@dataclass(frozen=True)
class EntropyPoint:
    """S = -dE/dT at one temperature [erg/(cm^2 K)] with its error estimate."""

    T: float
    S: float
    fd_step: float
    richardson_error: float
    warnings: tuple = ()


@dataclass(frozen=True)
class GProbe:
    """One-sided xi -> 0+ derivatives of g^p at fixed k.

    theta = 2 pi kB T / hbar [rad/s]; g0 is the static value, g_xi [s] and
    g_xixi [s^2] the first and second xi-derivatives at xi = 0.
    """

    p: str
    k: float
    theta: float
    g0: float
    g_xi: float
    g_xixi: float


@dataclass(frozen=True)
class NernstReport:
    """Entropy sweep plus the monotonicity/sign diagnostics."""

    points: tuple
    monotone_abs_decreasing: bool   # |S| decreasing toward low T (T <= 75 K)
    s_ratio_low_to_high: float      # |S(T_min)| / |S(T_max)|


def entropy(geom: Geometry, T: float,
            model: Optional[ReflectionModel] = None,
            fd_step: Optional[float] = None,
            tolerances: Optional[Tolerances] = None) -> EntropyPoint:
    """Entropy per area from Richardson-extrapolated central differences.

    Uses steps h and h/2 (default h = max(T/20, 0.25 K)); the returned
    ``richardson_error`` is the difference of the two estimates divided by
    3 (the leading-order error of the finer one).  A warning is attached
    when that estimate exceeds |S| itself.
    """
    if fd_step is None:
        fd_step = max(T / 20.0, FD_STEP_FLOOR)
    if not (fd_step > 0.0) or T - 2.0 * fd_step <= 0.0:
        raise DomainError(
            f"need T - 2 fd_step > 0 with fd_step > 0; got T={T}, fd_step={fd_step}"
        )
    tol = tolerances if tolerances is not None else ENTROPY_TOL

    warnings = []

    def E(temp: float) -> float:
        res = free_energy_per_area(geom, temp, model=model, tolerances=tol)
        warnings.extend(w for w in res.warnings if w not in warnings)
        return res.value

    def central(h: float) -> float:
        return (E(T + h) - E(T - h)) / (2.0 * h)

    d1 = central(fd_step)
    d2 = central(0.5 * fd_step)
    dEdT = (4.0 * d2 - d1) / 3.0
    S = -dEdT
    rich_err = abs(d2 - d1) / 3.0
    if rich_err > abs(S) and rich_err > 0.0:
        warnings.append(
            f"entropy precision warning at T={T} K: Richardson error "
            f"{rich_err:.3e} exceeds |S| = {abs(S):.3e}"
        )
    return EntropyPoint(T=T, S=S, fd_step=fd_step,
                        richardson_error=rich_err, warnings=tuple(warnings))


def g_probe(p: str, k: float, geom: Geometry, T: float,
            model: Optional[ReflectionModel] = None) -> GProbe:
    """First and second xi-derivatives of g^p at xi -> 0+ for one k.

    One-sided four-point stencils on xi = {0, 1, 2, 3} h with
    h = 1e-4 xi_1(T); both derivative estimates are cross-checked against a
    half-step stencil and a ProbeError is raised if they disagree beyond
    the stencil's own scale.
    """
    if k <= 0.0:
        raise DomainError(f"k must be > 0, got {k!r}")
    theta = 2.0 * math.pi * phys.K_B * T / phys.HBAR
    h0 = 1.0e-4 * phys.matsubara_xi(1, T)

    def stencil(h: float):
        g = [g_mode(p, Mode(xi=j * h, k=k), geom, T, model) for j in range(4)]
        g_xi = (-11.0 * g[0] + 18.0 * g[1] - 9.0 * g[2] + 2.0 * g[3]) / (6.0 * h)
        g_xixi = (2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]) / (h * h)
        return g, g_xi, g_xixi

    gv, gxi_a, gxx_a = stencil(h0)
    _, gxi_b, gxx_b = stencil(0.5 * h0)
    if not all(map(math.isfinite, (gxi_a, gxi_b, gxx_a, gxx_b))):
        raise ProbeError(f"non-finite probe values for {p} at k={k:.3e}")
    # Agreement scale: a genuine derivative reproduces within ~|g_xi| between
    # steps; an identically vanishing one only resolves down to the
    # curvature-step scale |g_xixi| h, or to max|g|/h when g itself vanishes
    # to higher order at xi = 0 (e.g. the quartic TE mode function of an
    # ideal dielectric).
    g_scale = max(abs(v) for v in gv)
    scale = max(abs(gxi_b), abs(gxx_b) * h0, g_scale / h0, 1e-300)
    if abs(gxi_a - gxi_b) > scale:
        raise ProbeError(
            f"stencil non-convergence for {p} g_xi at k={k:.3e}: "
            f"h-step {gxi_a:.6e} vs h/2-step {gxi_b:.6e}"
        )
    return GProbe(p=p.upper(), k=k, theta=theta, g0=gv[0], g_xi=gxi_b, g_xixi=gxx_b)


def nernst_sweep(geom: Geometry, model: Optional[ReflectionModel],
                 T_list: Sequence[float],
                 fd_step: Optional[float] = None,
                 tolerances: Optional[Tolerances] = None) -> NernstReport:
    """Entropy at each temperature with shared settings, plus diagnostics.

    ``monotone_abs_decreasing`` checks that |S| decreases with T over the
    sweep's temperatures at or below 75 K (sorted descending), the
    desk-scale version of the Nernst trend.
    """
    pts = [entropy(geom, t, model=model, fd_step=fd_step, tolerances=tolerances)
           for t in T_list]
    low = sorted((pt for pt in pts if pt.T <= 75.0), key=lambda pt: -pt.T)
    monotone = all(abs(a.S) > abs(b.S) for a, b in zip(low, low[1:]))
    by_T = sorted(pts, key=lambda pt: pt.T)
    ratio = math.inf
    if by_T and abs(by_T[-1].S) > 0.0:
        ratio = abs(by_T[0].S) / abs(by_T[-1].S)
    return NernstReport(points=tuple(pts),
                        monotone_abs_decreasing=monotone,
                        s_ratio_low_to_high=ratio)
