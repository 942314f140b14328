"""Fisher information, Cramér-Rao bounds and per-scenario closed forms.

The numerical route differentiates a lambda-parameterized family of
outcome densities with a 4-point central-difference stencil plus
Richardson extrapolation, then integrates (dp/dlambda)^2 / p.  Closed
forms for the linear, phase, rotation and quadratic-generator scenarios
are provided alongside for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coherence import OutcomeDistribution
from .errors import GridMismatch, NonPositiveSigma, StepTooLarge
from .grids import GeneratorKind
from .states import PureProbe

DENSITY_FLOOR = 1e-12       # relative floor excluding 0/0 quadrature noise
RESIDUAL_GATE = 1e-3        # Richardson residual gate, relative
QFI_SLACK = 1e-6            # numerical headroom on F <= F_Q


@dataclass(frozen=True)
class FisherReport:
    fisher: float
    crb: float
    method: str  # "numerical" or "closed_form"
    scenario: str = ""
    qfi: float | None = None
    ratio_to_qfi: float | None = None

    def __post_init__(self):
        if self.fisher < 0:
            raise ValueError(f"Fisher information must be >= 0, got {self.fisher}")
        if self.fisher > 0 and abs(self.crb * self.fisher - 1.0) > 1e-12:
            raise ValueError("crb must be the inverse of fisher")
        if self.qfi is not None and self.fisher > self.qfi * (1.0 + QFI_SLACK):
            raise ValueError(
                f"Fisher {self.fisher} exceeds quantum bound {self.qfi}"
            )


def _report(fisher: float, method: str, scenario: str, qfi: float | None = None,
            ratio: float | None = None) -> FisherReport:
    crb = math.inf if fisher == 0 else 1.0 / fisher
    return FisherReport(fisher=fisher, crb=crb, method=method,
                        scenario=scenario, qfi=qfi, ratio_to_qfi=ratio)


def _quadrature(deriv: np.ndarray, p0: np.ndarray, cell: float) -> float:
    mask = p0 >= DENSITY_FLOOR * np.max(p0)
    return float(np.sum(deriv[mask] ** 2 / p0[mask]) * cell)


def fisher_from_family(
    p_family: Callable[[float], OutcomeDistribution],
    lambda0: float,
    step: float,
    scenario: str = "",
    qfi: float | None = None,
) -> FisherReport:
    """F = integral (d p/d lambda)^2 / p at lambda0, by finite differences.

    The derivative uses the 4-point stencil at lambda0 +/- step and
    lambda0 +/- 2*step, Richardson-combined to fourth order.  If the
    extrapolation correction changes F by more than 0.1% the step is
    rejected as too large (or too small, drowned in roundoff).
    """
    if not step > 0:
        raise ValueError("step must be > 0")
    center = p_family(lambda0)
    offsets = {d: p_family(lambda0 + d * step) for d in (-2, -1, 1, 2)}
    for dist in offsets.values():
        if dist.density.shape != center.density.shape or not np.array_equal(
            dist.mu_grid, center.mu_grid
        ):
            raise GridMismatch("family members must share an outcome grid")
    d1 = (offsets[1].density - offsets[-1].density) / (2.0 * step)
    d2 = (offsets[2].density - offsets[-2].density) / (4.0 * step)
    dr = (4.0 * d1 - d2) / 3.0
    cell = center.cell
    f_r = _quadrature(dr, center.density, cell)
    f_1 = _quadrature(d1, center.density, cell)
    residual = abs(f_1 - f_r) / max(f_r, 1e-300)
    # below ~1e-12 the family carries no resolvable information and the
    # relative residual is pure noise
    if f_r > 1e-12 and residual > RESIDUAL_GATE:
        raise StepTooLarge(
            f"Richardson residual {residual:.3e} exceeds {RESIDUAL_GATE}"
        )
    ratio = None if qfi is None else f_r / qfi
    return _report(f_r, "numerical", scenario, qfi, ratio)


def qfi_pure(probe: PureProbe, generator_kind: GeneratorKind) -> float:
    """Quantum Fisher information 4*Var(G) of a pure probe.

    On a grid of generator eigenvalues g the operator acts by
    multiplication: by g for P and N, by g**2 when the generator is the
    square of the grid variable (P2).
    """
    g = probe.grid.points
    op = g**2 if generator_kind == GeneratorKind.P2 else g
    w = np.abs(probe.amplitudes) ** 2 * probe.grid.spacing
    m1 = float(np.sum(op * w))
    m2 = float(np.sum(op**2 * w))
    return 4.0 * (m2 - m1 * m1)


def closed_form_linear(dx_s: float, dx_m: float) -> FisherReport:
    """Linear shifts with Gaussian probe/ruler of widths dx_s, dx_m.

    Delta^2 lambda = dx_s^2 + dx_m^2; dx_m = 0 is the ideal measurement,
    where F equals the quantum Fisher information 4*Var(P) = 1/dx_s^2.
    """
    if not dx_s > 0:
        raise NonPositiveSigma("dx_s must be > 0")
    if dx_m < 0:
        raise NonPositiveSigma("dx_m must be >= 0")
    var = dx_s**2 + dx_m**2
    qfi = 1.0 / dx_s**2
    return _report(1.0 / var, "closed_form", "linear", qfi, (1.0 / var) / qfi)


def closed_form_phase(dphi_s: float, dphi_m: float) -> FisherReport:
    """Phase shifts: Delta^2 lambda = dphi_m^2 + dphi_s^2.

    dphi_s is the probe's phase width 1/(2*dn_s) for a number-basis
    Gaussian of width dn_s; the ideal measurement dphi_m = 0 saturates
    the quantum bound.
    """
    if not dphi_s > 0:
        raise NonPositiveSigma("dphi_s must be > 0")
    if dphi_m < 0:
        raise NonPositiveSigma("dphi_m must be >= 0")
    var = dphi_s**2 + dphi_m**2
    qfi = 1.0 / dphi_s**2  # 4*Var(N) = 1/dphi_s^2
    return _report(1.0 / var, "closed_form", "phase", qfi, (1.0 / var) / qfi)


def closed_form_fn(
    vx_s: float, vp_s: float, vx_m: float, vp_m: float, x0: float, p0: float
) -> FisherReport:
    """Rotation-generator Fisher information for joint (m, k) readout.

    Arguments are variances (not widths), kept independent so blurred or
    non-minimum-uncertainty combinations can be evaluated:

        F_N = (vx_s - vp_s)^2 / ((vx_s + vx_m)(vp_s + vp_m))
              + x0^2 / (vp_s + vp_m) + p0^2 / (vx_s + vx_m)
    """
    for name, v in (("vx_s", vx_s), ("vp_s", vp_s), ("vx_m", vx_m), ("vp_m", vp_m)):
        if not v > 0:
            raise NonPositiveSigma(f"{name} must be > 0")
    a = vx_s + vx_m
    b = vp_s + vp_m
    f = (vx_s - vp_s) ** 2 / (a * b) + x0**2 / b + p0**2 / a
    return _report(f, "closed_form", "phase_rotation_joint")


def closed_form_fp2(vx_s: float, vx_m: float, p0: float) -> FisherReport:
    """Quadratic-generator Fisher information for joint (m, k) readout.

    Arguments are X variances; the conjugate variances follow the
    minimum-uncertainty link vp = 1/(4*vx).  With the linear-scenario
    F_P = 1/(vx_s + vx_m),

        F_{P^2} = (vp_s / vp_m) F_P^2 + 4 p0^2 F_P,

    which at p0 = 0 reads (vx_m / vx_s) / (vx_m + vx_s)^2.  The report
    carries the ratio to the probe's quantum Fisher information
    QF = 1/(2*vx_s^2); that ratio is symmetric under swapping probe and
    measurement variances even though F itself is not.
    """
    if not vx_s > 0:
        raise NonPositiveSigma("vx_s must be > 0")
    if not vx_m > 0:
        raise NonPositiveSigma("vx_m must be > 0")
    f_p = 1.0 / (vx_s + vx_m)
    f = (vx_m / vx_s) * f_p**2 + 4.0 * p0**2 * f_p
    vp_s = 1.0 / (4.0 * vx_s)
    qfi = 8.0 * vp_s**2 + 16.0 * p0**2 * vp_s  # 4*Var(P^2), Gaussian probe
    return _report(f, "closed_form", "quadratic_joint", qfi, f / qfi)
