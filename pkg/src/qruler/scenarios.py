"""Concrete measurement scenarios producing lambda-parameterized statistics.

Four families:

* linear shifts of a Gaussian probe read out by a Gaussian ruler (1-D),
* phase shifts of a number-basis Gaussian on the continuum approximation,
* phase shifts of a truncated geometric-series (non-Gaussian) probe under
  an ideal phase measurement, periodic on (-pi, pi),
* joint (m, k) readout by squeezed-coherent projections, driven either by
  the quadratic generator p^2 or by a phase-space rotation.

Each ``run_*`` returns a :class:`ScenarioRun` whose ``family`` maps a
signal value to an outcome distribution on a fixed grid, ready for the
finite-difference Fisher machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coherence import (
    CoherenceFunction,
    OutcomeDistribution,
    _finalize_density,
    coherence_function,
    statistics_from_coherence,
)
from .errors import ContinuumApproxViolated, GridTooNarrow, NonPositiveSigma
from .fisher import FisherReport, closed_form_fn, closed_form_fp2, closed_form_linear, closed_form_phase
from .grids import GeneratorGrid, GeneratorKind, grid_for_gaussian
from .ruler import FLAT_DIAGONAL, make_gaussian_ruler, make_ideal_ruler
from .states import GaussianProbeSpec, PureProbe, SGProbeSpec, make_gaussian_probe, make_sg_probe

SPAN_SIGMAS = 8.0


@dataclass(frozen=True, eq=False)
class ScenarioRun:
    """A prepared scenario: outcome statistics as a function of the signal."""

    scenario: str
    family: Callable[[float], OutcomeDistribution]
    closed_form: FisherReport | None = None
    qfi: float | None = None
    gamma: CoherenceFunction | None = None
    probe: PureProbe | None = None
    default_step: float = 1e-4

    def distribution(self, lam: float = 0.0) -> OutcomeDistribution:
        return self.family(lam)


def _default_step(crb: float | None) -> float:
    if crb is None or not math.isfinite(crb) or crb <= 0:
        return 1e-4
    return 1e-3 * math.sqrt(crb)


# ---------------------------------------------------------------------------
# 1-D scenarios backed by the coherence-function transform
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearScenario:
    """Position shifts: generator P, widths are standard deviations."""

    dx_s: float
    dx_m: float  # 0 means ideal (projective) position readout
    x0: float = 0.0
    p0: float = 0.0
    n_points: int = 512

    def __post_init__(self):
        if not self.dx_s > 0:
            raise NonPositiveSigma("dx_s must be > 0")
        if self.dx_m < 0:
            raise NonPositiveSigma("dx_m must be >= 0")


def run_linear(sc: LinearScenario) -> ScenarioRun:
    """p(m|lambda): Gaussian centered at x0 + lambda, variance dx_s^2 + dx_m^2.

    Built in the generator (momentum) eigenbasis: the probe has momentum
    width 1/(2*dx_s) and a linear phase encoding the position center, the
    ruler kernel is exp(-dx_m^2 (p-p')^2 / 2)/(2*pi).  A signal value
    multiplies the coherence function by exp(i*tau*lambda).
    """
    sigma_p = 1.0 / (2.0 * sc.dx_s)
    grid = grid_for_gaussian(sc.p0, sigma_p, sc.n_points, SPAN_SIGMAS, GeneratorKind.P)
    # phase slope -x0 puts the outcome distribution's center at +x0
    probe = make_gaussian_probe(
        GaussianProbeSpec(center=sc.p0, sigma=sigma_p, conjugate_center=-sc.x0), grid
    )
    ruler = make_gaussian_ruler(sc.dx_m, grid) if sc.dx_m > 0 else make_ideal_ruler(grid)
    gamma = coherence_function(probe, ruler)

    def family(lam: float) -> OutcomeDistribution:
        return statistics_from_coherence(gamma.shifted(lam))

    closed = closed_form_linear(sc.dx_s, sc.dx_m)
    return ScenarioRun(
        scenario="linear",
        family=family,
        closed_form=closed,
        qfi=closed.qfi,
        gamma=gamma,
        probe=probe,
        default_step=_default_step(closed.crb),
    )


@dataclass(frozen=True)
class PhaseGaussianScenario:
    """Phase shifts of a number-basis Gaussian, continuum approximation."""

    n_mean: float
    dn_s: float
    dphi_m: float = 0.0  # 0 means ideal phase measurement
    n_points: int = 1024

    def __post_init__(self):
        if not self.dn_s > 0:
            raise NonPositiveSigma("dn_s must be > 0")
        if self.dphi_m < 0:
            raise NonPositiveSigma("dphi_m must be >= 0")


def run_phase_gaussian(sc: PhaseGaussianScenario) -> ScenarioRun:
    """p(phi|lambda) for a bright number-basis Gaussian probe.

    Valid only when the mean excitation is large enough that the discrete
    number spectrum can be treated as a real axis; the gate here is
    n_mean >= 5 * dn_s, otherwise the grid would cross n = 0 with
    non-negligible mass.
    """
    if sc.n_mean < 5.0 * sc.dn_s:
        raise ContinuumApproxViolated(
            f"need n_mean >= 5*dn_s for the continuum approximation, "
            f"got n_mean={sc.n_mean}, dn_s={sc.dn_s}"
        )
    grid = grid_for_gaussian(sc.n_mean, sc.dn_s, sc.n_points, SPAN_SIGMAS, GeneratorKind.N)
    probe = make_gaussian_probe(GaussianProbeSpec(center=sc.n_mean, sigma=sc.dn_s), grid)
    ruler = (
        make_gaussian_ruler(sc.dphi_m, grid) if sc.dphi_m > 0 else make_ideal_ruler(grid)
    )
    gamma = coherence_function(probe, ruler)

    def family(lam: float) -> OutcomeDistribution:
        return statistics_from_coherence(gamma.shifted(lam))

    closed = closed_form_phase(1.0 / (2.0 * sc.dn_s), sc.dphi_m)
    return ScenarioRun(
        scenario="phase_gaussian",
        family=family,
        closed_form=closed,
        qfi=closed.qfi,
        gamma=gamma,
        probe=probe,
        default_step=_default_step(closed.crb),
    )


# ---------------------------------------------------------------------------
# Non-Gaussian periodic phase scenario
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SGScenario:
    """Ideal phase measurement over the geometric-series probe."""

    xi: complex
    n_max: int | None = None


def sg_wk_variance(xi: complex) -> float:
    """Closed-form squared signal uncertainty pi*((1-|xi|^2)/(1+|xi|^2))^2."""
    a2 = abs(xi) ** 2
    return math.pi * ((1.0 - a2) / (1.0 + a2)) ** 2


def sg_fisher_variance(xi: complex) -> float:
    """Cramér-Rao variance (1-|xi|^2)^2 / (2|xi|^2) of the same scenario."""
    a2 = abs(xi) ** 2
    if a2 == 0.0:
        return math.inf
    return (1.0 - a2) ** 2 / (2.0 * a2)


def sg_closed_form_density(xi: complex, phi: np.ndarray, lam: float = 0.0) -> np.ndarray:
    """p(phi|lambda) = ((1-|xi|^2)/2pi) / |1 - xi e^{i(phi-lambda)}|^2."""
    a2 = abs(xi) ** 2
    return (1.0 - a2) / (2.0 * np.pi) / np.abs(1.0 - xi * np.exp(1j * (phi - lam))) ** 2


def _sg_coherence(probe: PureProbe) -> CoherenceFunction:
    """Gamma(tau) = sum_n c_n conj(c_{n+tau}) / (2*pi) on integer tau.

    Computed as an FFT-based autocorrelation of the amplitude series;
    the flat 1/(2*pi) kernel of the ideal phase measurement enters as a
    constant factor.
    """
    c = probe.amplitudes
    n = len(c)
    size = 1 << int(math.ceil(math.log2(2 * n - 1)))
    spec = np.fft.fft(c, size)
    corr = np.fft.ifft(spec * np.conj(spec))  # corr[t] = sum_n c_{n+t} conj(c_n)
    pos = corr[:n]                            # lags 0 .. n-1
    neg = corr[size - n + 1:]                 # lags -(n-1) .. -1
    full = np.concatenate([neg, pos])         # lag j at index j + n - 1
    # Gamma(tau) = sum_n c_n conj(c_{n+tau}) = corr[-tau]
    vals = FLAT_DIAGONAL * full[::-1]
    tau = np.arange(-(n - 1), n, dtype=float)
    g0 = vals[n - 1].real
    vals.flags.writeable = False
    tau.flags.writeable = False
    return CoherenceFunction(tau, vals, g0)


def run_phase_sg(sc: SGScenario) -> ScenarioRun:
    """Periodic phase statistics of the truncated geometric-series probe.

    The transform is a Fourier series over integer tau; outcomes are the
    M = 2*n_max + 1 phases phi_k = 2*pi*k/M on (-pi, pi).
    """
    probe = make_sg_probe(SGProbeSpec(xi=sc.xi, n_max=sc.n_max))
    gamma = _sg_coherence(probe)

    def family(lam: float) -> OutcomeDistribution:
        return statistics_from_coherence(gamma.shifted(lam))

    var = sg_fisher_variance(sc.xi)
    fisher = 0.0 if math.isinf(var) else 1.0 / var
    qfi = 2.0 * fisher if fisher > 0 else None  # QFI = 4 Var(N) = 2 F here
    closed = FisherReport(
        fisher=fisher,
        crb=var,
        method="closed_form",
        scenario="phase_sg",
        qfi=qfi,
        ratio_to_qfi=None if qfi is None else fisher / qfi,
    )
    step = _default_step(min(var, sg_wk_variance(sc.xi)) if math.isfinite(var) else None)
    return ScenarioRun(
        scenario="phase_sg",
        family=family,
        closed_form=closed,
        qfi=qfi,
        gamma=gamma,
        probe=probe,
        default_step=step,
    )


# ---------------------------------------------------------------------------
# Joint (m, k) scenarios: squeezed-coherent projections
# ---------------------------------------------------------------------------


def _window_fourier_overlap(
    values: np.ndarray,
    axis: np.ndarray,
    spacing: float,
    window_sigma: float,
    centers: np.ndarray,
    freqs: np.ndarray,
) -> np.ndarray:
    """O[c, f] = N_w * sum_x e^{-(x - center_c)^2/(4 sw^2)} values(x) e^{i x freq_f} dx.

    The building block of squeezed-coherent projections: a Gaussian window
    of width ``window_sigma`` along one outcome axis, a Fourier phase along
    the other.  N_w = (window_sigma * sqrt(2*pi))^{-1/2}.
    """
    window = np.exp(-((axis[None, :] - centers[:, None]) ** 2) / (4.0 * window_sigma**2))
    phases = np.exp(1j * np.outer(axis, freqs))
    overlap = (window * values[None, :]) @ phases
    overlap *= spacing / math.sqrt(window_sigma * math.sqrt(2.0 * math.pi))
    return overlap


def _joint_from_p_rep(
    psi_p: np.ndarray,
    grid: GeneratorGrid,
    dx_m: float,
    m_grid: np.ndarray,
    k_grid: np.ndarray,
) -> OutcomeDistribution:
    """Joint density |<phi_{m,k}|psi>|^2/(2*pi) from a momentum-space state.

    In the momentum representation the projection states are Gaussian
    windows of width dp_m = 1/(2*dx_m) centered at -k, with phase e^{ipm}.
    """
    dp_m = 1.0 / (2.0 * dx_m)
    overlap = _window_fourier_overlap(
        psi_p, grid.points, grid.spacing, dp_m, -k_grid, m_grid
    )  # indexed [k, m]
    dens = np.abs(overlap.T) ** 2 / (2.0 * np.pi)  # [m, k]
    return _finalize_density(m_grid, dens, k_grid=k_grid)


def _joint_from_x_rep(
    psi_x: np.ndarray,
    grid: GeneratorGrid,
    dx_m: float,
    m_grid: np.ndarray,
    k_grid: np.ndarray,
) -> OutcomeDistribution:
    """Same POVM evaluated from a position-space state: window along m."""
    overlap = _window_fourier_overlap(
        psi_x, grid.points, grid.spacing, dx_m, m_grid, k_grid
    )  # indexed [m, k]
    dens = np.abs(overlap) ** 2 / (2.0 * np.pi)
    return _finalize_density(m_grid, dens, k_grid=k_grid)


def _outcome_axis(center: float, half_width: float, n: int) -> np.ndarray:
    axis = np.linspace(center - half_width, center + half_width, n)
    axis.flags.writeable = False
    return axis


@dataclass(frozen=True)
class NonlinearScenario:
    """Generator p^2 on a Gaussian probe, squeezed-coherent (m, k) readout.

    ``vx_s`` and ``vx_m`` are X-quadrature variances of probe and ruler;
    the conjugate variances follow the minimum-uncertainty link of pure
    uncorrelated Gaussians, vp = 1/(4*vx).
    """

    vx_s: float
    vx_m: float
    x0: float = 0.0
    p0: float = 0.0
    n_points: int = 1024
    m_points: int = 256
    k_points: int = 256
    lambda_pad: float = 0.05  # largest |lambda| the outcome grids must absorb

    def __post_init__(self):
        if not self.vx_s > 0 or not self.vx_m > 0:
            raise NonPositiveSigma("variances must be > 0")


def run_nonlinear(sc: NonlinearScenario) -> ScenarioRun:
    """Evolve psi_lambda(p) = e^{-i lambda p^2} psi0(p), project on (m, k).

    The evolution is exact (diagonal in momentum); outcome grids cover
    8 effective sigmas of the lambda-evolved state in each axis.
    """
    vp_s = 1.0 / (4.0 * sc.vx_s)
    sigma_p = math.sqrt(vp_s)
    dx_m = math.sqrt(sc.vx_m)
    vp_m = 1.0 / (4.0 * sc.vx_m)
    grid = grid_for_gaussian(sc.p0, sigma_p, sc.n_points, SPAN_SIGMAS, GeneratorKind.P2)
    probe = make_gaussian_probe(
        GaussianProbeSpec(center=sc.p0, sigma=sigma_p, conjugate_center=-sc.x0), grid
    )
    pad = sc.lambda_pad
    # free-spreading of the x-width under e^{-i lambda p^2}: vx + 4 lambda^2 vp
    m_half = SPAN_SIGMAS * math.sqrt(sc.vx_s + 4.0 * pad**2 * vp_s + sc.vx_m)
    m_half += 2.0 * pad * abs(sc.p0)
    m_grid = _outcome_axis(sc.x0, m_half, sc.m_points)
    k_grid = _outcome_axis(-sc.p0, SPAN_SIGMAS * math.sqrt(vp_s + vp_m), sc.k_points)
    p_axis = grid.points

    def family(lam: float) -> OutcomeDistribution:
        if abs(lam) > pad * (1.0 + 1e-9):
            raise GridTooNarrow(
                f"|lambda|={abs(lam)} exceeds the sized range {pad}"
            )
        psi_lam = probe.amplitudes * np.exp(-1j * lam * p_axis**2)
        return _joint_from_p_rep(psi_lam, grid, dx_m, m_grid, k_grid)

    closed = closed_form_fp2(sc.vx_s, sc.vx_m, sc.p0)
    return ScenarioRun(
        scenario="nonlinear",
        family=family,
        closed_form=closed,
        qfi=closed.qfi,
        probe=probe,
        default_step=_default_step(closed.crb),
    )


@dataclass(frozen=True)
class CoherentSqueezedScenario:
    """Phase rotations of a displaced (possibly squeezed) Gaussian probe.

    Variances as in :class:`NonlinearScenario`; the probe is centered at
    (x0, p0) in phase space and read out by squeezed-coherent projections.
    """

    vx_s: float
    vx_m: float
    x0: float = 0.0
    p0: float = 0.0
    n_points: int = 1024
    m_points: int = 256
    k_points: int = 256

    def __post_init__(self):
        if not self.vx_s > 0 or not self.vx_m > 0:
            raise NonPositiveSigma("variances must be > 0")


def rotate_gaussian(
    vx: float, x0: float, p0: float, lam: float, x_axis: np.ndarray
) -> np.ndarray:
    """Exact phase-space rotation of a pure uncorrelated Gaussian.

    Rotates means and covariance by angle ``lam`` and reconstructs the
    wavefunction; a rotated pure Gaussian has complex width parameter
    alpha = 1/(4 Vx) - i Cxp/(2 Vx).  The global phase is dropped.
    """
    vp = 1.0 / (4.0 * vx)
    c, s = math.cos(lam), math.sin(lam)
    mean_x = c * x0 + s * p0
    mean_p = -s * x0 + c * p0
    vx_l = c * c * vx + s * s * vp
    cxp_l = c * s * (vp - vx)
    alpha = 1.0 / (4.0 * vx_l) - 1j * cxp_l / (2.0 * vx_l)
    u = x_axis - mean_x
    psi = (2.0 * np.pi * vx_l) ** (-0.25) * np.exp(-alpha * u**2 + 1j * mean_p * u)
    return psi


def rotate_by_propagator(
    psi0: np.ndarray, grid: GeneratorGrid, lam: float
) -> np.ndarray:
    """Grid-based rotation through the harmonic propagator, for cross-checks.

    psi_lam(x) = integral dx' K(x, x') psi0(x') with the oscillator kernel
    K = (2 pi i sin lam)^{-1/2} exp(i[(x^2+x'^2) cos lam - 2 x x']/(2 sin lam)).
    Accurate for moderate angles; useless as sin(lam) -> 0 where the kernel
    degenerates to a delta.  Result carries an arbitrary global phase.
    """
    s = math.sin(lam)
    if abs(s) < 1e-3:
        raise ValueError("propagator route degenerates for small angles")
    x = grid.points
    c = math.cos(lam)
    kernel = np.exp(1j * ((x[:, None] ** 2 + x[None, :] ** 2) * c - 2.0 * np.outer(x, x)) / (2.0 * s))
    kernel = kernel / np.sqrt(2.0j * np.pi * s)
    return (kernel @ psi0) * grid.spacing


def run_phase_coherent_squeezed(sc: CoherentSqueezedScenario) -> ScenarioRun:
    """Joint (m, k) statistics of a rotating Gaussian probe.

    The rotation is applied exactly on the Gaussian's means and covariance;
    outcome grids are sized to cover the whole rotation circle, so the
    family is valid for any angle.
    """
    vp_s = 1.0 / (4.0 * sc.vx_s)
    dx_m = math.sqrt(sc.vx_m)
    vp_m = 1.0 / (4.0 * sc.vx_m)
    radius = math.hypot(sc.x0, sc.p0)
    sig_max = math.sqrt(max(sc.vx_s, vp_s))
    half_state = SPAN_SIGMAS * sig_max + radius
    n_pts = sc.n_points
    grid = GeneratorGrid(-half_state, half_state, n_pts, GeneratorKind.N)
    m_grid = _outcome_axis(0.0, SPAN_SIGMAS * math.sqrt(sig_max**2 + sc.vx_m) + radius, sc.m_points)
    k_grid = _outcome_axis(0.0, SPAN_SIGMAS * math.sqrt(sig_max**2 + vp_m) + radius, sc.k_points)
    x_axis = grid.points

    def family(lam: float) -> OutcomeDistribution:
        psi_lam = rotate_gaussian(sc.vx_s, sc.x0, sc.p0, lam, x_axis)
        return _joint_from_x_rep(psi_lam, grid, dx_m, m_grid, k_grid)

    closed = closed_form_fn(sc.vx_s, vp_s, sc.vx_m, vp_m, sc.x0, sc.p0)
    qfi = gaussian_number_qfi(sc.vx_s, vp_s, sc.x0, sc.p0)
    return ScenarioRun(
        scenario="phase_coherent_squeezed",
        family=family,
        closed_form=closed,
        qfi=qfi,
        default_step=_default_step(closed.crb),
    )


def gaussian_number_qfi(vx: float, vp: float, x0: float, p0: float) -> float:
    """4*Var(N) of a pure Gaussian state: 2(vx^2+vp^2) - 1 + 4(vx x0^2 + vp p0^2)."""
    return 2.0 * (vx**2 + vp**2) - 1.0 + 4.0 * (vx * x0**2 + vp * p0**2)


# ---------------------------------------------------------------------------
# Phase-space phase distribution of blurred squeezed vacuum
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PhaseDistribution:
    phi_grid: np.ndarray
    density: np.ndarray
    delta2_phi0: float      # heuristic width vx*vp/|vx-vp|, inf when vx = vp
    kappa: float            # profile parameter: density ~ 1/(1 + kappa sin^2 phi)
    profile_residual: float  # sup-norm gap between samples and the profile

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.delta2_phi0)


def phase_distribution_ws(
    vx_eff: float, vp_eff: float, n_phi: int = 2049, n_r: int = 4097
) -> PhaseDistribution:
    """Polar-angle distribution of a centered Gaussian phase-space function.

    ``vx_eff`` and ``vp_eff`` are blurred variances (probe plus detector).
    The radial integral of the Gaussian gives exactly

        W(phi) = N / (1 + kappa sin^2 phi),  kappa = vx_eff/vp_eff - 1,

    a Fabry-Perot-like profile; the sampled density is produced by radial
    quadrature and compared against that closed form.  The heuristic
    squared width vx*vp/|vx - vp| is infinite in the rotationally
    symmetric case vx_eff = vp_eff, where W is uniform.
    """
    if not vx_eff > 0 or not vp_eff > 0:
        raise NonPositiveSigma("effective variances must be > 0")
    phi = np.linspace(-np.pi, np.pi, n_phi, endpoint=False)
    r_max = 12.0 * math.sqrt(max(vx_eff, vp_eff))
    r = np.linspace(0.0, r_max, n_r)
    quad = (np.cos(phi) ** 2 / vx_eff + np.sin(phi) ** 2 / vp_eff)[:, None]
    wigner = np.exp(-0.5 * quad * r[None, :] ** 2) / (
        2.0 * np.pi * math.sqrt(vx_eff * vp_eff)
    )
    dens = np.trapezoid(wigner * r[None, :], r, axis=1)
    dens /= np.sum(dens) * (2.0 * np.pi / n_phi)

    kappa = vx_eff / vp_eff - 1.0
    profile = math.sqrt(1.0 + kappa) / (2.0 * np.pi) / (1.0 + kappa * np.sin(phi) ** 2)
    residual = float(np.max(np.abs(dens - profile)))
    if vx_eff == vp_eff:
        width = math.inf
    else:
        width = vx_eff * vp_eff / abs(vx_eff - vp_eff)
    dens.flags.writeable = False
    phi.flags.writeable = False
    return PhaseDistribution(
        phi_grid=phi,
        density=dens,
        delta2_phi0=width,
        kappa=kappa,
        profile_residual=residual,
    )
