"""End-to-end scenario runs: free-space Airy, forced Airy, shifted SHO modes,
plus the two controls (spreading Gaussian, time-modulated SHO frequency).

Each run constructs the closed-form packet, self-checks it against the
time-dependent Schrodinger equation, propagates it independently with
Crank-Nicolson, and reduces the result to named pass/fail checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .constructor import (AiryShape, GaugeFunction, NswpSolution, SampledShape,
                          analytic_psi, gauge_linear_case, gauge_sho_case,
                          tdse_residual, v_nswp)
from .eigensolver import StaticPotential, lowest_eigenpairs
from .errors import ConfigurationError
from .grids import (Grid1D, PhysicalConstants, WaveField, inner_product,
                    observables, shift_field)
from .propagator import (AbsorbingMask, Dirichlet, PropagationConfig,
                         RunReport, propagate)
from .quadrature import (integrate_time, nested_triple_integral)
from .trajectory import (Rest, Sinusoid, Trajectory, UniformAcceleration,
                         trajectory_from_force)
from .verifier import (CheckResult, classical_motion_check, energy_split_check,
                       make_htilde_metric)


@dataclass
class ScenarioResult:
    name: str
    report: RunReport
    checks: list
    extras: dict = dc_field(default_factory=dict)
    solution: Optional[NswpSolution] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "extras": self.extras,
            "report": self.report.to_dict() if self.report is not None else None,
        }


def _overlap_mod(a: WaveField, b: WaveField) -> float:
    num = abs(inner_product(a, b))
    den = math.sqrt(inner_product(a, a).real * inner_product(b, b).real)
    return num / den


# ---------------------------------------------------------------------------
# Shifted SHO eigenstates (Schrodinger / Senitzky family)
# ---------------------------------------------------------------------------

def run_sho_shifted(
    n: int = 0,
    amplitude: float = 2.0,
    omega: float = 1.0,
    grid: Grid1D = None,
    dt: float = None,
    periods: float = 1.0,
    snapshot_stride: int = 100,
    consts: PhysicalConstants = PhysicalConstants(),
    tol_shape: float = 5e-4,
    tol_motion: float = 1e-4,
    tol_energy: float = 2e-4,
    tol_overlap: float = 1e-4,
) -> ScenarioResult:
    """Propagate the shifted n-th SHO eigenstate for ``periods`` periods."""
    if grid is None:
        # dx ~ 4e-3 keeps FD dispersion below the 1e-4 motion tolerances
        grid = Grid1D(-8.0, 8.0, 4096)
    period = 2.0 * math.pi / omega
    if dt is None:
        dt = period / 20000.0
    t_end = periods * period

    v_static = StaticPotential.harmonic(omega, consts.mass)
    pair = lowest_eigenpairs(v_static, grid, consts, n + 1)[n]
    traj = Sinusoid(amplitude=amplitude, omega=omega)
    gauge = gauge_sho_case(omega, traj, consts)
    sol = NswpSolution(SampledShape.from_eigenpair(pair), traj, gauge,
                       consts=consts, t_max=t_end + 1.0)

    # construction self-check before any dynamics
    psi0 = analytic_psi(sol, grid, 0.0)
    peak = float(np.max(np.abs(psi0.values)))
    construction_residual = max(
        tdse_residual(sol, v_static, grid, t) for t in (1e-4, 0.3 * period, 0.7 * period)
    ) / peak

    # with the SHO gauge the supporting potential is the static oscillator
    v_samples = np.asarray(v_static(grid.x))
    gauge_check = float(np.max(np.abs(
        v_nswp(sol, v_static, grid.x, 0.37 * period) - v_samples
    )))

    def ref_density(t):
        return sol.shape.on_grid_shifted(grid, traj.d(t)) ** 2

    config = PropagationConfig(dt=dt, t_end=t_end, grid=grid,
                               snapshot_stride=snapshot_stride)
    report = propagate(
        psi0, lambda x, t: v_samples, config, consts,
        reference_density=ref_density,
        htilde_fn=make_htilde_metric(v_static, traj, consts, pair.energy),
    )

    shape_dev = float(np.max(report.shape_deviation))
    htilde_max = float(np.max(report.htilde_residual))
    overlap = _overlap_mod(report.snapshots[0], report.snapshots[-1])

    checks = [
        CheckResult("construction_tdse_residual", construction_residual, 1e-4,
                    construction_residual < 1e-4, note="relative to max|Psi|"),
        CheckResult("gauge_gives_static_sho", gauge_check, 1e-10, gauge_check < 1e-10),
        CheckResult("shape_deviation", shape_dev, tol_shape, shape_dev < tol_shape),
        CheckResult("htilde_residual_max", htilde_max, 1e-4, htilde_max < 1e-4),
    ]
    checks += classical_motion_check(report, traj, consts,
                                     tol_position=tol_motion, tol_momentum=tol_motion)
    checks += energy_split_check(report, sol, v_static, consts, tol=tol_energy)
    if periods >= 1.0:
        dev = abs(1.0 - overlap)
        checks.append(CheckResult("period_end_overlap", dev, tol_overlap,
                                  dev < tol_overlap))
    return ScenarioResult(
        name=f"sho_shifted_n{n}",
        report=report,
        checks=checks,
        extras={"n": n, "amplitude": amplitude, "omega": omega,
                "energy": pair.energy, "dt": dt, "t_end": t_end},
        solution=sol,
    )


# ---------------------------------------------------------------------------
# Free-space Airy packet (Berry-Balazs)
# ---------------------------------------------------------------------------

def _quadratic_peak(x: np.ndarray, y: np.ndarray) -> float:
    """Peak position by quadratic interpolation around the grid maximum."""
    i = int(np.argmax(y))
    if i == 0 or i == len(y) - 1:
        return float(x[i])
    denom = y[i - 1] - 2 * y[i] + y[i + 1]
    if denom == 0:
        return float(x[i])
    return float(x[i] + 0.5 * (y[i - 1] - y[i + 1]) / denom * (x[1] - x[0]))


def _windowed_momentum(psi: WaveField, sel: np.ndarray, hbar: float) -> float:
    dx = psi.grid.dx
    d1 = np.gradient(psi.values, dx, edge_order=2)
    num = np.trapezoid((np.conj(psi.values) * (-1j * hbar) * d1)[sel], dx=dx).real
    den = np.trapezoid(np.abs(psi.values[sel]) ** 2, dx=dx)
    return float(num / den)


def airy_free_solution(B: float, consts: PhysicalConstants,
                       t_max: float = 10.0) -> NswpSolution:
    """Closed-form free-space Airy packet: E_f = 0, A = B^3/(2m)."""
    A = B**3 / (2.0 * consts.mass)
    shape = AiryShape(A=A, energy=0.0, consts=consts)
    traj = UniformAcceleration(A / consts.mass)
    return NswpSolution(shape, traj, gauge_linear_case(A, traj),
                        consts=consts, t_max=t_max)


def _taper_into_mask(psi: WaveField, mask: AbsorbingMask) -> WaveField:
    """Smoothly take the field to zero across the mask zones.

    The raw Airy mode is truncated abruptly at the domain edges; the kink
    would radiate fast spurious components across the whole window within a
    few steps.
    """
    grid = psi.grid
    x = grid.x
    s = np.clip(
        np.maximum((grid.x_min + mask.width - x) / mask.width,
                   (x - (grid.x_max - mask.width)) / mask.width),
        0.0, 1.0,
    )
    return WaveField(grid=grid, values=psi.values * np.cos(0.5 * np.pi * s) ** 2,
                     time=psi.time)


def run_airy_free(
    B: float = 1.0,
    grid: Grid1D = None,
    dt: float = 5e-4,
    t_end: float = 2.0,
    mask: AbsorbingMask = None,
    window: tuple = (-10.0, 4.0),
    snapshot_stride: int = 200,
    consts: PhysicalConstants = PhysicalConstants(),
    tol_density: float = 1e-3,
    tol_peak_rel: float = 0.02,
) -> ScenarioResult:
    """Free-space propagation of the Airy packet with absorbing boundaries.

    The domain extends far to the left of the comparison window: the
    accelerating packet is fed by right-moving components of the oscillatory
    tail, so the undamped region must cover every tail point whose local
    group velocity can reach the window within t_end.
    """
    if grid is None:
        grid = Grid1D(-36.0, 12.0, 4096)
    if mask is None:
        mask = AbsorbingMask(width=8.0, strength=40.0)
    sol = airy_free_solution(B, consts, t_max=t_end + 1.0)
    A = sol.shape.A
    m = consts.mass

    # supporting potential must vanish identically (free space)
    v_lin = StaticPotential.linear(A)
    vmax = max(
        float(np.max(np.abs(v_nswp(sol, v_lin, grid.x, t)))) for t in (0.0, 0.7, 1.6)
    )
    psi0 = analytic_psi(sol, grid, 0.0)
    peak_psi = float(np.max(np.abs(psi0.values)))
    construction_residual = max(
        tdse_residual(sol, v_lin, grid, t, margin=16) for t in (0.1, 1.0)
    ) / peak_psi
    psi0 = _taper_into_mask(psi0, mask)

    sel = (grid.x >= window[0]) & (grid.x <= window[1])

    def ref_density(t):
        return sol.shape.on_grid_shifted(grid, sol.trajectory.d(t)) ** 2

    config = PropagationConfig(dt=dt, t_end=t_end, grid=grid,
                               snapshot_stride=snapshot_stride, boundary=mask)
    report = propagate(
        psi0, lambda x, t: np.zeros_like(x), config, consts,
        reference_density=ref_density, window=window,
        compute_observables=False,
    )

    # main-lobe peak displacement vs B^3 t^2 / (4 m^2)
    times = np.asarray(report.times)
    peaks = np.array([
        _quadratic_peak(grid.x[sel], snap.density()[sel]) for snap in report.snapshots
    ])
    displacement = peaks - peaks[0]
    expected = B**3 * times**2 / (4.0 * m**2)
    far = expected >= 1.0
    if np.any(far):
        peak_err = float(np.max(np.abs(displacement[far] - expected[far]) / expected[far]))
    else:
        peak_err = float("nan")

    density_mismatch = float(np.max(report.shape_deviation))

    # windowed <P> grows linearly at rate A: H_c carries the constant force
    p_window = np.array([
        _windowed_momentum(snap, sel, consts.hbar) for snap in report.snapshots
    ])
    slope = float(np.polyfit(times, p_window, 1)[0])
    force_err = abs(slope - A) / A

    # mask contamination: windowed probability content vs the reference
    content = np.trapezoid(report.snapshots[-1].density()[sel], dx=grid.dx)
    content_ref = np.trapezoid(ref_density(times[-1])[sel], dx=grid.dx)
    absorbed = abs(1.0 - content / content_ref)

    checks = [
        CheckResult("supporting_potential_is_zero", vmax, 1e-10, vmax < 1e-10),
        CheckResult("construction_tdse_residual", construction_residual, 1e-4,
                    construction_residual < 1e-4, note="relative to max|Psi|"),
        CheckResult("peak_follows_quadratic_law", peak_err, tol_peak_rel,
                    peak_err < tol_peak_rel, note="relative, displacement >= 1"),
        CheckResult("windowed_density_mismatch", density_mismatch, tol_density,
                    density_mismatch < tol_density, note="sup, relative to peak"),
        CheckResult("hc_constant_force", force_err, 0.05, force_err < 0.05,
                    note="d<P_window>/dt vs A, relative"),
        CheckResult("window_content_loss", absorbed, 0.01, absorbed < 0.01),
    ]
    return ScenarioResult(
        name="airy_free",
        report=report,
        checks=checks,
        extras={"B": B, "A": A, "dt": dt, "t_end": t_end,
                "window": list(window), "mask_width": mask.width,
                "mask_strength": mask.strength},
        solution=sol,
    )


# ---------------------------------------------------------------------------
# Forced Airy packet (Berry-Balazs with time-dependent uniform force)
# ---------------------------------------------------------------------------

def phi0_forced_airy(A: float, F: Callable[[float], float], E_f: float, t: float,
                     consts: PhysicalConstants, tol: float = 1e-10) -> float:
    """Global phase of the forced Airy packet from the nested-integral formula.

    phi0 = -E_f t/hbar - A^2 t^3/(3 m hbar)
           - (1/(2 m hbar)) * int_0^t [int_0^tau F]^2 dtau
           - (A/(m hbar)) * [ int_0^t tau (int_0^tau F) dtau + triple integral of F ].

    Independent of the direct quadrature of the accumulated-phase integrand;
    the two routes must agree.
    """
    hbar, m = consts.hbar, consts.mass
    if t == 0.0:
        return 0.0

    def int_f(tau):
        return integrate_time(F, 0.0, tau, tol * 0.1)

    sq_term = integrate_time(lambda tau: int_f(tau) ** 2, 0.0, t, tol)
    tau_term = integrate_time(lambda tau: tau * int_f(tau), 0.0, t, tol)
    triple = nested_triple_integral(F, t, tol)
    return (
        -E_f * t / hbar
        - A**2 * t**3 / (3.0 * m * hbar)
        - sq_term / (2.0 * m * hbar)
        - A / (m * hbar) * (tau_term + triple)
    )


def forced_airy_solution(B: float, F, consts: PhysicalConstants,
                         t_max: float = 10.0) -> NswpSolution:
    A = B**3 / (2.0 * consts.mass)
    shape = AiryShape(A=A, energy=0.0, consts=consts)
    traj = trajectory_from_force(A, F, consts, t_max=t_max)
    return NswpSolution(shape, traj, gauge_linear_case(A, traj),
                        consts=consts, t_max=t_max)


def run_airy_forced(
    F: Callable[[float], float],
    force_label: str = "custom",
    B: float = 1.0,
    grid: Grid1D = None,
    dt: float = 5e-4,
    t_end: float = 2.0,
    mask: AbsorbingMask = None,
    window: tuple = (-10.0, 4.0),
    snapshot_stride: int = 200,
    consts: PhysicalConstants = PhysicalConstants(),
    tol_density: float = 1e-3,
    tol_phase: float = 1e-8,
) -> ScenarioResult:
    """Propagation under V(x, t) = -F(t) x with Airy shape."""
    if grid is None:
        grid = Grid1D(-36.0, 12.0, 4096)
    if mask is None:
        mask = AbsorbingMask(width=8.0, strength=40.0)
    sol = forced_airy_solution(B, F, consts, t_max=t_end + 1.0)
    A = sol.shape.A

    # the supporting potential reduces to -F(t) x
    v_lin = StaticPotential.linear(A)
    vdev = max(
        float(np.max(np.abs(v_nswp(sol, v_lin, grid.x, t) + F(t) * grid.x)))
        for t in (0.0, 0.6, 1.5)
    )
    psi0 = analytic_psi(sol, grid, 0.0)
    peak_psi = float(np.max(np.abs(psi0.values)))
    construction_residual = max(
        tdse_residual(sol, v_lin, grid, t, margin=16) for t in (0.1, 1.0)
    ) / peak_psi

    # dual-route phase: nested-integral formula vs direct quadrature
    ts = np.linspace(0.0, min(3.0, sol.t_max - 0.5), 13)
    phase_dev = max(
        abs(phi0_forced_airy(A, F, sol.E_f, t, consts) - sol.phi0_direct(t))
        for t in ts
    )
    psi0 = _taper_into_mask(psi0, mask)

    def ref_density(t):
        return sol.shape.on_grid_shifted(grid, sol.trajectory.d(t)) ** 2

    config = PropagationConfig(dt=dt, t_end=t_end, grid=grid,
                               snapshot_stride=snapshot_stride, boundary=mask)
    report = propagate(
        psi0, lambda x, t: -F(t) * x, config, consts,
        reference_density=ref_density, window=window,
        compute_observables=False,
    )
    density_mismatch = float(np.max(report.shape_deviation))

    checks = [
        CheckResult("supporting_potential_is_minus_Fx", vdev, 1e-10, vdev < 1e-10),
        CheckResult("construction_tdse_residual", construction_residual, 1e-4,
                    construction_residual < 1e-4, note="relative to max|Psi|"),
        CheckResult("phase_dual_route", phase_dev, tol_phase, phase_dev < tol_phase,
                    note="nested-integral phi0 vs direct quadrature"),
        CheckResult("windowed_density_mismatch", density_mismatch, tol_density,
                    density_mismatch < tol_density, note="sup, relative to peak"),
    ]
    return ScenarioResult(
        name=f"airy_forced_{force_label}",
        report=report,
        checks=checks,
        extras={"B": B, "A": A, "dt": dt, "t_end": t_end, "force": force_label,
                "window": list(window)},
        solution=sol,
    )


# ---------------------------------------------------------------------------
# Controls
# ---------------------------------------------------------------------------

def run_gaussian_spreading(
    sigma0: float = 1.0,
    grid: Grid1D = None,
    dt: float = 1e-3,
    t_end: float = 2.0,
    snapshot_stride: int = 200,
    consts: PhysicalConstants = PhysicalConstants(),
    tol_width_rel: float = 0.01,
) -> ScenarioResult:
    """Free Gaussian spreading control: width must follow the analytic law.

    sigma(t) = sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2); a propagator
    that kept this packet rigid would be broken.
    """
    if grid is None:
        grid = Grid1D(-30.0, 30.0, 2048)
    x = grid.x
    psi = np.exp(-(x**2) / (4.0 * sigma0**2)).astype(complex)
    psi /= np.sqrt(np.trapezoid(np.abs(psi) ** 2, dx=grid.dx))
    initial = WaveField(grid=grid, values=psi, time=0.0)

    config = PropagationConfig(dt=dt, t_end=t_end, grid=grid,
                               snapshot_stride=snapshot_stride)
    report = propagate(initial, lambda xx, t: np.zeros_like(xx), config, consts,
                       shape_reference="centroid")

    times = np.asarray(report.times)
    width = np.sqrt(np.array([
        observables(s, None, consts).variance for s in report.snapshots
    ]))
    law = sigma0 * np.sqrt(1.0 + (consts.hbar * times / (2 * consts.mass * sigma0**2)) ** 2)
    width_err = float(np.max(np.abs(width - law) / law))
    final_dev = float(report.shape_deviation[-1])

    checks = [
        CheckResult("width_follows_spreading_law", width_err, tol_width_rel,
                    width_err < tol_width_rel, note="relative"),
        CheckResult("spreading_detected", final_dev, 1e-2, final_dev > 1e-2,
                    note="shape deviation must EXCEED threshold"),
    ]
    return ScenarioResult(
        name="gaussian_spreading_control",
        report=report,
        checks=checks,
        extras={"sigma0": sigma0, "dt": dt, "t_end": t_end},
    )


def run_sho_timedep_frequency(
    omega0: float = 1.0,
    modulation: float = 0.2,
    amplitude: float = 2.0,
    grid: Grid1D = None,
    dt: float = 1e-3,
    t_end: float = None,
    snapshot_stride: int = 100,
    consts: PhysicalConstants = PhysicalConstants(),
) -> ScenarioResult:
    """Shifted ground state under V = m w(t)^2 x^2 / 2, w = w0 (1 + eps sin w0 t).

    With eps = 0 this is the Schrodinger NSWP (coherent oscillation); with
    eps > 0 no trajectory keeps the density rigid and the deviation grows.
    Shape deviation is measured against the initial profile translated to
    the instantaneous centroid (the most charitable comparison).
    """
    if grid is None:
        grid = Grid1D(-12.0, 12.0, 3072)
    if t_end is None:
        t_end = 10.0 / omega0
    m = consts.mass
    v_static = StaticPotential.harmonic(omega0, m)
    pair = lowest_eigenpairs(v_static, grid, consts, 1)[0]
    initial = shift_field(pair.shape, amplitude)

    def v_fn(x, t):
        w = omega0 * (1.0 + modulation * np.sin(omega0 * t))
        return 0.5 * m * w**2 * x**2

    config = PropagationConfig(dt=dt, t_end=t_end, grid=grid,
                               snapshot_stride=snapshot_stride)
    report = propagate(initial, v_fn, config, consts, shape_reference="centroid")
    max_dev = float(np.max(report.shape_deviation))

    if modulation == 0.0:
        checks = [CheckResult("control_stays_rigid", max_dev, 5e-4, max_dev < 5e-4)]
    else:
        checks = [CheckResult("spread_detected", max_dev, 1e-2, max_dev > 1e-2,
                              note="deviation must EXCEED threshold")]
    return ScenarioResult(
        name=f"sho_timedep_freq_eps{modulation:g}",
        report=report,
        checks=checks,
        extras={"omega0": omega0, "modulation": modulation,
                "amplitude": amplitude, "dt": dt, "t_end": t_end},
    )
