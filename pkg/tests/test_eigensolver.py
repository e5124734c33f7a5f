import json

import numpy as np
import pytest

from nswp import (Grid1D, PhysicalConstants, StaticPotential, ai_values,
                  build_hamiltonian, linear_potential_mode, lowest_eigenpairs)
from nswp.airy import airy_ai
from nswp.eigensolver import write_eigenpair
from nswp.errors import AccuracyError

CONSTS = PhysicalConstants()

# ground energy of V = x^4 (hbar = m = 1), frozen from a Richardson-
# extrapolated eigensolve at n = 16384 on [-8, 8]
QUARTIC_E0 = 0.6679862590775


def test_build_hamiltonian_free():
    grid = Grid1D(0.0, 1.0, 8)
    h = build_hamiltonian(StaticPotential.free(), grid, CONSTS)
    kin = 1.0 / grid.dx**2
    assert np.allclose(h.diagonal, kin)
    assert np.allclose(h.off_diagonal, -0.5 * kin)
    assert len(h.off_diagonal) == grid.n - 1


def test_build_hamiltonian_harmonic():
    grid = Grid1D(-2.0, 2.0, 9)
    h = build_hamiltonian(StaticPotential.harmonic(1.0), grid, CONSTS)
    kin = 1.0 / grid.dx**2
    assert np.allclose(h.diagonal, kin + 0.5 * grid.x**2)


def test_hamiltonian_symmetry():
    # symmetric tridiagonal: <v, H w> == <w, H v> for random vectors
    grid = Grid1D(-3.0, 3.0, 64)
    h = build_hamiltonian(StaticPotential.quartic(1.0), grid, CONSTS)
    rng = np.random.default_rng(7)
    v, w = rng.normal(size=64), rng.normal(size=64)
    assert np.dot(v, h.matvec(w)) == pytest.approx(np.dot(w, h.matvec(v)))


def test_sho_energies():
    grid = Grid1D(-12.0, 12.0, 2048)
    pairs = lowest_eigenpairs(StaticPotential.harmonic(1.0), grid, CONSTS, 3)
    for n, pair in enumerate(pairs):
        exact = n + 0.5
        assert abs(pair.energy - exact) / exact < 5e-5


def test_quartic_ground_energy():
    grid = Grid1D(-8.0, 8.0, 2048)
    pair = lowest_eigenpairs(StaticPotential.quartic(1.0), grid, CONSTS, 1)[0]
    assert abs(pair.energy - QUARTIC_E0) < 1e-4


def test_mode_normalization_and_sign():
    grid = Grid1D(-12.0, 12.0, 1024)
    pairs = lowest_eigenpairs(StaticPotential.harmonic(1.0), grid, CONSTS, 4)
    for pair in pairs:
        f = pair.shape.values.real
        assert np.max(np.abs(pair.shape.values.imag)) == 0.0
        assert abs(np.trapezoid(f**2, dx=grid.dx) - 1.0) < 1e-10
        first_lobe = f[np.nonzero(np.abs(f) > 1e-8 * np.max(np.abs(f)))[0][0]]
        assert first_lobe > 0.0


def test_sho_parity():
    grid = Grid1D(-12.0, 12.0, 1025)
    pairs = lowest_eigenpairs(StaticPotential.harmonic(1.0), grid, CONSTS, 2)
    even = pairs[0].shape.values.real
    odd = pairs[1].shape.values.real
    assert np.max(np.abs(even - even[::-1])) < 1e-8
    assert np.max(np.abs(odd + odd[::-1])) < 1e-8


def test_orthogonality():
    grid = Grid1D(-12.0, 12.0, 1024)
    pairs = lowest_eigenpairs(StaticPotential.harmonic(1.0), grid, CONSTS, 4)
    for i in range(4):
        for j in range(i + 1, 4):
            ip = np.trapezoid(
                pairs[i].shape.values.real * pairs[j].shape.values.real,
                dx=grid.dx)
            assert abs(ip) < 1e-8


def test_second_order_convergence():
    # halving dx shrinks the E0 error by 4 +/- 15%
    v = StaticPotential.harmonic(1.0)
    e_coarse = lowest_eigenpairs(v, Grid1D(-12.0, 12.0, 512), CONSTS, 1)[0].energy
    e_fine = lowest_eigenpairs(v, Grid1D(-12.0, 12.0, 1023), CONSTS, 1)[0].energy
    ratio = abs(e_coarse - 0.5) / abs(e_fine - 0.5)
    assert 4.0 * 0.85 < ratio < 4.0 * 1.15


def test_residual_recheck():
    grid = Grid1D(-12.0, 12.0, 1024)
    v = StaticPotential.harmonic(1.0)
    h = build_hamiltonian(v, grid, CONSTS)
    for pair in lowest_eigenpairs(v, grid, CONSTS, 3):
        f = pair.shape.values.real
        r = np.linalg.norm(h.matvec(f) - pair.energy * f) / np.linalg.norm(f)
        assert r <= pair.residual * (1.0 + 1e-9) + 1e-12
        assert pair.residual < 1e-8


def test_boundary_leak_detection():
    with pytest.raises(AccuracyError):
        lowest_eigenpairs(StaticPotential.harmonic(1.0),
                          Grid1D(-2.0, 2.0, 256), CONSTS, 3)


def test_input_validation():
    with pytest.raises(ValueError):
        lowest_eigenpairs(StaticPotential.harmonic(1.0),
                          Grid1D(-12.0, 12.0, 256), CONSTS, 0)
    with pytest.raises(ValueError):
        StaticPotential.harmonic(-1.0)
    with pytest.raises(ValueError):
        StaticPotential.quartic(0.0)


def test_linear_mode_at_origin():
    # E_f = 0: f(0) = Ai(0)
    grid = Grid1D(-10.0, 10.0, 2001)
    mode = linear_potential_mode(0.5, 0.0, grid, CONSTS)
    i0 = np.argmin(np.abs(grid.x))
    assert abs(grid.x[i0]) < 1e-12
    assert abs(mode.values[i0].real - airy_ai(0.0).value) < 1e-10


def test_linear_mode_energy_shift():
    # E_f = A s equals the E_f = 0 mode translated by s
    A, s = 0.5, 0.75
    grid = Grid1D(-5.0, 5.0, 401)
    grid_shifted = Grid1D(-5.0 - s, 5.0 - s, 401)
    shifted_energy = linear_potential_mode(A, A * s, grid, CONSTS)
    base = linear_potential_mode(A, 0.0, grid_shifted, CONSTS)
    assert np.max(np.abs(shifted_energy.values - base.values)) < 1e-10


def test_linear_mode_ode_residual():
    # -(1/2) f'' + A x f = E_f f, 5-point FD at dx = 1e-2
    A, E_f = 0.5, 0.2
    grid = Grid1D(-5.0, 5.0, 1001)
    f = linear_potential_mode(A, E_f, grid, CONSTS).values.real
    dx = grid.dx
    d2 = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * dx**2)
    x = grid.x[2:-2]
    residual = np.abs(-0.5 * d2 + A * x * f[2:-2] - E_f * f[2:-2])
    assert np.max(residual) < 1e-5


def test_linear_mode_requires_positive_slope():
    with pytest.raises(ValueError):
        linear_potential_mode(-1.0, 0.0, Grid1D(-5.0, 5.0, 101), CONSTS)


def test_write_eigenpair(tmp_path):
    grid = Grid1D(-12.0, 12.0, 256)
    pair = lowest_eigenpairs(StaticPotential.harmonic(1.0), grid, CONSTS, 1)[0]
    csv_path = tmp_path / "mode.csv"
    json_path = tmp_path / "mode.json"
    write_eigenpair(pair, csv_path, json_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "x,f"
    assert len(lines) == grid.n + 1
    meta = json.loads(json_path.read_text())
    assert meta["index"] == 0
    assert meta["energy"] == pair.energy
    assert meta["residual"] == pair.residual
