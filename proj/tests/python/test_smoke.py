"""Smoke tests for the python bindings: import, core operators, one static
solve, and a CLI-equivalent run through run_command."""

import math
import os
import tempfile

import numpy as np
import pytest

neelsim = pytest.importorskip("neelsim")


def test_half_laplacian_eigenmode():
    L, N = 60.0, 256
    x = -L + (np.arange(N) + 0.5) * (2 * L / N)
    k = 3
    mode = np.cos(k * np.pi * x / L)
    out = neelsim.half_laplacian(L, mode)
    assert np.allclose(out, (k * np.pi / L) * mode, atol=1e-10)


def test_energy_gradient_consistent_with_energy():
    L, N = 60.0, 256
    x = -L + (np.arange(N) + 0.5) * (2 * L / N)
    w = 0.1 * np.exp(-((x / 10.0) ** 2))
    g = neelsim.energy_gradient(L, w)
    h = 1e-6
    u = np.exp(-((x / 8.0) ** 2))
    fd = (neelsim.energy(L, w + h * u) - neelsim.energy(L, w - h * u)) / (2 * h)
    dx = 2 * L / N
    assert math.isclose(fd, float(np.sum(g * u) * dx), rel_tol=1e-6)


def test_static_solve_and_eigenvalues():
    wall = neelsim.solve_static(L=60.0, N=512, tol=1e-9)
    assert wall.residual <= 1e-9
    assert wall.energy > 0
    assert np.all(wall.dtheta0 > 0)
    # total phase rotation is pi
    dx = 2 * wall.L / wall.N
    assert math.isclose(float(np.sum(wall.dtheta0) * dx), math.pi, rel_tol=1e-9)

    lam, res = neelsim.l0_eigenvalues(wall, k=3)
    assert abs(lam[0]) <= 1e-6
    assert lam[1] > 0.5
    assert max(res) <= 1e-8


def test_leading_order_y_is_pinned():
    wall = neelsim.solve_static(L=60.0, N=256, tol=1e-8)
    y = neelsim.leading_order_Y(wall, nu=0.5, forcing="cosine", amplitude=1.0,
                                period=1.0, samples=64)
    assert y[32] == 0.0
    assert max(abs(v) for v in y) > 1e-3


def test_run_command_static(tmp_path):
    cfg = "grid.L = 60\ngrid.N = 256\nsolver.tol_static = 1e-8\n"
    code = neelsim.run_command("static", cfg, str(tmp_path))
    assert code == 0
    profile = tmp_path / "profile.csv"
    assert profile.exists()
    header = profile.read_text().splitlines()[0]
    assert header == "x,theta,dtheta"
    assert (tmp_path / "manifest.json").exists()
