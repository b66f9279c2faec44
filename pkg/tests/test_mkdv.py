import numpy as np
import pytest

from ep2stefan import mkdv
from ep2stefan.errors import DomainError
from ep2stefan.mkdv import MkdvParams, MkdvSolution, eval_u, mkdv_operator, mkdv_residual, mkdv_residual_fd
from ep2stefan.numerics import GridSpec
from ep2stefan.painleve import default_profile


def test_shift_enters_only_through_t_plus_a(profile):
    s1 = MkdvSolution.from_profile(profile, a=1.0)
    x = np.linspace(0.1, 3.0, 7)
    for t in (0.3, 1.7):
        s2 = MkdvSolution.from_profile(profile, a=1.0 + t)
        assert np.allclose(eval_u(s1, x, np.full_like(x, t)).u, eval_u(s2, x, np.zeros_like(x)).u,
                           rtol=1e-15, atol=0)


def test_origin_decay(sol):
    t = np.linspace(0, 2, 9)
    u0 = eval_u(sol, np.zeros_like(t), t).u
    assert np.allclose(u0, (t + 1) ** (-1 / 3) * u0[0], rtol=1e-15)
    assert np.all(np.diff(u0) < 0)


def test_u_t_against_fd(sol):
    rng = np.random.default_rng(1)
    g = sol.standard_grid()
    x = rng.uniform(g.x_min, g.x_max, 20)
    t = rng.uniform(0.01, 1.9, 20)
    h = 1e-4
    us = [eval_u(sol, x, t + k * h).u for k in (-2, -1, 1, 2)]
    fd = (us[0] - 8 * us[1] + 8 * us[2] - us[3]) / (12 * h)
    exact = eval_u(sol, x, t).u_t
    assert np.max(np.abs(fd - exact) / np.abs(exact)) <= 1e-6


def test_analytic_residual(sol, grid):
    X, T = grid.mesh()
    assert np.max(np.abs(mkdv_residual(sol, X, T))) <= 1e-9


def test_lambda_mismatch_detected(profile, grid):
    bad = MkdvSolution(MkdvParams(profile.scales.lam + 0.01), profile, strict=False)
    X, T = grid.mesh()
    assert np.max(np.abs(mkdv_residual(bad, X, T))) > 1e-4
    with pytest.raises(DomainError):
        MkdvSolution(MkdvParams(profile.scales.lam + 0.01), profile)


def test_constant_field_annihilates_operator():
    z = np.zeros(5)
    assert np.all(mkdv_operator(np.full(5, 0.7), z, z, z, -1 / 12, 2.0) == 0)


def test_similarity_exponent_law(sol):
    xi = 0.8
    t = np.linspace(0, 5, 10)
    x = xi * (t + sol.a) ** (1 / 3)
    v = eval_u(sol, x, t).u * (t + sol.a) ** (1 / 3)
    assert np.ptp(v) <= 1e-12


def test_derivative_set_is_consistent(sol):
    h = 1e-3
    x = 0.5 + np.arange(801) * h
    f = eval_u(sol, x, np.full_like(x, 0.4))
    assert np.max(np.abs(np.gradient(f.u_x, h)[5:-5] - f.u_xx[5:-5])) <= 1e-5


def test_fd_residual_fourth_order(sol, grid):
    m = []
    for nx, nt in ((101, 161), (201, 321)):
        g = GridSpec(grid.x_min, grid.x_max, 0.0, 2.0, nx, nt)
        m.append(mkdv_residual_fd(sol, g)[1])
    assert np.log2(m[0] / m[1]) >= 3.7


def test_fd_residual_fine_patch(sol):
    g = GridSpec(2.0, 2.024, 0.5, 0.524, 25, 25)
    res, _ = mkdv_residual_fd(sol, g)
    assert np.max(np.abs(res[4:-4, 4:-4])) <= 1e-5


def test_fd_residual_raw_lattice(sol, grid):
    u = mkdv.sample(sol, grid)
    _, a = mkdv_residual_fd(sol, grid)
    _, b = mkdv_residual_fd(u, grid, lam=sol.lam, a=sol.a)
    assert a == b
    with pytest.raises(DomainError):
        mkdv_residual_fd(u, grid)
    with pytest.raises(DomainError):
        mkdv_residual_fd(u[:, 1:], grid, lam=sol.lam, a=sol.a)


def test_domain_errors(sol):
    with pytest.raises(DomainError):
        eval_u(sol, 1.0, -0.5)
    with pytest.raises(DomainError):
        eval_u(sol, float(sol.x_pole(0.0)), 0.0)
    with pytest.raises(DomainError):
        mkdv_residual_fd(sol, GridSpec(0.1, float(sol.x_pole(0.0)), 0.0, 1.0, 10, 10))
    with pytest.raises(DomainError):
        MkdvParams(-1 / 12, a=0.0)
    with pytest.raises(DomainError):
        MkdvSolution(MkdvParams(-1 / 12, mu=-1.0), default_profile())
