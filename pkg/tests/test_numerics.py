import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ep2stefan.errors import AccuracyError, BracketError, DomainError, IntegrationError, LengthError
from ep2stefan.mkdv import eval_u
from ep2stefan.numerics import (
    GridSpec, Tolerance, cumulative_quadrature, fd_derivative, fd_weights, find_root,
    find_roots, integrate_ode, quadrature,
)
from ep2stefan import airy


# ---- grid and tolerance -------------------------------------------------

def test_grid_spacing_and_mesh_layout():
    g = GridSpec(0.0, 1.0, 0.0, 2.0, 11, 5)
    assert g.hx == pytest.approx(0.1)
    assert g.ht == pytest.approx(0.5)
    X, T = g.mesh()
    assert X.shape == (5, 11)
    assert np.all(T[:, 0] == g.t)


@pytest.mark.parametrize("args", [(0, 0, 0, 1, 5, 5), (0, 1, 1, 0, 5, 5), (0, 1, 0, 1, 4, 5), (0, 1, 0, 1, 5, 3)])
def test_grid_rejects_bad_specs(args):
    with pytest.raises(DomainError):
        GridSpec(*args)


def test_with_spacing_never_exceeds_request():
    g = GridSpec.with_spacing(0.0, 1.0, 0.0, 1.0, 0.03, 0.2)
    assert g.hx <= 0.03 and g.ht <= 0.2


def test_tolerance_validation():
    with pytest.raises(DomainError):
        Tolerance(0.0, 0.0)
    with pytest.raises(DomainError):
        Tolerance(-1.0, 1.0)
    assert Tolerance(1e-8, 1e-6).bound(100.0) == pytest.approx(1e-4)


# ---- finite differences -------------------------------------------------

def test_fd_quadratic_first_derivative_exact():
    x = np.arange(0.0, 2.0 + 1e-12, 0.25)
    d = fd_derivative(x**2, 0.25, 1, 2)
    assert abs(d[4] - 2.0) <= 1e-12


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("accuracy", [2, 4])
def test_fd_constant_gives_zero(order, accuracy):
    d = fd_derivative(np.full(20, 3.7), 0.1, order, accuracy)
    assert np.max(np.abs(d)) <= 1e-10


def test_fd_third_derivative_of_sine():
    h = math.pi / 64
    x = np.arange(65) * h
    d = fd_derivative(np.sin(x), h, 3, 4)
    assert abs(d[32] - (-math.cos(x[32]))) <= 1e-6


def test_fd_fourth_order_convergence():
    errs = []
    for n in (41, 81):
        x = np.linspace(0.0, 1.0, n)
        d = fd_derivative(np.exp(x), x[1] - x[0], 3, 4)
        errs.append(np.max(np.abs(d - np.exp(x))))
    assert math.log2(errs[0] / errs[1]) > 3.7


def test_fd_errors():
    with pytest.raises(LengthError):
        fd_derivative(np.ones(6), 0.1, 3, 4)
    with pytest.raises(DomainError):
        fd_derivative(np.ones(20), 0.1, 4, 2)
    with pytest.raises(DomainError):
        fd_derivative(np.ones(20), 0.1, 1, 3)


def test_fd_weights_are_the_classical_ones():
    assert fd_weights((-1, 0, 1), 1) == (-0.5, 0.0, 0.5)
    assert fd_weights((-1, 0, 1), 2) == (1.0, -2.0, 1.0)
    w = fd_weights((-2, -1, 0, 1, 2), 1)
    assert np.allclose(w, [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12], atol=0, rtol=1e-15)


def test_fd_acts_along_requested_axis():
    x = np.linspace(0, 1, 21)
    t = np.linspace(0, 1, 11)
    X, T = np.meshgrid(x, t)
    F = X**2 * T
    dx = fd_derivative(F, x[1] - x[0], 1, 2, axis=1)
    dt = fd_derivative(F, t[1] - t[0], 1, 2, axis=0)
    assert np.allclose(dx, 2 * X * T, atol=1e-12)
    assert np.allclose(dt, X**2, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(st.floats(-3, 3), min_size=1, max_size=5),
    order=st.sampled_from([1, 2, 3]),
    h=st.floats(0.05, 0.5),
)
def test_fd_exact_on_low_degree_polynomials(coeffs, order, h):
    # stencils with accuracy 4 reproduce derivatives of polynomials of degree <= order + 3
    coeffs = coeffs[: order + 4]
    p = np.polynomial.Polynomial(coeffs)
    x = np.arange(15) * h
    d = fd_derivative(p(x), h, order, 4)
    ref = p.deriv(order)(x)
    assert np.max(np.abs(d - ref)) <= 1e-7 * (1 + np.max(np.abs(ref))) / h**order * h**3


# ---- ODE integration ----------------------------------------------------

def test_ode_exponential():
    tr = integrate_ode(lambda t, y: y, [1.0], (0.0, 1.0), Tolerance(1e-12, 1e-12))
    assert abs(tr(1.0)[0] - math.e) <= 1e-9


def test_ode_constant_and_backward():
    tr = integrate_ode(lambda t, y: [0.0], [4.2], (1.0, -3.0))
    assert np.all(tr(np.linspace(-3, 1, 7))[0] == 4.2)


def test_ode_airy_seed_system_against_series():
    seed = airy.AirySeed(1.0, 0.0)
    p0 = airy.phi(seed, 0.0)
    tr = integrate_ode(lambda z, y: [y[1], -0.5 * z * y[0]], [p0.phi, p0.dphi], (0.0, 2.0),
                       Tolerance(1e-13, 1e-13))
    p2 = airy.phi(seed, 2.0)
    assert np.max(np.abs(tr(2.0) - [p2.phi, p2.dphi])) <= 1e-9


def test_ode_blowup_reports_last_time():
    with pytest.raises(IntegrationError) as e:
        integrate_ode(lambda t, y: y * y, [1.0], (0.0, 2.0))
    assert 0.9 < e.value.t_reached < 1.0 + 1e-6


def test_trajectory_rejects_queries_outside_span():
    tr = integrate_ode(lambda t, y: y, [1.0], (0.0, 1.0))
    with pytest.raises(DomainError):
        tr(1.5)


def test_ode_zero_span_rejected():
    with pytest.raises(DomainError):
        integrate_ode(lambda t, y: y, [1.0], (1.0, 1.0))


# ---- quadrature ---------------------------------------------------------

def test_quadrature_linear():
    assert abs(quadrature(lambda x: x, 0.0, 1.0) - 0.5) <= 1e-14


def test_quadrature_sine():
    assert abs(quadrature(np.sin, 0.0, math.pi) - 2.0) <= 1e-10


def test_quadrature_exponential():
    assert abs(quadrature(np.exp, 0.0, 1.0) - (math.e - 1)) <= 1e-12


def test_quadrature_budget_exhaustion():
    with pytest.raises(AccuracyError) as e:
        quadrature(lambda x: np.abs(x - 1 / 3) ** -0.9, 0.0, 1.0, Tolerance(1e-14, 1e-14), max_subdivisions=20)
    assert e.value.error_bound > 0


def test_quadrature_of_solution_against_trapezoid(sol):
    t0 = 0.7
    f = lambda x: eval_u(sol, x, np.full_like(np.asarray(x, dtype=float), t0)).u
    q = quadrature(f, 0.0, 1.0, Tolerance(1e-13, 1e-13))
    x = np.linspace(0.0, 1.0, 1_000_001)
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    trap = trapezoid(f(x), x)
    assert abs(q - trap) <= 1e-8


def test_cumulative_quadrature():
    nodes = np.linspace(0.0, math.pi, 9)
    c = cumulative_quadrature(np.sin, nodes, Tolerance(1e-14, 1e-14))
    assert c[0] == 0.0
    assert np.max(np.abs(c - (1 - np.cos(nodes)))) <= 1e-14


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_quadrature_orientation(a, b):
    f = lambda x: np.cos(x) + x**2
    assert quadrature(f, a, b) == pytest.approx(-quadrature(f, b, a), abs=1e-13)


# ---- root finding -------------------------------------------------------

def test_find_root():
    r = find_root(lambda x: x * x - 2.0, (0.0, 2.0), Tolerance(1e-15, 1e-15))
    assert abs(r - math.sqrt(2)) <= 1e-15


def test_find_root_endpoint_and_bracket_error():
    assert find_root(lambda x: x, (0.0, 1.0)) == 0.0
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1, (-1.0, 1.0))


def test_find_roots_vectorised():
    c = np.linspace(0.5, 3.5, 13)
    r = find_roots(lambda x: x**3 - c, lambda x: 3 * x**2, np.zeros_like(c), np.full_like(c, 2.0))
    assert np.max(np.abs(r - np.cbrt(c))) <= 1e-15
    with pytest.raises(BracketError):
        find_roots(lambda x: x + 5, lambda x: np.ones_like(x), [0.0], [1.0])
