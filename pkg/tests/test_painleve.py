import math

import numpy as np
import pytest

from ep2stefan import airy, painleve
from ep2stefan.errors import DomainError, PoleError
from ep2stefan.numerics import fd_derivative

EPS = 1.5 ** (1 / 3)


def test_default_scalings():
    sc = painleve.derive_scalings(-0.5, -1.0, 0.5)
    assert sc.epsilon == pytest.approx(EPS, abs=1e-15)
    assert sc.delta == pytest.approx(1 / (math.sqrt(2) * EPS), abs=1e-15)
    assert sc.sigma == -0.25
    # lam = 3 sigma delta^4 / eps^2 = -3 / (16 eps^6) = -1/12
    assert sc.lam == pytest.approx(-1 / 12, abs=1e-16)
    assert sc.zeta == 0.0


def test_sigma_roundtrip():
    for alpha in (-1.5, -0.5, 0.0, 0.5, 2.0):
        sc = painleve.derive_scalings(-0.5, -1.0, alpha)
        again = sc.lam / 3 * sc.epsilon**2 / sc.delta**4
        assert abs(again + (alpha + 0.5) ** 2 / 4) <= 1e-14


def test_alpha_minus_half_drops_lambda():
    sc = painleve.derive_scalings(-0.5, -1.0, -0.5)
    assert sc.sigma == 0.0 and sc.lam == 0.0


def test_canonical_scalings():
    cs = painleve.canonical_scalings(-1 / 12)
    assert cs.epsilon == pytest.approx(3 ** (1 / 3), abs=1e-15)
    assert cs.delta == pytest.approx(3 ** (-1 / 3), abs=1e-15)
    assert cs.delta**2 * cs.epsilon**2 == pytest.approx(1.0, abs=1e-15)
    assert cs.ep2_param == pytest.approx(3 * (-1 / 12), abs=1e-15)


def test_scaling_errors():
    with pytest.raises(DomainError):
        painleve.derive_scalings(-0.5, 0.0, 0.5)
    with pytest.raises(DomainError):
        painleve.derive_scalings(0.0, -1.0, 0.5)
    with pytest.raises(DomainError):
        painleve.derive_scalings(-0.5, -1.0, 0.5, sign=0)
    sc = painleve.derive_scalings()
    with pytest.raises(DomainError):
        painleve.ScalingConstants(sc.c2, sc.c3, sc.alpha, sc.sigma, sc.epsilon, sc.delta, sc.lam,
                                  sc.ep2_param, zeta=0.1)


def test_w_at_origin():
    w = painleve.w_chain(airy.AirySeed(1, 0), 0.0).w
    assert w == pytest.approx(2 ** (-1 / 3) * airy.AIP0 / airy.AI0, abs=1e-15)
    assert abs(w + 0.5786) < 1e-4


def test_pii_identity():
    s = np.linspace(-6, 2.5, 300)
    for seed in (airy.AirySeed(1, 0), airy.AirySeed(0.3, 0.8)):
        w, _, w2 = painleve.w_chain(seed, s)
        # the second seed has a pole near s = 1.85; scale by the size of the cubic term
        scale = np.maximum(1.0, np.abs(w) ** 3)
        assert np.max(np.abs(painleve.pii_residual(w, w2, s)) / scale) <= 1e-13


def test_w_z_against_fd():
    h = 1e-3
    z = np.arange(2001) * h
    w = painleve.w_chain(airy.AirySeed(1, 0), z)
    assert np.max(np.abs(fd_derivative(w.w, h, 1, 4) - w.w_z)) <= 1e-7


def test_rho_identity_and_p34(profile):
    seed = profile.seed
    s = np.linspace(-5, 2.5, 50)
    w = painleve.w_chain(seed, s).w
    r = painleve.rho_chain(seed, s)
    assert np.max(np.abs(r.rho - (2 * w * w + s))) <= 1e-12
    sc = profile.scales
    z = np.linspace(0, 0.9 * profile.z_max, 200)
    rr = profile.rho(z)
    assert np.max(np.abs(painleve.p34_residual(*rr, z, sc.c2, sc.c3, sc.sigma))) <= 1e-9


def test_unreflected_orientation_fails_p34(profile):
    # p(z) itself solves the form with c2 = +1/2; using it with c2 = -1/2 must not
    z = np.linspace(0.1, 2.0, 50)
    p = painleve.rho_chain(profile.seed, z)
    sc = profile.scales
    assert np.max(np.abs(painleve.p34_residual(*p, z, sc.c2, sc.c3, sc.sigma))) > 1e-2
    assert np.max(np.abs(painleve.p34_residual(*p, z, -sc.c2, sc.c3, sc.sigma))) <= 1e-9


def test_rho_positive_at_origin(profile):
    assert profile.rho(0.0).rho > 0


def test_psi_derivatives_against_fd(profile):
    h = 1e-3
    xi = 0.5 + np.arange(1001) * h
    p = painleve.psi_chain(profile, xi)
    for k, exact in ((1, p.psi_1), (2, p.psi_2)):
        d = fd_derivative(p.psi, h, k, 4)
        assert np.max(np.abs(d - exact)) / np.abs(exact).max() <= 1e-6
    # a third difference of Psi at this h is roundoff-bound (~eps/h^3), so the
    # third derivative is checked as the first difference of the analytic second one
    d3 = fd_derivative(p.psi_2, h, 1, 4)
    assert np.max(np.abs(d3 - p.psi_3)) / np.abs(p.psi_3).max() <= 1e-6


def test_ep2_residual(profile):
    xi = np.linspace(0, 0.9 * profile.xi_max, 400)
    assert np.max(np.abs(painleve.ep2_residual(profile, xi))) <= 1e-9
    assert np.max(np.abs(painleve.scaled_residual(profile, xi / profile.scales.epsilon))) <= 1e-9


def test_delta_perturbation_is_detected(profile):
    sc = profile.scales
    bumped = painleve.ScalingConstants.__new__(painleve.ScalingConstants)
    for name in ("c2", "c3", "alpha", "sigma", "epsilon", "lam", "ep2_param", "zeta"):
        object.__setattr__(bumped, name, getattr(sc, name))
    object.__setattr__(bumped, "delta", sc.delta * 1.01)
    prof = painleve.PsiProfile.__new__(painleve.PsiProfile)
    for name in ("seed", "xi_horizon", "xi_max", "limited_by"):
        object.__setattr__(prof, name, getattr(profile, name))
    object.__setattr__(prof, "scales", bumped)
    xi = np.linspace(0, 0.9 * profile.xi_max, 200)
    assert np.max(np.abs(painleve.ep2_residual(prof, xi))) > 1e-3


def test_lambda_zero_bookkeeping(profile):
    xi = np.linspace(0, 3, 20)
    p = painleve.psi_chain(profile, xi)
    r = painleve.ep2_residual(profile, xi, lam=0.0)
    assert np.allclose(r, p.psi_2 - 2 * p.psi**3 - xi * p.psi / 3, atol=0, rtol=0)


def test_canonical_form(profile):
    cs = painleve.canonical_scalings(profile.scales.lam)
    z = np.linspace(0, 0.9 * profile.xi_max, 200) / cs.epsilon
    assert np.max(np.abs(painleve.canonical_residual(profile, z))) <= 1e-9
    assert np.max(np.abs(painleve.canonical_residual(profile, z, -cs.ep2_param))) > 1.0


def test_displayed_radicand_differs(profile):
    s = np.linspace(-3, -0.1, 30)
    w = painleve.w_chain(profile.seed, s).w
    assert np.max(np.abs(painleve.displayed_rho(profile.seed, s) - (2 * w * w + s / 2))) <= 1e-14
    assert np.max(np.abs(painleve.displayed_rho(profile.seed, s) - painleve.rho_chain(profile.seed, s).rho)) > 1.0


def test_pole_error():
    z0 = airy.first_zero(airy.AirySeed(1, 0), 10.0)
    with pytest.raises(PoleError) as e:
        painleve.w_chain(airy.AirySeed(1, 0), np.array([0.0, z0]))
    assert e.value.z == pytest.approx(z0)


def test_profile_domain(profile):
    assert profile.xi_max == 6.0 and profile.limited_by == "horizon"
    with pytest.raises(DomainError):
        painleve.psi_chain(profile, 6.0)
    with pytest.raises(DomainError):
        painleve.psi_chain(profile, -0.1)


def test_profile_needs_airy_sector():
    with pytest.raises(DomainError):
        painleve.PsiProfile(airy.AirySeed(1, 0), painleve.derive_scalings(-0.5, -1.0, -0.5))


def test_sign_branch_flips_psi(profile):
    neg = painleve.default_profile(sign=-1)
    xi = np.linspace(0, 3, 10)
    assert np.allclose(painleve.psi_chain(neg, xi).psi, -painleve.psi_chain(profile, xi).psi, rtol=0, atol=1e-15)
