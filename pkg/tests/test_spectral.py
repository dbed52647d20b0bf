import numpy as np
import pytest

from hardyrefl import hardy as hd
from hardyrefl import polar as po
from hardyrefl import spectral as sp
from hardyrefl.errors import InputError, QuadratureFailure, ZeroPoint

from oracles import psi_closed

FAST = sp.QuadratureBudget(theta_points=512, lambda_points=128)


def test_support_and_arc_limits():
    prof = sp.SpectralProfile(0.6)
    assert prof.lambda_min == pytest.approx(0.390625, abs=1e-15)
    assert prof.lambda_max == pytest.approx(6.25, abs=1e-14)
    assert prof.arc_cos(prof.lambda_min) == pytest.approx(-1, abs=1e-12)
    assert prof.arc_cos(prof.lambda_max) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ZeroPoint):
        sp.SpectralProfile(0)
    with pytest.raises(InputError):
        sp.SpectralProfile(0.5, arc="other")


@pytest.mark.parametrize("a", [0.3, 0.6, 0.4j, 0.3 - 0.2j])
def test_density_matches_grid_count(a):
    prof = sp.SpectralProfile(a)
    for lam in (1.0, prof.midpoint, 0.5 * (prof.lambda_min + 1)):
        assert float(prof.density(lam)) == pytest.approx(sp.density_from_grid(prof, lam), abs=1e-4)


def test_arc_endpoints_are_level_crossings():
    prof = sp.SpectralProfile(0.5 + 0.2j)
    for lam in np.linspace(prof.lambda_min * 1.01, prof.lambda_max * 0.99, 7):
        assert prof.symbol(prof.alpha(lam)) == pytest.approx(lam, rel=1e-12)
        assert prof.symbol(prof.beta(lam)) == pytest.approx(lam, rel=1e-12)


def test_unsquared_arc_differs():
    prof, other = sp.SpectralProfile(0.6), sp.SpectralProfile(0.6, arc="unsquared")
    assert abs(float(prof.arc_cos(1.0)) - float(other.arc_cos(1.0))) > 0.01


def test_psi_at_zero_is_real_positive():
    prof = sp.SpectralProfile(0.6)
    v, _ = sp.psi(0, 1.0, prof)
    assert abs(v.imag) <= 1e-14 and v.real > 0
    ref, _ = sp.psi(0, 1.0, prof, sp.QuadratureBudget(theta_points=8192))
    assert abs(v - ref) <= 1e-10


def test_psi_converges_under_refinement():
    prof = sp.SpectralProfile(0.6)
    v1, _ = sp.psi(0.2, 1.0, prof, sp.QuadratureBudget(theta_points=2048))
    v2, _ = sp.psi(0.2, 1.0, prof, sp.QuadratureBudget(theta_points=4096))
    assert abs(v1 - v2) <= 1e-6


@pytest.mark.parametrize("a", [0.6, 0.3 - 0.4j])
@pytest.mark.parametrize("u", [0, 0.2, 0.4j, -0.7 + 0.1j])
def test_psi_matches_closed_form(a, u):
    prof = sp.SpectralProfile(a)
    for lam in (prof.lambda_min * 1.001, 1.0, prof.midpoint, prof.lambda_max * 0.999):
        v, err = sp.psi(u, lam, prof)
        assert abs(v - psi_closed(u, lam, prof)) <= 1e-9
        assert err <= 1e-6


def test_psi_conjugate_symmetry_for_real_a():
    prof = sp.SpectralProfile(0.5)
    u = 0.3 + 0.25j
    v1, _ = sp.psi(u, 1.3, prof)
    v2, _ = sp.psi(np.conj(u), 1.3, prof)
    assert abs(v1 - np.conj(v2)) <= 1e-12


def test_quadrature_failure_is_reported():
    prof = sp.SpectralProfile(0.6)
    with pytest.raises(QuadratureFailure):
        sp.psi(0.9, 1.0, prof, sp.QuadratureBudget(theta_points=128, tol=1e-15))


@pytest.mark.parametrize("kw", [dict(theta_points=100), dict(theta_points=130), dict(lambda_points=10),
                                dict(splitting="cubic"), dict(tol=0)])
def test_budget_validation(kw):
    with pytest.raises(InputError):
        sp.QuadratureBudget(**kw)


def test_phi_factor_and_continuity():
    prof = sp.SpectralProfile(0.6)
    lam = np.linspace(prof.lambda_min, prof.lambda_max, 200)
    p0, _ = sp.phi_values(0, lam, prof, FAST)
    q0, _ = sp.psi_values(0, lam, prof, FAST)
    assert np.allclose(p0, q0)
    vals, _ = sp.phi_values(0.3, lam, prof, FAST)
    assert np.all(np.isfinite(vals))
    coarse = np.max(np.abs(np.diff(vals)))
    fine_lam = np.linspace(prof.lambda_min, prof.lambda_max, 400)
    fine, _ = sp.phi_values(0.3, fine_lam, prof, FAST)
    assert np.max(np.abs(np.diff(fine))) <= 0.6 * coarse


def test_mass_identity_example():
    prof = sp.SpectralProfile(0.6)
    val = sp.spectral_form(lambda l: np.ones_like(l), 0.2, 0.1, prof)
    assert abs(val - 1 / (1 - 0.02)) <= 1e-3


@pytest.mark.parametrize("a", [0.3, 0.6])
def test_moments_match_matrix_calculus(a):
    prof = sp.SpectralProfile(a)
    u, v = 0.2, 0.4j
    m1 = sp.spectral_form(lambda l: l, u, v, prof)
    T = hd.toeplitz_matrix(hd.symbol_ka2(a, 256))
    ref = hd.inner(T @ hd.szego(u, 256).coeffs, hd.szego(v, 256))
    assert abs(m1 - ref) <= 1e-3
    assert abs(m1 - sp.functional_calculus_element(lambda l: l, u, v, a, 256)) <= 1e-3
    m2 = sp.spectral_form(np.sqrt, 0, 0, prof)
    assert abs(m2.imag) <= 1e-12 and m2.real > 0
    assert abs(m2 - po.herm_sqrt(T)[0, 0]) <= 1e-3


def test_unsquared_arc_fails_mass_identity():
    prof = sp.SpectralProfile(0.5, arc="unsquared")
    val = sp.spectral_form(lambda l: np.ones_like(l), 0.2, 0.2, prof)
    assert abs(val - 1 / (1 - 0.04)) > 1e-2


def test_rho_element_examples():
    a = 0.5
    val = sp.rho_element(0.2, 0.3, a)
    assert abs(val - sp.rho_element_matrix(0.2, 0.3, a, 256)) <= 5e-3
    one = sp.rho_element(0, 0, 0.4)
    assert abs(one.imag) <= 1e-10
    assert abs(one - sp.rho_element_matrix(0, 0, 0.4, 256)) <= 5e-3
    with pytest.raises(ZeroPoint):
        sp.rho_element(0.1, 0.1, 0)
    with pytest.raises(InputError):
        sp.rho_element(0.1, 0.1, 0.5, sp.SpectralProfile(0.4))


def test_density_dump():
    rows = sp.density_dump(sp.SpectralProfile(0.6), FAST, rows=33)
    assert rows.shape == (33, 3)
    assert rows[0, 0] == pytest.approx(0.390625) and rows[-1, 0] == pytest.approx(6.25)
    assert rows[0, 1] == 0 and rows[-1, 1] == 0
    assert np.all(rows[1:-1, 1] > 0) and np.all(np.diff(rows[:, 0]) > 0)
    assert np.all(rows[:, 2] > 0)
