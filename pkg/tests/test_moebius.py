import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardyrefl import moebius as mb
from hardyrefl.errors import InvalidDiskPoint, PoleAtPoint, ZeroBase

from oracles import moebius_direct


def disk(rmax=0.95):
    return st.builds(lambda r, t: complex(r * np.cos(t), r * np.sin(t)),
                     st.floats(0, rmax), st.floats(0, 2 * np.pi))


def nonzero_disk(rmax=0.9):
    return st.builds(lambda r, t: complex(r * np.cos(t), r * np.sin(t)),
                     st.floats(0.01, rmax), st.floats(0, 2 * np.pi))


def test_phi_zero_is_negation():
    assert mb.evaluate(mb.phi(0), 0.3 + 0.1j) == pytest.approx(-0.3 - 0.1j, abs=1e-15)


def test_phi_exchanges_zero_and_a():
    assert mb.evaluate(mb.phi(0.6), 0) == pytest.approx(0.6, abs=1e-15)
    assert abs(mb.evaluate(mb.phi(0.6), 0.6)) <= 1e-15
    assert mb.evaluate(mb.phi(0.5j), 0) == pytest.approx(0.5j, abs=1e-15)


def test_evaluate_identity_and_boundary():
    assert mb.evaluate(mb.MoebiusMap.identity(), 0.2j) == pytest.approx(0.2j)
    assert mb.evaluate(mb.phi(0.6), 1.0) == pytest.approx(-1.0, abs=1e-14)


def test_pole_is_rejected():
    with pytest.raises(PoleAtPoint):
        mb.evaluate(mb.phi(0.5), 2.0)


@pytest.mark.parametrize("bad", [1.0, 1.2j, complex("nan"), "x"])
def test_invalid_points(bad):
    with pytest.raises(InvalidDiskPoint):
        mb.phi(bad)


@pytest.mark.parametrize("a", [0.6, 0.3 - 0.4j, 0])
def test_involution(a):
    assert mb.equal_projective(mb.compose(mb.phi(a), mb.phi(a)), mb.MoebiusMap.identity(), 1e-10)


def test_fixed_point_composition():
    a = 0.6
    w = mb.fixed_point(a)
    neg = mb.MoebiusMap(np.diag([-1.0, 1.0]))
    assert mb.equal_projective(mb.compose(mb.phi(w), mb.phi(a)), mb.compose(neg, mb.phi(w)), 1e-10)


def test_equal_projective_scalar_and_distinct():
    m = mb.phi(0.3 + 0.2j)
    assert mb.equal_projective(m, mb.MoebiusMap(5 * m.coeffs), 1e-12)
    assert mb.equal_projective(m, mb.MoebiusMap(1j * m.coeffs), 1e-12)
    assert not mb.equal_projective(mb.phi(0.6), mb.phi(0.5), 1e-8)
    with pytest.raises(ValueError):
        mb.equal_projective(m, m, 0.0)


def test_conjugation_law_example():
    d, b = 0.3, -0.2 + 0.1j
    lhs = mb.compose(mb.phi(d), mb.compose(mb.phi(b), mb.phi(d)))
    assert mb.equal_projective(lhs, mb.phi(mb.bullet(d, b)), 1e-10)


@pytest.mark.parametrize("a, w", [(0, 0), (0.6, 1 / 3), (0.6j, 1j / 3)])
def test_fixed_point_values(a, w):
    assert mb.fixed_point(a) == pytest.approx(w, abs=1e-15)
    assert abs(moebius_direct(a, mb.fixed_point(a)) - mb.fixed_point(a)) <= 1e-12


def test_bullet_values():
    assert mb.bullet(0.4j, 0.4j) == pytest.approx(0.4j, abs=1e-15)
    assert mb.bullet(0, 0.3 - 0.1j) == pytest.approx(-0.3 + 0.1j, abs=1e-15)
    d, b = 0.3, 0.5
    composed = mb.compose(mb.phi(d), mb.phi(b), mb.phi(d))
    assert abs(mb.point_from_map(composed) - mb.bullet(d, b)) <= 1e-12


def test_a_sequence_values():
    assert mb.a_seq(0.6, 0) == pytest.approx(0.6, abs=1e-15)
    assert mb.a_seq(0.6, 1) == pytest.approx(15 / 17, abs=1e-15)
    assert abs(mb.point_from_map(mb.a_seq_by_composition(0.6, 3)) - mb.a_seq(0.6, 3)) <= 1e-12
    with pytest.raises(ZeroBase):
        mb.a_seq(0, 2)


def test_omega_inverse_values_and_iteration():
    assert mb.omega_inverse(0) == 0
    assert mb.omega_inverse(1 / 3) == pytest.approx(0.6, abs=1e-15)
    x = 0.2
    for n in range(1, 5):
        x = mb.omega_inverse(x)
        assert abs(x - mb.a_seq(0.2, 2 ** n - 1)) <= 1e-12


def test_polar_point():
    assert mb.polar_point(0.5, 90) == pytest.approx(0.5j, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(disk(), disk(0.99))
def test_matrix_route_matches_direct_formula(a, z):
    assert abs(mb.evaluate(mb.phi(a), z) - moebius_direct(a, z)) <= 1e-12 * (1 + abs(moebius_direct(a, z)))


@settings(max_examples=200, deadline=None)
@given(disk())
def test_property_involution_and_fixed_point(a):
    assert mb.projective_distance(mb.compose(mb.phi(a), mb.phi(a)), mb.MoebiusMap.identity()) <= 1e-10
    w = mb.fixed_point(a)
    assert abs(mb.evaluate(mb.phi(a), w) - w) <= 1e-12
    assert abs(mb.evaluate(mb.phi(w), a) + w) <= 1e-12


@settings(max_examples=150, deadline=None)
@given(disk(0.9), disk(0.9))
def test_property_bullet_law(d, b):
    lhs = mb.compose(mb.phi(d), mb.phi(b), mb.phi(d))
    assert mb.projective_distance(lhs, mb.phi(mb.bullet(d, b))) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(nonzero_disk(0.6), st.integers(0, 12))
def test_property_a_sequence(a, n):
    assert mb.projective_distance(mb.a_seq_by_composition(a, n), mb.phi(mb.a_seq(a, n))) <= 1e-10
    assert abs(mb.a_seq(a, n)) < abs(mb.a_seq(a, n + 1)) < 1


@settings(max_examples=100, deadline=None)
@given(disk(0.9))
def test_property_omega_inverse_is_fixed_point_inverse(a):
    assert abs(mb.fixed_point(mb.omega_inverse(a)) - a) <= 1e-12


def test_suite_runtime_under_one_second():
    import time
    rng = np.random.default_rng(3)
    pts = 0.9 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    t0 = time.perf_counter()
    for a in pts:
        mb.compose(mb.phi(a), mb.phi(a))
        mb.fixed_point(a)
        mb.bullet(a, -a / 2)
        for n in range(13):
            mb.a_seq(a, n)
    assert time.perf_counter() - t0 < 1.0
