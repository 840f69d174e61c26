import math

import numpy as np
import pytest

from superkg import bargmann as sb
from superkg.kg_spectral import evolve_homogeneous
from superkg.special import PI_MINUS_QUARTER, QuadratureConvergenceError, gauss_hermite, hermite_fn, hermite_functions
from superkg.superosc import SuperoscillationParams as P, eval_fn_derivative, eval_fn_sum

RULES96 = (gauss_hermite(96), gauss_hermite(96))


def test_fock_kernel():
    assert sb.fock_kernel(0.7 - 0.2j, 0) == 1
    assert sb.fock_kernel(1, 1) == pytest.approx(math.e)
    rng = np.random.default_rng(3)
    z, w = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
    assert np.allclose(sb.fock_kernel(z, w), np.conj(sb.fock_kernel(w, z)))


@pytest.mark.parametrize("w", [0.0, 0.8 + 0.3j, -1.2j, 1.4 + 1.4j])
def test_normalized_kernel_unit_norm(w):
    assert sb.normalized_kernel(0, w) == pytest.approx(np.exp(-abs(w) ** 2 / 2))
    assert sb.normalized_kernel(0.4 + 1j, 0) == 1
    k = lambda z: sb.normalized_kernel(z, w)
    assert abs(sb.fock_inner(k, k, nodes=64) - 1) < 1e-8


def test_sb_kernel_values_and_series():
    assert sb.sb_kernel(0, 0) == pytest.approx(PI_MINUS_QUARTER)
    x = np.linspace(-2, 2, 9)
    psi = hermite_functions(40, x)
    for z in (0.0, 0.6 + 0.5j, -0.7j, 1.0):
        coeff = np.array([np.conj(z) ** k / math.sqrt(math.factorial(k)) for k in range(41)])
        assert np.max(np.abs(coeff @ psi - sb.sb_kernel(z, x))) < 1e-10


def test_kernel_inner_product_is_fock_kernel():
    rule = gauss_hermite(96)
    x = rule.nodes
    for z, w in [(0.5 + 0.2j, -0.3 + 1j), (1.5, 1.5j), (-1.0 - 1.0j, 0.2)]:
        # <A_w, A_z> = int A_w conj(A_z) dx, weight exp(-x^2) compensated
        integrand = sb.sb_kernel(w, x) * np.conj(sb.sb_kernel(z, x)) * np.exp(x * x)
        assert abs(rule.integrate(integrand) - np.exp(z * np.conj(w))) < 1e-8


def test_forward_maps_hermite_basis_to_monomials():
    z = np.array([0, 0.7, 1.2 - 1.2j, 2.0j, -1.9 + 0.5j])
    assert np.max(np.abs(sb.sb_forward(lambda x: hermite_fn(0, x), z) - 1)) < 1e-9
    assert abs(sb.sb_forward(lambda x: hermite_fn(3, x), 1.0) - 1 / math.sqrt(6)) < 1e-8


def test_forward_matches_closed_form_xi():
    got = sb.sb_forward(sb.phi_callback(6, 1.5, 3.0, 0.4), 0.5 + 0.3j)
    assert abs(got - sb.xi_closed_form(6, 1.5, 3.0, 0.4, 0.5 + 0.3j)) < 1e-7


def test_xi_closed_form_values():
    expect = math.pi ** 0.25 * math.exp(-0.25)
    assert sb.xi_closed_form(1, 2.0, 5.0, 0.0, 0.0) == pytest.approx(expect, rel=1e-15)


def test_xi_time_derivative_equals_sqrt2_z_derivative_at_t0():
    n, a, z, h = 6, 1.5, 0.3 - 0.4j, 1e-5
    # massless case: theta = e^{i lam t}
    dt = (sb.xi_closed_form(n, a, 0.0, h, z) - sb.xi_closed_form(n, a, 0.0, -h, z)) / (2 * h)
    dz = (sb.xi_closed_form(n, a, 0.0, 0.0, z + h) - sb.xi_closed_form(n, a, 0.0, 0.0, z - h)) / (2 * h)
    assert abs(dt - math.sqrt(2) * dz) < 1e-7
    assert abs(dz - sb.xi_derivative_closed_form(n, a, 0.0, 0.0, z)) < 1e-8


def test_xi_is_entire_cauchy_riemann():
    z0, h = 0.4 + 0.2j, 1e-4
    f = lambda z: sb.xi_closed_form(6, 1.5, 3.0, 0.7, z)
    dx = (f(z0 + h) - f(z0 - h)) / (2 * h)
    dy = (f(z0 + 1j * h) - f(z0 - 1j * h)) / (2 * h)
    assert abs(0.5 * (dx + 1j * dy)) < 1e-7


def test_inverse_recovers_evolution_and_fn():
    got = sb.sb_inverse(sb.xi_callback(6, 1.5, 3.0, 0.3), 0.4, RULES96)
    assert abs(got - evolve_homogeneous(6, 1.5, 3.0, 0.4, 0.3)) < 1e-6
    assert abs(sb.fn_integral_rep(6, 1.5, 0.4, RULES96) - eval_fn_sum(P(6, 1.5), 0.4)) < 1e-6


def test_inverse_of_constant_is_ground_state():
    x = np.array([-1.5, 0.0, 0.9])
    got = sb.sb_inverse(lambda z: np.ones_like(z), x)
    assert np.max(np.abs(got - PI_MINUS_QUARTER)) < 1e-12


def test_derivative_integral_rep():
    assert abs(sb.fn_derivative_integral_rep(6, 1.5, 0.4, RULES96) - eval_fn_derivative(P(6, 1.5), 0.4)) < 1e-6
    assert abs(sb.fn_derivative_integral_rep(2, 2.0, 0.0) - 2j) < 1e-6
    assert abs(sb.fn_derivative_integral_rep(1, 2.0, 0.0) - 2j) < 1e-6


def test_gaussian_measure_is_a_probability_measure():
    assert sb.gaussian_integral(lambda z: np.ones_like(z)) == pytest.approx(1, abs=1e-14)
    # monomials are orthogonal with <z^j, z^k> = k! delta_jk
    for j, k in [(2, 2), (3, 1), (4, 4)]:
        got = sb.fock_inner(lambda z: z ** j, lambda z: z ** k)
        assert abs(got - (math.factorial(k) if j == k else 0)) < 1e-10


def test_forward_refinement_failure_is_reported():
    # a function the 8-node rule cannot resolve
    with pytest.raises(QuadratureConvergenceError):
        sb.sb_forward(lambda x: np.exp(-0.5 * x * x) * np.cos(9 * x), 0.3, rule=gauss_hermite(8))
