import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superkg import kg_spectral as ks
from superkg.special import bessel_j0
from superkg.superosc import (SuperoscillationParams as P, eval_fn_derivative, eval_fn_product,
                              eval_fn_sum)
from superkg.verify import residual_check


def test_theta_examples():
    assert ks.theta(0.7, 2.0, 0.0) == 1
    t = np.linspace(0, 4, 9)
    assert np.allclose(ks.theta(0.0, 3.0, t), np.cos(3 * t), atol=1e-15)
    assert np.allclose(ks.theta(1.0, 0.0, t), np.exp(1j * t), atol=1e-15)


@given(st.floats(-5, 5), st.floats(0.01, 5), st.floats(0, 50))
def test_theta_is_bounded_for_positive_mass(omega, m, t):
    assert abs(ks.theta(omega, m, t)) <= 1 + 1e-12


def test_sin_over_w_small_argument_branch():
    assert ks.sin_over_w(0.0, 2.5) == 2.5
    w = 1e-6
    assert ks.sin_over_w(w, 3.0) == pytest.approx(math.sin(w * 3.0) / w, rel=1e-15)


def test_homogeneous_initial_slice_and_velocity():
    x = np.linspace(-3, 3, 13)
    assert np.array_equal(ks.evolve_homogeneous(10, 1.5, 3.0, x, 0.0), eval_fn_sum(P(10, 1.5), x))
    h = 1e-5
    dt = (ks.evolve_homogeneous(10, 1.5, 3.0, x, h) - ks.evolve_homogeneous(10, 1.5, 3.0, x, -h)) / (2 * h)
    assert np.max(np.abs(dt - eval_fn_derivative(P(10, 1.5), x))) < 1e-6


def test_massless_translation():
    got = ks.evolve_homogeneous(10, 1.5, 0.0, 0.2, 0.7)
    assert abs(got - eval_fn_product(P(10, 1.5), 0.9)) < 1e-12
    assert abs(ks.evolve_homogeneous_limit(1.5, 0.0, 0.2, 0.7) - np.exp(1.5j * 0.9)) < 1e-15


def test_homogeneous_residual():
    probes = [(x, t) for x in (-1.0, 0.0, 1.3) for t in (0.4, 1.1)]
    rep = residual_check(lambda x, t: ks.evolve_homogeneous(10, 1.5, 3.0, x, t), None, 3.0, probes)
    assert rep.max_abs_residual <= 1e-4
    assert not rep.flagged


def test_limit_ladders():
    x, t = 0.3, 0.5
    lim = ks.evolve_homogeneous_limit(1.5, 3.0, x, t)
    assert ks.evolve_homogeneous_limit(1.5, 3.0, x, 0.0) == pytest.approx(np.exp(0.45j))
    errs = [abs(ks.evolve_homogeneous(n, 1.5, 3.0, x, t) - lim) for n in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2]
    lim2 = ks.evolve_problem2_limit(1.5, 2.0, 3.0, x, t)
    errs2 = [abs(ks.evolve_problem2(n, 1.5, 2.0, 3.0, x, t) - lim2) for n in (10, 20, 40)]
    assert errs2[0] > errs2[1] > errs2[2]


def test_operator_truncation():
    x, t = np.array([-1.0, 0.3, 2.0]), 3.0
    exact = ks.evolve_homogeneous(10, 1.5, 3.0, x, t)
    assert np.max(np.abs(ks.evolve_operator_truncated(10, 1.5, 3.0, x, t, 40) - exact)) < 1e-10
    for order in (1, 3, 7):
        assert np.allclose(ks.evolve_operator_truncated(10, 1.5, 3.0, x, 0.0, order),
                           eval_fn_sum(P(10, 1.5), x), atol=1e-12)
    t = 0.37
    assert ks.evolve_operator_truncated(1, 2.0, 0.0, 0.0, t, 1) == pytest.approx(1 + 2j * t)
    with pytest.raises(ValueError):
        ks.evolve_operator_truncated(1, 2.0, 0.0, 0.0, t, 0)


def test_operator_truncation_error_decreases_with_order():
    exact = ks.evolve_homogeneous(10, 1.5, 3.0, 0.4, 1.5)
    errs = [abs(ks.evolve_operator_truncated(10, 1.5, 3.0, 0.4, 1.5, k) - exact)
            for k in (5, 10, 15)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    # past the Taylor tail the error sits at roundoff
    assert abs(ks.evolve_operator_truncated(10, 1.5, 3.0, 0.4, 1.5, 40) - exact) < 1e-12


def test_particular_dirac_space():
    assert ks.particular_dirac_space(3.0, 2.0, 1.0) == 0.0
    assert ks.particular_dirac_space(3.0, -1.0, 1.0) == 0.0
    t = np.array([0.2, 1.0, 3.3])
    assert np.allclose(ks.particular_dirac_space(0.0, 0.0, t), t / 2, atol=1e-14)


def test_particular_dirac_space_refinement():
    coarse = ks.particular_dirac_space(3.0, 0.4, 2.5)
    fine = ks.particular_dirac_space(3.0, 0.4, 2.5, panels_per_unit=64, order=14)
    assert abs(coarse - fine) < 1e-13


def test_dirac_space_evolution():
    x = np.array([-2.0, 0.5, 1.5])
    assert np.array_equal(ks.evolve_dirac_space(10, 1.5, 3.0, x, 0.0), eval_fn_sum(P(10, 1.5), x))
    # outside the cone the source has not arrived
    assert ks.evolve_dirac_space(10, 1.5, 3.0, 2.0, 1.0) == ks.evolve_homogeneous(10, 1.5, 3.0, 2.0, 1.0)
    probes = [(x, t) for x in (-0.6, 0.4, 0.9) for t in (1.2, 1.8)]
    rep = residual_check(lambda x, t: ks.evolve_dirac_space(10, 1.5, 3.0, x, t), None, 3.0,
                         probes, exclusions=("source", "light_cone"))
    assert rep.max_abs_residual <= 1e-3


def test_dirac_spacetime_evolution():
    hom = ks.evolve_homogeneous(10, 1.5, 3.0, 0.0, 1.0)
    got = ks.evolve_dirac_spacetime(10, 1.5, 3.0, 0.0, 1.0)
    assert abs(got - (hom + 0.5 * bessel_j0(3.0))) < 1e-15
    assert ks.evolve_dirac_spacetime(10, 1.5, 3.0, 1.5, 1.0) == ks.evolve_homogeneous(10, 1.5, 3.0, 1.5, 1.0)
    assert ks.particular_dirac_spacetime(0.0, 0.3, 2.0) == 0.5
    # the cone edge itself is inside: H(0) = 1
    assert ks.particular_dirac_spacetime(3.0, 1.0, 1.0) == 0.5
    assert ks.particular_dirac_spacetime(3.0, 0.0, 0.0) == 0.5


def test_problem2():
    x = 0.3
    assert ks.evolve_problem2(10, 1.5, 2.0, 3.0, x, 0.0) == eval_fn_sum(P(10, 1.5), x)
    h = 1e-5
    dt = (ks.evolve_problem2(10, 1.5, 2.0, 3.0, x, h) - ks.evolve_problem2(10, 1.5, 2.0, 3.0, x, -h)) / (2 * h)
    assert abs(dt - eval_fn_sum(P(10, 2.0), x)) < 1e-6
    # Problem 2 with b = a uses F_n(., a) as velocity, not F_n'
    assert abs(ks.evolve_problem2(4, 2.0, 2.0, 1.0, 0.5, 0.5)
               - ks.evolve_homogeneous(4, 2.0, 1.0, 0.5, 0.5)) > 1e-3
    assert abs(ks.evolve_problem2_limit(2.0, 2.0, 1.0, 0.5, 0.5)
               - ks.evolve_homogeneous_limit(2.0, 1.0, 0.5, 0.5)) > 1e-3
    assert ks.evolve_problem2_limit(1.5, 2.0, 3.0, x, 0.0) == pytest.approx(np.exp(1.5j * x))


def test_problem2_massless_even_n_zero_frequency():
    # lambda_j = 0 occurs for even n; sin(w t)/w -> t there
    val = ks.evolve_problem2(4, 2.0, 2.0, 0.0, 0.1, 0.6)
    assert np.isfinite(val)
    h = 1e-4
    probe = lambda x, t: ks.evolve_problem2(4, 2.0, 2.0, 0.0, x, t)
    rep = residual_check(probe, None, 0.0, [(0.1, 0.6), (0.7, 1.0)], h=h)
    assert rep.max_abs_residual < 1e-3


def test_problem2_dirac_space():
    assert ks.evolve_problem2_dirac_space(10, 1.5, 2.0, 3.0, 0.4, 0.0) == eval_fn_sum(P(10, 1.5), 0.4)
    assert (ks.evolve_problem2_dirac_space(10, 1.5, 2.0, 3.0, 2.0, 1.0)
            == ks.evolve_problem2(10, 1.5, 2.0, 3.0, 2.0, 1.0))
    t = 1.3
    diff = (ks.evolve_problem2_dirac_space(6, 1.5, 2.0, 0.0, 0.0, t)
            - ks.evolve_problem2(6, 1.5, 2.0, 0.0, 0.0, t))
    assert abs(diff - t / 2) < 1e-14


def test_problem_validation():
    with pytest.raises(ValueError):
        ks.KgProblem(3.0, 1.5, "problem2")
    with pytest.raises(ValueError):
        ks.KgProblem(3.0, 1.5, b=2.0)
    with pytest.raises(ValueError):
        ks.KgProblem(3.0, 1.5, "problem2", "dirac_spacetime", b=2.0)
    with pytest.raises(ValueError):
        ks.KgProblem(-1.0, 1.5)
    with pytest.raises(ValueError):
        ks.KgProblem(1.0, 1.5, source="laser")


@pytest.mark.parametrize("initial,source,b", [
    ("problem1", "zero", None), ("problem1", "dirac_space", None),
    ("problem1", "dirac_spacetime", None), ("problem2", "zero", 2.0),
    ("problem2", "dirac_space", 2.0)])
def test_solve_on_grid_shapes_and_first_row(initial, source, b):
    prob = ks.KgProblem(3.0, 1.5, initial, source, b=b)
    # x = 0 is left out: with H(0) = 1 the space-time source adds 1/2 at the origin
    x = np.linspace(-2, 2, 8)
    fld = ks.solve_on_grid(prob, 10, x, np.array([0.0, 0.5, 1.0]))
    assert fld.values.shape == (3, 8)
    assert np.max(np.abs(fld.values[0] - eval_fn_sum(P(10, 1.5), x))) < 1e-10
    lim = ks.evaluate_limit(prob, x, 0.0)
    assert np.allclose(lim, np.exp(1.5j * x))


def test_extended_precision_for_large_a():
    # a = 4, n = 30 loses ~18 digits in double; auto precision recovers the product form at m = 0
    x, t = np.array([-1.0, 0.5]), 0.8
    got = ks.evolve_homogeneous(30, 4.0, 0.0, x, t)
    exact = eval_fn_product(P(30, 4.0), x + t)
    assert np.max(np.abs(got - exact) / np.abs(exact)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 20), st.floats(1.1, 3), st.floats(-3, 3), st.floats(0, 3))
def test_massless_reduction_property(n, a, x, t):
    got = ks.evolve_homogeneous(n, a, 0.0, x, t)
    exact = eval_fn_product(P(n, a), x + t)
    assert abs(got - exact) <= 1e-10 * max(1.0, abs(exact))
