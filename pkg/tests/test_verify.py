import numpy as np
import pytest

from superkg import kg_spectral as ks
from superkg.kg_green import IvpSpec, green_solve
from superkg.superosc import (SuperoscillationParams as P, eval_fn_product,
                              eval_fn_product_derivative, eval_fn_sum)
from superkg.verify import ladder, oracle_compare, residual_check

PROBES = [(x, t) for x in (-1.0, 0.2, 1.4) for t in (0.5, 1.5)]


def test_residual_of_closed_form():
    rep = residual_check(lambda x, t: ks.evolve_homogeneous(10, 1.5, 3.0, x, t), None, 3.0, PROBES)
    assert rep.max_abs_residual <= 1e-4
    assert 3.5 <= rep.refinement_ratio <= 4.5
    assert not rep.flagged
    assert set(rep.to_dict()) >= {"max_abs_residual", "refinement_ratio", "flagged"}


def test_exact_wave_solution_sits_at_noise_floor():
    rep = residual_check(lambda x, t: np.exp(1.5j * (x + t)), None, 0.0, PROBES)
    assert rep.max_abs_residual < 1e-6
    assert rep.at_noise_floor
    assert not rep.flagged


def test_static_quadratic_with_source():
    rep = residual_check(lambda x, t: x * x + 0 * t, lambda x, t: -2.0 + 0 * x, 0.0, PROBES)
    assert rep.max_abs_residual < 1e-9


def test_non_smooth_field_is_flagged():
    # |x|^1.5 has an unbounded second derivative at x = 0; the residual grows as h shrinks
    rep = residual_check(lambda x, t: np.abs(x) ** 1.5 + 0 * t, None, 0.0, [(0.0, 1.0), (0.4, 1.0)])
    assert rep.refinement_ratio < 1
    assert rep.flagged


def test_exclusions():
    probes = [(0.0, 1.0), (1.0, 1.0), (0.5, 1.0)]
    rep = residual_check(lambda x, t: ks.evolve_dirac_space(6, 1.5, 3.0, x, t), None, 3.0, probes,
                         exclusions=("source", "light_cone"))
    assert rep.excluded == [(0.0, 1.0), (1.0, 1.0)]
    assert rep.probes == [(0.5, 1.0)]
    with pytest.raises(ValueError):
        residual_check(lambda x, t: x, None, 0.0, [(0.0, 1.0)], exclusions=("source",))
    with pytest.raises(ValueError):
        residual_check(lambda x, t: x, None, 0.0, [(0.3, 0.0)])


def test_ladders():
    compact = np.linspace(-1, 1, 21)
    lad = ladder(lambda n: (lambda x: eval_fn_product(P(n, 1.5), x)), lambda x: np.exp(1.5j * x),
                 [10, 20, 40, 80], compact)
    assert lad.monotone
    lad2 = ladder(lambda n: (lambda x: ks.evolve_homogeneous(n, 1.5, 3.0, x, 0.5)),
                  lambda x: ks.evolve_homogeneous_limit(1.5, 3.0, x, 0.5), [10, 20, 40], compact)
    assert lad2.monotone
    self_lad = ladder(lambda n: (lambda x: eval_fn_sum(P(n, 2.0), x)),
                      lambda x: eval_fn_sum(P(12, 2.0), x), [6, 12], compact)
    assert self_lad.errors[1] == 0.0
    with pytest.raises(ValueError):
        ladder(lambda n: None, lambda x: x, [4, 4], compact)


def test_oracle_compare():
    probes = [(n, x) for n in (1, 10, 30) for x in (-4.0, 0.3, 5.0)]
    rep = oracle_compare(lambda p: eval_fn_sum(P(p[0], 2.0), p[1]) / eval_fn_product(P(p[0], 2.0), p[1]),
                         lambda p: 1.0, probes, 1e-9)
    assert rep.passed
    same = oracle_compare(lambda p: p[0] * 2, lambda p: p[0] * 2, [(1.0,), (2.0,)], 0.0)
    assert same.max_abs_diff == 0 and same.passed


def test_oracle_compare_spectral_vs_green():
    p = P(6, 1.5)
    spec = IvpSpec(3.0, lambda x: eval_fn_product(p, x), lambda x: eval_fn_product_derivative(p, x))
    probes = [(x, t) for x in (-1.0, 0.5) for t in (0.0, 1.2)]
    rep = oracle_compare(lambda q: green_solve(spec, *q),
                         lambda q: ks.evolve_homogeneous(6, 1.5, 3.0, *q), probes, 1e-7)
    assert rep.passed
