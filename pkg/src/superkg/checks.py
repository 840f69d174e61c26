"""The acceptance suite, grouped by criterion.

Each group is a function ``group(tol_scale) -> list[CheckResult]``. The CLI
``verify`` command and ``tests/test_acceptance.py`` both run these.
Tolerances are fixed here; ``tol_scale`` multiplies every upper-bound
tolerance (used to demonstrate that failures propagate).
"""

from __future__ import annotations

import itertools
import math
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import bargmann, kg_spectral as ks
from .export import RunConfig, apply_preset, read_csv, write_evolve
from .kg_green import IvpSpec, green_solve
from .special import gauss_hermite, hermite_fn
from .stochastic import CovKernelParams, cov_kernel, r_kernel, r_kernel_fourier_check
from .superosc import (SuperoscillationParams, coefficients, eval_fn_derivative,
                       eval_fn_product, eval_fn_product_derivative, eval_fn_sum, supershift)
from .verify import MIN_REFINEMENT_RATIO, ladder, oracle_compare, residual_check

A_VALUES = (1.5, 2.0, 4.0)


@dataclass
class CheckResult:
    name: str
    group: str
    value: float
    tolerance: float
    passed: bool
    comparator: str = "<="
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.group}/{self.name}: {self.value:.3e} "
                f"{self.comparator} {self.tolerance:.3e}")

    def to_dict(self):
        return asdict(self)


def _upper(group, name, value, tol, tol_scale, **details):
    tol = tol * tol_scale
    value = float(value)
    return CheckResult(name, group, value, tol, bool(value <= tol), "<=", details)


def _lower(group, name, value, bound, **details):
    value = float(value)
    return CheckResult(name, group, value, bound, bool(value >= bound), ">=", details)


P = SuperoscillationParams


# 1 ---------------------------------------------------------------------------
def check_coefficients(tol_scale=1.0):
    sum_err = moment_err = 0.0
    for n, a in itertools.product(range(1, 31), A_VALUES):
        c = coefficients(P(n, a))
        sum_err = max(sum_err, abs(supershift(c, lambda lam: 1) - 1))
        moment_err = max(moment_err, abs(supershift(c, lambda lam: lam) - a))
    return [_upper("coefficients", "sum_equals_one", sum_err, 1e-10, tol_scale),
            _upper("coefficients", "first_moment_equals_a", moment_err, 1e-10, tol_scale)]


# 2 ---------------------------------------------------------------------------
def check_dual_form(tol_scale=1.0):
    xs = np.linspace(-5, 5, 21)
    worst = 0.0
    for n, a in itertools.product(range(1, 31), A_VALUES):
        s, p = eval_fn_sum(P(n, a), xs), eval_fn_product(P(n, a), xs)
        worst = max(worst, float(np.max(np.abs(s - p) / np.abs(p))))
    return [_upper("dual-form", "sum_vs_product_relative", worst, 1e-9, tol_scale)]


# 3 ---------------------------------------------------------------------------
N_EVO, A_EVO, B_EVO, M_EVO = 10, 1.5, 2.0, 3.0

CASES = {
    "problem1/zero": ks.KgProblem(M_EVO, A_EVO),
    "problem1/dirac_space": ks.KgProblem(M_EVO, A_EVO, source="dirac_space"),
    "problem1/dirac_spacetime": ks.KgProblem(M_EVO, A_EVO, source="dirac_spacetime"),
    "problem2/zero": ks.KgProblem(M_EVO, A_EVO, "problem2", b=B_EVO),
    "problem2/dirac_space": ks.KgProblem(M_EVO, A_EVO, "problem2", "dirac_space", b=B_EVO),
}


def check_initial_conditions(tol_scale=1.0):
    # x = 0 is the Dirac source support; probes stay off it
    xs = np.array([-2.3, -0.7, 0.4, 1.9])
    h = 1e-5
    f_ref = eval_fn_sum(P(N_EVO, A_EVO), xs)
    out = []
    for name, prob in CASES.items():
        at0 = ks.evaluate(prob, N_EVO, xs, 0.0)
        dt = (ks.evaluate(prob, N_EVO, xs, h) - ks.evaluate(prob, N_EVO, xs, -h)) / (2 * h)
        if prob.initial == "problem1":
            v_ref = eval_fn_derivative(P(N_EVO, A_EVO), xs)
        else:
            v_ref = eval_fn_sum(P(N_EVO, B_EVO), xs)
        out.append(_upper("initial-conditions", f"{name}/value",
                          np.max(np.abs(at0 - f_ref)), 1e-10, tol_scale))
        out.append(_upper("initial-conditions", f"{name}/velocity",
                          np.max(np.abs(dt - v_ref)), 1e-6, tol_scale))
    return out


# 4 ---------------------------------------------------------------------------
RESIDUAL_PROBES = [(x, t) for x in (-2.0, -1.0, 0.5, 1.5, 2.5) for t in (0.5, 1.0, 1.5, 2.0)]


def check_pde_residual(tol_scale=1.0):
    out = []
    for name, prob in CASES.items():
        sourced = prob.source != "zero"
        exclusions = ("source", "light_cone") if sourced else ()
        rep = residual_check(lambda x, t, prob=prob: ks.evaluate(prob, N_EVO, x, t), None,
                             prob.m, RESIDUAL_PROBES, h=1e-3, exclusions=exclusions)
        details = {"excluded": len(rep.excluded), "probes": len(rep.probes)}
        out.append(_upper("pde-residual", f"{name}/max_residual", rep.max_abs_residual,
                          1e-4, tol_scale, **details))
        out.append(_lower("pde-residual", f"{name}/refinement_ratio", rep.refinement_ratio,
                          MIN_REFINEMENT_RATIO, **details))
    return out


# 5 ---------------------------------------------------------------------------
def check_m0_reduction(tol_scale=1.0):
    xs, ts = np.meshgrid(np.linspace(-3, 3, 13), np.linspace(0, 3, 7))
    worst = 0.0
    for a in (1.5, 2.0):
        lhs = ks.evolve_homogeneous(N_EVO, a, 0.0, xs, ts)
        worst = max(worst, float(np.max(np.abs(lhs - eval_fn_product(P(N_EVO, a), xs + ts)))))
    return [_upper("m0-reduction", "translation", worst, 1e-10, tol_scale)]


# 6 ---------------------------------------------------------------------------
def check_operator_truncation(tol_scale=1.0):
    w_max = math.hypot(M_EVO, 1.0)
    ts = np.array([0.5, 1.5, 10.0 / w_max])
    xs, tt = np.meshgrid(np.array([-1.0, 0.3, 2.0]), ts)
    exact = ks.evolve_homogeneous(N_EVO, A_EVO, M_EVO, xs, tt)
    errs = {order: float(np.max(np.abs(
        ks.evolve_operator_truncated(N_EVO, A_EVO, M_EVO, xs, tt, order) - exact)))
        for order in (5, 10, 20, 40)}
    return [_upper("operator-truncation", "order40_vs_closed_form", errs[40], 1e-10, tol_scale,
                   ladder={str(k): v for k, v in errs.items()})]


# 7 ---------------------------------------------------------------------------
def _green_specs(n, a, b, m):
    pa, pb = P(n, a), P(n, b)

    def f(x):
        return eval_fn_product(pa, x)

    def g1(x):
        return eval_fn_product_derivative(pa, x)

    def g2(x):
        return eval_fn_product(pb, x)

    return {
        "problem1/zero": IvpSpec(m, f, g1),
        "problem1/dirac_space": IvpSpec(m, f, g1, "dirac_space"),
        "problem1/dirac_spacetime": IvpSpec(m, f, g1, "dirac_spacetime"),
        "problem2/zero": IvpSpec(m, f, g2),
        "problem2/dirac_space": IvpSpec(m, f, g2, "dirac_space"),
    }


def check_cross_oracle(tol_scale=1.0):
    n, a, b, m = 6, 1.5, 2.0, 3.0
    probes = list(itertools.product(np.linspace(-1.5, 1.5, 5), np.linspace(0.0, 2.0, 5)))
    specs = _green_specs(n, a, b, m)
    out = []
    for name, spec in specs.items():
        initial, source = name.split("/")
        prob = ks.KgProblem(m, a, initial, source, b=b if initial == "problem2" else None)
        rep = oracle_compare(lambda p, spec=spec: green_solve(spec, *p),
                             lambda p, prob=prob: ks.evaluate(prob, n, p[0], p[1]),
                             probes, 1e-7 * tol_scale)
        out.append(_upper("cross-oracle", name, rep.max_abs_diff, 1e-7, tol_scale,
                          worst_probe=[float(v) for v in rep.worst_probe]))
    return out


# 8 ---------------------------------------------------------------------------
def check_causality(tol_scale=1.0):
    outside = [(3.0, 2.0, 1.0), (0.0, 1.5, 1.0), (1.0, -2.5, 2.0), (3.0, 0.8, 0.5)]
    causal = max(max(abs(float(ks.particular_dirac_space(m, x, t))),
                     abs(float(ks.particular_dirac_spacetime(m, x, t))))
                 for m, x, t in outside)
    fourier = max(abs(r_kernel_fourier_check(CovKernelParams(m, x), t)) for m, x, t in outside)
    return [CheckResult("causal_form_outside_cone", "causality", causal, 0.0, causal == 0.0,
                        "=="),
            _upper("causality", "fourier_form_outside_cone", fourier, 1e-4, tol_scale)]


# 9 ---------------------------------------------------------------------------
def check_bargmann(tol_scale=1.0):
    zs = np.array([0.0, 0.7, -1.2 + 0.4j, 0.5 + 1.4j, -0.3 - 1.0j, 1.5j])
    basis = 0.0
    for k in range(9):
        got = bargmann.sb_forward(lambda x, k=k: hermite_fn(k, x), zs)
        basis = max(basis, float(np.max(np.abs(got - zs ** k / math.sqrt(math.factorial(k))))))

    n, a, m = 6, 1.5, 3.0
    z = np.array([0.5 + 0.3j, -0.8 + 0.1j, 1.1 - 0.6j])
    t = 0.4
    forward = float(np.max(np.abs(bargmann.sb_forward(bargmann.phi_callback(n, a, m, t), z)
                                - bargmann.xi_closed_form(n, a, m, t, z))))

    xs = np.array([-1.3, 0.4, 2.1])
    rules = (gauss_hermite(96), gauss_hermite(96))
    inv = 0.0
    for t in (0.0, 0.3, 1.0):
        got = bargmann.sb_inverse(bargmann.xi_callback(n, a, m, t), xs, rules)
        inv = max(inv, float(np.max(np.abs(got - ks.evolve_homogeneous(n, a, m, xs, t)))))

    fn = float(np.max(np.abs(bargmann.fn_integral_rep(n, a, xs, rules)
                             - eval_fn_sum(P(n, a), xs))))
    dfn = float(np.max(np.abs(bargmann.fn_derivative_integral_rep(n, a, xs, rules)
                              - eval_fn_derivative(P(n, a), xs))))
    return [_upper("bargmann", "hermite_basis_mapping", basis, 1e-7, tol_scale),
            _upper("bargmann", "forward_vs_closed_form_xi", forward, 1e-7, tol_scale),
            _upper("bargmann", "inversion_recovers_u_n", inv, 1e-6, tol_scale),
            _upper("bargmann", "integral_rep_F_n", fn, 1e-6, tol_scale),
            _upper("bargmann", "integral_rep_F_n_derivative", dfn, 1e-6, tol_scale)]


# 10 --------------------------------------------------------------------------
def check_stochastic(tol_scale=1.0):
    p0 = CovKernelParams(0.0, 0.0)
    grid = np.array([0.0, 0.4, 1.0, 1.7, 2.5, 3.2])
    s, t = np.meshgrid(grid, grid)
    bm = float(np.max(np.abs(cov_kernel(p0, s, t) - np.minimum(s, t))))
    times = np.array([0.25, 0.5, 1.0, 2.0, 3.5])
    causal = float(np.max(np.abs(r_kernel(p0, times) - times / 2)))
    fourier = max(abs(r_kernel_fourier_check(p0, tv) - tv / 2) for tv in (0.5, 1.0, 2.0))
    return [_upper("stochastic", "brownian_min_reduction", bm, 1e-10, tol_scale),
            _upper("stochastic", "r00_causal_half_t", causal, 1e-10, tol_scale),
            _upper("stochastic", "r00_fourier_half_t", fourier, 1e-4, tol_scale)]


# 11 --------------------------------------------------------------------------
def zero_crossing_spacing(x, values, half_width):
    """Largest gap between consecutive sign changes of ``values`` inside ``|x| < half_width``."""
    x, values = np.asarray(x), np.asarray(values)
    sign_change = np.nonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))[0]
    # linear interpolation of each crossing
    xc = x[sign_change] - values[sign_change] * (x[sign_change + 1] - x[sign_change]) / (
        values[sign_change + 1] - values[sign_change])
    xc = xc[np.abs(xc) < half_width]
    if xc.size < 2:
        return float("inf")
    return float(np.max(np.diff(xc)))


def check_figures(tol_scale=1.0):
    out = []
    with tempfile.TemporaryDirectory() as tmp:
        for preset in ("figure1", "figure2"):
            cfg = apply_preset(RunConfig(), preset)
            paths = write_evolve(cfg, Path(tmp) / f"{preset}.csv")
            for path in paths:
                meta, _, data = read_csv(path)
                a, n = float(meta["a"]), int(meta["n"])
                first = data[data[:, 1] == 0.0]
                direct = eval_fn_sum(P(n, a), first[:, 0])
                mismatches = int(np.sum((first[:, 2] != direct.real) | (first[:, 3] != direct.imag)))
                label = f"{preset}/a={a:g}"
                out.append(CheckResult(f"{label}/t0_bit_for_bit_mismatches", "figures",
                                       mismatches, 0, mismatches == 0, "=="))
                if a <= 1:
                    # a = 1 is the plain exponential e^{ix}; nothing superoscillates
                    continue
                gap = zero_crossing_spacing(first[:, 0], first[:, 2], math.sqrt(n))
                out.append(CheckResult(f"{label}/max_zero_crossing_gap", "figures", gap,
                                       math.pi, gap < math.pi, "<"))
    return out


GROUPS = {
    "coefficients": check_coefficients,
    "dual-form": check_dual_form,
    "initial-conditions": check_initial_conditions,
    "pde-residual": check_pde_residual,
    "m0-reduction": check_m0_reduction,
    "operator-truncation": check_operator_truncation,
    "cross-oracle": check_cross_oracle,
    "causality": check_causality,
    "bargmann": check_bargmann,
    "stochastic": check_stochastic,
    "figures": check_figures,
}


def run_checks(only=None, tol_scale=1.0) -> list[CheckResult]:
    names = list(GROUPS) if not only else list(only)
    unknown = [n for n in names if n not in GROUPS]
    if unknown:
        raise KeyError(f"unknown check group(s): {', '.join(unknown)}")
    results = []
    for name in names:
        results.extend(GROUPS[name](tol_scale))
    return results
