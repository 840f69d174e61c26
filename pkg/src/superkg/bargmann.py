"""Fock space kernels and the Segal-Bargmann transform.

Integrals against the Gaussian measure ``exp(-|z|^2) dA(z) / pi`` on the
complex plane use tensor Gauss-Hermite rules over ``(Re z, Im z)``; integrals
on the line factor ``exp(-x^2)`` into a one-dimensional Gauss-Hermite rule.
Both the forward and inverse transforms repeat the quadrature on a finer
rule and raise ``QuadratureConvergenceError`` when the pair disagrees.

Callbacks are vectorized: they receive numpy arrays of nodes.
"""

from __future__ import annotations

import math

import numpy as np

from .kg_spectral import evolve_homogeneous, theta
from .special import (PI_MINUS_QUARTER, QuadratureConvergenceError, QuadratureRule,
                      gauss_hermite)
from .superosc import SuperoscillationParams, coefficients

PI_QUARTER = math.pi ** 0.25
SQRT2 = math.sqrt(2.0)

DEFAULT_LINE_NODES = 64
DEFAULT_PLANE_NODES = 96


def _finer(rule: QuadratureRule) -> QuadratureRule:
    return gauss_hermite(min(256, 2 * len(rule)))


def _checked(compute, rule, refine_rule, tol):
    coarse = compute(rule)
    if tol is None:
        return coarse
    fine = compute(refine_rule)
    scale = np.maximum(1.0, np.abs(fine))
    if np.any(np.abs(fine - coarse) > tol * scale):
        raise QuadratureConvergenceError(coarse, fine, tol)
    return fine


def _scalar(out):
    return out if np.ndim(out) else complex(out)


# ---------------------------------------------------------------------------
# kernels


def fock_kernel(z, w):
    """Reproducing kernel ``K(z, w) = exp(z conj(w))``."""
    return _scalar(np.exp(np.asarray(z) * np.conj(w)))


def normalized_kernel(z, w):
    """Unit-norm kernel ``k_w(z) = exp(z conj(w) - |w|^2 / 2)``."""
    w = np.asarray(w)
    return _scalar(np.exp(np.asarray(z) * np.conj(w) - 0.5 * np.abs(w) ** 2))


def sb_kernel(z, x):
    """``A_z(x) = pi^(-1/4) exp(-(x^2 + conj(z)^2) / 2 + sqrt(2) conj(z) x)``."""
    zb = np.conj(np.asarray(z))
    x = np.asarray(x, dtype=float)
    return _scalar(PI_MINUS_QUARTER * np.exp(-0.5 * (x * x + zb * zb) + SQRT2 * zb * x))


# ---------------------------------------------------------------------------
# plane quadrature


def plane_rule(nodes: int = DEFAULT_PLANE_NODES):
    """Tensor rule for ``(1/pi) int F(z) exp(-|z|^2) dA``: returns ``(z, weights)``."""
    rule = gauss_hermite(nodes)
    u, v = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    return (u + 1j * v).ravel(), np.outer(rule.weights, rule.weights).ravel() / math.pi


def gaussian_integral(func, nodes: int = DEFAULT_PLANE_NODES) -> complex:
    """``(1/pi) int func(z) exp(-|z|^2) dA(z)``."""
    z, w = plane_rule(nodes)
    return complex(np.dot(w, func(z)))


def fock_inner(f, g, nodes: int = DEFAULT_PLANE_NODES) -> complex:
    """Fock inner product ``<f, g> = (1/pi) int conj(g) f exp(-|z|^2) dA``."""
    return gaussian_integral(lambda z: f(z) * np.conj(g(z)), nodes)


# ---------------------------------------------------------------------------
# forward and inverse transforms


def sb_forward(psi, z, rule: QuadratureRule | None = None, tol: float | None = 1e-8):
    """Segal-Bargmann transform ``(B psi)(z)`` by Gauss-Hermite quadrature on the line.

    The integrand ``pi^(-1/4) exp(-(x^2 + z^2)/2 + sqrt(2) z x) psi(x)`` is
    split as ``exp(-x^2)`` times ``pi^(-1/4) exp(x^2/2 - z^2/2 + sqrt(2) z x) psi(x)``,
    so ``psi`` must decay at least like ``exp(-x^2/2)`` times a function the
    rule can resolve.
    """
    z = np.asarray(z, dtype=complex)
    rule = rule or gauss_hermite(DEFAULT_LINE_NODES)

    def compute(r):
        x = r.nodes
        vals = np.asarray(psi(x), dtype=complex) * np.exp(0.5 * x * x)
        zz = z[..., None]
        kern = np.exp(-0.5 * zz * zz + SQRT2 * zz * x)
        return PI_MINUS_QUARTER * (kern @ (r.weights * vals))

    return _scalar(_checked(compute, rule, _finer(rule), tol))


def sb_inverse(xi, x, rules: tuple[QuadratureRule, QuadratureRule] | None = None,
               tol: float | None = 1e-8):
    """``pi^(-1/4) (1/pi) int exp(-conj(z)^2/2 + sqrt(2) x conj(z)) xi(z) exp(-|z|^2) dA``.

    This returns ``exp(x^2/2)`` times the inverse transform of ``xi``, i.e. it
    recovers ``u`` from the transform of ``exp(-x^2/2) u``. ``xi`` must grow
    more slowly than ``exp(|z|^2/2)``.
    """
    x = np.asarray(x, dtype=float)
    if rules is None:
        rules = (gauss_hermite(DEFAULT_PLANE_NODES),) * 2

    def compute(pair):
        ru, rv = pair
        u, v = np.meshgrid(ru.nodes, rv.nodes, indexing="ij")
        zz = (u + 1j * v).ravel()
        w = np.outer(ru.weights, rv.weights).ravel() / math.pi
        zb = np.conj(zz)
        wx = w * np.asarray(xi(zz), dtype=complex) * np.exp(-0.5 * zb * zb)
        kern = np.exp(SQRT2 * x[..., None] * zb)
        return PI_MINUS_QUARTER * (kern @ wx)

    coarse_pair = tuple(rules)
    fine_pair = tuple(_finer(r) for r in rules)
    return _scalar(_checked(compute, coarse_pair, fine_pair, tol))


# ---------------------------------------------------------------------------
# transforms of the evolved superoscillation


def phi_callback(n, a, m, t):
    """``x -> exp(-x^2/2) u_n(x, t)``, the Gaussian-damped homogeneous solution."""
    def phi(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * x * x) * evolve_homogeneous(n, a, m, x, t)
    return phi


def _xi_terms(n, a, m, t, z, derivative=False):
    coeffs = coefficients(SuperoscillationParams(n, a))
    lam = coeffs.frequencies
    z = np.asarray(z, dtype=complex)[..., None]
    weight = coeffs.values * theta(lam, m, t) * np.exp(-0.25 * lam * lam)
    if derivative:
        weight = weight * (1j * lam / SQRT2)
    return PI_QUARTER * np.sum(weight * np.exp(1j * z * lam / SQRT2), axis=-1)


def xi_closed_form(n, a, m, t, z):
    """``xi_n(z, t) = pi^(1/4) sum_j C_j theta_{lam_j,m}(t) k_{-i lam_j / sqrt 2}(z)``."""
    return _scalar(_xi_terms(n, a, m, t, z))


def xi_derivative_closed_form(n, a, m, t, z):
    """``d/dz xi_n(z, t)``, term-wise factor ``i lam_j / sqrt(2)``."""
    return _scalar(_xi_terms(n, a, m, t, z, derivative=True))


def xi_callback(n, a, m, t):
    return lambda z: _xi_terms(n, a, m, t, z)


def fn_integral_rep(n, a, x, rules=None, tol=1e-8):
    """F_n(x, a) recovered from ``xi_n(., 0)`` through the inverse transform."""
    return sb_inverse(xi_callback(n, a, 0.0, 0.0), x, rules, tol)


def fn_derivative_integral_rep(n, a, x, rules=None, tol=1e-8):
    """F_n'(x, a) as ``sqrt(2)`` times the inverse transform of ``d/dz xi_n(z, 0)``."""
    def dxi(z):
        return _xi_terms(n, a, 0.0, 0.0, z, derivative=True)
    return _scalar(SQRT2 * np.asarray(sb_inverse(dxi, x, rules, tol)))
