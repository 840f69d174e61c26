"""Special functions and quadrature rules.

Everything here is vectorized over numpy arrays and has no dependency
beyond numpy. Bessel functions use three regimes:

* ``|x| < 8``: power series,
* ``8 <= |x| < 25``: Miller backward recurrence normalized by
  ``J0 + 2 * sum(J_2k) = 1``,
* ``|x| >= 25``: Hankel asymptotic expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT_PI = math.sqrt(math.pi)
PI_MINUS_QUARTER = math.pi ** -0.25

HERMITE_MAX_ORDER = 200
GAUSS_HERMITE_MAX_NODES = 256

_SERIES_CUTOFF = 8.0
_ASYMPTOTIC_CUTOFF = 25.0
_SERIES_TERMS = 44


class QuadratureConvergenceError(RuntimeError):
    """A refinement pair of quadrature evaluations disagreed beyond tolerance."""

    def __init__(self, coarse, fine, tol):
        self.coarse, self.fine, self.tol = coarse, fine, tol
        super().__init__(f"refinement pair disagrees: coarse={coarse!r}, fine={fine!r}, "
                         f"|diff|={np.max(np.abs(np.subtract(fine, coarse))):.3g} > {tol:.3g}")


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a fixed quadrature rule.

    ``kind`` is ``"gauss_hermite"`` (weight ``exp(-x**2)`` on the real line)
    or ``"gauss_legendre"`` (unit weight on a finite interval).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex | float:
        """Weighted sum of ``values`` sampled at the nodes."""
        return np.dot(self.weights, values)


# ---------------------------------------------------------------------------
# Bessel functions of the first kind, orders 0 and 1


def _series(x, order):
    # sum_k (-x^2/4)^k / (k! (k+order)!) * (x/2)^order, summed backwards
    q = -0.25 * x * x
    acc = np.ones_like(x)
    for k in range(_SERIES_TERMS, 0, -1):
        acc = 1.0 + acc * q / (k * (k + order))
    if order == 1:
        return acc * 0.5 * x
    return acc


def _miller(x):
    """J0 and J1 by backward recurrence; ``x`` positive, moderate size."""
    start = 2 * ((int(np.max(x)) + 40) // 2)
    j_next = np.zeros_like(x)
    j_curr = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    j0 = j1 = None
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_curr - j_next
        j_next, j_curr = j_curr, j_prev
        # j_curr now holds the unnormalized J_{k-1}
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_curr
        if k - 1 == 1:
            j1 = j_curr.copy()
        big = np.abs(j_curr) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            j_curr *= scale
            j_next *= scale
            norm *= scale
            if j1 is not None:
                j1 *= scale
    j0 = j_curr
    norm += j0
    return j0 / norm, j1 / norm


def _hankel(x, order):
    mu = 4.0 * order * order
    inv8x = 1.0 / (8.0 * x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 40):
        term = term * (mu - (2 * k - 1) ** 2) * inv8x / k
        if k % 2:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 else term
        if np.max(np.abs(term)) < 1e-18:
            break
    c, s = np.cos(x), np.sin(x)
    root2 = math.sqrt(2.0)
    if order == 0:
        cos_chi, sin_chi = (c + s) / root2, (s - c) / root2
    else:
        cos_chi, sin_chi = (s - c) / root2, -(s + c) / root2
    return np.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _bessel(x, order):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax < _SERIES_CUTOFF
    large = ax >= _ASYMPTOTIC_CUTOFF
    mid = ~(small | large)
    if np.any(small):
        out[small] = _series(ax[small], order)
    if np.any(mid):
        out[mid] = _miller(ax[mid])[order]
    if np.any(large):
        out[large] = _hankel(ax[large], order)
    if order == 1:
        out = np.where(x < 0, -out, out)
    return out if out.ndim else float(out)


def bessel_j0(x):
    """Bessel function J0, absolute error below 1e-12 for ``|x| <= 500``."""
    return _bessel(x, 0)


def bessel_j1(x):
    """Bessel function J1, odd in ``x``."""
    return _bessel(x, 1)


def bessel_j1_over_x(x):
    """``J1(x) / x`` with the removable singularity filled in (value 1/2 at 0)."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax < _SERIES_CUTOFF
    out = np.empty_like(ax)
    if np.any(small):
        # J1(x) = (x/2) * S(x): return S(x)/2 without dividing by x
        out[small] = 0.5 * _series_ratio(ax[small])
    if np.any(~small):
        out[~small] = _bessel(ax[~small], 1) / ax[~small]
    return out if out.ndim else float(out)


def _series_ratio(x):
    q = -0.25 * x * x
    acc = np.ones_like(x)
    for k in range(_SERIES_TERMS, 0, -1):
        acc = 1.0 + acc * q / (k * (k + 1))
    return acc


# ---------------------------------------------------------------------------
# Hermite functions and Gauss-Hermite quadrature


def hermite_functions(kmax: int, x) -> np.ndarray:
    """All normalized Hermite functions ``psi_0 .. psi_kmax`` at ``x``.

    Returns an array of shape ``(kmax + 1,) + x.shape``.
    """
    if kmax < 0 or kmax > HERMITE_MAX_ORDER:
        raise ValueError(f"order must lie in [0, {HERMITE_MAX_ORDER}], got {kmax}")
    return _hermite_table(kmax, x)


def _hermite_table(kmax, x):
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = PI_MINUS_QUARTER * np.exp(-0.5 * x * x)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, kmax):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * x * out[k]
                      - math.sqrt(k / (k + 1)) * out[k - 1])
    return out


def hermite_fn(k: int, x):
    """Normalized Hermite function ``psi_k(x)`` via the three-term recurrence.

    The recurrence is stable for ``k <= 200``; larger orders are rejected.
    """
    vals = hermite_functions(k, x)[k]
    return vals if vals.ndim else float(vals)


def gauss_hermite(n: int) -> QuadratureRule:
    """n-point Gauss-Hermite rule for the weight ``exp(-x**2)``.

    Nodes come from the eigenvalues of the Jacobi matrix and are polished
    by Newton steps on ``psi_n``. Weights use
    ``w_i = exp(-x_i**2) / sum_k psi_k(x_i)**2``, which keeps full relative
    accuracy in the far tails where eigenvector components underflow.
    """
    if not 1 <= n <= GAUSS_HERMITE_MAX_NODES:
        raise ValueError(f"node count must lie in [1, {GAUSS_HERMITE_MAX_NODES}], got {n}")
    if n == 1:
        return QuadratureRule("gauss_hermite", np.array([0.0]), np.array([SQRT_PI]))
    off = np.sqrt(np.arange(1, n) / 2.0)
    jacobi = np.diag(off, 1) + np.diag(off, -1)
    x = np.linalg.eigvalsh(jacobi)
    for _ in range(3):
        psi = _hermite_table(n, x)
        dpsi = math.sqrt(2.0 * n) * psi[n - 1] - x * psi[n]
        x = x - psi[n] / dpsi
    x = 0.5 * (x - x[::-1])
    if n % 2:
        x[n // 2] = 0.0
    psi = _hermite_table(n - 1, x)
    w = np.exp(-x * x) / np.sum(psi * psi, axis=0)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule("gauss_hermite", x, w)


def gauss_legendre_panels(a: float, b: float, panels: int, order: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule over ``[a, b]`` with equal panels."""
    if a > b:
        raise ValueError(f"interval is reversed: a={a} > b={b}")
    if panels < 1 or order < 1:
        raise ValueError("panels and order must be positive")
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    if a == b:
        # degenerate interval: a single node with a vanishing contribution is
        # not representable with positive weights, so callers short-circuit
        raise ValueError("interval has zero length")
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    return QuadratureRule("gauss_legendre", nodes, weights)


def log_binomial(n: int, j: int) -> float:
    """Natural log of the binomial coefficient ``C(n, j)``."""
    if n < 0 or j < 0 or j > n:
        raise ValueError(f"need 0 <= j <= n, got n={n}, j={j}")
    j = min(j, n - j)
    if j == 0:
        return 0.0
    if n <= 20000:
        # exact integer, one rounding
        return math.log(math.comb(n, j))
    return math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
