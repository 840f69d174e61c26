"""Superoscillating coefficients, the sequence F_n(x, a) and the supershift sum.

The sum form ``sum_j C_j(n, a) exp(i (1 - 2j/n) x)`` cancels badly: the
terms have total magnitude ``sum_j |C_j| = max(|a|, 1)**n`` while the result
stays of order one near the origin. Every sum-form evaluator therefore
estimates the number of digits lost and, under ``precision="auto"``, moves
to mpmath arithmetic with enough guard digits once that loss exceeds
``AUTO_EXTENDED_DIGITS``. The product form ``(cos(x/n) + i a sin(x/n))**n``
is stable in double precision and serves as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np

from .special import log_binomial

AUTO_EXTENDED_DIGITS = 5.0
GUARD_DIGITS = 20
_LOG_MAX = 700.0


class CoefficientOverflowError(OverflowError):
    """The coefficients do not fit in double precision."""


@dataclass(frozen=True)
class SuperoscillationParams:
    n: int
    a: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not math.isfinite(self.a):
            raise ValueError(f"a must be finite, got {self.a}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", float(self.a))


@dataclass(frozen=True)
class CoefficientSet:
    """C_j(n, a) for j = 0..n in log-magnitude and sign form.

    ``values`` is ``None`` when some magnitude exceeds the double range;
    ``log_magnitudes`` and ``signs`` are always available. Zero coefficients
    (``a = 1`` or ``a = -1``) carry ``-inf`` log magnitude and sign 0.
    """

    n: int
    a: float
    log_magnitudes: np.ndarray
    signs: np.ndarray
    values: np.ndarray | None

    @property
    def overflow(self) -> bool:
        return self.values is None

    @cached_property
    def frequencies(self) -> np.ndarray:
        """The frequency grid ``1 - 2j/n``."""
        return 1.0 - 2.0 * np.arange(self.n + 1) / self.n

    @cached_property
    def cancellation_digits(self) -> float:
        """``log10(sum_j |C_j|)``: decimal digits lost by the literal sum."""
        logs = self.log_magnitudes[np.isfinite(self.log_magnitudes)]
        top = logs.max()
        return float((top + math.log(np.exp(logs - top).sum())) / math.log(10.0))

    def mp_frequencies(self):
        """Frequencies as mpmath numbers at the current working precision."""
        return [1 - mpmath.mpf(2 * j) / self.n for j in range(self.n + 1)]

    def mp_values(self):
        """Coefficients as mpmath numbers at the current working precision."""
        a = mpmath.mpf(self.a)
        p, q = (1 + a) / 2, (1 - a) / 2
        n = self.n
        return [mpmath.binomial(n, j) * p ** (n - j) * q ** j for j in range(n + 1)]


def coefficients(params: SuperoscillationParams) -> CoefficientSet:
    """Build ``C_j = C(n, j) ((1+a)/2)**(n-j) ((1-a)/2)**j``."""
    n, a = params.n, params.a
    p, q = 0.5 * (1.0 + a), 0.5 * (1.0 - a)
    logs = np.empty(n + 1)
    signs = np.empty(n + 1, dtype=int)
    with np.errstate(divide="ignore"):
        lp, lq = np.log(abs(p)), np.log(abs(q))
    for j in range(n + 1):
        zero = (p == 0 and j < n) or (q == 0 and j > 0)
        if zero:
            logs[j], signs[j] = -np.inf, 0
            continue
        # skip 0 * log(0) when a = +-1
        logs[j] = log_binomial(n, j) + ((n - j) * lp if j < n else 0.0) + (j * lq if j else 0.0)
        signs[j] = int(np.sign(p) ** (n - j) * np.sign(q) ** j)
    values = None
    if np.max(logs) < _LOG_MAX:
        values = np.array([math.comb(n, j) * p ** (n - j) * q ** j for j in range(n + 1)],
                          dtype=float)
    return CoefficientSet(n, a, logs, signs, values)


def _resolve_precision(coeffs: CoefficientSet, precision) -> int | None:
    """Decimal digits for extended evaluation, or None for double."""
    if precision == "double":
        if coeffs.overflow:
            raise CoefficientOverflowError(
                f"coefficients for n={coeffs.n}, a={coeffs.a} overflow double precision")
        return None
    if precision == "extended":
        return GUARD_DIGITS + math.ceil(max(coeffs.cancellation_digits, 0.0))
    if precision == "auto":
        if coeffs.overflow or coeffs.cancellation_digits > AUTO_EXTENDED_DIGITS:
            return GUARD_DIGITS + math.ceil(coeffs.cancellation_digits)
        return None
    if isinstance(precision, int) and precision > 0:
        return precision
    raise ValueError(f"unknown precision setting {precision!r}")


def mode_sum(coeffs: CoefficientSet, x, factor=None, aux=(), precision="auto"):
    """``sum_j C_j exp(i lam_j x) factor(lam_j, *aux)`` over the frequency grid.

    ``factor(lam, *aux, xp=...)`` returns the per-mode multiplier. With
    ``xp=numpy`` it receives ``lam`` shaped ``(n+1, 1, ...)`` and the ``aux``
    arrays broadcast against ``x``; with ``xp=mpmath.mp`` it receives one
    mpmath frequency and scalar ``aux`` values. ``aux`` holds extra per-point
    arrays (for example the time).

    Returns a complex array shaped like ``broadcast(x, *aux)``.
    """
    dps = _resolve_precision(coeffs, precision)
    arrays = np.broadcast_arrays(np.asarray(x, dtype=float),
                                 *(np.asarray(v, dtype=float) for v in aux))
    xb, auxb = arrays[0], arrays[1:]
    if dps is None:
        expand = (slice(None),) + (None,) * xb.ndim
        lam = coeffs.frequencies[expand]
        terms = coeffs.values[expand] * np.exp(1j * lam * xb[None])
        if factor is not None:
            terms = terms * factor(lam, *(v[None] for v in auxb), xp=np)
        out = np.sum(terms, axis=0)
    else:
        out = np.empty(xb.shape, dtype=complex)
        with mpmath.mp.workdps(dps):
            cvals = coeffs.mp_values()
            lams = coeffs.mp_frequencies()
            for idx in np.ndindex(xb.shape):
                xv = mpmath.mpf(float(xb[idx]))
                extra = [mpmath.mpf(float(v[idx])) for v in auxb]
                terms = []
                for c, lam in zip(cvals, lams):
                    term = c * mpmath.expj(lam * xv)
                    if factor is not None:
                        term *= factor(lam, *extra, xp=mpmath.mp)
                    terms.append(term)
                out[idx] = complex(mpmath.fsum(terms))
    return out if out.ndim else complex(out)


def eval_fn_sum(params: SuperoscillationParams, x, precision="auto"):
    """F_n(x, a) as the literal coefficient-weighted sum of exponentials."""
    return mode_sum(coefficients(params), x, precision=precision)


def _derivative_factor(lam, xp):
    return 1j * lam if xp is np else mpmath.mpc(0, 1) * lam


def eval_fn_derivative(params: SuperoscillationParams, x, precision="auto"):
    """dF_n/dx as ``sum_j C_j i lam_j exp(i lam_j x)``."""
    return mode_sum(coefficients(params), x, _derivative_factor, precision=precision)


def eval_fn_product(params: SuperoscillationParams, x):
    """F_n(x, a) in the resummed form ``(cos(x/n) + i a sin(x/n))**n``."""
    x = np.asarray(x, dtype=float)
    n = params.n
    base = np.cos(x / n) + 1j * params.a * np.sin(x / n)
    out = base ** n
    return out if out.ndim else complex(out)


def eval_fn_product_derivative(params: SuperoscillationParams, x):
    """dF_n/dx from the product form: ``base**(n-1) * (i a cos(x/n) - sin(x/n))``."""
    x = np.asarray(x, dtype=float)
    n = params.n
    c, s = np.cos(x / n), np.sin(x / n)
    out = (c + 1j * params.a * s) ** (n - 1) * (1j * params.a * c - s)
    return out if out.ndim else complex(out)


def supershift(coeffs: CoefficientSet, phi, precision="auto") -> complex:
    """``sum_j C_j(n, a) phi(1 - 2j/n)``.

    ``phi`` is called once per frequency. When extended precision engages
    (see ``mode_sum``) it receives mpmath numbers and must return values
    mpmath can multiply; pass ``precision="double"`` to force floats.
    """
    dps = _resolve_precision(coeffs, precision)
    if dps is None:
        vals = [c * phi(float(lam)) for c, lam in zip(coeffs.values, coeffs.frequencies)]
        return complex(math.fsum(complex(v).real for v in vals)
                       + 1j * math.fsum(complex(v).imag for v in vals))
    with mpmath.mp.workdps(dps):
        terms = [c * phi(lam) for c, lam in zip(coeffs.mp_values(), coeffs.mp_frequencies())]
        return complex(mpmath.fsum(terms))
