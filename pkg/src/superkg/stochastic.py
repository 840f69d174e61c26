"""The kernel r_{m,x}(t) left by the Dirac source and the covariance built on it.

``r_{m,x}(t) = (1/2pi) int exp(i x w) (1 - cos(sqrt(m^2+w^2) t)) / (m^2+w^2) dw``
equals the causal Bessel integral ``1/2 int_{|x|}^{t} J0(m sqrt(s^2-x^2)) ds``.
The causal form is the production path; the oscillatory Fourier integral is
kept as an independent cross-check.

``r`` depends on ``t`` only through ``cos(w t)``, so it is even in ``t``;
``r(s - t)`` with ``s < t`` uses that extension.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .kg_spectral import particular_dirac_space
from .special import gauss_legendre_panels


class TailBoundError(ValueError):
    """The truncated Fourier integral cannot meet the requested tolerance."""


@dataclass(frozen=True)
class CovKernelParams:
    m: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.x)):
            raise ValueError("m and x must be finite")
        if self.m < 0:
            raise ValueError(f"mass must be nonnegative, got {self.m}")


def r_kernel(params: CovKernelParams, t, **quadrature):
    """``r_{m,x}(t)`` from the causal form, extended evenly to ``t < 0``.

    ``quadrature`` (``panels_per_unit``, ``order``) is passed to the panel rule.
    """
    return particular_dirac_space(params.m, params.x, np.abs(np.asarray(t, dtype=float)),
                                  **quadrature)


def _fourier_integrand(params, t, omega):
    w = np.sqrt(params.m ** 2 + omega * omega)
    # (1 - cos(w t)) / w^2 written as 2 sin^2(w t / 2) / w^2, finite at w = 0
    half = 0.5 * w * t
    safe = np.where(w == 0, 1.0, w)
    ratio = np.where(w == 0, 0.5 * t * t, 2.0 * np.sin(half) ** 2 / safe ** 2)
    return ratio


def _panel_rule(lo, hi, params, t, order):
    scale = max(abs(t), abs(params.x), 1.0)
    panel = math.pi / (2.0 * scale)
    panels = max(1, math.ceil((hi - lo) / panel))
    return gauss_legendre_panels(lo, hi, panels, order)


def tail_bound(omega_max: float) -> float:
    """Bound on the discarded tail: the integrand is at most ``2/w^2`` past ``omega_max``."""
    return 2.0 / (math.pi * omega_max)


def r_kernel_fourier_check(params: CovKernelParams, t: float, omega_max: float = 1e4,
                           order: int = 8, tol: float = 1e-4) -> float:
    """``(1/pi) int_0^Omega cos(x w) (1 - cos(w_m t)) / (m^2 + w^2) dw``.

    Panels are at most ``pi / (2 max(|t|, |x|, 1))`` long so each resolves a
    quarter of the fastest oscillation. Raises ``TailBoundError`` when
    ``tail_bound(omega_max)`` exceeds ``tol``.
    """
    if omega_max < 10:
        raise ValueError(f"omega_max must be at least 10, got {omega_max}")
    bound = tail_bound(omega_max)
    if bound > tol:
        raise TailBoundError(f"tail bound {bound:.3g} exceeds tolerance {tol:.3g}; raise omega_max")
    rule = _panel_rule(0.0, omega_max, params, t, order)
    w = rule.nodes
    vals = np.cos(params.x * w) * _fourier_integrand(params, t, w)
    return float(rule.integrate(vals)) / math.pi


def r_kernel_fourier_full(params: CovKernelParams, t: float, omega_max: float = 1e4,
                          order: int = 8) -> complex:
    """Complex Fourier integral over ``[-Omega, Omega]``; the imaginary part should vanish."""
    rule = _panel_rule(-omega_max, omega_max, params, t, order)
    w = rule.nodes
    vals = np.exp(1j * params.x * w) * _fourier_integrand(params, t, w)
    return complex(rule.integrate(vals)) / (2.0 * math.pi)


def cov_kernel(params: CovKernelParams, s, t, **quadrature):
    """``K_{m,x}(s, t) = r(s) + conj(r(t)) - r(s - t)``; ``r`` is real so conj is dropped."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    if np.any(s < 0) or np.any(t < 0):
        raise ValueError("s and t must be nonnegative")
    r = functools.partial(r_kernel, params, **quadrature)
    out = r(s) + r(t) - r(s - t)
    return out if np.ndim(out) else float(out)


def gram_matrix(params: CovKernelParams, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    return np.asarray(cov_kernel(params, times[:, None], times[None, :]))


def gram_eigenvalues(params: CovKernelParams, times) -> np.ndarray:
    """Eigenvalues of the Gram matrix, reported without any sign claim."""
    return np.linalg.eigvalsh(gram_matrix(params, times))
