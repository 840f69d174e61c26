"""General initial value problem for the 1-D Klein-Gordon equation by quadrature.

Solves ``u_tt - u_xx + m^2 u = L`` with ``u(x, 0) = f``, ``u_t(x, 0) = g`` through
the Bessel-kernel Green's function representation::

    u = (f(x-t) + f(x+t)) / 2
        + 1/2 int_{x-t}^{x+t} J0(m r) g(xi) dxi
        - (m t / 2) int_{x-t}^{x+t} J1(m r) / r f(xi) dxi
        + 1/2 int_0^t int_{|x-xi| < t-tau} L(xi, tau) J0(m r') dxi dtau

with ``r = sqrt(t^2 - (x - xi)^2)``. All integrands are entire in ``r^2``,
so composite Gauss-Legendre converges spectrally. Each evaluation is
repeated with doubled panel count and the pair must agree.

Callbacks receive numpy arrays and must be vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .special import (QuadratureConvergenceError, bessel_j0, bessel_j1_over_x,
                      gauss_legendre_panels)

PANELS_PER_UNIT = 16
PANEL_ORDER = 10

Source = Union[str, Callable, None]


@dataclass(frozen=True)
class IvpSpec:
    """Mass, initial data, source and quadrature settings.

    ``source`` is ``None``/``"zero"``, ``"dirac_space"`` (``delta(x)``),
    ``"dirac_spacetime"`` (``delta(x) delta(t)``) or a vectorized callable
    ``L(xi, tau)``. Dirac sources are collapsed analytically.
    """

    m: float
    f: Callable
    g: Callable
    source: Source = None
    panels_per_unit: int = PANELS_PER_UNIT
    order: int = PANEL_ORDER
    tol: float = 1e-9

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"mass must be nonnegative, got {self.m}")
        if isinstance(self.source, str) and self.source not in ("zero", "dirac_space",
                                                                "dirac_spacetime"):
            raise ValueError(f"unknown symbolic source {self.source!r}")


def _panels(length, per_unit, refine):
    return refine * max(1, math.ceil(per_unit * length))


def _initial_data_terms(spec: IvpSpec, x, t, refine):
    m = spec.m
    rule = gauss_legendre_panels(-t, t, _panels(2 * t, spec.panels_per_unit, refine), spec.order)
    s = rule.nodes
    r = np.sqrt((t - s) * (t + s))
    xi = x + s
    total = 0.0 + 0.0j
    g_vals = np.asarray(spec.g(xi), dtype=complex)
    total += 0.5 * rule.integrate(bessel_j0(m * r) * g_vals)
    if m != 0:
        f_vals = np.asarray(spec.f(xi), dtype=complex)
        # J1(m r) / r = m * (J1(u) / u) with u = m r
        total -= 0.5 * m * m * t * rule.integrate(bessel_j1_over_x(m * r) * f_vals)
    return total


def green_source_term(m, source, x, t, panels_per_unit=PANELS_PER_UNIT, order=PANEL_ORDER,
                      refine=1):
    """Source contribution for a symbolic Dirac source.

    ``"dirac_spacetime"`` collapses both integrals: ``1/2 H(t-|x|) J0(m sqrt(t^2-x^2))``
    with ``H(0) = 1``. ``"dirac_space"`` collapses the space integral, leaving
    ``1/2 int_0^{t-|x|} J0(m sqrt((t-tau)^2 - x^2)) dtau``.
    """
    ax = abs(x)
    if source == "dirac_spacetime":
        if t - ax < 0:
            return 0.0
        return 0.5 * float(bessel_j0(m * math.sqrt((t - ax) * (t + ax))))
    if source == "dirac_space":
        reach = t - ax
        if reach <= 0:
            return 0.0
        rule = gauss_legendre_panels(0.0, reach, _panels(reach, panels_per_unit, refine), order)
        lag = t - rule.nodes
        r = np.sqrt((lag - ax) * (lag + ax))
        return 0.5 * float(rule.integrate(bessel_j0(m * r)))
    raise ValueError(f"unknown symbolic source {source!r}")


def _general_source_term(spec: IvpSpec, x, t, refine):
    outer = gauss_legendre_panels(0.0, t, _panels(t, spec.panels_per_unit, refine), spec.order)
    base = gauss_legendre_panels(-1.0, 1.0, _panels(2 * t, spec.panels_per_unit, refine),
                                 spec.order)
    total = 0.0 + 0.0j
    for tau, w_tau in zip(outer.nodes, outer.weights):
        reach = t - tau
        s = reach * base.nodes
        r = np.sqrt((reach - s) * (reach + s))
        vals = np.asarray(spec.source(x + s, np.full_like(s, tau)), dtype=complex)
        total += w_tau * reach * np.dot(base.weights, vals * bessel_j0(spec.m * r))
    return 0.5 * total


def _solve_once(spec: IvpSpec, x, t, refine):
    value = 0.5 * (complex(spec.f(np.array([x - t]))[0]) + complex(spec.f(np.array([x + t]))[0]))
    if t > 0:
        value += _initial_data_terms(spec, x, t, refine)
    src = spec.source
    if src is None or src == "zero":
        return value
    if isinstance(src, str):
        return value + green_source_term(spec.m, src, x, t, spec.panels_per_unit, spec.order,
                                         refine)
    if t > 0:
        value += _general_source_term(spec, x, t, refine)
    return value


def green_solve(spec: IvpSpec, x: float, t: float) -> complex:
    """Solution at one point ``(x, t)``, checked by a panel-doubling refinement pair."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    x, t = float(x), float(t)
    coarse = _solve_once(spec, x, t, 1)
    fine = _solve_once(spec, x, t, 2)
    tol = spec.tol * max(1.0, abs(fine))
    if abs(fine - coarse) > tol:
        raise QuadratureConvergenceError(coarse, fine, tol)
    return fine


def green_solve_grid(spec: IvpSpec, x, t) -> np.ndarray:
    """``green_solve`` over broadcast arrays of points."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    for idx in np.ndindex(x.shape):
        out[idx] = green_solve(spec, x[idx], t[idx])
    return out
