"""Closed-form Klein-Gordon evolutions of superoscillating initial data.

Every solution here is a weighted sum over the frequency grid
``lam_j = 1 - 2j/n`` of plane waves ``exp(i lam_j x)`` times a time factor
built from the dispersion frequency ``w = sqrt(m**2 + lam**2)``. Sourced
problems add a particular term that does not depend on ``n``.

Problem one starts from ``u = F_n(., a)``, ``u_t = F_n'(., a)``; problem two
from ``u = F_n(., a)``, ``u_t = F_n(., b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .special import bessel_j0, gauss_legendre_panels
from .superosc import SuperoscillationParams, coefficients, mode_sum

SOURCES = ("zero", "dirac_space", "dirac_spacetime")
INITIAL_CASES = ("problem1", "problem2")

PANELS_PER_UNIT = 16
PANEL_ORDER = 10
_SMALL_WT = 1e-4


@dataclass(frozen=True)
class KgProblem:
    """Mass, initial-data case and source term of one evolution problem."""

    m: float
    a: float
    initial: str = "problem1"
    source: str = "zero"
    b: float | None = None

    def __post_init__(self):
        if self.m < 0 or not math.isfinite(self.m):
            raise ValueError(f"mass must be finite and nonnegative, got {self.m}")
        if self.initial not in INITIAL_CASES:
            raise ValueError(f"initial case must be one of {INITIAL_CASES}, got {self.initial!r}")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.initial == "problem2" and self.b is None:
            raise ValueError("problem2 needs the velocity parameter b")
        if self.initial == "problem1" and self.b is not None:
            raise ValueError("b only applies to problem2")
        if self.initial == "problem2" and self.source == "dirac_spacetime":
            raise ValueError("the space-time Dirac source is only solved for problem1")


@dataclass
class SolutionField:
    """Samples of a solution on a rectangular grid; ``values[i_t, i_x]``."""

    x_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray
    problem: KgProblem
    n: int | float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.t_grid.size, self.x_grid.size):
            raise ValueError("values must have shape (len(t_grid), len(x_grid))")


# ---------------------------------------------------------------------------
# time factors


def _dispersion(omega, m, xp):
    return xp.sqrt(m * m + omega * omega)


def _ratio(omega, w, xp):
    if xp is np:
        return np.divide(omega, w, out=np.zeros(np.broadcast(omega, w).shape), where=w != 0)
    return omega / w if w != 0 else mpmath.mpf(0)


def theta(omega, m, t, xp=np):
    """``cos(w t) + i (omega / w) sin(w t)`` with ``w = sqrt(m**2 + omega**2)``.

    At ``m = omega = 0`` the ratio is taken as 0, giving the value 1.
    """
    w = _dispersion(omega, m, xp)
    if xp is np:
        out = np.cos(w * t) + 1j * _ratio(omega, w, xp) * np.sin(w * t)
        return out if np.ndim(out) else complex(out)
    return xp.cos(w * t) + mpmath.mpc(0, 1) * _ratio(omega, w, xp) * xp.sin(w * t)


def sin_over_w(w, t, xp=np):
    """``sin(w t) / w``, continued by its series ``t (1 - (w t)**2 / 6)`` near ``w t = 0``."""
    wt = w * t
    if xp is np:
        safe = np.where(np.abs(wt) < _SMALL_WT, 1.0, w)
        return np.where(np.abs(wt) < _SMALL_WT, t * (1.0 - wt * wt / 6.0), np.sin(wt) / safe)
    if abs(wt) < _SMALL_WT:
        return t * (1 - wt * wt / 6)
    return xp.sin(wt) / w


def _theta_factor(m):
    def factor(lam, t, xp):
        return theta(lam, m, t, xp)
    return factor


def _cos_factor(m):
    def factor(lam, t, xp):
        return xp.cos(_dispersion(lam, m, xp) * t)
    return factor


def _sin_factor(m):
    def factor(lam, t, xp):
        return sin_over_w(_dispersion(lam, m, xp), t, xp)
    return factor


# ---------------------------------------------------------------------------
# homogeneous evolutions


def evolve_homogeneous(n, a, m, x, t, precision="auto"):
    """u_n(x, t) for problem one without source."""
    coeffs = coefficients(SuperoscillationParams(n, a))
    return mode_sum(coeffs, x, _theta_factor(m), aux=(t,), precision=precision)


def evolve_homogeneous_limit(a, m, x, t):
    """The n -> infinity limit ``exp(i a x) theta_{a,m}(t)``."""
    x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
    out = np.exp(1j * a * x) * theta(a, m, t)
    return out if np.ndim(out) else complex(out)


def evolve_operator_truncated(n, a, m, x, t, order):
    """u_n from the two infinite-order operators cut after ``order`` terms each.

    ``D_x`` acts on ``exp(i lam x)`` as multiplication by ``i lam``, so each
    operator reduces to a partial Taylor sum in ``y**2 = (m**2 + lam**2) t**2``:
    ``sum_k (-1)**k y**(2k) / (2k)!`` and
    ``i lam t sum_k (-1)**k y**(2k) / (2k+1)!`` for ``k < order``.
    """
    if order < 1:
        raise ValueError(f"order must be positive, got {order}")

    def factor(lam, t, xp):
        y2 = (m * m + lam * lam) * t * t
        cos_part = np.zeros(np.broadcast(lam, t).shape)
        sin_part = np.zeros_like(cos_part)
        power = np.ones_like(cos_part)
        for k in range(order):
            cos_part = cos_part + power / math.factorial(2 * k)
            sin_part = sin_part + power / math.factorial(2 * k + 1)
            power = -power * y2
        return cos_part + 1j * lam * t * sin_part

    coeffs = coefficients(SuperoscillationParams(n, a))
    return mode_sum(coeffs, x, factor, aux=(t,), precision="double")


def evolve_problem2(n, a, b, m, x, t, precision="auto"):
    """Problem two: position data F_n(., a), velocity data F_n(., b)."""
    ca = coefficients(SuperoscillationParams(n, a))
    cb = coefficients(SuperoscillationParams(n, b))
    return (mode_sum(ca, x, _cos_factor(m), aux=(t,), precision=precision)
            + mode_sum(cb, x, _sin_factor(m), aux=(t,), precision=precision))


def evolve_problem2_limit(a, b, m, x, t):
    """``exp(i a x) cos(w_a t) + exp(i b x) sin(w_b t) / w_b``."""
    x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
    wa, wb = math.hypot(m, a), math.hypot(m, b)
    out = np.exp(1j * a * x) * np.cos(wa * t) + np.exp(1j * b * x) * sin_over_w(wb, t)
    return out if np.ndim(out) else complex(out)


# ---------------------------------------------------------------------------
# particular terms


def _dirac_space_point(m, x, t, panels_per_unit, order):
    ax = abs(x)
    if t <= ax:
        return 0.0
    if m == 0:
        return 0.5 * (t - ax)
    length = t - ax
    panels = max(1, math.ceil(panels_per_unit * length))
    rule = gauss_legendre_panels(0.0, length, panels, order)
    s = ax + rule.nodes
    # s**2 - x**2 factored to avoid cancellation near the lower limit
    arg = m * np.sqrt(rule.nodes * (s + ax))
    return 0.5 * float(rule.integrate(bessel_j0(arg)))


def particular_dirac_space(m, x, t, panels_per_unit=PANELS_PER_UNIT, order=PANEL_ORDER):
    """Response to the source ``delta(x)`` switched on at ``t = 0``.

    Evaluated in the causal form ``1/2 int_{|x|}^{t} J0(m sqrt(s**2 - x**2)) ds``
    for ``t > |x|`` and 0 otherwise (negative ``t`` included). The result is real.
    """
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    out = np.zeros(x.shape)
    for idx in np.ndindex(x.shape):
        out[idx] = _dirac_space_point(m, float(x[idx]), float(t[idx]), panels_per_unit, order)
    return out if out.ndim else float(out)


def particular_dirac_spacetime(m, x, t):
    """``1/2 H(t - |x|) J0(m sqrt(t**2 - x**2))`` with ``H(0) = 1``."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    inside = t - np.abs(x) >= 0
    gap = np.where(inside, (t - np.abs(x)) * (t + np.abs(x)), 0.0)
    out = np.where(inside, 0.5 * bessel_j0(m * np.sqrt(gap)), 0.0)
    return out if out.ndim else float(out)


def evolve_dirac_space(n, a, m, x, t, precision="auto"):
    """Problem one with the source ``delta(x)``: homogeneous part plus particular term."""
    return evolve_homogeneous(n, a, m, x, t, precision) + particular_dirac_space(m, x, t)


def evolve_dirac_space_limit(a, m, x, t):
    return evolve_homogeneous_limit(a, m, x, t) + particular_dirac_space(m, x, t)


def evolve_dirac_spacetime(n, a, m, x, t, precision="auto"):
    """Problem one with the source ``delta(x) delta(t)``."""
    return evolve_homogeneous(n, a, m, x, t, precision) + particular_dirac_spacetime(m, x, t)


def evolve_problem2_dirac_space(n, a, b, m, x, t, precision="auto"):
    """Problem two with the source ``delta(x)``."""
    return evolve_problem2(n, a, b, m, x, t, precision) + particular_dirac_space(m, x, t)


# ---------------------------------------------------------------------------
# dispatch


def evaluate(problem: KgProblem, n, x, t, precision="auto"):
    """Evaluate the closed form matching ``problem`` at points ``(x, t)``."""
    m, a = problem.m, problem.a
    if problem.initial == "problem1":
        if problem.source == "zero":
            return evolve_homogeneous(n, a, m, x, t, precision)
        if problem.source == "dirac_space":
            return evolve_dirac_space(n, a, m, x, t, precision)
        return evolve_dirac_spacetime(n, a, m, x, t, precision)
    if problem.source == "zero":
        return evolve_problem2(n, a, problem.b, m, x, t, precision)
    return evolve_problem2_dirac_space(n, a, problem.b, m, x, t, precision)


def evaluate_limit(problem: KgProblem, x, t):
    """The n -> infinity limit of ``evaluate`` (space-time source excluded)."""
    m, a = problem.m, problem.a
    if problem.initial == "problem1":
        if problem.source == "zero":
            return evolve_homogeneous_limit(a, m, x, t)
        if problem.source == "dirac_space":
            return evolve_dirac_space_limit(a, m, x, t)
        return evolve_homogeneous_limit(a, m, x, t) + particular_dirac_spacetime(m, x, t)
    out = evolve_problem2_limit(a, problem.b, m, x, t)
    if problem.source == "dirac_space":
        out = out + particular_dirac_space(m, x, t)
    return out


def solve_on_grid(problem: KgProblem, n, x_grid, t_grid, precision="auto") -> SolutionField:
    """Sample the solution on the tensor grid ``t_grid x x_grid``."""
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    xx, tt = np.meshgrid(x_grid, t_grid)
    values = np.asarray(evaluate(problem, n, xx, tt, precision), dtype=complex)
    return SolutionField(x_grid, t_grid, values, problem, n)
