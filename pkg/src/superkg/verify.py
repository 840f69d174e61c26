"""Verification harness: PDE residuals, convergence ladders, oracle comparisons.

Residuals use second-order central differences in both variables with a
``(h, h/2)`` refinement pair. A smooth field should see the residual drop
by about 4; anything under ``MIN_REFINEMENT_RATIO`` is flagged unless the
residual already sits at the roundoff floor ``~ eps * |u| / h^2``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

MIN_REFINEMENT_RATIO = 3.5
EXCLUSION_RADIUS = 3.0  # in units of h
_EPS = np.finfo(float).eps


@dataclass
class ResidualReport:
    probes: list
    h: float
    max_abs_residual: float
    max_abs_residual_half: float
    refinement_ratio: float
    excluded: list = field(default_factory=list)
    exclusion_sets: tuple = ()
    at_noise_floor: bool = False
    flagged: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass
class ConvergenceLadder:
    n_values: list
    errors: list
    monotone: bool
    compact_set: list

    def to_dict(self):
        return asdict(self)


@dataclass
class OracleReport:
    max_abs_diff: float
    tol: float
    passed: bool
    worst_probe: object = None

    def to_dict(self):
        return asdict(self)


def _excluded(x, t, h, exclusions):
    r = EXCLUSION_RADIUS * h
    if "source" in exclusions and abs(x) < r:
        return True
    if "light_cone" in exclusions and abs(abs(x) - t) < r:
        return True
    return False


def _residual(field_fn, source_fn, m, x, t, h):
    u = field_fn
    centre = np.asarray(u(x, t))
    utt = (np.asarray(u(x, t + h)) - 2 * centre + np.asarray(u(x, t - h))) / h ** 2
    uxx = (np.asarray(u(x + h, t)) - 2 * centre + np.asarray(u(x - h, t))) / h ** 2
    src = 0.0 if source_fn is None else np.asarray(source_fn(x, t))
    return utt - uxx + m * m * centre - src, centre


def residual_check(field_fn, source_fn, m, probes, h=1e-3, exclusions=()) -> ResidualReport:
    """Residual of ``(d_tt - d_xx + m^2) field - source`` at the probes.

    ``field_fn(x, t)`` and ``source_fn(x, t)`` take numpy arrays. ``exclusions``
    may contain ``"source"`` (drop ``|x| < 3h``) and ``"light_cone"``
    (drop ``||x| - t| < 3h``). Probes need ``t >= 2h``.
    """
    probes = [(float(x), float(t)) for x, t in probes]
    kept, dropped = [], []
    for x, t in probes:
        if t < 2 * h:
            raise ValueError(f"probe t={t} is too close to t=0 for step {h}")
        (dropped if _excluded(x, t, h, exclusions) else kept).append((x, t))
    if not kept:
        raise ValueError("every probe fell inside an exclusion zone")
    x = np.array([p[0] for p in kept])
    t = np.array([p[1] for p in kept])
    res_h, centre = _residual(field_fn, source_fn, m, x, t, h)
    res_h2, _ = _residual(field_fn, source_fn, m, x, t, h / 2)
    r1, r2 = float(np.max(np.abs(res_h))), float(np.max(np.abs(res_h2)))
    ratio = r1 / r2 if r2 > 0 else float("inf")
    floor = 100 * _EPS * max(1.0, float(np.max(np.abs(centre)))) / (h / 2) ** 2
    at_floor = r1 < floor
    return ResidualReport(
        probes=kept, h=h, max_abs_residual=r1, max_abs_residual_half=r2,
        refinement_ratio=ratio, excluded=dropped, exclusion_sets=tuple(exclusions),
        at_noise_floor=at_floor, flagged=(not at_floor) and ratio < MIN_REFINEMENT_RATIO)


def ladder(fn_of_n, limit, n_values, compact_set) -> ConvergenceLadder:
    """Sup-norm distance to ``limit`` over ``compact_set`` for each ``n``."""
    n_values = list(n_values)
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    pts = np.asarray(compact_set, dtype=float)
    target = np.asarray(limit(pts))
    errors = [float(np.max(np.abs(np.asarray(fn_of_n(n)(pts)) - target))) for n in n_values]
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    return ConvergenceLadder(n_values, errors, monotone, pts.tolist())


def oracle_compare(lhs, rhs, probes, tol) -> OracleReport:
    """Max absolute difference of two evaluators over ``probes``; passes iff ``<= tol``."""
    worst, worst_probe = 0.0, None
    for p in probes:
        d = float(np.max(np.abs(np.asarray(lhs(p)) - np.asarray(rhs(p)))))
        if d > worst or worst_probe is None:
            worst, worst_probe = d, p
    if isinstance(worst_probe, np.ndarray):
        worst_probe = worst_probe.tolist()
    return OracleReport(worst, tol, worst <= tol, worst_probe)
