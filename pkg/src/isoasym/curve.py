"""Arc-length parametrized curves r(s) in R^4 given by closed-form components."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exprlang
from .vec4 import EPS_DEGENERATE, norm

MAX_ORDER = 4
DEFAULT_SAMPLES = 257
DEFAULT_TOL_UNIT = 1e-8


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """Four component expressions in ``s`` on the interval ``[L1, L2]``."""

    components: tuple
    interval: tuple

    def __post_init__(self):
        comps = tuple(exprlang.parse(c) if isinstance(c, str) else c for c in self.components)
        if len(comps) != 4:
            raise CurveError(f"a curve in R^4 needs 4 components, got {len(comps)}")
        for i, c in enumerate(comps):
            extra = exprlang.free_vars(c) - {"s"}
            if extra:
                raise CurveError(f"component {i} depends on {sorted(extra)}; only s is allowed")
        lo, hi = (float(v) for v in self.interval)
        if not lo < hi:
            raise CurveError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "interval", (lo, hi))

    @cached_property
    def derivative_exprs(self):
        """``derivative_exprs[k][i]`` is the k-th derivative of component i."""
        table = [self.components]
        for _ in range(MAX_ORDER):
            table.append(tuple(exprlang.differentiate(c, "s") for c in table[-1]))
        return tuple(table)

    def __call__(self, s):
        return derivatives(self, s, 0)[0]

    def grid(self, n, open_ends=(False, False)):
        return sample_interval(self.interval, n, open_ends)


def sample_interval(interval, n, open_ends=(False, False)):
    """
    ``n`` uniform samples of ``interval``.

    A closed end is included; an open end is excluded by sampling
    ``n + 1`` (or ``n + 2``) uniform points and dropping that endpoint.
    """
    if n < 2:
        raise ValueError("need at least 2 samples")
    lo, hi = interval
    left, right = (bool(x) for x in open_ends)
    pts = np.linspace(lo, hi, n + left + right)
    return pts[int(left):len(pts) - int(right)]


def _eval_vec(exprs, s):
    return np.stack([exprlang.evaluate(c, s=s) for c in exprs], axis=-1)


def derivatives(c, s, order=MAX_ORDER):
    """
    ``[r(s), r'(s), ..., r^(order)(s)]`` from symbolic differentiation.

    ``s`` may be a scalar (entries of shape ``(4,)``) or an array (entries of
    shape ``s.shape + (4,)``).
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}")
    return [_eval_vec(c.derivative_exprs[k], s) for k in range(order + 1)]


@dataclass
class ValidationReport:
    passed: bool
    max_speed_deviation: float
    min_second_derivative_norm: float
    n_samples: int
    tol_unit: float
    problems: list = field(default_factory=list)


def validate(c, n_samples=DEFAULT_SAMPLES, tol_unit=DEFAULT_TOL_UNIT, eps=EPS_DEGENERATE):
    """Check unit speed and a nonvanishing second derivative on a uniform grid."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    s = c.grid(n_samples)
    problems = []
    try:
        _, d1, d2 = derivatives(c, s, 2)
    except exprlang.DomainError as exc:
        return ValidationReport(False, float("nan"), float("nan"), n_samples, tol_unit,
                                [f"evaluation failed: {exc}"])
    dev = float(np.max(np.abs(norm(d1) - 1.0)))
    min_d2 = float(np.min(norm(d2)))
    if not dev <= tol_unit:
        problems.append(f"not unit speed: max | |r'| - 1 | = {dev:.3e} > {tol_unit:.1e}")
    if not min_d2 > eps:
        problems.append(f"r'' vanishes: min |r''| = {min_d2:.3e}")
    return ValidationReport(not problems, dev, min_d2, n_samples, tol_unit, problems)
