"""
Hypersurface pencils through a curve and the isoasymptotic test.

A pencil is

    P(s, t, q) = r(s) + u T(s) + v N(s) + w B1(s) + x B2(s)

with marching-scale functions u, v, w, x of (s, t, q). The curve is an
isoasymptotic of P when

* u = v = w = x = 0 at (s, t0, q0) for every s (isoparametric), and
* phi2 = 0 and phi3^2 + phi4^2 != 0 at (s, t0, q0) for every s,

where on the curve the normal decomposes as
``n = phi1 T - phi2 N + phi3 B1 - phi4 B2``.
"""

import math
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from . import exprlang
from .curve import DEFAULT_SAMPLES, derivatives, sample_interval
from .frenet import frenet_apparatus
from .vec4 import EPS_DEGENERATE, det3, dot, norm, ternary_cross

DEFAULT_TOL = 1e-8
DEFAULT_TOL_NONDEG = 1e-10

SCALES = ("u", "v", "w", "x")


class FamilyError(ValueError):
    pass


class SingularPoint(ArithmeticError):
    """The three parameter partials of P are linearly dependent; the normal vanishes."""


@dataclass(frozen=True)
class MarchingScale:
    u: exprlang.Expr
    v: exprlang.Expr
    w: exprlang.Expr
    x: exprlang.Expr
    t0: float
    q0: float
    t_box: tuple
    q_box: tuple

    def __post_init__(self):
        for name in SCALES:
            e = getattr(self, name)
            if isinstance(e, str):
                object.__setattr__(self, name, exprlang.parse(e))
        t_box = tuple(float(v) for v in self.t_box)
        q_box = tuple(float(v) for v in self.q_box)
        object.__setattr__(self, "t_box", t_box)
        object.__setattr__(self, "q_box", q_box)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "q0", float(self.q0))
        if not t_box[0] <= self.t0 <= t_box[1]:
            raise FamilyError(f"t0 = {self.t0} outside t box {list(t_box)}")
        if not q_box[0] <= self.q0 <= q_box[1]:
            raise FamilyError(f"q0 = {self.q0} outside q box {list(q_box)}")

    @property
    def exprs(self):
        return (self.u, self.v, self.w, self.x)

    @cached_property
    def partials(self):
        """``partials[var][name]``: symbolic partial of scale ``name`` by ``var``."""
        return {var: {name: exprlang.differentiate(getattr(self, name), var) for name in SCALES}
                for var in exprlang.VARIABLES}


@dataclass(frozen=True)
class FamilySpec:
    curve: object
    ms: MarchingScale

    @property
    def boxes(self):
        return {"s": self.curve.interval, "t": self.ms.t_box, "q": self.ms.q_box}


def _broadcast(s, t, q):
    if np.ndim(s) == np.ndim(t) == np.ndim(q) == 0:
        return float(s), float(t), float(q)
    return np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (s, t, q)))


def _col(a):
    return np.asarray(a, dtype=float)[..., None]


def _combine(frame, cT, cN, cB1, cB2):
    return _col(cT) * frame.T + _col(cN) * frame.N + _col(cB1) * frame.B1 + _col(cB2) * frame.B2


def eval_surface(f, s, t, q):
    """P(s, t, q); arguments broadcast, the result has a trailing axis of 4."""
    s, t, q = _broadcast(s, t, q)
    fr = frenet_apparatus(f.curve, s)
    u, v, w, x = (exprlang.evaluate(e, s, t, q) for e in f.ms.exprs)
    return f.curve(s) + _combine(fr, u, v, w, x)


def surface_partials(f, s, t, q):
    """
    (dP/ds, dP/dt, dP/dq) from their frame expansions.

    dP/ds uses the Frenet equations to differentiate the frame, so only the
    symbolic partials of u, v, w, x and the three curvatures are needed.
    """
    s, t, q = _broadcast(s, t, q)
    fr = frenet_apparatus(f.curve, s)
    k1, k2, k3 = fr.kappa1, fr.kappa2, fr.kappa3
    u, v, w, x = (exprlang.evaluate(e, s, t, q) for e in f.ms.exprs)
    d = {var: [exprlang.evaluate(f.ms.partials[var][n], s, t, q) for n in SCALES]
         for var in exprlang.VARIABLES}
    us, vs, ws, xs = d["s"]
    Ps = _combine(fr,
                  1.0 + us - v * k1,
                  u * k1 + vs - w * k2,
                  v * k2 + ws - x * k3,
                  w * k3 + xs)
    Pt = _combine(fr, *d["t"])
    Pq = _combine(fr, *d["q"])
    return Ps, Pt, Pq


def surface_normal(f, s, t, q, eps=EPS_DEGENERATE, check=True):
    """
    Unnormalized normal dP/ds x dP/dt x dP/dq.

    With ``check`` set, a (numerically) zero normal anywhere raises
    SingularPoint; otherwise zero vectors are returned as they are.
    """
    n = ternary_cross(*surface_partials(f, s, t, q))
    if check and np.any(norm(n) <= eps):
        raise SingularPoint(f"singular parametrization: |n| = {np.min(norm(n)):.3e}")
    return n


@dataclass(frozen=True)
class PhiValues:
    phi1: object
    phi2: object
    phi3: object
    phi4: object


def phi_values(f, s):
    """
    The four determinants at (s, t0, q0).

    phi1 is the full 3x3 determinant of the (v, w, x) partials. phi2..phi4
    use the 2x2 reductions, which hold only on the curve where the s-row of
    the determinant collapses to (1, 0, 0).
    """
    ms = f.ms
    s = np.asarray(s, dtype=float) if np.ndim(s) else float(s)

    def p(var, name):
        return exprlang.evaluate(ms.partials[var][name], s, ms.t0, ms.q0)

    row = {var: {n: p(var, n) for n in SCALES} for var in exprlang.VARIABLES}
    phi1 = det3(np.stack([row["s"]["v"], row["s"]["w"], row["s"]["x"]], axis=-1),
                np.stack([row["t"]["v"], row["t"]["w"], row["t"]["x"]], axis=-1),
                np.stack([row["q"]["v"], row["q"]["w"], row["q"]["x"]], axis=-1))
    t_, q_ = row["t"], row["q"]
    phi2 = t_["w"] * q_["x"] - q_["w"] * t_["x"]
    phi3 = t_["v"] * q_["x"] - q_["v"] * t_["x"]
    phi4 = t_["v"] * q_["w"] - q_["v"] * t_["w"]
    if np.ndim(s) == 0:
        return PhiValues(float(phi1), float(phi2), float(phi3), float(phi4))
    return PhiValues(phi1, phi2, phi3, phi4)


@dataclass
class VerificationReport:
    isoparametric_pass: bool
    max_abs_uvwx_on_curve: float
    max_abs_s_partials_on_curve: float
    asymptotic_pass: bool = None
    max_abs_phi1: float = None
    max_abs_phi2: float = None
    min_phi3sq_plus_phi4sq: float = None
    max_abs_normal_dot_N: float = None
    max_abs_r2_dot_normal_over_kappa1: float = None
    singular_points: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.isoparametric_pass and self.asymptotic_pass)

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return {k: (None if isinstance(v, float) and not math.isfinite(v) else v)
                for k, v in d.items()}


def _grid_info(f, n_s, s_open):
    lo, hi = f.curve.interval
    return {"s_min": lo, "s_max": hi, "n_s": int(n_s), "s_open": [bool(x) for x in s_open],
            "t0": f.ms.t0, "q0": f.ms.q0}


def check_isoparametric(f, n_s=DEFAULT_SAMPLES, tol=DEFAULT_TOL, s_open=(False, False)):
    """Max of |u|, |v|, |w|, |x| and of their s-partials along (s, t0, q0)."""
    ms = f.ms
    s = sample_interval(f.curve.interval, n_s, s_open)
    on_curve = max(float(np.max(np.abs(exprlang.evaluate(e, s, ms.t0, ms.q0)))) for e in ms.exprs)
    s_partials = max(float(np.max(np.abs(exprlang.evaluate(ms.partials["s"][n], s, ms.t0, ms.q0))))
                     for n in SCALES)
    return VerificationReport(
        isoparametric_pass=bool(on_curve <= tol and s_partials <= tol),
        max_abs_uvwx_on_curve=on_curve,
        max_abs_s_partials_on_curve=s_partials,
        grid=_grid_info(f, n_s, s_open),
        tolerances={"tol": tol},
    )


def check_asymptotic(f, n_s=DEFAULT_SAMPLES, tol=DEFAULT_TOL, tol_nondeg=DEFAULT_TOL_NONDEG,
                     s_open=(False, False), eps=EPS_DEGENERATE):
    """
    Full isoasymptotic verdict along the curve.

    The determinant test (phi2 == 0, phi3^2 + phi4^2 > tol_nondeg at every
    grid point) decides ``asymptotic_pass``. Independently the unit normal
    from the cross product of the partials is dotted with N and with r''
    so the two routes can be compared; points where the normal vanishes are
    listed in ``singular_points`` and left out of those maxima.
    """
    report = check_isoparametric(f, n_s, tol, s_open)
    report.tolerances = {"tol": tol, "tol_nondeg": tol_nondeg, "eps_degenerate": eps}
    s = sample_interval(f.curve.interval, n_s, s_open)
    ph = phi_values(f, s)
    nondeg = ph.phi3 ** 2 + ph.phi4 ** 2
    report.max_abs_phi1 = float(np.max(np.abs(ph.phi1)))
    report.max_abs_phi2 = float(np.max(np.abs(ph.phi2)))
    report.min_phi3sq_plus_phi4sq = float(np.min(nondeg))
    report.asymptotic_pass = bool(report.max_abs_phi2 <= tol and report.min_phi3sq_plus_phi4sq > tol_nondeg)

    n = surface_normal(f, s, f.ms.t0, f.ms.q0, check=False)
    n_len = norm(n)
    ok = n_len > eps
    report.singular_points = [float(v) for v in s[~ok]]
    if np.any(ok):
        unit = n[ok] / n_len[ok][:, None]
        fr = frenet_apparatus(f.curve, s[ok])
        r2 = derivatives(f.curve, s[ok], 2)[2]
        report.max_abs_normal_dot_N = float(np.max(np.abs(dot(unit, fr.N))))
        report.max_abs_r2_dot_normal_over_kappa1 = float(np.max(np.abs(dot(r2, unit)) / fr.kappa1))
    return report
