"""
Frenet apparatus {T, N, B1, B2; k1, k2, k3} of an arc-length curve in R^4.

    T  = r'              k1 = |r''|          N = r'' / k1
    B2 = r' x r'' x r''' / |r' x r'' x r'''|
    B1 = B2 x T x N
    k2 = (B1 . r''') / k1
    k3 = (B2 . r'''') / (k1 k2)

where ``x`` is the ternary cross product. k2 is a signed projection and may
be negative; no positivity is imposed.
"""

from dataclasses import dataclass

import numpy as np

from .curve import derivatives
from .vec4 import EPS_DEGENERATE, dot, norm, ternary_cross


class DegenerateFrame(ValueError):
    """r', r'', r''' fail to span a 3-space, so B2 (and everything after it) is undefined."""


class DegenerateTorsion(ValueError):
    pass


@dataclass(frozen=True)
class FrenetData:
    s: object
    T: np.ndarray
    N: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    kappa1: object
    kappa2: object
    kappa3: object

    def frame(self):
        """The four frame vectors stacked along a new second-to-last axis."""
        return np.stack([self.T, self.N, self.B1, self.B2], axis=-2)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def frenet_apparatus(c, s, eps=EPS_DEGENERATE):
    """
    Frenet frame and curvatures of ``c`` at ``s`` (scalar or array).

    Raises DegenerateFrame where the first three derivatives are dependent
    and DegenerateTorsion where k2 vanishes but B2 . r'''' does not.
    """
    _, d1, d2, d3, d4 = derivatives(c, s, 4)
    k1 = norm(d2)
    if np.any(k1 <= eps):
        raise DegenerateFrame(f"r'' vanishes (min |r''| = {np.min(k1):.3e})")
    cross = ternary_cross(d1, d2, d3)
    cross_len = norm(cross)
    if np.any(cross_len <= eps):
        bad = np.atleast_1d(s)[np.atleast_1d(cross_len) <= eps] if np.ndim(s) else s
        raise DegenerateFrame(f"r', r'', r''' are linearly dependent at s = {bad}")

    T = d1
    N = d2 / k1[..., None]
    B2 = cross / cross_len[..., None]
    B1 = ternary_cross(B2, T, N)
    k2 = dot(B1, d3) / k1
    b2_d4 = dot(B2, d4)

    k2_zero = np.abs(k2) <= eps
    if np.any(k2_zero & (np.abs(b2_d4) > eps)):
        raise DegenerateTorsion("k2 vanishes where B2 . r'''' does not; k3 is undefined")
    with np.errstate(divide="ignore", invalid="ignore"):
        k3 = np.where(k2_zero, 0.0, b2_d4 / (k1 * k2))

    return FrenetData(_scalar(s), T, N, B1, B2, _scalar(k1), _scalar(k2), _scalar(k3))


@dataclass(frozen=True)
class OdeResiduals:
    s: float
    h: float
    tangent: float
    normal: float
    binormal1: float
    binormal2: float

    @property
    def max(self):
        return max(self.tangent, self.normal, self.binormal1, self.binormal2)


def verify_frenet_odes(c, s, h=1e-4, eps=EPS_DEGENERATE):
    """
    Residual norms of the four Frenet equations at ``s``.

    Frame derivatives are central differences with step ``h``; the residuals
    are T' - k1 N, N' + k1 T - k2 B1, B1' + k2 N - k3 B2 and B2' + k3 B1.
    """
    lo, hi = c.interval
    if not (lo <= s - h and s + h <= hi):
        raise ValueError(f"s +- h = [{s - h}, {s + h}] leaves the curve interval [{lo}, {hi}]")
    fr = frenet_apparatus(c, np.array([s - h, s, s + h]), eps=eps)
    frames = fr.frame()
    dT, dN, dB1, dB2 = (frames[2] - frames[0]) / (2.0 * h)
    T, N, B1, B2 = frames[1]
    k1, k2, k3 = fr.kappa1[1], fr.kappa2[1], fr.kappa3[1]
    return OdeResiduals(
        float(s), float(h),
        float(norm(dT - k1 * N)),
        float(norm(dN + k1 * T - k2 * B1)),
        float(norm(dB1 + k2 * N - k3 * B2)),
        float(norm(dB2 + k3 * B1)),
    )
