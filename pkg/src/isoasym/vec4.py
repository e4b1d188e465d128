"""
Vector algebra in R^4.

Vectors are plain numpy arrays whose last axis has length 4, so every
function here broadcasts over leading axes: a single vector has shape
``(4,)``, a batch of n vectors has shape ``(n, 4)``.
"""

import numpy as np

EPS_DEGENERATE = 1e-12

E1 = np.array([1.0, 0.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0, 0.0])
E4 = np.array([0.0, 0.0, 0.0, 1.0])


class DegenerateVector(ValueError):
    """Raised when normalizing a vector whose length is (numerically) zero."""


def vec4(x1, x2, x3, x4):
    return np.array([x1, x2, x3, x4], dtype=float)


def dot(u, v):
    """Standard inner product, summed over the last axis."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.sum(u * v, axis=-1)


def norm(u):
    return np.sqrt(dot(u, u))


def normalize(u, eps=EPS_DEGENERATE):
    u = np.asarray(u, dtype=float)
    n = norm(u)
    if np.any(n <= eps):
        raise DegenerateVector(f"cannot normalize vector of norm {np.min(n):.3e}")
    return u / n[..., None] if u.ndim > 1 else u / n


def det3(a, b, c):
    """
    Determinant of the 3x3 matrix with rows ``a``, ``b``, ``c``.

    Cofactor expansion along the first row; broadcasts over leading axes.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    return (a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
            - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
            + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0]))


# column triples left after deleting column i from a 4-column matrix
_MINOR_COLUMNS = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))


def ternary_cross(u, v, w):
    """
    Vector product of three vectors in R^4.

    This is the formal determinant whose first row holds the basis vectors
    e1..e4 and whose remaining rows are ``u``, ``v``, ``w``, expanded along
    the basis row. Component i is ``(-1)**i`` times the 3x3 minor obtained by
    deleting column i (0-based). With this convention ``e1 x e2 x e3 = -e4``
    and ``dot(ternary_cross(u, v, w), z) == det([z, u, v, w])``.

    Each 3x3 minor is expanded along its ``w`` row using the 2x2 minors
    ``u_a v_b - u_b v_a``; those vanish exactly for ``u == v`` and flip sign
    exactly when ``u`` and ``v`` are swapped. Dependent inputs give the zero
    vector.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)

    def p(a, b):
        return u[..., a] * v[..., b] - u[..., b] * v[..., a]

    comps = []
    for i, (j, k, l) in enumerate(_MINOR_COLUMNS):
        minor = w[..., j] * p(k, l) - w[..., k] * p(j, l) + w[..., l] * p(j, k)
        comps.append(minor if i % 2 == 0 else -minor)
    return np.stack(comps, axis=-1)
