"""
Render hypersurface slices as 3D meshes.

Fixing one of (s, t, q) leaves a 2-surface in R^4; a drop-axis parallel
projection sends it to R^3, where it is tessellated into quads and written
as Wavefront OBJ. The curve r(s) rides along as a polyline.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import exprlang
from .family import eval_surface

PARAMS = ("s", "t", "q")
# fixed-point decimals; keeps absolute vertex error below 5e-10 for any magnitude
COORD_FORMAT = "{:.9f}"


@dataclass(frozen=True)
class Projection:
    """Parallel projection R^4 -> R^3 that deletes coordinate ``axis`` (1-based)."""

    axis: int

    def __post_init__(self):
        if self.axis not in (1, 2, 3, 4):
            raise ValueError(f"projection axis must be 1..4, got {self.axis}")

    @classmethod
    def parse(cls, text):
        kind, _, axis = text.partition(":")
        if kind != "drop" or not axis.strip().isdigit():
            raise ValueError(f"projection must look like 'drop:AXIS', got {text!r}")
        return cls(int(axis))

    def __call__(self, points):
        return np.delete(np.asarray(points, dtype=float), self.axis - 1, axis=-1)

    def __str__(self):
        return f"drop:{self.axis}"


@dataclass
class Mesh:
    vertices: np.ndarray
    quads: np.ndarray
    polylines: list = field(default_factory=list)
    params: tuple = ()
    param_values: np.ndarray = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.quads = np.asarray(self.quads, dtype=np.int64).reshape(-1, 4)
        if self.quads.size and (self.quads.min() < 0 or self.quads.max() >= len(self.vertices)):
            raise ValueError("quad index out of range")
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("mesh has non-finite vertices")


def grid_quads(n_a, n_b):
    """Row-major quad connectivity of an ``n_a`` by ``n_b`` vertex grid."""
    i, j = np.meshgrid(np.arange(n_a - 1), np.arange(n_b - 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    v00 = i * n_b + j
    return np.stack([v00, v00 + n_b, v00 + n_b + 1, v00 + 1], axis=-1)


def parse_fix(text):
    """``'q=0'`` -> ``('q', 0.0)``; the value may be a constant expression such as ``pi/2``."""
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or name not in PARAMS:
        raise ValueError(f"--fix must look like 's=VAL', 't=VAL' or 'q=VAL', got {text!r}")
    e = exprlang.parse(value)
    if not exprlang.is_constant(e):
        raise ValueError(f"fixed value must be constant, got {value!r}")
    return name, exprlang.evaluate(e)


def slice_surface(f, fixed, grid=(25, 25), proj=Projection(4)):
    """
    Tessellate the slice ``fixed = (name, value)`` of the pencil ``f``.

    The two free parameters are taken in (s, t, q) order and sampled
    uniformly over their closed boxes, ``grid[0]`` points for the first and
    ``grid[1]`` for the second. Vertex ``i * grid[1] + j`` belongs to sample
    i of the first parameter and sample j of the second.
    """
    name, value = fixed
    if name not in PARAMS:
        raise ValueError(f"unknown parameter {name!r}")
    n_a, n_b = (int(n) for n in grid)
    if n_a < 2 or n_b < 2:
        raise ValueError("grid dimensions must be >= 2")
    boxes = f.boxes
    lo, hi = boxes[name]
    if not lo <= value <= hi:
        raise ValueError(f"{name} = {value} outside its box [{lo}, {hi}]")

    free = [p for p in PARAMS if p != name]
    a = np.linspace(*boxes[free[0]], n_a)
    b = np.linspace(*boxes[free[1]], n_b)
    A, B = np.meshgrid(a, b, indexing="ij")
    args = {free[0]: A.ravel(), free[1]: B.ravel(), name: np.full(A.size, float(value))}
    points = eval_surface(f, args["s"], args["t"], args["q"])

    polylines = []
    if name != "s":
        s = a if free[0] == "s" else b
        polylines.append(proj(f.curve(s)))
    return Mesh(proj(points), grid_quads(n_a, n_b), polylines,
                params=tuple(free), param_values=np.stack([A.ravel(), B.ravel()], axis=-1))


def obj_text(mesh, comment=None):
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    fmt = " ".join([COORD_FORMAT] * 3)
    for v in mesh.vertices:
        lines.append("v " + fmt.format(*v))
    for quad in mesh.quads:
        lines.append("f " + " ".join(str(k + 1) for k in quad))
    offset = len(mesh.vertices)
    for poly in mesh.polylines:
        for p in poly:
            lines.append("v " + fmt.format(*p))
        idx = range(offset + 1, offset + len(poly) + 1)
        lines.append("l " + " ".join(str(k) for k in idx))
        offset += len(poly)
    return "\n".join(lines) + "\n"


def export_mesh(mesh, path, comment=None):
    """Write ``mesh`` as Wavefront OBJ; polyline vertices follow the surface vertices."""
    try:
        with open(path, "w") as fh:
            fh.write(obj_text(mesh, comment))
    except OSError as exc:
        raise OSError(f"cannot write mesh to {path}: {exc.strerror}") from exc


def export_csv(mesh, path):
    """One row per surface vertex: the two free parameters, then x, y, z."""
    header = list(mesh.params) + ["x", "y", "z"]
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for (pa, pb), v in zip(mesh.param_values, mesh.vertices):
                writer.writerow([repr(float(pa)), repr(float(pb))] + [COORD_FORMAT.format(c) for c in v])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror}") from exc


def read_obj_vertices(path):
    """Surface and polyline vertices of an OBJ file, in file order."""
    verts = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("v "):
                verts.append([float(x) for x in line.split()[1:4]])
    return np.array(verts).reshape(-1, 3)
