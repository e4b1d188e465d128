"""Hypersurface families in R^4 sharing a prescribed curve as a common isoasymptotic."""

from .curve import CurveSpec, derivatives, validate
from .exprlang import differentiate, evaluate, parse
from .family import (
    FamilySpec,
    MarchingScale,
    check_asymptotic,
    check_isoparametric,
    eval_surface,
    phi_values,
    surface_normal,
    surface_partials,
)
from .frenet import FrenetData, frenet_apparatus, verify_frenet_odes
from .vec4 import dot, norm, normalize, ternary_cross

__version__ = "0.1.0"
