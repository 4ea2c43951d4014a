"""Dirichlet and Ford domains of Kleinian groups via quaternion Moebius action."""

from ._config import get_tol, reset_tol, set_tol
from .bianchi import class_number, enumerate_bianchi, f_infty, ideal_points, ring_ctx
from .classify import IsometryClass, classify_geometric, classify_trace, fixed_points, wall_relation
from .domains import (
    GroupSpec,
    bianchi_domain,
    build_domain,
    df_check,
    enumerate_group,
    faces,
    membership,
    reduce_point,
)
from .estimators import BianchiDomain, DirichletDomain, IsometryClassifier
from .exceptions import HypWallsError
from .fixtures import figure_eight, whitehead
from .io import parse_group, parse_input, parse_matrix
from .models import BoundaryPoint, HalfSpacePoint, MoebiusMatrix, act_half_space, psi
from .quat import Quaternion
from .render import render_slice
from .walls import bisector_ball, bisector_half_space, isometric_sphere_half_space, rho_gamma

__version__ = "0.1.0"
