"""Generalized Bishop frames (types B, C, D, F) on curves in E^4."""
from .construct import (bishop_curvatures, frenet_type_f, hyperplane_frame,
                        rmf_agreement, rmf_bishop, rmf_double_reflection, rotate_bishop,
                        type_d_construct)
from .convert import (find_avoided_direction, fd_transform, sign_branch_table,
                      type_c_from_bishop, type_c_pipeline, type_d_from_f)
from .curves import (CurvePath, CurveSpec, arc_length_reparametrize, curve_from_tangent,
                     derivatives, regularity_report)
from .errors import *  # noqa: F401,F403
from .frames import (CoefficientPath, FramePath, TransformPath, extract_coefficients,
                     integrate_frame, solve_transform, verify_frame)
from .gallery import (detect_type_d_obstruction, detect_type_f_obstruction,
                      empirical_type_c_sweep, get_preset)
from .linalg import antisymmetrize, mat_exp, reorthonormalize
from .patterns import CATALOG, classify_pattern
