"""Curvature and linear Weingarten rotational surfaces in isotropic 3-space."""

from .errors import (AdmissibilityError, DomainError, IsoGeometryError, NonFiniteError,
                     NotASphereError, OutOfScopeError, SingularBranchError, StencilError)
from .iso import (IsoMotion, ParabolicSphere, apply_motion, compose_motions, i_distance,
                  icircle_curvature, invert_motion, parabolic_sphere_surface)
from .kernels import BACKEND
from .lw import (classify, hk_ratio, hk_ratio_profile, integrate_profile, lw_case,
                 profile_case_i, profile_case_ii, profile_case_iii)
from .mesh import Mesh, tessellate, write_curvature_csv, write_obj
from .rotational import Profile, make_rotational, read_profile_csv, rotational_curvatures
from .surface import (CurvatureConvention, FundamentalForms, ParamSurface, curvatures,
                      fundamental_forms, graph_surface, surface_curvatures,
                      transformed_surface, weingarten_jacobian)

__version__ = "0.1.0"
