"""Fundamental forms, the curvature pair (K, H) and the Weingarten test.

The normal of an admissible surface in isotropic space is always the
isotropic direction ``(0, 0, 1)``. The first form is the top-view metric and
the second form is read off the ``z`` component of the second partials once
their top-view tangential part has been removed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import AdmissibilityError, DomainError, StencilError

ADMISSIBILITY_TOL = 1e-10
JACOBIAN_REL_STEP = 1e-4
FD_REL_STEP = 1e-3

_INF = math.inf


class CurvatureConvention(str, enum.Enum):
    """Normalisation of the isotropic mean curvature.

    ``PAPER`` gives ``H = g'/u + g''`` on surfaces of revolution; ``HALF``
    is the Sachs normalisation, exactly one half of it.
    """

    PAPER = "paper"
    HALF = "half"


def _as_array(a):
    a = np.asarray(a)
    if a.dtype == np.longdouble:
        return a
    return a.astype(float, copy=False)


@dataclass(frozen=True)
class ParamSurface:
    """Chart ``(u, v) -> (x, y, z)`` on a rectangular domain.

    ``point``, ``d1`` and ``d2`` take scalars or broadcastable arrays and
    return arrays whose leading axis has length 3. When either derivative
    callback is missing the surface falls back to central differences of
    ``point`` with relative step ``fd_step``.
    """

    UNBOUNDED = ((-_INF, _INF), (-_INF, _INF))

    point: Callable
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    domain: tuple = UNBOUNDED
    fd_step: float = FD_REL_STEP
    name: str = ""

    @property
    def derivative_mode(self) -> str:
        if self.d1 is not None and self.d2 is not None:
            return "analytic"
        return "finite-difference"

    def with_finite_differences(self, fd_step: float | None = None) -> "ParamSurface":
        return replace(self, d1=None, d2=None,
                       fd_step=self.fd_step if fd_step is None else fd_step)

    def contains(self, u, v) -> bool:
        (u0, u1), (v0, v1) = self.domain
        u, v = _as_array(u), _as_array(v)
        return bool(np.all((u >= u0) & (u <= u1) & (v >= v0) & (v <= v1)))

    def __call__(self, u, v):
        return _as_array(self.point(u, v))

    def first_derivatives(self, u, v):
        if self.d1 is not None and self.d2 is not None:
            Xu, Xv = self.d1(u, v)
            return _as_array(Xu), _as_array(Xv)
        hu, hv = self._steps(u, v)
        X = self.point
        Xu = (_as_array(X(u + hu, v)) - _as_array(X(u - hu, v))) / (2.0 * hu)
        Xv = (_as_array(X(u, v + hv)) - _as_array(X(u, v - hv))) / (2.0 * hv)
        return Xu, Xv

    def second_derivatives(self, u, v):
        if self.d1 is not None and self.d2 is not None:
            Xuu, Xuv, Xvv = self.d2(u, v)
            return _as_array(Xuu), _as_array(Xuv), _as_array(Xvv)
        hu, hv = self._steps(u, v)
        X = self.point
        c = 2.0 * _as_array(X(u, v))
        Xuu = (_as_array(X(u + hu, v)) - c + _as_array(X(u - hu, v))) / (hu * hu)
        Xvv = (_as_array(X(u, v + hv)) - c + _as_array(X(u, v - hv))) / (hv * hv)
        Xuv = (_as_array(X(u + hu, v + hv)) - _as_array(X(u + hu, v - hv))
               - _as_array(X(u - hu, v + hv)) + _as_array(X(u - hu, v - hv))) / (4.0 * hu * hv)
        return Xuu, Xuv, Xvv

    def _steps(self, u, v):
        return self.fd_step, self.fd_step


def graph_surface(f, grad=None, hess=None, domain=ParamSurface.UNBOUNDED, name=""):
    """Chart ``(u, v) -> (u, v, f(u, v))``.

    ``grad`` returns ``(f_x, f_y)`` and ``hess`` returns
    ``(f_xx, f_xy, f_yy)``; without both the chart uses finite differences.
    """

    def point(u, v):
        u, v = np.broadcast_arrays(_as_array(u), _as_array(v))
        return np.stack([u, v, _as_array(f(u, v)) + 0.0 * u])

    if grad is None or hess is None:
        return ParamSurface(point, domain=domain, name=name)

    def d1(u, v):
        u, v = np.broadcast_arrays(_as_array(u), _as_array(v))
        fx, fy = grad(u, v)
        one, zero = np.ones_like(u), np.zeros_like(u)
        return (np.stack([one, zero, fx + zero]), np.stack([zero, one, fy + zero]))

    def d2(u, v):
        u, v = np.broadcast_arrays(_as_array(u), _as_array(v))
        fxx, fxy, fyy = hess(u, v)
        zero = np.zeros_like(u)
        return (np.stack([zero, zero, fxx + zero]),
                np.stack([zero, zero, fxy + zero]),
                np.stack([zero, zero, fyy + zero]))

    return ParamSurface(point, d1, d2, domain=domain, name=name)


def transformed_surface(s: ParamSurface, motion) -> ParamSurface:
    """Image of a chart under an i-motion, derivatives mapped by its linear part."""
    from .iso import apply_motion

    A = motion.linear_part()

    def lin(w):
        return np.tensordot(A, w, axes=1)

    def point(u, v):
        return apply_motion(motion, _as_array(s.point(u, v)))

    if s.derivative_mode != "analytic":
        return replace(s, point=point, name=f"{s.name}*motion")

    def d1(u, v):
        return tuple(lin(w) for w in s.first_derivatives(u, v))

    def d2(u, v):
        return tuple(lin(w) for w in s.second_derivatives(u, v))

    return replace(s, point=point, d1=d1, d2=d2, name=f"{s.name}*motion")


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float

    @property
    def discriminant(self):
        return self.E * self.G - self.F * self.F

    def as_tuple(self):
        return (self.E, self.F, self.G, self.L, self.M, self.N)


@dataclass(frozen=True)
class CurvatureSample:
    u: float
    v: float
    K: float
    H: float
    jac: float


def _first_offender(mask, u, v):
    u, v = np.broadcast_arrays(_as_array(u), _as_array(v))
    idx = np.argwhere(np.atleast_1d(mask))[0]
    uu, vv = np.atleast_1d(u)[tuple(idx)], np.atleast_1d(v)[tuple(idx)]
    return float(uu), float(vv)


def forms_from_derivatives(Xu, Xv, Xuu, Xuv, Xvv, u=None, v=None) -> FundamentalForms:
    """Fundamental forms from chart derivatives (each of shape ``(3, ...)``)."""
    det = Xu[0] * Xv[1] - Xv[0] * Xu[1]
    bad = ~(np.abs(det) > ADMISSIBILITY_TOL)
    if np.any(bad):
        pu, pv = (None, None) if u is None else _first_offender(bad, u, v)
        raise AdmissibilityError(
            f"isotropic tangent plane (top-view Jacobian {float(np.atleast_1d(det)[np.atleast_1d(bad)][0]):.3g})"
            + ("" if pu is None else f" at (u, v) = ({pu:.12g}, {pv:.12g})"),
            u=pu, v=pv)

    def normal_part(S):
        a = (S[0] * Xv[1] - Xv[0] * S[1]) / det
        b = (Xu[0] * S[1] - S[0] * Xu[1]) / det
        return S[2] - a * Xu[2] - b * Xv[2]

    E = Xu[0] * Xu[0] + Xu[1] * Xu[1]
    F = Xu[0] * Xv[0] + Xu[1] * Xv[1]
    G = Xv[0] * Xv[0] + Xv[1] * Xv[1]
    return FundamentalForms(E, F, G, normal_part(Xuu), normal_part(Xuv), normal_part(Xvv))


def fundamental_forms(s: ParamSurface, u, v) -> FundamentalForms:
    """First and second fundamental form coefficients at ``(u, v)``.

    Works pointwise on arrays. Raises :class:`AdmissibilityError` where the
    top view of the chart is singular and :class:`DomainError` outside the
    chart's domain.
    """
    if not s.contains(u, v):
        raise DomainError(f"(u, v) outside the domain {s.domain}")
    Xu, Xv = s.first_derivatives(u, v)
    Xuu, Xuv, Xvv = s.second_derivatives(u, v)
    return forms_from_derivatives(Xu, Xv, Xuu, Xuv, Xvv, u, v)


def curvatures(ff: FundamentalForms, convention=CurvatureConvention.PAPER):
    """Relative curvature K and isotropic mean curvature H."""
    convention = CurvatureConvention(convention)
    disc = ff.E * ff.G - ff.F * ff.F
    if np.any(~(np.asarray(disc) > 0)):
        raise AdmissibilityError("EG - F^2 <= 0: degenerate first fundamental form")
    K = (ff.L * ff.N - ff.M * ff.M) / disc
    H = (ff.E * ff.N - 2.0 * ff.F * ff.M + ff.G * ff.L) / disc
    if convention is CurvatureConvention.HALF:
        H = 0.5 * H
    return K, H


def surface_curvatures(s: ParamSurface, u, v, convention=CurvatureConvention.PAPER):
    return curvatures(fundamental_forms(s, u, v), convention)


def weingarten_jacobian(s: ParamSurface, u: float, v: float, h: float | None = None,
                        convention=CurvatureConvention.PAPER) -> float:
    """Central-difference estimate of ``det d(K, H)/d(u, v)``.

    The default step is ``1e-4 * max(1, |u|)`` in both directions and the
    2h-neighbourhood of the point must lie in the domain. Stencil points are
    evaluated in ``np.longdouble``: differencing divides rounding noise in
    K and H by ``2h``, and on x86 the extra bits keep that noise well below
    the size of a genuine Jacobian. Charts that only handle float64 still work.
    """
    h = JACOBIAN_REL_STEP * max(1.0, abs(u)) if h is None else float(h)
    (u0, u1), (v0, v1) = s.domain
    if u - 2 * h < u0 or u + 2 * h > u1 or v - 2 * h < v0 or v + 2 * h > v1:
        raise DomainError(f"Jacobian stencil at ({u}, {v}) leaves the domain")
    uc, vc, hh = np.longdouble(u), np.longdouble(v), np.longdouble(h)
    us = np.array([uc + hh, uc - hh, uc, uc], dtype=np.longdouble)
    vs = np.array([vc, vc, vc + hh, vc - hh], dtype=np.longdouble)
    K, H = surface_curvatures(s, us, vs, convention)
    Ku = (K[0] - K[1]) / (2 * hh)
    Hu = (H[0] - H[1]) / (2 * hh)
    Kv = (K[2] - K[3]) / (2 * hh)
    Hv = (H[2] - H[3]) / (2 * hh)
    return float(Ku * Hv - Kv * Hu)


def curvature_sample(s: ParamSurface, u: float, v: float,
                     convention=CurvatureConvention.PAPER, h=None) -> CurvatureSample:
    K, H = surface_curvatures(s, u, v, convention)
    return CurvatureSample(float(u), float(v), float(K), float(H),
                           weingarten_jacobian(s, u, v, h, convention))


def sample_grid(s: ParamSurface, u0: float, v0: float, nu: int, nv: int,
                h_u: float, h_v: float) -> np.ndarray:
    """Positions on the uniform grid ``u0 + i h_u, v0 + j h_v``, shape ``(nu, nv, 3)``."""
    U, V = np.meshgrid(u0 + h_u * np.arange(nu), v0 + h_v * np.arange(nv), indexing="ij")
    return np.ascontiguousarray(np.moveaxis(_as_array(s.point(U, V)), 0, -1))


def fd_oracle_forms_grid(samples, h_u: float, h_v: float) -> FundamentalForms:
    """Forms at all interior nodes of a position grid, second-order differences only."""
    samples = np.ascontiguousarray(samples, dtype=float)
    if samples.ndim != 3 or samples.shape[2] != 3:
        raise ValueError("samples must have shape (nu, nv, 3)")
    if samples.shape[0] < 3 or samples.shape[1] < 3:
        raise StencilError("grid has no interior node")
    ff = FundamentalForms(*kernels.fd_forms_grid(samples, float(h_u), float(h_v)))
    det = ff.E * ff.G - ff.F * ff.F
    if np.any(~(det > ADMISSIBILITY_TOL ** 2)):
        raise AdmissibilityError("sample grid has a singular top view")
    return ff


def fd_oracle_forms(samples, i: int, j: int, h_u: float, h_v: float) -> FundamentalForms:
    """Forms at grid node ``(i, j)`` from positional samples alone."""
    samples = np.asarray(samples, dtype=float)
    nu, nv = samples.shape[:2]
    if not (1 <= i <= nu - 2 and 1 <= j <= nv - 2):
        raise StencilError(f"node ({i}, {j}) is on the boundary of a {nu}x{nv} grid")
    ff = fd_oracle_forms_grid(samples[i - 1:i + 2, j - 1:j + 2], h_u, h_v)
    return FundamentalForms(*(float(c[0, 0]) for c in ff.as_tuple()))
