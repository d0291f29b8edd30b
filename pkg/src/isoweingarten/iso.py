"""The isotropic ambient space: i-distance, i-motions, i-circles and i-spheres.

Points are stored in affine coordinates ``(x, y, z)`` where ``z`` is the
isotropic direction. The metric only sees the top view ``(x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotASphereError


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def i_distance(p, q) -> float:
    """Isotropic distance: Euclidean length of the top-view difference."""
    return math.hypot(q[0] - p[0], q[1] - p[1])


@dataclass(frozen=True)
class IsoMotion:
    """Isotropic congruence transformation.

    ``(x, y)`` is rotated by ``c2`` (radians) and translated by ``(c1, c3)``;
    ``z`` picks up ``c4 + c5 x + c6 y`` with the *original* ``x, y``.
    The angle is never reduced modulo 2 pi.
    """

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4", "c5", "c6"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"motion parameter {name} is not finite")

    @classmethod
    def identity(cls) -> "IsoMotion":
        return cls()

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 1.0) -> "IsoMotion":
        c = rng.uniform(-scale, scale, size=6)
        c[1] = rng.uniform(-math.pi, math.pi)
        return cls(*map(float, c))

    def linear_part(self) -> np.ndarray:
        """3x3 matrix acting on difference vectors (and derivatives)."""
        c, s = math.cos(self.c2), math.sin(self.c2)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [self.c5, self.c6, 1.0]])

    def apply(self, p):
        return apply_motion(self, p)

    def inverse(self) -> "IsoMotion":
        return invert_motion(self)

    def __matmul__(self, other: "IsoMotion") -> "IsoMotion":
        return compose_motions(self, other)


def apply_motion(m: IsoMotion, p):
    """Apply ``m`` to a point. Array inputs of shape ``(3, ...)`` broadcast."""
    x, y, z = p[0], p[1], p[2]
    c, s = math.cos(m.c2), math.sin(m.c2)
    xn = m.c1 + x * c - y * s
    yn = m.c3 + x * s + y * c
    zn = m.c4 + m.c5 * x + m.c6 * y + z
    if isinstance(x, np.ndarray) or isinstance(p, np.ndarray):
        return np.stack(np.broadcast_arrays(xn, yn, zn))
    return Point3(float(xn), float(yn), float(zn))


def compose_motions(m1: IsoMotion, m2: IsoMotion) -> IsoMotion:
    """Motion equal to applying ``m2`` first and then ``m1``."""
    c, s = math.cos(m1.c2), math.sin(m1.c2)
    c2, s2 = math.cos(m2.c2), math.sin(m2.c2)
    # shear of m1 pulled back through the rotation of m2
    c5 = m2.c5 + c2 * m1.c5 + s2 * m1.c6
    c6 = m2.c6 - s2 * m1.c5 + c2 * m1.c6
    return IsoMotion(
        c1=m1.c1 + c * m2.c1 - s * m2.c3,
        c2=m1.c2 + m2.c2,
        c3=m1.c3 + s * m2.c1 + c * m2.c3,
        c4=m1.c4 + m2.c4 + m1.c5 * m2.c1 + m1.c6 * m2.c3,
        c5=c5,
        c6=c6,
    )


def invert_motion(m: IsoMotion) -> IsoMotion:
    c, s = math.cos(m.c2), math.sin(m.c2)
    # top view: p = R^T (p' - t)
    tx = -(c * m.c1 + s * m.c3)
    ty = -(-s * m.c1 + c * m.c3)
    return IsoMotion(
        c1=tx,
        c2=-m.c2,
        c3=ty,
        c4=-m.c4 - m.c5 * tx - m.c6 * ty,
        c5=-(c * m.c5 - s * m.c6),
        c6=-(s * m.c5 + c * m.c6),
    )


def icircle_curvature(f, x0: float, h: float | None = None) -> float:
    """i-curvature ``f''(x0)`` of a planar graph ``z = f(x)``.

    ``f`` may be a :class:`~isoweingarten.rotational.Profile` (its analytic
    second derivative is used and ``x0`` must lie in its interval) or any
    scalar callable, in which case a central second difference is taken.
    """
    if hasattr(f, "d2g"):
        if not f.contains(x0):
            raise DomainError(f"x0={x0} outside [{f.u_lo}, {f.u_hi}]")
        return float(f.d2g(x0))
    if not callable(f):
        raise TypeError("f must be a Profile or a callable")
    if h is None:
        h = 1e-4 * max(1.0, abs(x0))
    return (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h)


@dataclass(frozen=True)
class ParabolicSphere:
    """i-sphere of parabolic type ``z = A/2 (x^2 + y^2) + B x + C y + D``."""

    A: float
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0

    def __post_init__(self):
        if self.A == 0:
            raise NotASphereError("A = 0 gives a plane, not a parabolic i-sphere")

    def height(self, x, y):
        return 0.5 * self.A * (x * x + y * y) + self.B * x + self.C * y + self.D


def parabolic_sphere_surface(s: ParabolicSphere, domain=None):
    """Graph chart ``(u, v) -> (u, v, z(u, v))`` of a parabolic i-sphere."""
    from .surface import ParamSurface, graph_surface

    if s.A == 0:
        raise NotASphereError("A = 0 gives a plane, not a parabolic i-sphere")
    A, B, C = s.A, s.B, s.C
    return graph_surface(
        s.height,
        grad=lambda x, y: (A * x + B, A * y + C),
        hess=lambda x, y: (A + 0.0 * x, 0.0 * x, A + 0.0 * y),
        domain=domain if domain is not None else ParamSurface.UNBOUNDED,
        name=f"paraboloid:{A},{B},{C},{s.D}",
    )

