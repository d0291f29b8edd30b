"""Triangle meshes of parametric surfaces with per-vertex curvature."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError
from .surface import CurvatureConvention, ParamSurface, curvatures, fundamental_forms

DEFAULT_PRECISION = 9


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray   # (n, 3)
    u: np.ndarray
    v: np.ndarray
    K: np.ndarray
    H: np.ndarray
    triangles: np.ndarray  # (m, 3), 0-based
    shape: tuple = (0, 0)

    def __post_init__(self):
        n = len(self.vertices)
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= n):
            raise ValueError("triangle index out of range")


def grid_values(lo: float, hi: float, n: int, endpoint: bool = True) -> np.ndarray:
    """Uniform nodes; node ``i`` is ``lo + (hi - lo) * (i / d)`` so refinements share bits."""
    d = (n - 1) if endpoint else n
    return np.array([lo + (hi - lo) * (i / d) for i in range(n)])


def _grid_triangles(nu: int, nv: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a = (i * nv + j).ravel()
    b = ((i + 1) * nv + j).ravel()
    c = ((i + 1) * nv + j + 1).ravel()
    d = (i * nv + j + 1).ravel()
    tris = np.empty((2 * a.size, 3), dtype=np.int64)
    tris[0::2] = np.stack([a, b, c], axis=1)
    tris[1::2] = np.stack([a, c, d], axis=1)
    return tris


def _orient_ccw(vertices, tris):
    p = vertices[tris]
    area = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    flip = area < 0
    tris = tris.copy()
    tris[flip, 1], tris[flip, 2] = tris[flip, 2], tris[flip, 1].copy()
    return tris


def tessellate(s: ParamSurface, nu: int, nv: int, u_range=None, v_range=None,
               convention=CurvatureConvention.PAPER, v_closed: bool | None = None) -> Mesh:
    """Sample ``s`` on a ``nu x nv`` grid (u-major) and split each quad in two.

    ``u_range`` defaults to the chart's u-domain and ``v_range`` to
    ``[0, 2 pi]``. A v-range spanning one full turn is sampled open on the
    right so the seam is not duplicated (it is not stitched either); other
    ranges include both ends unless ``v_closed`` says otherwise.
    Triangles wind counterclockwise as seen from +z.
    """
    if nu < 2 or nv < 2:
        raise ValueError("need nu >= 2 and nv >= 2")
    (du0, du1), (dv0, dv1) = s.domain
    u0, u1 = (du0, du1) if u_range is None else u_range
    v0, v1 = (0.0, 2.0 * math.pi) if v_range is None else v_range
    if v_closed is None:
        v_closed = not math.isclose(v1 - v0, 2.0 * math.pi, rel_tol=1e-12)
    if not (math.isfinite(u0) and math.isfinite(u1) and u0 < u1 and v0 < v1):
        raise ValueError("empty or unbounded tessellation range")
    us = grid_values(u0, u1, nu)
    vs = grid_values(v0, v1, nv, endpoint=v_closed)
    U, V = np.meshgrid(us, vs, indexing="ij")
    X = np.asarray(s(U, V), dtype=float)
    try:
        K, H = curvatures(fundamental_forms(s, U, V), convention)
    except AdmissibilityError as exc:
        raise AdmissibilityError(f"tessellation aborted: {exc}", exc.u, exc.v) from None
    vertices = np.ascontiguousarray(X.reshape(3, -1).T)
    tris = _orient_ccw(vertices, _grid_triangles(nu, nv))
    return Mesh(vertices, U.ravel(), V.ravel(), np.asarray(K).ravel(),
                np.asarray(H).ravel(), tris, (nu, nv))


def _fmt(x, precision):
    return f"{x + 0.0:.{precision}f}"


def _require_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("refusing to write non-finite values")


def write_obj(m: Mesh, precision: int = DEFAULT_PRECISION, stream=None) -> bytes:
    """Wavefront OBJ (``v`` and ``f`` records only, 1-based, LF newlines)."""
    _require_finite(m.vertices)
    buf = io.StringIO()
    for x, y, z in m.vertices:
        buf.write(f"v {_fmt(x, precision)} {_fmt(y, precision)} {_fmt(z, precision)}\n")
    for a, b, c in m.triangles + 1:
        buf.write(f"f {a} {b} {c}\n")
    data = buf.getvalue().encode("ascii")
    if stream is not None:
        stream.write(data)
    return data


def write_curvature_csv(m: Mesh, precision: int = DEFAULT_PRECISION, stream=None) -> bytes:
    """Per-vertex ``u,v,x,y,z,K,H`` rows in storage order."""
    _require_finite(m.vertices, m.u, m.v, m.K, m.H)
    buf = io.StringIO()
    buf.write("u,v,x,y,z,K,H\n")
    cols = np.column_stack([m.u, m.v, m.vertices, m.K, m.H])
    for row in cols:
        buf.write(",".join(_fmt(x, precision) for x in row))
        buf.write("\n")
    data = buf.getvalue().encode("ascii")
    if stream is not None:
        stream.write(data)
    return data


def read_obj(data: bytes):
    """Parse the subset written by :func:`write_obj`; returns (vertices, faces)."""
    verts, faces = [], []
    for line in data.decode("ascii").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(t) for t in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=np.int64)
