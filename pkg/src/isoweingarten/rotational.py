"""Surfaces of revolution about the isotropic axis.

A profile ``g`` on ``[u_lo, u_hi]`` (``u_lo > 0``) is rotated either from
the ``xz``-plane, ``(u cos v, u sin v, g(u))``, or from the ``yz``-plane,
``(-u sin v, u cos v, g(u))``. Both charts have ``E = 1, F = 0, G = u^2``,
``L = g''``, ``M = 0``, ``N = u g'``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import DomainError
from .surface import CurvatureConvention, ParamSurface, fundamental_forms

DEFAULT_PROBES = 257
MIN_SAMPLES = 5

ORIENTATIONS = ("xz", "yz")


def chebyshev_probes(lo: float, hi: float, n: int = DEFAULT_PROBES) -> np.ndarray:
    """Chebyshev-Lobatto points on ``[lo, hi]``, endpoints included."""
    k = np.arange(n)
    x = np.cos(np.pi * k / (n - 1))[::-1]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


@dataclass(frozen=True)
class Profile:
    """Generating curve ``z = g(u)`` with its first two derivatives.

    The callbacks must accept numpy arrays. Construction checks that
    ``g'`` keeps a strict sign on ``probes`` Chebyshev points of the interval.
    """

    g: Callable
    dg: Callable
    d2g: Callable
    u_lo: float
    u_hi: float
    kind: str = "closed-form"
    label: str = ""
    probes: int = field(default=DEFAULT_PROBES, repr=False)

    def __post_init__(self):
        lo, hi = self.u_lo, self.u_hi
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError("profile interval must be finite")
        if not lo < hi:
            raise DomainError(f"empty domain [{lo}, {hi}]")
        if lo <= 0:
            raise DomainError(f"profile interval must satisfy u > 0, got u_lo={lo}")
        if self.kind not in ("closed-form", "integrated", "sampled"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        u = chebyshev_probes(lo, hi, self.probes)
        vals = [np.asarray(fn(u), dtype=float) for fn in (self.g, self.dg, self.d2g)]
        if not all(np.all(np.isfinite(a)) for a in vals):
            raise DomainError("profile is not finite on its interval")
        s = np.sign(vals[1])
        if np.any(s == 0) or np.any(s != s[0]):
            raise DomainError("g' vanishes or changes sign on the interval (need dg/du != 0)")

    def contains(self, u) -> bool:
        u = np.asarray(u, dtype=float)
        return bool(np.all((u >= self.u_lo) & (u <= self.u_hi)))

    def restricted(self, lo: float, hi: float) -> "Profile":
        return Profile(self.g, self.dg, self.d2g, max(lo, self.u_lo), min(hi, self.u_hi),
                       self.kind, self.label, self.probes)

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.u_lo, self.u_hi, n)

    @classmethod
    def from_polynomial(cls, coeffs, u_lo: float, u_hi: float, label: str = "") -> "Profile":
        """Profile for ``g(u) = sum coeffs[k] u^k``."""
        p = np.polynomial.Polynomial(coeffs)
        return cls(p, p.deriv(1), p.deriv(2), u_lo, u_hi,
                   label=label or f"poly{list(map(float, coeffs))}")

    @classmethod
    def from_samples(cls, u, g, label: str = "sampled") -> "Profile":
        """Profile from ``(u, g)`` samples; derivatives by finite differences.

        ``g'`` uses central differences with second-order one-sided ends,
        ``g''`` the three-point formula inside and a four-point cubic at the
        ends. Between nodes ``g`` and ``g'`` are cubic Hermite interpolants.
        """
        u = np.asarray(u, dtype=float)
        g = np.asarray(g, dtype=float)
        if u.ndim != 1 or u.shape != g.shape:
            raise DomainError("u and g must be 1-D arrays of equal length")
        if u.size < MIN_SAMPLES:
            raise DomainError(f"need at least {MIN_SAMPLES} samples, got {u.size}")
        if np.any(np.diff(u) <= 0):
            raise DomainError("u must be strictly increasing")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(g))):
            raise DomainError("samples must be finite")
        dg = np.gradient(g, u, edge_order=2)
        d2g = sampled_second_derivative(u, g)
        g_spline = CubicHermiteSpline(u, g, dg, extrapolate=False)
        dg_spline = CubicHermiteSpline(u, dg, d2g, extrapolate=False)

        # samples carry double precision only; extended-precision queries are demoted
        def g_interp(x):
            return g_spline(np.asarray(x, dtype=float))

        def dg_interp(x):
            return dg_spline(np.asarray(x, dtype=float))

        def d2g_interp(x):
            return np.interp(np.asarray(x, dtype=float), u, d2g)

        return cls(g_interp, dg_interp, d2g_interp, float(u[0]), float(u[-1]),
                   kind="sampled", label=label)


def sampled_second_derivative(u, g) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    g = np.asarray(g, dtype=float)
    out = np.empty_like(g)
    h0 = u[1:-1] - u[:-2]
    h1 = u[2:] - u[1:-1]
    out[1:-1] = 2.0 * (h0 * g[2:] - (h0 + h1) * g[1:-1] + h1 * g[:-2]) / (h0 * h1 * (h0 + h1))
    for end, sl in ((0, slice(0, 4)), (-1, slice(-4, None))):
        c = np.polyfit(u[sl] - u[end], g[sl], 3)
        out[end] = 2.0 * c[1]
    return out


def read_profile_csv(path) -> Profile:
    """Read a ``u,g`` CSV file (header required) into a sampled profile."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DomainError(f"{path}: empty profile file") from None
        if header != ["u", "g"]:
            raise DomainError(f"{path}: header must be 'u,g', got {','.join(header)!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DomainError(f"{path}:{lineno}: expected 2 columns")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: non-numeric value") from None
    if not rows:
        raise DomainError(f"{path}: no samples")
    u, g = np.array(rows).T
    return Profile.from_samples(u, g, label=str(path))


def _num(a):
    # keeps np.longdouble stencils (see weingarten_jacobian) in extended precision
    a = np.asarray(a)
    return a if a.dtype == np.longdouble else a.astype(float, copy=False)


@dataclass(frozen=True)
class RotationalSurface:
    profile: Profile
    orientation: str
    surface: ParamSurface

    def __call__(self, u, v):
        return self.surface(u, v)


def make_rotational(p: Profile, orientation: str = "xz") -> RotationalSurface:
    """Rotate ``p`` about the z-axis. ``v`` is unrestricted."""
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    if not p.u_lo < p.u_hi:
        raise DomainError("empty domain")
    g, dg, d2g = p.g, p.dg, p.d2g

    def _uv(u, v):
        return np.broadcast_arrays(_num(u), _num(v))

    if orientation == "xz":
        def point(u, v):
            u, v = _uv(u, v)
            return np.stack([u * np.cos(v), u * np.sin(v), _num(g(u))])

        def d1(u, v):
            u, v = _uv(u, v)
            c, s = np.cos(v), np.sin(v)
            return (np.stack([c, s, _num(dg(u))]),
                    np.stack([-u * s, u * c, np.zeros_like(u)]))

        def d2(u, v):
            u, v = _uv(u, v)
            c, s = np.cos(v), np.sin(v)
            z = np.zeros_like(u)
            return (np.stack([z, z, _num(d2g(u))]),
                    np.stack([-s, c, z]),
                    np.stack([-u * c, -u * s, z]))
    else:
        def point(u, v):
            u, v = _uv(u, v)
            return np.stack([-u * np.sin(v), u * np.cos(v), _num(g(u))])

        def d1(u, v):
            u, v = _uv(u, v)
            c, s = np.cos(v), np.sin(v)
            return (np.stack([-s, c, _num(dg(u))]),
                    np.stack([-u * c, -u * s, np.zeros_like(u)]))

        def d2(u, v):
            u, v = _uv(u, v)
            c, s = np.cos(v), np.sin(v)
            z = np.zeros_like(u)
            return (np.stack([z, z, _num(d2g(u))]),
                    np.stack([-c, -s, z]),
                    np.stack([u * s, -u * c, z]))

    chart = ParamSurface(point, d1, d2,
                         domain=((p.u_lo, p.u_hi), (-math.inf, math.inf)),
                         name=f"rotational[{orientation}]:{p.label}")
    return RotationalSurface(p, orientation, chart)


def rotational_curvatures(p: Profile, u, convention=CurvatureConvention.PAPER):
    """Closed-form ``K = g' g'' / u`` and ``H = g'/u + g''`` of the rotational surface."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0):
        raise DomainError("u must be positive (the axis is excluded)")
    if not p.contains(u_arr):
        raise DomainError(f"u outside the profile interval [{p.u_lo}, {p.u_hi}]")
    g1 = np.asarray(p.dg(u_arr), dtype=float)
    g2 = np.asarray(p.d2g(u_arr), dtype=float)
    K = g1 * g2 / u_arr
    H = g1 / u_arr + g2
    if CurvatureConvention(convention) is CurvatureConvention.HALF:
        H = 0.5 * H
    if np.ndim(u) == 0:
        return float(K), float(H)
    return K, H


def isometry_check(p: Profile, n: int = 100, seed: int = 0, tol: float = 1e-12) -> bool:
    """True when the ``xz`` and ``yz`` charts share ``E = 1, F = 0, G = u^2``."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(p.u_lo, p.u_hi, n)
    v = rng.uniform(0.0, 2.0 * math.pi, n)
    a = fundamental_forms(make_rotational(p, "xz").surface, u, v)
    b = fundamental_forms(make_rotational(p, "yz").surface, u, v)
    scale = np.maximum(1.0, u * u)
    expected = (np.ones_like(u), np.zeros_like(u), u * u)
    for fa, fb, fe in zip((a.E, a.F, a.G), (b.E, b.F, b.G), expected):
        if np.any(np.abs(fa - fb) > tol * scale) or np.any(np.abs(fa - fe) > tol * scale):
            return False
    return True
