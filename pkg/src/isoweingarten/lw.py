"""Linear Weingarten rotational surfaces, ``K = m0 H + n0`` with ``m0 != 0``.

On a surface of revolution the relation becomes the ODE

    g'' (g' - m0 u) - m0 g' = n0 u,

whose non-singular solutions all have the slope

    g'(u) = m0 u + sigma sqrt(C + (m0^2 + n0) u^2),   sigma = +-1,

(case I for ``n0 = 0``, case III otherwise) and whose singular solution
``g' = m0 u`` forces ``n0 = -m0^2`` (case II, a paraboloid).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import kernels
from .errors import DomainError, NonFiniteError, OutOfScopeError, SingularBranchError
from .quadrature import adaptive_simpson
from .rotational import Profile, rotational_curvatures

log = logging.getLogger(__name__)

EPS_SING = 1e-8
DOMAIN_MARGIN = 1e-6
DEFAULT_WINDOW = (0.1, 3.0)
QUAD_TOL = 1e-12

CASE_TAGS = ("I", "II", "III", "III-bounded")


def _check_m0(m0):
    if m0 == 0:
        raise OutOfScopeError("out of scope: constant-K family (m0 = 0)")
    if not math.isfinite(m0):
        raise DomainError("m0 must be finite")


def _sigma(branch) -> float:
    if branch in ("plus", "+", 1, 1.0):
        return 1.0
    if branch in ("minus", "-", -1, -1.0):
        return -1.0
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def _discriminant(m0, n0):
    """``a = m0^2 + n0`` with values within rounding of zero snapped to 0."""
    a = m0 * m0 + n0
    if abs(a) <= 1e-12 * max(m0 * m0, abs(n0)):
        return 0.0
    return a


def classify(m0: float, n0: float) -> frozenset:
    """Case tags of the linear Weingarten classification that apply to ``(m0, n0)``.

    ``III-bounded`` marks ``m0^2 + n0 < 0``, where real profiles exist only
    for ``C > 0`` and only on a bounded ``u`` interval.
    """
    _check_m0(m0)
    if n0 == 0:
        return frozenset({"I"})
    a = _discriminant(m0, n0)
    if a == 0:
        return frozenset({"II"})
    if a > 0:
        return frozenset({"III"})
    return frozenset({"III-bounded"})


def classification_notes(m0: float, n0: float) -> list[str]:
    """Human-readable domain notes to go with :func:`classify`."""
    tags = classify(m0, n0)
    a = _discriminant(m0, n0)
    notes = []
    if "I" in tags:
        notes.append(f"I: g' = m0 u +- sqrt(C + {m0 * m0:g} u^2); "
                     f"C > 0 gives u > 0, C < 0 gives u > sqrt(-C)/{abs(m0):g}")
    if "II" in tags:
        notes.append(f"II: g = {m0 / 2:g} u^2 + c3 on u > 0, K = {m0 * m0:g}, H = {2 * m0:g}")
        notes.append("II: the slopes g' = m0 u +- sqrt(C), C > 0, also satisfy the relation")
    if "III" in tags:
        notes.append(f"III: g' = m0 u +- sqrt(C + {a:g} u^2); "
                     f"C >= 0 gives u > 0, C < 0 gives u > sqrt(-C/{a:g})")
    if "III-bounded" in tags:
        notes.append(f"III-bounded: m0^2 + n0 = {a:g} < 0; no real profile for C <= 0, "
                     f"C > 0 gives 0 < u < sqrt(C/{-a:g})")
    return notes


@dataclass(frozen=True)
class LWCase:
    tag: str
    m0: float
    n0: float
    profile: Profile
    C: float | None = None
    branch: str | None = None

    @property
    def interval(self):
        return (self.profile.u_lo, self.profile.u_hi)


def _window(d_lo, d_hi, zeros=(), u_range=None):
    """Pick a closed sub-interval of the open natural domain ``(d_lo, d_hi)``.

    Points where ``g'`` vanishes are cut out; the longest remaining piece wins.
    """
    lo_edge = d_lo + DOMAIN_MARGIN * max(1.0, d_lo) if d_lo > 0 else 0.0
    hi_edge = d_hi - DOMAIN_MARGIN * max(1.0, d_hi) if math.isfinite(d_hi) else math.inf
    if u_range is not None:
        a, b = map(float, u_range)
        if a <= 0:
            raise DomainError(f"u-range must lie in u > 0, got [{a}, {b}]")
        lo, hi = max(a, lo_edge), min(b, hi_edge)
    else:
        lo = max(DEFAULT_WINDOW[0], lo_edge)
        hi = min(max(DEFAULT_WINDOW[1], 2.0 * lo), hi_edge)
        if hi <= lo:
            lo = max(lo_edge, 0.01 * hi_edge)
    if not lo < hi:
        raise DomainError(f"empty domain: requested u-range does not meet ({d_lo:g}, {d_hi:g})")
    cuts = sorted(z for z in zeros if lo < z < hi)
    if cuts:
        pieces = []
        edges = [lo] + cuts + [hi]
        for k, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
            if k > 0:
                a = a + DOMAIN_MARGIN * max(1.0, a)
            if k < len(edges) - 2:
                b = b - DOMAIN_MARGIN * max(1.0, b)
            if a < b:
                pieces.append((a, b))
        if not pieces:
            raise DomainError("empty domain: g' vanishes throughout the u-range")
        lo, hi = max(pieces, key=lambda p: p[1] - p[0])
    return lo, hi


def _slope_functions(m0, a, C, sigma):
    """``g'`` and ``g''`` for the slope ``m0 u + sigma sqrt(C + a u^2)``."""

    def root(u):
        return np.sqrt(np.maximum(C + a * u * u, 0.0))

    def dg(u):
        u = np.asarray(u, dtype=float)
        return m0 * u + sigma * root(u)

    def d2g(u):
        u = np.asarray(u, dtype=float)
        return m0 + sigma * a * u / root(u)

    return root, dg, d2g


def _log_argument(m0, u, S, C):
    # m0 u + S without cancellation when m0 u < 0: (S + m0 u)(S - m0 u) = C
    mu = m0 * u
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(mu >= 0, mu + S, C / (S - mu))


def profile_case_i(m0: float, C: float, branch="plus", u_range=None) -> Profile:
    """Profile of the ``n0 = 0`` family.

    ``g = m0/2 u^2 + sigma [u/2 sqrt(C + m0^2 u^2) + C/(2 m0) ln|m0 u + sqrt(C + m0^2 u^2)|]``
    """
    _check_m0(m0)
    if C == 0:
        raise DomainError("C = 0 degenerates to a linear slope; use C != 0")
    sigma = _sigma(branch)
    a = m0 * m0
    d_lo = math.sqrt(-C) / abs(m0) if C < 0 else 0.0
    lo, hi = _window(d_lo, math.inf, (), u_range)
    root, dg, d2g = _slope_functions(m0, a, C, sigma)
    coef = C / (2.0 * m0)

    def g(u):
        u = np.asarray(u, dtype=float)
        S = root(u)
        return 0.5 * m0 * u * u + sigma * (0.5 * u * S + coef * np.log(np.abs(_log_argument(m0, u, S, C))))

    return Profile(g, dg, d2g, lo, hi,
                   label=f"case-i:{m0:g},{C:g},{'plus' if sigma > 0 else 'minus'}")


def profile_case_ii(m0: float, c3: float = 0.0, u_range=None) -> Profile:
    """The paraboloid ``g = m0/2 u^2 + c3``; ``K = m0^2``, ``H = 2 m0``."""
    _check_m0(m0)
    lo, hi = _window(0.0, math.inf, (), u_range)

    def g(u):
        u = np.asarray(u, dtype=float)
        return 0.5 * m0 * u * u + c3

    def dg(u):
        return m0 * np.asarray(u, dtype=float)

    def d2g(u):
        return m0 + 0.0 * np.asarray(u, dtype=float)

    return Profile(g, dg, d2g, lo, hi, label=f"case-ii:{m0:g},{c3:g}")


def _cumulative_quadrature(dg, anchor):
    """``g(u) = integral of dg from anchor to u``, vectorised over ``u``."""

    def f(x):
        return float(dg(x))

    def g(u):
        u = np.asarray(u, dtype=float)
        flat = u.ravel()
        order = np.argsort(flat, kind="stable")
        out = np.empty_like(flat)
        prev, acc = anchor, 0.0
        for k in order:
            x = flat[k]
            if x >= prev:
                acc += adaptive_simpson(f, prev, x, QUAD_TOL)
                prev = x
                out[k] = acc
            else:
                out[k] = adaptive_simpson(f, anchor, x, QUAD_TOL)
        return out.reshape(u.shape) if u.ndim else float(out[0])

    return g


def case_iii_domain(m0: float, n0: float, C: float):
    """Open natural domain ``{u > 0 : C + (m0^2 + n0) u^2 > 0}``."""
    a = _discriminant(m0, n0)
    if a > 0:
        return (math.sqrt(-C / a) if C < 0 else 0.0), math.inf
    if a == 0:
        if C <= 0:
            raise DomainError("empty domain: m0^2 + n0 = 0 needs C > 0")
        return 0.0, math.inf
    if C <= 0:
        raise DomainError("empty domain: m0^2 + n0 < 0 needs C > 0")
    return 0.0, math.sqrt(C / -a)


def profile_case_iii(m0: float, n0: float, C: float, branch="plus", u_range=None) -> Profile:
    """Profile of the ``n0 != 0`` family with slope ``m0 u + sigma sqrt(C + a u^2)``.

    For ``a = m0^2 + n0 > 0`` ``g`` is the closed form
    ``m0/2 u^2 + sigma [u/2 S + C/(2 sqrt(a)) ln(sqrt(a) u + S)]``; for ``a < 0``
    (bounded domain) ``g`` is adaptive quadrature of ``g'`` from the left end.
    ``a = 0`` is accepted for ``C > 0`` and gives ``g = m0/2 u^2 + sigma sqrt(C) u``.
    """
    _check_m0(m0)
    if n0 == 0:
        raise DomainError("n0 = 0 belongs to case I")
    sigma = _sigma(branch)
    a = _discriminant(m0, n0)
    d_lo, d_hi = case_iii_domain(m0, n0, C)
    zeros = []
    # g' = 0 needs sigma S = -m0 u, i.e. C + n0 u^2 = 0 on the branch sigma = -sign(m0)
    if sigma * m0 < 0 and -C / n0 > 0:
        zeros.append(math.sqrt(-C / n0))
    lo, hi = _window(d_lo, d_hi, zeros, u_range)
    root, dg, d2g = _slope_functions(m0, a, C, sigma)
    label = f"case-iii:{m0:g},{n0:g},{C:g},{'plus' if sigma > 0 else 'minus'}"
    if a > 0:
        ra = math.sqrt(a)
        coef = C / (2.0 * ra)

        def g(u):
            u = np.asarray(u, dtype=float)
            S = root(u)
            return 0.5 * m0 * u * u + sigma * (0.5 * u * S + coef * np.log(ra * u + S))
    elif a == 0:
        rc = math.sqrt(C)

        def g(u):
            u = np.asarray(u, dtype=float)
            return 0.5 * m0 * u * u + sigma * rc * u
    else:
        g = _cumulative_quadrature(dg, lo)
    return Profile(g, dg, d2g, lo, hi, label=label)


def lw_case(m0: float, n0: float, C: float = 1.0, branch="plus", c3: float = 0.0,
            u_range=None) -> LWCase:
    """Build the profile matching ``(m0, n0)`` and wrap it with its case tag."""
    tags = classify(m0, n0)
    if "I" in tags:
        return LWCase("I", m0, n0, profile_case_i(m0, C, branch, u_range), C, branch)
    if "II" in tags:
        return LWCase("II", m0, n0, profile_case_ii(m0, c3, u_range))
    tag = "III" if "III" in tags else "III-bounded"
    return LWCase(tag, m0, n0, profile_case_iii(m0, n0, C, branch, u_range), C, branch)


def ode_residual(p: Profile, m0: float, n0: float, u):
    """``g''(g' - m0 u) - m0 g' - n0 u``; zero exactly on LW profiles."""
    u = np.asarray(u, dtype=float)
    g1 = np.asarray(p.dg(u), dtype=float)
    g2 = np.asarray(p.d2g(u), dtype=float)
    r = g2 * (g1 - m0 * u) - m0 * g1 - n0 * u
    return float(r) if r.ndim == 0 else r


def lw_defect(p: Profile, m0: float, n0: float, u):
    """``K - m0 H - n0`` from the closed-form rotational curvatures."""
    K, H = rotational_curvatures(p, u)
    return np.asarray(K) - m0 * np.asarray(H) - n0


@dataclass(frozen=True)
class IntegratedProfile(Profile):
    nodes: tuple = field(default=(), repr=False)
    halted: bool = False


def _ode_rhs(m0, n0):
    def d2g(u, gp):
        return (m0 * gp + n0 * u) / (gp - m0 * u)
    return d2g


def integrate_profile(m0: float, n0: float, u0: float, g0: float, g0p: float,
                      u_end: float, step: float, eps_sing: float = EPS_SING) -> IntegratedProfile:
    """Classical RK4 on ``g'' = (m0 g' + n0 u)/(g' - m0 u)`` from ``(u0, g0, g0p)``.

    The step is shrunk so that a whole number of steps lands on ``u_end``.
    Reaching the singular locus ``g' = m0 u`` (relative tolerance ``eps_sing``)
    stops the run: a partial profile is returned if at least two nodes were
    accepted, otherwise :class:`SingularBranchError` is raised.
    """
    _check_m0(m0)
    if not u0 > 0 or not u_end > 0:
        raise DomainError("integration interval must lie in u > 0")
    if not step > 0:
        raise DomainError("step must be positive")
    if u_end == u0:
        raise DomainError("empty domain: u_end == u0")
    if abs(g0p - m0 * u0) <= eps_sing * max(1.0, abs(g0p), abs(m0 * u0)):
        raise SingularBranchError(
            f"initial slope lies on the singular locus g' = m0 u at u={u0}", u=u0)
    span = u_end - u0
    nsteps = max(1, math.ceil(abs(span) / step - 1e-9))
    h = span / nsteps
    us, gs, gps, status = kernels.rk4_lw(float(m0), float(n0), float(u0), float(g0),
                                         float(g0p), float(h), int(nsteps), float(eps_sing))
    halted = status != 0
    if status == 2:
        raise NonFiniteError(f"non-finite state after u={us[-1]}", u=float(us[-1]),
                             partial=_integrated(m0, n0, us, gs, gps, True) if len(us) > 1 else None)
    if status == 1:
        if len(us) < 2:
            raise SingularBranchError(f"singular locus reached at u={us[-1]}", u=float(us[-1]))
        log.warning("integration halted at u=%g: singular locus g' = m0 u", us[-1])
    return _integrated(m0, n0, us, gs, gps, halted)


def _integrated(m0, n0, us, gs, gps, halted):
    if us[-1] < us[0]:
        us, gs, gps = us[::-1], gs[::-1], gps[::-1]
    rhs = _ode_rhs(m0, n0)
    gpps = rhs(us, gps)
    g = CubicHermiteSpline(us, gs, gps, extrapolate=False)
    dg = CubicHermiteSpline(us, gps, gpps, extrapolate=False)

    def d2g(u):
        u = np.asarray(u, dtype=float)
        return rhs(u, dg(u))

    return IntegratedProfile(g, dg, d2g, float(us[0]), float(us[-1]), kind="integrated",
                             label=f"rk4:{m0:g},{n0:g}",
                             nodes=(us, gs, gps), halted=halted)


def hk_ratio_profile(ratio: float, C: float = 1.0, branch="plus", u_range=None) -> Profile:
    """Rotational profile with constant ``H/K = ratio`` (the ``n0 = 0`` family, ``m0 = 1/ratio``)."""
    if ratio == 0 or not math.isfinite(ratio):
        raise DomainError("ratio must be finite and non-zero")
    return profile_case_i(1.0 / ratio, C, branch, u_range)


def hk_ratio(p: Profile, u):
    """Pointwise ``H/K`` of the rotational surface over ``p``."""
    K, H = rotational_curvatures(p, u)
    return np.asarray(H) / np.asarray(K)
