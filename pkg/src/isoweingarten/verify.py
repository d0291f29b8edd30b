"""Property suites behind ``isoweingarten verify``.

Each suite returns a list of :class:`Check` records; a check passes when its
worst deviation is within tolerance. Profiles are looked up through the
``lw`` module at call time so that patched builds are exercised as-is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lw
from .errors import DomainError, IsoGeometryError
from .iso import IsoMotion, apply_motion, i_distance
from .rotational import Profile, make_rotational, rotational_curvatures
from .surface import (fundamental_forms, curvatures, transformed_surface,
                      weingarten_jacobian)

DEFAULT_TOLERANCES = {
    "residual": 1e-8,
    "lw": 1e-8,
    "jacobian": 1e-6,
    "distance": 1e-12,
    "invariance": 1e-5,
    "integrator": 1e-6,
}
CONVERGENCE_BAND = (12.0, 20.0)

M0_SWEEP = (2.0, -2.0, 1.0, -1.0, 0.5, -0.5)
C_SWEEP = (0.25, -0.25, 1.0, -1.0, 4.0, -4.0)
BRANCHES = ("plus", "minus")
GRID_POINTS = 1000

SUITES = ("residual", "jacobian", "invariance", "integrator")


@dataclass
class Check:
    name: str
    max_dev: float
    tol: float
    where: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_dev <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  worst at {self.where}" if self.where and not self.passed else ""
        return f"{status} {self.name}: max deviation {self.max_dev:.3e} (tol {self.tol:.1e}){tail}"


def case_iii_n0_values(m0: float):
    """``n0`` values exercised for case III: two with ``m0^2 + n0 > 0``, one below."""
    return (1.0, -0.5 * m0 * m0, -1.5 * m0 * m0)


def lw_sweep():
    """Yield ``(label, m0, n0, profile)`` over the standard parameter sweep."""
    for m0 in M0_SWEEP:
        yield f"case-ii:{m0:g},0", m0, -m0 * m0, lw.profile_case_ii(m0, 0.0)
        for C in C_SWEEP:
            for br in BRANCHES:
                yield f"case-i:{m0:g},{C:g},{br}", m0, 0.0, lw.profile_case_i(m0, C, br)
                for n0 in case_iii_n0_values(m0):
                    try:
                        p = lw.profile_case_iii(m0, n0, C, br)
                    except DomainError:
                        continue
                    yield f"case-iii:{m0:g},{n0:g},{C:g},{br}", m0, n0, p


def _worst(current, value, where):
    if not value <= current[0]:
        return (value, where)
    return current


def suite_residual(tol=None, lw_tol=None, **_):
    tol = DEFAULT_TOLERANCES["residual"] if tol is None else tol
    lw_tol = DEFAULT_TOLERANCES["lw"] if lw_tol is None else lw_tol
    res, dfc = (0.0, ""), (0.0, "")
    for label, m0, n0, p in lw_sweep():
        u = p.grid(GRID_POINTS)
        r = np.max(np.abs(lw.ode_residual(p, m0, n0, u)))
        d = np.max(np.abs(lw.lw_defect(p, m0, n0, u)))
        res = _worst(res, float(r), label)
        dfc = _worst(dfc, float(d), label)
    return [Check("ODE residual g''(g'-m0u)-m0g'-n0u", res[0], tol, res[1]),
            Check("LW identity K-m0H-n0", dfc[0], lw_tol, dfc[1])]


def random_polynomial_profile(rng, lo=0.5, hi=2.0, max_degree=5, bound=2.0,
                              max_tries=10000) -> Profile:
    """Random polynomial profile with sign-definite ``g'`` on ``[lo, hi]``."""
    for _ in range(max_tries):
        deg = int(rng.integers(2, max_degree + 1))
        coeffs = rng.uniform(-bound, bound, deg + 1)
        try:
            return Profile.from_polynomial(coeffs, lo, hi)
        except DomainError:
            continue
    raise RuntimeError("could not draw a sign-definite polynomial profile")


def suite_jacobian(seed=42, tol=None, n_profiles=20, n_points=100, **_):
    tol = DEFAULT_TOLERANCES["jacobian"] if tol is None else tol
    rng = np.random.default_rng(seed)
    worst = (0.0, "")
    for k in range(n_profiles):
        p = random_polynomial_profile(rng)
        s = make_rotational(p).surface
        margin = 0.01
        for u, v in zip(rng.uniform(p.u_lo + margin, p.u_hi - margin, n_points),
                        rng.uniform(0.0, 2.0 * math.pi, n_points)):
            j = abs(weingarten_jacobian(s, float(u), float(v)))
            worst = _worst(worst, j, f"{p.label} (u={u:.6g}, v={v:.6g})")
    return [Check("Weingarten Jacobian |d(K,H)/d(u,v)|", worst[0], tol, worst[1])]


def invariance_profiles():
    return [
        lw.profile_case_i(1.0, 1.0, "plus", u_range=(0.5, 2.5)),
        lw.profile_case_ii(0.5, 0.0, u_range=(0.5, 2.5)),
        lw.profile_case_iii(1.0, 3.0, -1.0, "plus", u_range=(0.75, 2.5)),
        Profile.from_polynomial([0.3, 0.0, 0.5, 0.2, -0.05], 0.5, 2.5),
    ]


def suite_invariance(seed=42, tol=None, dist_tol=None, n_motions=100, n_points=50, **_):
    tol = DEFAULT_TOLERANCES["invariance"] if tol is None else tol
    dist_tol = DEFAULT_TOLERANCES["distance"] if dist_tol is None else dist_tol
    rng = np.random.default_rng(seed)
    dworst = (0.0, "")
    for k in range(n_motions):
        m = IsoMotion.random(rng, scale=5.0)
        p, q = rng.uniform(-5, 5, 3), rng.uniform(-5, 5, 3)
        d = abs(i_distance(apply_motion(m, p), apply_motion(m, q)) - i_distance(p, q))
        dworst = _worst(dworst, d, f"motion #{k}")
    kworst = (0.0, "")
    profiles = invariance_profiles()
    for k in range(n_points):
        p = profiles[k % len(profiles)]
        s = make_rotational(p).surface
        m = IsoMotion.random(rng, scale=2.0)
        fd = transformed_surface(s, m).with_finite_differences()
        u = float(rng.uniform(p.u_lo + 0.01, p.u_hi - 0.01))
        v = float(rng.uniform(0.0, 2.0 * math.pi))
        K0, H0 = rotational_curvatures(p, u)
        K1, H1 = curvatures(fundamental_forms(fd, u, v))
        dev = max(abs(K1 - K0), abs(H1 - H0))
        kworst = _worst(kworst, float(dev), f"{p.label} (u={u:.6g}, v={v:.6g})")
    return [Check("i-distance under i-motions", dworst[0], dist_tol, dworst[1]),
            Check("(K, H) under i-motions, FD pipeline", kworst[0], tol, kworst[1])]


def integrator_cases():
    """``(m0, n0, profile)`` triples with ``[u0, u0 + 2]`` inside the domain."""
    return [
        (1.0, 0.0, lw.profile_case_i(1.0, 1.0, "plus", u_range=(1.0, 3.0))),
        (-0.5, 0.0, lw.profile_case_i(-0.5, 4.0, "minus", u_range=(0.5, 2.5))),
        (2.0, 0.0, lw.profile_case_i(2.0, -1.0, "plus", u_range=(1.0, 3.0))),
        (1.0, 3.0, lw.profile_case_iii(1.0, 3.0, -1.0, "plus", u_range=(1.0, 3.0))),
        (1.0, -1.5, lw.profile_case_iii(1.0, -1.5, 4.0, "plus", u_range=(0.5, 2.5))),
    ]


def integration_error(m0, n0, p, step):
    """Max nodal ``|g_rk4 - g|`` over the profile interval and the endpoint error.

    An integration that halts early or breaks down counts as infinite error.
    """
    u0, u1 = p.u_lo, p.u_hi
    try:
        ip = lw.integrate_profile(m0, n0, u0, float(p.g(u0)), float(p.dg(u0)), u1, step)
    except IsoGeometryError:
        return math.inf, math.inf
    if ip.halted:
        return math.inf, math.inf
    us, gs, _ = ip.nodes
    err = np.abs(gs - np.asarray(p.g(us), dtype=float))
    return float(err.max()), float(err[-1])


def suite_integrator(tol=None, step=1e-3, coarse_step=0.1, **_):
    tol = DEFAULT_TOLERANCES["integrator"] if tol is None else tol
    worst = (0.0, "")
    ratio_dev = (0.0, "")
    lo, hi = CONVERGENCE_BAND
    for m0, n0, p in integrator_cases():
        err, _ = integration_error(m0, n0, p, step)
        worst = _worst(worst, err, p.label)
        _, e1 = integration_error(m0, n0, p, coarse_step)
        _, e2 = integration_error(m0, n0, p, coarse_step / 2)
        ratio = e1 / e2 if e2 > 0 else math.inf
        outside = max(lo - ratio, ratio - hi, 0.0)
        ratio_dev = _worst(ratio_dev, outside, f"{p.label} (ratio {ratio:.3f})")
    return [Check("RK4 vs closed form", worst[0], tol, worst[1]),
            Check(f"RK4 halving-step error ratio outside [{lo:g}, {hi:g}]", ratio_dev[0], 0.0,
                  ratio_dev[1])]


def run_suite(name: str, seed: int = 42, tolerances=None):
    tolerances = tolerances or {}
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, seed, tolerances))
        return out
    if name == "residual":
        return suite_residual(tol=tolerances.get("residual"), lw_tol=tolerances.get("lw"))
    if name == "jacobian":
        return suite_jacobian(seed=seed, tol=tolerances.get("jacobian"))
    if name == "invariance":
        return suite_invariance(seed=seed, tol=tolerances.get("invariance"),
                                dist_tol=tolerances.get("distance"))
    if name == "integrator":
        return suite_integrator(tol=tolerances.get("integrator"))
    raise ValueError(f"unknown suite {name!r}")
