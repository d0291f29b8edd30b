"""Pure-Python versions of the compiled kernels in ``_ckernels.pyx``.

Both modules expose the same two functions with the same return layout and
perform the floating-point operations in the same order.
"""

import math

import numpy as np


def _rhs(m0, n0, u, gp, eps_sing, side):
    mu = m0 * u
    den = gp - mu
    if not math.isfinite(den):
        return math.nan
    if abs(den) <= eps_sing * max(1.0, abs(gp), abs(mu)) or den * side < 0:
        return None
    return (m0 * gp + n0 * u) / den


def rk4_lw(m0, n0, u0, g0, gp0, h, nsteps, eps_sing):
    """Fixed-step RK4 for ``g'' = (m0 g' + n0 u) / (g' - m0 u)``.

    Returns ``(u, g, gp, status)`` where the arrays hold the accepted nodes
    and ``status`` is 0 (finished), 1 (singular locus reached or crossed) or
    2 (non-finite).
    """
    us = [u0]
    gs = [g0]
    gps = [gp0]
    u, g, gp = u0, g0, gp0
    status = 0
    half = 0.5 * h
    # solutions never cross g' = m0 u; a sign flip means a step jumped the locus
    side = 1.0 if gp0 - m0 * u0 > 0 else -1.0
    for i in range(nsteps):
        k1g = gp
        k1p = _rhs(m0, n0, u, gp, eps_sing, side)
        if k1p is None:
            status = 1
            break
        k2g = gp + half * k1p
        k2p = _rhs(m0, n0, u + half, k2g, eps_sing, side)
        if k2p is None:
            status = 1
            break
        k3g = gp + half * k2p
        k3p = _rhs(m0, n0, u + half, k3g, eps_sing, side)
        if k3p is None:
            status = 1
            break
        k4g = gp + h * k3p
        k4p = _rhs(m0, n0, u + h, k4g, eps_sing, side)
        if k4p is None:
            status = 1
            break
        g = g + h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        gp = gp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        u = u0 + (i + 1) * h
        if not (math.isfinite(g) and math.isfinite(gp)):
            status = 2
            break
        us.append(u)
        gs.append(g)
        gps.append(gp)
    return np.array(us), np.array(gs), np.array(gps), status


def _tangential_residual(du, dv, second, inv_det):
    a = (second[0] * dv[1] - dv[0] * second[1]) * inv_det
    b = (du[0] * second[1] - second[0] * du[1]) * inv_det
    return second[2] - a * du[2] - b * dv[2]


def fd_forms_grid(P, hu, hv):
    """Fundamental forms at every interior node of a ``(nu, nv, 3)`` grid."""
    P = np.ascontiguousarray(P, dtype=float)
    if P.shape[0] < 3 or P.shape[1] < 3:
        raise ValueError("grid must be at least 3x3")
    c = P[1:-1, 1:-1]
    up, um = P[2:, 1:-1], P[:-2, 1:-1]
    vp, vm = P[1:-1, 2:], P[1:-1, :-2]
    du = np.moveaxis((up - um) * (1.0 / (2.0 * hu)), -1, 0)
    dv = np.moveaxis((vp - vm) * (1.0 / (2.0 * hv)), -1, 0)
    duu = np.moveaxis((up - 2.0 * c + um) * (1.0 / (hu * hu)), -1, 0)
    dvv = np.moveaxis((vp - 2.0 * c + vm) * (1.0 / (hv * hv)), -1, 0)
    duv = np.moveaxis(
        (P[2:, 2:] - P[2:, :-2] - P[:-2, 2:] + P[:-2, :-2]) * (1.0 / (4.0 * hu * hv)),
        -1, 0)
    E = du[0] * du[0] + du[1] * du[1]
    F = du[0] * dv[0] + du[1] * dv[1]
    G = dv[0] * dv[0] + dv[1] * dv[1]
    inv_det = 1.0 / (du[0] * dv[1] - dv[0] * du[1])
    L = _tangential_residual(du, dv, duu, inv_det)
    M = _tangential_residual(du, dv, duv, inv_det)
    N = _tangential_residual(du, dv, dvv, inv_det)
    return E, F, G, L, M, N
