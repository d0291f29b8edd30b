# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must stay numerically identical to ``_pykernels``."""

import numpy as np

from libc.math cimport NAN, fabs, isfinite


cdef inline double _fmax3(double a, double b, double c) nogil:
    cdef double m = a
    if b > m:
        m = b
    if c > m:
        m = c
    return m


cdef inline int _rhs(double m0, double n0, double u, double gp,
                     double eps_sing, double side, double *out) nogil:
    cdef double mu = m0 * u
    cdef double den = gp - mu
    if not isfinite(den):
        out[0] = NAN
        return 0
    if fabs(den) <= eps_sing * _fmax3(1.0, fabs(gp), fabs(mu)) or den * side < 0:
        return 1
    out[0] = (m0 * gp + n0 * u) / den
    return 0


def rk4_lw(double m0, double n0, double u0, double g0, double gp0,
           double h, Py_ssize_t nsteps, double eps_sing):
    cdef double[::1] us = np.empty(nsteps + 1)
    cdef double[::1] gs = np.empty(nsteps + 1)
    cdef double[::1] gps = np.empty(nsteps + 1)
    cdef double u = u0, g = g0, gp = gp0
    cdef double k1g, k1p, k2g, k2p, k3g, k3p, k4g, k4p, acc
    cdef Py_ssize_t i, done = 0
    cdef int status = 0
    # solutions never cross g' = m0 u; a sign flip means a step jumped the locus
    cdef double side = 1.0 if gp0 - m0 * u0 > 0 else -1.0
    us[0] = u
    gs[0] = g
    gps[0] = gp
    with nogil:
        for i in range(nsteps):
            k1g = gp
            if _rhs(m0, n0, u, gp, eps_sing, side, &acc):
                status = 1
                break
            k1p = acc
            k2g = gp + 0.5 * h * k1p
            if _rhs(m0, n0, u + 0.5 * h, k2g, eps_sing, side, &acc):
                status = 1
                break
            k2p = acc
            k3g = gp + 0.5 * h * k2p
            if _rhs(m0, n0, u + 0.5 * h, k3g, eps_sing, side, &acc):
                status = 1
                break
            k3p = acc
            k4g = gp + h * k3p
            if _rhs(m0, n0, u + h, k4g, eps_sing, side, &acc):
                status = 1
                break
            k4p = acc
            g = g + h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
            gp = gp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
            u = u0 + (i + 1) * h
            if not (isfinite(g) and isfinite(gp)):
                status = 2
                break
            us[i + 1] = u
            gs[i + 1] = g
            gps[i + 1] = gp
            done = i + 1
    return (np.asarray(us[:done + 1]).copy(), np.asarray(gs[:done + 1]).copy(),
            np.asarray(gps[:done + 1]).copy(), status)


cdef inline void _solve_tangential(double xu, double yu, double xv, double yv,
                                   double px, double py, double inv_det,
                                   double *a, double *b) nogil:
    a[0] = (px * yv - xv * py) * inv_det
    b[0] = (xu * py - px * yu) * inv_det


def fd_forms_grid(const double[:, :, ::1] P, double hu, double hv):
    cdef Py_ssize_t nu = P.shape[0], nv = P.shape[1]
    if nu < 3 or nv < 3:
        raise ValueError("grid must be at least 3x3")
    cdef Py_ssize_t mu = nu - 2, mv = nv - 2
    E_ = np.empty((mu, mv))
    F_ = np.empty((mu, mv))
    G_ = np.empty((mu, mv))
    L_ = np.empty((mu, mv))
    M_ = np.empty((mu, mv))
    N_ = np.empty((mu, mv))
    cdef double[:, ::1] E = E_, F = F_, G = G_, L = L_, M = M_, N = N_
    cdef double du[3]
    cdef double dv[3]
    cdef double duu[3]
    cdef double duv[3]
    cdef double dvv[3]
    cdef double a, b, inv_det
    cdef double i2hu = 1.0 / (2.0 * hu), i2hv = 1.0 / (2.0 * hv)
    cdef double ihu2 = 1.0 / (hu * hu), ihv2 = 1.0 / (hv * hv)
    cdef double i4huhv = 1.0 / (4.0 * hu * hv)
    cdef Py_ssize_t i, j, k
    with nogil:
        for i in range(1, nu - 1):
            for j in range(1, nv - 1):
                for k in range(3):
                    du[k] = (P[i + 1, j, k] - P[i - 1, j, k]) * i2hu
                    dv[k] = (P[i, j + 1, k] - P[i, j - 1, k]) * i2hv
                    duu[k] = (P[i + 1, j, k] - 2.0 * P[i, j, k] + P[i - 1, j, k]) * ihu2
                    dvv[k] = (P[i, j + 1, k] - 2.0 * P[i, j, k] + P[i, j - 1, k]) * ihv2
                    duv[k] = (P[i + 1, j + 1, k] - P[i + 1, j - 1, k]
                              - P[i - 1, j + 1, k] + P[i - 1, j - 1, k]) * i4huhv
                E[i - 1, j - 1] = du[0] * du[0] + du[1] * du[1]
                F[i - 1, j - 1] = du[0] * dv[0] + du[1] * dv[1]
                G[i - 1, j - 1] = dv[0] * dv[0] + dv[1] * dv[1]
                inv_det = 1.0 / (du[0] * dv[1] - dv[0] * du[1])
                _solve_tangential(du[0], du[1], dv[0], dv[1], duu[0], duu[1], inv_det, &a, &b)
                L[i - 1, j - 1] = duu[2] - a * du[2] - b * dv[2]
                _solve_tangential(du[0], du[1], dv[0], dv[1], duv[0], duv[1], inv_det, &a, &b)
                M[i - 1, j - 1] = duv[2] - a * du[2] - b * dv[2]
                _solve_tangential(du[0], du[1], dv[0], dv[1], dvv[0], dvv[1], inv_det, &a, &b)
                N[i - 1, j - 1] = dvv[2] - a * du[2] - b * dv[2]
    return E_, F_, G_, L_, M_, N_
