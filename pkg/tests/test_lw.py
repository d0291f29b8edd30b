import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from isoweingarten import lw
from isoweingarten.errors import DomainError, OutOfScopeError, SingularBranchError
from isoweingarten.quadrature import adaptive_simpson
from isoweingarten.rotational import Profile, rotational_curvatures


@pytest.mark.parametrize("m0, n0, tags", [
    (1.0, 0.0, {"I"}),
    (0.5, -0.25, {"II"}),
    (1.0, 3.0, {"III"}),
    (1.0, -5.0, {"III-bounded"}),
    (0.1, -0.01, {"II"}),
    (-2.0, 0.0, {"I"}),
])
def test_classify(m0, n0, tags):
    assert lw.classify(m0, n0) == tags


def test_classify_out_of_scope():
    with pytest.raises(OutOfScopeError):
        lw.classify(0.0, 1.0)
    assert lw.classification_notes(1.0, -5.0)


def test_case_i_slope_and_residual():
    p = lw.profile_case_i(1.0, 1.0, "plus")
    assert p.dg(1.0) == pytest.approx(1 + math.sqrt(2), abs=1e-15)
    u = p.grid(1000)
    # g''(g' - u) - g' = (1 + u/sqrt(1+u^2)) sqrt(1+u^2) - (u + sqrt(1+u^2)) = 0
    assert np.max(np.abs(lw.ode_residual(p, 1.0, 0.0, u))) <= 1e-12


def test_case_i_antiderivative_oracle():
    p = lw.profile_case_i(1.0, 1.0, "plus", u_range=(0.5, 3.0))
    f = lambda x: float(p.dg(x))
    closed = float(p.g(2.0) - p.g(1.0))
    assert closed == pytest.approx(adaptive_simpson(f, 1.0, 2.0), abs=1e-10)
    ref, _ = integrate.quad(f, 1.0, 2.0, epsabs=1e-13, epsrel=1e-13)
    assert closed == pytest.approx(ref, abs=1e-10)


def test_case_i_domain():
    p = lw.profile_case_i(2.0, -1.0)
    assert p.u_lo > 0.5 and p.u_lo - 0.5 < 1e-5
    with pytest.raises(DomainError, match="C = 0"):
        lw.profile_case_i(1.0, 0.0)
    with pytest.raises(DomainError, match="empty domain"):
        lw.profile_case_i(1.0, 1.0, u_range=(2.0, 1.0))
    with pytest.raises(OutOfScopeError):
        lw.profile_case_i(0.0, 1.0)


def test_case_ii():
    p = lw.profile_case_ii(0.5, 0.0)
    assert rotational_curvatures(p, 1.7) == (0.25, 1.0)
    q = lw.profile_case_ii(0.5, 7.0)
    assert q.g(1.0) - p.g(1.0) == 7.0
    assert rotational_curvatures(q, 1.7) == (0.25, 1.0)
    u = p.grid(1000)
    assert np.all(lw.ode_residual(p, 0.5, -0.25, u) == 0.0)


def test_case_iii_examples():
    p = lw.profile_case_iii(1.0, 3.0, -1.0, "plus")
    assert 0.5 < p.u_lo < 0.5 + 1e-5
    assert p.dg(1.0) == pytest.approx(1 + math.sqrt(3), abs=1e-15)
    u = p.grid(1000)
    assert np.max(np.abs(lw.ode_residual(p, 1.0, 3.0, u))) <= 1e-10


def _antiderivative_spread(p, n=60):
    nodes = np.linspace(p.u_lo, p.u_hi, n)
    f = lambda x: float(p.dg(x))
    quad = np.cumsum([0.0] + [adaptive_simpson(f, a, b) for a, b in zip(nodes[:-1], nodes[1:])])
    diff = np.asarray(p.g(nodes)) - quad
    return float(np.ptp(diff))


def test_case_iii_antiderivative_oracle():
    p = lw.profile_case_iii(1.0, 3.0, -1.0, "plus")
    assert _antiderivative_spread(p) <= 1e-9


def test_printed_case_iii_coefficient_fails_oracle():
    # the coefficient C / (m0^2 + n0) in front of the log does not integrate g'
    # (a = 4 would hide the defect: there C / a equals C / (2 sqrt(a)))
    m0, n0, C = 1.0, 1.0, -1.0
    a = m0 * m0 + n0
    p = lw.profile_case_iii(m0, n0, C, "plus")

    def printed(u):
        S = np.sqrt(C + a * u * u)
        return 0.5 * m0 * u * u + 0.5 * u * S + C / a * np.log(np.abs(2 * (a * u + math.sqrt(a) * S)))

    wrong = Profile(printed, p.dg, p.d2g, p.u_lo, p.u_hi)
    assert _antiderivative_spread(wrong) > 1e-3


def test_case_iii_bounded_uses_quadrature():
    m0, n0, C = 1.0, -1.5, 4.0
    a = m0 * m0 + n0
    p = lw.profile_case_iii(m0, n0, C, "plus")
    assert p.u_hi < math.sqrt(C / -a)
    u = np.linspace(p.u_lo, p.u_hi, 25)
    # independent elementary antiderivative of sqrt(C - |a| u^2)
    b = -a

    def arcsin_form(x):
        S = np.sqrt(C - b * x * x)
        return 0.5 * m0 * x * x + 0.5 * x * S + C / (2 * math.sqrt(b)) * np.arcsin(math.sqrt(b / C) * x)

    diff = np.asarray(p.g(u)) - arcsin_form(u)
    assert np.ptp(diff) <= 1e-9
    assert p.g(p.u_lo) == 0.0
    assert np.max(np.abs(lw.ode_residual(p, m0, n0, p.grid(1000)))) <= 1e-8


def test_case_iii_errors():
    with pytest.raises(DomainError, match="empty domain"):
        lw.profile_case_iii(1.0, -5.0, -1.0)
    with pytest.raises(DomainError):
        lw.profile_case_iii(1.0, 0.0, 1.0)


def test_case_iii_clips_zero_slope():
    # branch minus with m0 > 0: g' = u - sqrt(C + a u^2) vanishes where C + n0 u^2 = 0
    m0, n0, C = 1.0, -0.5, 1.0
    p = lw.profile_case_iii(m0, n0, C, "minus")
    z = math.sqrt(-C / n0)
    assert not (p.u_lo <= z <= p.u_hi)
    s = np.sign(p.dg(p.grid(500)))
    assert np.all(s == s[0])


def test_degenerate_slope_family():
    # n0 = -m0^2 with C > 0: g' = m0 u + sqrt(C) also satisfies K = m0 H + n0
    m0 = 0.5
    p = lw.profile_case_iii(m0, -m0 * m0, 0.09, "plus")
    u = p.grid(200)
    assert np.max(np.abs(lw.lw_defect(p, m0, -m0 * m0, u))) <= 1e-12


def test_residual_direct_arithmetic():
    p = Profile.from_polynomial([0, 0, 0, 1], 0.5, 2.0)
    assert lw.ode_residual(p, 1.0, 0.0, 1.0) == 9.0


@pytest.mark.parametrize("m0", [2.0, -1.0, 0.5])
@pytest.mark.parametrize("C", [0.25, -4.0])
def test_branch_symmetry(m0, C):
    for br in ("plus", "minus"):
        p = lw.profile_case_i(m0, C, br)
        assert np.max(np.abs(lw.ode_residual(p, m0, 0.0, p.grid(1000)))) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(-5, 5), st.floats(-4, 4), st.sampled_from(["plus", "minus"]))
def test_residual_and_lw_identity_property(m0, n0, C, br):
    assume(abs(m0) > 0.1 and abs(C) > 0.05)
    assume(abs(m0 * m0 + n0) > 0.05)
    try:
        p = lw.profile_case_i(m0, C, br) if n0 == 0 else lw.profile_case_iii(m0, n0, C, br)
    except DomainError:
        return
    u = p.grid(300)
    scale = np.maximum(1.0, np.abs(p.d2g(u) * (p.dg(u) - m0 * u)))
    assert np.max(np.abs(lw.ode_residual(p, m0, n0, u)) / scale) <= 1e-8
    K, H = rotational_curvatures(p, u)
    assert np.max(np.abs(K - m0 * H - n0) / np.maximum(1.0, np.abs(K))) <= 1e-8


def test_lw_case():
    c = lw.lw_case(0.5, -0.25)
    assert c.tag == "II" and c.interval == (0.1, 3.0)
    assert lw.lw_case(1.0, 0.0, C=-1.0).tag == "I"
    assert lw.lw_case(1.0, -5.0, C=1.0).tag == "III-bounded"


def test_integrate_matches_case_i():
    p = lw.profile_case_i(1.0, 1.0, u_range=(1.0, 3.0))
    ip = lw.integrate_profile(1.0, 0.0, 1.0, float(p.g(1.0)), 1 + math.sqrt(2), 3.0, 1e-3)
    assert ip.kind == "integrated" and not ip.halted
    us = np.linspace(1.0, 3.0, 301)
    assert np.max(np.abs(ip.g(us) - p.g(us))) <= 1e-6
    assert np.max(np.abs(ip.d2g(us) - p.d2g(us))) <= 1e-6


def test_integrate_backwards():
    p = lw.profile_case_i(1.0, 1.0, u_range=(1.0, 3.0))
    ip = lw.integrate_profile(1.0, 0.0, 3.0, float(p.g(3.0)), float(p.dg(3.0)), 1.0, 1e-3)
    assert (ip.u_lo, ip.u_hi) == (1.0, 3.0)
    assert abs(ip.g(1.0) - p.g(1.0)) <= 1e-6


def test_integrate_singular_start():
    with pytest.raises(SingularBranchError):
        lw.integrate_profile(0.5, -0.25, 1.0, 0.25, 0.5, 3.0, 1e-3)


def test_integrate_halts_near_locus(caplog):
    # case I minus branch with C < 0 runs into g' = m0 u when integrated towards the domain edge
    p = lw.profile_case_i(1.0, -1.0, "minus", u_range=(1.0, 2.0))
    ip = lw.integrate_profile(1.0, 0.0, 1.5, float(p.g(1.5)), float(p.dg(1.5)), 0.5, 1e-3)
    assert ip.halted
    assert 1.0 <= ip.u_lo < 1.01


def test_integrate_convergence_order():
    p = lw.profile_case_i(1.0, 1.0, u_range=(1.0, 3.0))
    g0, g0p = float(p.g(1.0)), float(p.dg(1.0))
    errs = []
    for step in (0.1, 0.05):
        ip = lw.integrate_profile(1.0, 0.0, 1.0, g0, g0p, 3.0, step)
        errs.append(abs(ip.nodes[1][-1] - float(p.g(3.0))))
    assert 12.0 <= errs[0] / errs[1] <= 20.0


@pytest.mark.parametrize("ratio", [2.0, -2.0, 1.0, -1.0, 0.5, -0.5])
def test_hk_ratio_profile(ratio):
    p = lw.hk_ratio_profile(ratio)
    u = p.grid(500)
    K, _ = rotational_curvatures(p, u)
    mask = np.abs(K) >= 1e-6
    assert np.max(np.abs(lw.hk_ratio(p, u)[mask] - ratio)) <= 1e-9
    with pytest.raises(DomainError):
        lw.hk_ratio_profile(0.0)


def test_printed_amalgamatic_example_ratio():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40

    def g(u):
        r = mpmath.sqrt(1 + u * u)
        return u * u + u * r + mpmath.log(abs(2 * (u + r)))

    def ratio(u):
        u = mpmath.mpf(u)
        g1, g2 = mpmath.diff(g, u, 1), mpmath.diff(g, u, 2)
        return float((g1 / u + g2) / (g1 * g2 / u))

    vals = np.array([ratio(x) for x in np.linspace(0.25, 3.0, 23)])
    assert np.std(vals) <= 1e-9
    assert vals.mean() == pytest.approx(0.5, abs=1e-12)
    # the same curve is the n0 = 0 family with m0 = 2, C = 4
    p = lw.profile_case_i(2.0, 4.0, u_range=(0.25, 3.0))
    assert np.allclose(lw.hk_ratio(p, np.linspace(0.25, 3.0, 23)), vals, atol=1e-12)
