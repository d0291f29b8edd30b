"""Adaptive Simpson quadrature with Richardson correction."""

from __future__ import annotations

import math

DEFAULT_TOL = 1e-12
DEFAULT_MAX_DEPTH = 40


def adaptive_simpson(f, a: float, b: float, tol: float = DEFAULT_TOL,
                     max_depth: int = DEFAULT_MAX_DEPTH) -> float:
    """Integrate a scalar function over ``[a, b]`` to absolute tolerance ``tol``.

    Intervals are bisected until the two-panel Simpson estimate agrees with the
    one-panel estimate to ``15 tol`` (the usual Lyness criterion), or until
    ``max_depth`` bisections. ``b < a`` gives the negated integral.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    result = _recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
    if not math.isfinite(result):
        raise ArithmeticError(f"non-finite integral over [{a}, {b}]")
    return result


def _recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    # explicit stack keeps deep bisection off the interpreter recursion limit
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, depth)]
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol or m <= a or m >= b:
            total += left + right + delta / 15.0
        else:
            stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))
            stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth - 1))
    return total


def cumulative_simpson(f, nodes, tol: float = DEFAULT_TOL) -> list[float]:
    """Integrals of ``f`` from ``nodes[0]`` to every node, panel by panel."""
    out = [0.0]
    acc = 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        acc += adaptive_simpson(f, lo, hi, tol)
        out.append(acc)
    return out
