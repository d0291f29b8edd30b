"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lw
from .errors import IsoGeometryError
from .iso import ParabolicSphere, parabolic_sphere_surface
from .mesh import DEFAULT_PRECISION, tessellate, write_curvature_csv, write_obj
from .rotational import make_rotational, read_profile_csv
from .surface import CurvatureConvention, ParamSurface, curvature_sample, surface_curvatures
from .verify import DEFAULT_TOLERANCES, SUITES, run_suite

DEFAULT_U_RANGE = (0.1, 3.0)
DEFAULT_V_RANGE = (0.0, 2.0 * math.pi)
DEFAULT_SAMPLES = (65, 129)

_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(pi)?$")


class UsageError(Exception):
    pass


def parse_number(text: str) -> float:
    """Plain decimal, or a decimal followed by ``pi`` (``2pi``, ``-0.5pi``, ``pi``)."""
    t = text.strip()
    m = _NUMBER.match(t)
    if not t or not m or (m.group(1) is None and m.group(2) is None):
        raise UsageError(f"not a number: {text!r}")
    coef, pi = m.group(1), m.group(2)
    if pi:
        if coef in (None, "+", "-"):
            return -math.pi if coef == "-" else math.pi
        return float(coef) * math.pi
    return float(coef)


def parse_range(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"range must be 'lo,hi', got {text!r}")
    return parse_number(parts[0]), parse_number(parts[1])


def parse_samples(text: str):
    parts = re.split(r"[x,]", text)
    if len(parts) != 2:
        raise UsageError(f"samples must be 'NUxNV', got {text!r}")
    try:
        nu, nv = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"samples must be integers, got {text!r}") from None
    if nu < 2 or nv < 2:
        raise UsageError("samples must be at least 2x2")
    return nu, nv


@dataclass
class Built:
    surface: ParamSurface
    u_range: tuple
    tag: str
    m0: float | None = None
    n0: float | None = None
    profile: object = None


def _params(body: str, count: int, kind: str):
    parts = [p.strip() for p in body.split(",")] if body else []
    if len(parts) != count:
        raise UsageError(f"{kind} expects {count} parameters, got {len(parts)}")
    return parts


def build_surface(spec: str, u_range=None) -> Built:
    """Turn a ``kind:params`` surface spec into a chart plus its LW data."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise UsageError(f"surface spec must be 'kind:params', got {spec!r}")
    if kind == "case-i":
        m0, C, br = _params(body, 3, kind)
        m0, C = parse_number(m0), parse_number(C)
        p = lw.profile_case_i(m0, C, br, u_range)
        return Built(make_rotational(p).surface, (p.u_lo, p.u_hi), "I", m0, 0.0, p)
    if kind == "case-ii":
        m0, c3 = map(parse_number, _params(body, 2, kind))
        p = lw.profile_case_ii(m0, c3, u_range)
        return Built(make_rotational(p).surface, (p.u_lo, p.u_hi), "II", m0, -m0 * m0, p)
    if kind == "case-iii":
        m0, n0, C, br = _params(body, 4, kind)
        m0, n0, C = parse_number(m0), parse_number(n0), parse_number(C)
        tags = lw.classify(m0, n0)
        p = lw.profile_case_iii(m0, n0, C, br, u_range)
        tag = next(iter(sorted(tags))) if tags else "III"
        return Built(make_rotational(p).surface, (p.u_lo, p.u_hi), tag, m0, n0, p)
    if kind == "paraboloid":
        A, B, C, D = map(parse_number, _params(body, 4, kind))
        s = parabolic_sphere_surface(ParabolicSphere(A, B, C, D))
        return Built(s, u_range or DEFAULT_U_RANGE, "II", A, -A * A)
    if kind == "profile-file":
        if not body:
            raise UsageError("profile-file needs a path")
        if not Path(body).is_file():
            raise UsageError(f"profile file not found: {body}")
        p = read_profile_csv(body)
        if u_range is not None:
            lo, hi = max(u_range[0], p.u_lo), min(u_range[1], p.u_hi)
            if not lo < hi:
                raise lw.DomainError("empty domain: u-range misses the sampled interval")
            p = p.restricted(lo, hi)
        return Built(make_rotational(p).surface, (p.u_lo, p.u_hi), "sampled", profile=p)
    raise UsageError(f"unknown surface kind {kind!r}")


def _relation(m0, n0, convention):
    if CurvatureConvention(convention) is CurvatureConvention.HALF:
        m0 = 2.0 * m0
    return f"K=m0*H+n0 with m0={m0:.12g} n0={n0:.12g}"


def _fit_relation(mesh):
    A = np.column_stack([mesh.H, np.ones_like(mesh.H)])
    (m0, n0), *_ = np.linalg.lstsq(A, mesh.K, rcond=None)
    dev = float(np.max(np.abs(mesh.K - m0 * mesh.H - n0)))
    return float(m0), float(n0), dev


def cmd_generate(args, out=None):
    u_range = parse_range(args.u_range) if args.u_range else None
    v_range = parse_range(args.v_range) if args.v_range else DEFAULT_V_RANGE
    nu, nv = parse_samples(args.samples) if args.samples else DEFAULT_SAMPLES
    built = build_surface(args.spec, u_range)
    mesh = tessellate(built.surface, nu, nv, built.u_range, v_range, args.convention)
    fmt = args.format or ("csv" if str(args.out).endswith(".csv") else "obj")
    writer = write_curvature_csv if fmt == "csv" else write_obj
    data = writer(mesh, args.precision)
    Path(args.out).write_bytes(data)
    if built.m0 is not None:
        print(f"case {built.tag}: {_relation(built.m0, built.n0, args.convention)}", file=out)
    else:
        m0, n0, dev = _fit_relation(mesh)
        print(f"case sampled: least-squares K=m0*H+n0 with m0={m0:.12g} n0={n0:.12g} "
              f"max deviation {dev:.3e}", file=out)
    print(f"u-range [{built.u_range[0]:.12g}, {built.u_range[1]:.12g}]; "
          f"wrote {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles "
          f"as {fmt} to {args.out}", file=out)
    return 0


def cmd_classify(args, out=None):
    m0, n0 = parse_number(args.m0), parse_number(args.n0)
    tags = lw.classify(m0, n0)
    order = {t: k for k, t in enumerate(lw.CASE_TAGS)}
    print(" ".join(sorted(tags, key=order.get)) if tags else "(none)", file=out)
    for note in lw.classification_notes(m0, n0):
        print(f"  {note}", file=out)
    return 0


def cmd_curvature(args, out=None):
    u_range = parse_range(args.u_range) if args.u_range else None
    built = build_surface(args.spec, u_range)
    u, v = parse_number(args.u), parse_number(args.v)
    s = built.surface
    if built.profile is None:
        s = ParamSurface(s.point, s.d1, s.d2, domain=(built.u_range, DEFAULT_V_RANGE), name=s.name)
    if not s.contains(u, v):
        raise lw.DomainError(f"({u:g}, {v:g}) outside the domain {s.domain}")
    try:
        sample = curvature_sample(s, u, v, args.convention)
        jac = f"{sample.jac:.12g}"
        K, H = sample.K, sample.H
    except lw.DomainError:
        K, H = map(float, surface_curvatures(s, u, v, args.convention))
        jac = "n/a"
    print(f"K={K:.12g} H={H:.12g} jac={jac}", file=out)
    return 0


def cmd_verify(args, out=None):
    tolerances = {k: getattr(args, f"tol_{k}") for k in DEFAULT_TOLERANCES
                  if getattr(args, f"tol_{k}", None) is not None}
    checks = run_suite(args.suite, seed=args.seed, tolerances=tolerances)
    for c in checks:
        print(c.line(), file=out)
    ok = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed", file=out)
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isoweingarten",
                     description="Linear Weingarten rotational surfaces in isotropic 3-space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--spec", required=True,
                       help="case-i:m0,C,branch | case-ii:m0,c3 | case-iii:m0,n0,C,branch | "
                            "paraboloid:A,B,C,D | profile-file:path")
        p.add_argument("--u-range", help="lo,hi (pi suffix allowed)")
        p.add_argument("--convention", choices=[c.value for c in CurvatureConvention],
                       default="paper")

    g = sub.add_parser("generate", help="write a mesh or curvature CSV")
    common(g)
    g.add_argument("--v-range", help="lo,hi (default 0,2pi, right end open)")
    g.add_argument("--samples", help="NUxNV grid size (default 65x129)")
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=["obj", "csv"])
    g.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", help="case tags for K = m0 H + n0")
    c.add_argument("m0")
    c.add_argument("n0")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("curvature", help="K, H and the Weingarten Jacobian at a point")
    common(k)
    k.add_argument("u")
    k.add_argument("v")
    k.set_defaults(func=cmd_curvature)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=42)
    for name, default in DEFAULT_TOLERANCES.items():
        v.add_argument(f"--tol-{name}", type=float, default=None,
                       help=f"tolerance override (default {default:g})")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IsoGeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
