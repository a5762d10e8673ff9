"""Command-line front end.

Exit codes: 0 when every checked identity holds, 1 on a mismatch, 2 on a
bad specification (unknown polytope, malformed numbers, eps on a wall, ...).
Reports are JSON with every number written exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import decomposition as dec
from .em1d import (
    LambdaIsOne,
    SmoothnessTooLow,
    em_halfray,
    em_halfray_left,
    em_interval,
    em_line,
    em_sector_tensor,
    em_twisted_halfray,
    em_twisted_halfray_left,
    root_of_unity,
    spline_from_json,
)
from .empoly import (
    NonIntegralVertex,
    default_k,
    em_main_term,
)
from .exact import MultiPoly, from_json_number, parse_fraction, to_json_number
from .lattice import gamma_boundary, gamma_group, weighted_lattice_sum
from .polytope import BUILTINS, PolytopeError, builtin, load_polytope_json, polytope_to_json

VARIANTS = {"thm41": dec.TOWARD, "thm42": dec.AWAY, "lv": "lv", "bg": "bg"}


class SpecError(ValueError):
    pass


# --------------------------------------------------------------------------
# parsing

def _read_json_arg(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return json.loads(text)


def parse_polytope(text: str):
    if text in BUILTINS:
        return builtin(text), None
    if not os.path.exists(text):
        raise SpecError(f"{text!r} is neither a builtin ({', '.join(sorted(BUILTINS))}) nor a file")
    with open(text) as fh:
        return load_polytope_json(json.load(fh))


def parse_weights(text, P, from_file):
    if text is None:
        if from_file is not None:
            return from_file
        return [Fraction(1)] * P.n_facets
    text = text.strip()
    if text.startswith("[") or os.path.exists(text):
        items = [from_json_number(x) for x in _read_json_arg(text)]
    else:
        items = [_parse_scalar(x) for x in text.split(",")]
    if len(items) == 1:
        items = items * P.n_facets
    if len(items) != P.n_facets:
        raise SpecError(f"got {len(items)} weights for {P.n_facets} facets")
    return items


def _parse_scalar(text: str):
    text = text.strip()
    if text.startswith("exp:"):
        e = parse_fraction(text[4:])
        return root_of_unity(e.numerator, e.denominator)
    return parse_fraction(text)


def parse_point(text: str, d: int):
    coords = [parse_fraction(c) for c in text.split(",")]
    if len(coords) != d:
        raise SpecError(f"expected {d} coordinates, got {len(coords)}")
    return tuple(coords)


def parse_poly(text: str, d: int) -> MultiPoly:
    """A rational constant, "mono:a1,...,ad", or sparse JSON monomials."""
    text = text.strip()
    if text.startswith("mono:"):
        e = [int(x) for x in text[5:].split(",")]
        if len(e) != d:
            raise SpecError(f"monomial needs {d} exponents")
        return MultiPoly.monomial(e, 1)
    if text.startswith("[") or os.path.exists(text):
        p = MultiPoly.from_json(_read_json_arg(text), nvars=d)
        return p
    return MultiPoly.constant(d, parse_fraction(text))


def choose_epsilon(P, text, variant, seed):
    """Returns (eps, xi); xi is only set for the Lawrence-Varchenko variant."""
    if variant == "bg":
        return None, None
    text = text or "auto"
    if text.startswith("auto"):
        kind = text.split(":", 1)[1] if ":" in text else ("vertex-only" if variant == "lv" else "interior")
        try:
            eps = dec.find_epsilon(P, kind, seed)
        except (RuntimeError, ValueError) as e:
            raise SpecError(str(e)) from None
    else:
        eps = parse_point(text, P.d)
    if variant == "lv":
        if text.startswith("auto"):
            v0 = dec.furthest_vertex(P, eps)
            return eps, tuple(a - b for a, b in zip(eps, v0))
        return None, eps
    return eps, None


# --------------------------------------------------------------------------
# output

def emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pt(x):
    return [str(Fraction(c)) for c in x]


# --------------------------------------------------------------------------
# commands

def cmd_verify_decomposition(args) -> int:
    P, wfile = parse_polytope(args.polytope)
    w = parse_weights(args.weights, P, wfile)
    variant = VARIANTS[args.variant]
    eps, xi = choose_epsilon(P, args.epsilon, variant, args.seed)
    if variant in (dec.TOWARD, dec.AWAY):
        check = dec.in_paradan_region(P, eps)
        if not check:
            emit({"error": "epsilon lies on a wall", "epsilon": _pt(eps), "wall": check.witness.to_json()}, args.out)
            return 2
    points = dec.sample_points(P, seed=args.seed)
    try:
        report = dec.verify_decomposition(P, w, xi if variant == "lv" else eps, variant, points=points)
    except dec.NonGenericXi as e:
        raise SpecError(str(e)) from None
    out = report.to_json()
    out["polytope"] = polytope_to_json(P, weights=w)
    if xi is not None:
        out["xi"] = _pt(xi)
    if eps is not None:
        out["epsilon"] = _pt(eps)
    emit(out, args.out)
    return 0 if report.ok else 1


def cmd_em_poly(args) -> int:
    P, wfile = parse_polytope(args.polytope)
    w = parse_weights(args.weights, P, wfile)
    p = parse_poly(args.poly or "1", P.d)
    k0 = default_k(P, p)
    k = args.k if args.k is not None else k0
    if k < 1:
        raise SpecError("k must be at least 1")
    if k < k0:
        print(f"warning: k = {k} is below deg p + d + 1 = {k0}; the formula may not be exact", file=sys.stderr)
    try:
        value, parts = em_main_term(P, w, p, k, breakdown=True)
    except NonIntegralVertex as e:
        raise SpecError(str(e)) from None
    oracle = weighted_lattice_sum(P, w, p)
    ok = value == oracle
    emit({
        "polytope": polytope_to_json(P, weights=w),
        "poly": p.to_json(),
        "k": k,
        "k_default": k0,
        "value": to_json_number(value),
        "oracle": to_json_number(oracle),
        "ok": ok,
        "terms": [
            {"face": sorted(op.face.facets), "gamma": [str(b) for b in op.gamma], "value": to_json_number(v)}
            for op, v in parts
        ],
    }, args.out)
    return 0 if ok else 1


def cmd_em_1d(args) -> int:
    f = spline_from_json(args.spline if args.spline.startswith("bspline:") else _read_json_arg(args.spline))
    q = _parse_scalar(args.q)
    ident = args.identity
    if ident in ("twisted", "twisted-left"):
        if args.lam is None:
            raise SpecError("--lambda is required for twisted identities")
        lam = _parse_scalar(args.lam)
        k = args.k if args.k is not None else 2
        fn = em_twisted_halfray if ident == "twisted" else em_twisted_halfray_left
        rep = fn(f, lam, q, k)
    else:
        m = args.m if args.m is not None else 2
        if ident == "interval":
            qb = _parse_scalar(args.qb) if args.qb is not None else q
            rep = em_interval(f, args.a, args.b, q, qb, m)
        elif ident == "halfray":
            rep = em_halfray(f, args.a, q, m)
        elif ident == "halfray-left":
            rep = em_halfray_left(f, args.a, q, m)
        elif ident == "line":
            rep = em_line(f, m)
        elif ident == "sector":
            d = args.dim
            J = [int(x) for x in args.sector.split(",")] if args.sector else []
            rep = em_sector_tensor(J, [f.shifted(-i) for i in range(d)], {j: q for j in J}, m)
        else:
            raise SpecError(f"unknown identity {ident!r}")
    out = rep.to_json()
    out["spline"] = f.to_json()
    emit(out, args.out)
    return 0 if rep.ok else 1


def cmd_gamma(args) -> int:
    P, _ = parse_polytope(args.polytope)
    faces = []
    for F in P.face_list:
        g = gamma_group(P, F)
        faces.append({
            "face": sorted(F.facets),
            "order": g.order,
            "representatives": [[str(b) for b in r] for r in g.elements],
            "boundary": [[str(b) for b in r] for r in gamma_boundary(g)],
        })
    emit({"polytope": polytope_to_json(P, vrep=True), "faces": faces}, args.out)
    return 0


def cmd_sketch(args) -> int:
    P, _ = parse_polytope(args.polytope)
    if P.d != 2:
        print(f"error: sketches need d = 2, got d = {P.d}", file=sys.stderr)
        return 2
    variant = VARIANTS[args.variant]
    if variant not in (dec.TOWARD, dec.AWAY, "bg"):
        raise SpecError("sketch supports thm41, thm42 and bg")
    eps, _ = choose_epsilon(P, args.epsilon, variant, args.seed)
    if eps is not None:
        check = dec.in_paradan_region(P, eps)
        if not check:
            emit({"error": "epsilon lies on a wall", "epsilon": _pt(eps), "wall": check.witness.to_json()}, None)
            return 2
        terms = dec.decomposition_terms(P, eps, variant)
    else:
        terms = dec.brianchon_gram_terms(P)
    from .sketch import render_svg

    svg = render_svg(P, eps, terms)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polytope-em", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, eps=True):
        p.add_argument("--polytope", default="square", help="builtin name or JSON file")
        p.add_argument("--weights", help="one value for all facets, a comma list, or JSON")
        if eps:
            p.add_argument("--epsilon", default="auto",
                           help="comma coordinates, or auto[:interior|exterior|vertex-only]")
            p.add_argument("--variant", choices=sorted(VARIANTS), default="thm41")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("verify-decomposition", help="check a weighted cone decomposition pointwise")
    common(p)
    p.set_defaults(func=cmd_verify_decomposition)

    p = sub.add_parser("em-poly", help="exact weighted lattice sum of a polynomial")
    common(p, eps=False)
    p.add_argument("--poly", help='constant, "mono:a,b,..", or JSON monomial list')
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_em_poly)

    p = sub.add_parser("em-1d", help="one-dimensional identities with remainder")
    p.add_argument("--identity", default="interval",
                   choices=["interval", "halfray", "halfray-left", "line", "twisted", "twisted-left", "sector"])
    p.add_argument("--spline", default="bspline:4", help='"bspline:n[:shift[:scale]]" or JSON')
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", help='"-1" or "exp:j/K" for e^(2 pi i j/K)')
    p.add_argument("--q", default="1/2")
    p.add_argument("--qb")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--dim", type=int, default=2, help="sector dimension")
    p.add_argument("--sector", default="0", help="comma list of sector axes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_em_1d)

    p = sub.add_parser("gamma", help="finite groups of every face cone")
    p.add_argument("--polytope", default="T2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("sketch", help="SVG picture of a planar decomposition")
    common(p)
    p.set_defaults(func=cmd_sketch)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, PolytopeError, SmoothnessTooLow, LambdaIsOne, KeyError, ValueError,
            json.JSONDecodeError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
