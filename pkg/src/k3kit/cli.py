"""Command-line front end.

Commands: lattice, dform, overlattices, embed, weierstrass, cone,
fibration.  Inputs are small JSON files (strict: unknown keys are
rejected); reports are emitted as text or as JSON under the stable
schema tag "k3kit/1" with rationals serialized as "p/q" strings.

Exit codes: 0 success, 2 parse/validation error, 3 engine error
(non-minimal model, group too large, unstable chamber, ...).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import cone, overlattice
from . import lattice as lat
from .intmat import invariant_factors
from . import weierstrass as wst
from .errors import K3KitError, ParseError, ValidationError
from .exactpoly import BinaryForm

SCHEMA = "k3kit/1"

_NAMED_TERM = re.compile(
    r"^(?:(\d+)\s*)?"                # multiplicity
    r"(?:\(\s*(-?)\s*([A-Za-z]\d*)\s*\)"  # (Name) or (-Name)
    r"|(-?)\s*([A-Za-z]\d*)"              # bare Name or -Name
    r"|<\s*(-?\d+)\s*>)$"                 # <m> scalar
)


def parse_named_lattice(expr: str) -> lat.IntegerLattice:
    """Tiny sum grammar, e.g. "H+2(-E8)+<-4>"."""
    blocks = []
    for raw in expr.split("+"):
        term = raw.strip()
        m = _NAMED_TERM.match(term)
        if not m:
            raise ParseError(f"cannot parse lattice term {term!r}")
        mult = int(m.group(1) or 1)
        if m.group(6) is not None:
            block = lat.make_named("scalar", int(m.group(6)))
        else:
            neg = (m.group(2) or m.group(4)) == "-"
            name = (m.group(3) or m.group(5)).upper()
            if name in ("H", "K3", "E6", "E7", "E8"):
                block = lat.make_named(name, negate=neg)
            elif name[0] in ("A", "D") and name[1:].isdigit():
                block = lat.make_named(name[0], int(name[1:]), negate=neg)
            else:
                raise ParseError(f"unknown lattice name {name!r}")
        blocks.extend([block] * mult)
    if not blocks:
        raise ParseError("empty lattice expression")
    return lat.direct_sum(*blocks)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}:{err.lineno}:{err.colno}: {err.msg}")
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return data


def _check_keys(data: dict, allowed: set, path: str):
    extra = set(data) - allowed
    if extra:
        raise ParseError(f"{path}: unknown keys {sorted(extra)}")


def parse_lattice_input(data: dict, path: str) -> lat.IntegerLattice:
    _check_keys(data, {"gram", "named", "trilinear", "k"}, path)
    given = [k for k in ("gram", "named", "trilinear") if k in data]
    if len(given) != 1:
        raise ParseError(f"{path}: give exactly one of gram / named / trilinear")
    try:
        if "gram" in data:
            return lat.IntegerLattice(tuple(tuple(row) for row in data["gram"]))
        if "named" in data:
            return parse_named_lattice(data["named"])
        if "k" not in data:
            raise ParseError(f"{path}: trilinear input needs a 'k' vector")
        return lat.gram_from_trilinear(data["trilinear"], data["k"])
    except K3KitError:
        raise
    except (TypeError, ValueError) as err:
        raise ValidationError(f"{path}: {err}")


def _parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {s!r}")
    raise ParseError(f"bad rational {s!r} (use 'p/q' strings)")


def parse_weierstrass_input(data: dict, path: str) -> wst.WeierstrassModel:
    _check_keys(data, {"d", "alpha", "beta"}, path)
    for key in ("d", "alpha", "beta"):
        if key not in data:
            raise ParseError(f"{path}: missing key {key!r}")
    d = data["d"]
    if not isinstance(d, int) or d < 1:
        raise ValidationError(f"{path}: d must be a positive integer")
    alpha = BinaryForm.from_coeffs([_parse_rational(c) for c in data["alpha"]])
    beta = BinaryForm.from_coeffs([_parse_rational(c) for c in data["beta"]])
    try:
        return wst.WeierstrassModel(d, alpha, beta)
    except K3KitError as err:
        raise ValidationError(f"{path}: {err}")


# --- serialization ---------------------------------------------------------


def _ser(value):
    """JSON-safe rendering; Fractions become 'p/q' strings."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, (list, tuple)):
        return [_ser(v) for v in value]
    if isinstance(value, dict):
        return {k: _ser(v) for k, v in value.items()}
    return value


def _lattice_summary(L: lat.IntegerLattice) -> dict:
    sig = lat.signature(L)
    out = {
        "rank": L.rank,
        "signature": [sig.positive, sig.negative],
        "disc": lat.discriminant(L),
        "even": lat.is_even(L),
    }
    return out


def _ray_json(ray: cone.BoundaryRay):
    if ray.kind == "rational":
        return {"kind": "rational", "coords": list(ray.coords)}
    return {"kind": "quadratic", "p": ray.p, "q": ray.q, "r": ray.r, "D": ray.D}


# --- command implementations -----------------------------------------------


def cmd_lattice(args) -> dict:
    L = parse_lattice_input(_load_json(args.input), args.input)
    out = {"gram": [list(r) for r in L.gram]}
    out.update(_lattice_summary(L))
    out["polarization_admissible"] = lat.polarization_admissible(L)
    if L.rank <= 20:
        out["period_domain_dimension"] = lat.period_domain_dimension(L)
    if lat.is_even(L):
        out["nikulin_unique"] = lat.nikulin_unique(L)
    return out


def cmd_dform(args) -> dict:
    L = parse_lattice_input(_load_json(args.input), args.input)
    A = lat.discriminant_form(L)
    return {
        "invariant_factors": list(A.invariant_factors),
        "order": A.order,
        "q_on_generators": _ser(list(A.q_values)),
        "b_matrix": _ser([list(row) for row in A.b_matrix]),
        "generator_lifts": _ser([list(l) for l in A.generator_lifts]),
    }


def cmd_overlattices(args) -> dict:
    L = parse_lattice_input(_load_json(args.input), args.input)
    entries = []
    for G, over, dform in overlattice.all_overlattices(L, args.enum_bound):
        entry = {
            "index": G.order,
            "subgroup_generators": [list(g) for g in G.generators],
            "gram": [list(r) for r in over.gram],
        }
        entry.update(_lattice_summary(over))
        entry["dform_invariant_factors"] = list(dform.invariant_factors)
        entry["dform_q_on_generators"] = _ser(list(dform.q_values))
        entry["nikulin_unique"] = lat.nikulin_unique(over)
        entries.append(entry)
    return {"count": len(entries), "overlattices": entries}


def cmd_embed(args) -> dict:
    data = _load_json(args.input)
    _check_keys(data, {"gram", "named", "embedding", "sub"}, args.input)
    if "embedding" not in data:
        raise ParseError(f"{args.input}: missing 'embedding' matrix")
    M = parse_lattice_input(
        {k: data[k] for k in ("gram", "named") if k in data}, args.input
    )
    sub = None
    if "sub" in data:
        sub = parse_lattice_input(data["sub"], args.input)
    primitive = lat.embedding_is_primitive(M, data["embedding"], sub)
    return {
        "primitive": primitive,
        "invariant_factors": list(invariant_factors(data["embedding"])),
    }


def cmd_weierstrass(args) -> dict:
    m = parse_weierstrass_input(_load_json(args.input), args.input)
    report = wst.surface_report(m, args.enum_bound)
    fibers = [
        {
            "place": _ser(list(r.place.form.coeffs)),
            "place_degree": r.place.form.degree,
            "count": r.count,
            "type": r.type.label,
            "nu": [
                "inf" if r.nu_alpha is None else r.nu_alpha,
                "inf" if r.nu_beta is None else r.nu_beta,
                r.nu_delta,
            ],
            "euler": r.euler,
            "root": r.type.root_name,
            "singularity": r.type.singularity,
        }
        for r in report.fibers
    ]
    tl = {"gram": [list(r) for r in report.trivial_lattice.gram]}
    tl.update(_lattice_summary(report.trivial_lattice))
    return {
        "fibers": fibers,
        "euler_total": report.euler_total,
        "trivial_lattice": tl,
        "torsion_candidates": [list(t) for t in report.torsion_candidates],
        "polarization_candidates": [
            {
                "torsion": list(c.torsion),
                "rank": c.rank,
                "signature": list(c.signature),
                "disc": c.disc,
                "q_multiset": _ser(list(c.q_multiset)),
            }
            for c in report.polarization_candidates
        ],
    }


def _parse_ample(text: str):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"bad --ample value {text!r} (expected a,b)")
    if len(parts) != 2:
        raise ParseError("--ample needs exactly two integers a,b")
    return tuple(parts)


def cmd_cone(args) -> dict:
    L = parse_lattice_input(_load_json(args.input), args.input)
    if args.ample is None:
        raise ParseError("cone command needs --ample a,b")
    h = _parse_ample(args.ample)
    report = cone.ample_chamber(L, h, args.height_bound)
    return {
        "ample": list(h),
        "walls": [list(w) for w in report.walls],
        "rays": [_ray_json(r) for r in report.rays],
        "rational_polyhedral": report.rational_polyhedral,
        "weyl_trivial": report.weyl_trivial,
        "aut_finiteness": "finite" if report.rational_polyhedral else "infinite",
    }


def cmd_fibration(args) -> dict:
    L = parse_lattice_input(_load_json(args.input), args.input)
    verdict = cone.genus_one_fibration_exists(L)
    out = {
        "genus_one": verdict.verdict in ("yes", "yes_no_witness"),
        "verdict": verdict.verdict,
        "witness": list(verdict.witness) if verdict.witness else None,
    }
    if L.rank == 2:
        out["elliptic_with_section"] = cone.admits_elliptic_section(L)
    return out


_COMMANDS = {
    "lattice": cmd_lattice,
    "dform": cmd_dform,
    "overlattices": cmd_overlattices,
    "embed": cmd_embed,
    "weierstrass": cmd_weierstrass,
    "cone": cmd_cone,
    "fibration": cmd_fibration,
}


def _render_text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _is_nested(v):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_render_text_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if _is_nested(v):
                lines.append(f"{pad}-")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_render_text_scalar(v)}")
    else:
        lines.append(f"{pad}{_render_text_scalar(obj)}")
    return "\n".join(lines)


def _is_nested(v) -> bool:
    if isinstance(v, dict):
        return bool(v)
    if isinstance(v, list):
        return any(isinstance(x, (dict, list)) for x in v)
    return False


def _render_text_scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_render_text_scalar(x) for x in v) + "]"
    return json.dumps(v) if isinstance(v, str) else str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="k3kit",
        description="Exact lattice invariants of elliptically fibred K3 surfaces",
    )
    p.add_argument("command", choices=sorted(_COMMANDS))
    p.add_argument("--in", dest="input", required=True, metavar="FILE")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--enum-bound", type=int, default=overlattice.DEFAULT_ENUM_BOUND)
    p.add_argument("--height-bound", type=int, default=cone.DEFAULT_HEIGHT_BOUND)
    p.add_argument("--ample", default=None, metavar="a,b")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.enum_bound < 1 or args.height_bound < 1:
        print("bounds must be positive", file=sys.stderr)
        return 2
    try:
        body = _COMMANDS[args.command](args)
        payload = {"schema": SCHEMA, "command": args.command, **body}
        code = 0
    except (ParseError, ValidationError) as err:
        payload = {
            "schema": SCHEMA,
            "command": args.command,
            "error": {"type": type(err).__name__, "message": str(err)},
        }
        code = 2
    except K3KitError as err:
        detail = {"type": type(err).__name__, "message": str(err)}
        place = getattr(err, "place", None)
        if place is not None:
            detail["place"] = _ser(list(place.form.coeffs))
        payload = {"schema": SCHEMA, "command": args.command, "error": detail}
        code = 3
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(_render_text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
