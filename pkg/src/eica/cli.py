"""Command-line front end: ``eica <verb> ...``.

Exit codes: 0 success, 1 input error, 2 internal invariant violation (including
a non-empty probe violation list).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import builtins
from .algebra import aut_invertibility, build_algebra, radical
from .category import FiniteCategory, load_category
from .errors import EicaError, InvariantViolation
from .exactla import FieldSpec
from .homology import Strategy, findim_probe, global_dim, proj_dim, resolve
from .rep import DEFAULT_BUDGET, Representation, validate_rep

BOUND_NOTE = ("finite projective dimension is bounded by ℓ(C) = {ell}, "
                "so pd > ℓ(C) is impossible for finite pd")


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_category_arg(arg: str) -> FiniteCategory:
    """A category file path, or ``builtin:<name>``."""
    if arg.startswith("builtin:"):
        try:
            return builtins.builtin_category(arg.split(":", 1)[1])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    return load_category(_read_json(arg))


def load_module_arg(c: FiniteCategory, f: FieldSpec, arg: str) -> Representation:
    return validate_rep(c, f, _read_json(arg))


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _dimvec(m: Representation) -> str:
    return "(" + ", ".join(f"{x}:{d}" for x, d in m.dims.items()) + ")"


def _gldim_json(v):
    return "inf" if v == math.inf else v


# verbs --------------------------------------------------------------------------

def cmd_validate(args) -> int:
    c = load_category_arg(args.category)
    payload = {"valid": True, "objects": len(c.objects), "morphisms": len(c.morphisms)}
    _emit(args, payload, f"valid EI category: {len(c.objects)} objects, {len(c.morphisms)} morphisms")
    return 0


def info_report(c: FiniteCategory, f: FieldSpec | None = None) -> dict:
    o = c.order
    rep = {
        "objects": list(c.objects),
        "morphisms": [m.id for m in c.morphisms],
        "iso_classes": [list(k) for k in o.iso_classes],
        "class_dag": [[list(o.iso_classes[a]), list(o.iso_classes[b])] for a, b in o.cover_edges()],
        "chain_length": o.chain_length,
        "aut_orders": {x: len(c.hom_idx(x, x)) for x in c.objects},
    }
    if f is not None:
        rep["field"] = f.name
        rep["aut_invertible"] = {x: i.invertible for x, i in aut_invertibility(c, f).items()}
    return rep


def cmd_info(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field) if args.field else None
    rep = info_report(c, f)
    lines = [
        f"objects: {' '.join(rep['objects'])}",
        f"morphisms: {len(rep['morphisms'])}",
        "iso classes: " + " ".join("{" + ",".join(k) + "}" for k in rep["iso_classes"]),
        "class DAG: " + (", ".join(f"{{{','.join(a)}}} -> {{{','.join(b)}}}" for a, b in rep["class_dag"])
                         or "(no edges)"),
        f"chain length ℓ(C) = {rep['chain_length']}",
        "|Aut|: " + ", ".join(f"{x}={n}" for x, n in rep["aut_orders"].items()),
    ]
    if f is not None:
        lines.append(f"|Aut(x)| invertible in {f.name}: "
                     + ", ".join(f"{x}={v}" for x, v in rep["aut_invertible"].items()))
    _emit(args, rep, "\n".join(lines))
    return 0


def cmd_algebra(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field)
    a = build_algebra(c, f)
    j = radical(a, args.budget)
    payload = {
        "field": f.name,
        "dimension": a.dim,
        "unit": {a.basis[i]: f.json_scalar(v) for i, v in enumerate(a.unit) if v},
        "noniso_ideal_size": len(a.noniso_ideal),
        "radical_dimension": j.dim,
        "radical_method": j.method.value,
        "radical_basis": [{a.basis[i]: f.json_scalar(v) for i, v in enumerate(col) if v}
                          for col in j.basis.columns()],
    }
    text = "\n".join([
        f"dim kC = {a.dim} over {f.name}",
        "unit = " + " + ".join(k for k in payload["unit"]),
        f"non-isomorphism ideal: {len(a.noniso_ideal)} basis morphisms",
        f"radical: dim {j.dim}, method {j.method.value}",
    ])
    _emit(args, payload, text)
    return 0


def _verdict_payload(v, m) -> dict:
    return {
        "verdict": v.kind,
        "pd": v.value if v.kind == "Finite" else ("inf" if v.kind == "Infinite" else None),
        "chain_length": m.category.chain_length,
        "cutoff": v.cutoff,
        "strategy": v.witness.strategy.value,
        "target_dims": m.dims,
        "steps": [{"cover_dims": s.cover.dims, "syzygy_dims": s.syzygy.dims} for s in v.witness.steps],
    }


def cmd_pd(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field)
    m = load_module_arg(c, f, args.module)
    v = proj_dim(m, Strategy.parse(args.strategy), budget=args.budget)
    ell = c.chain_length
    lines = [str(v), f"ℓ(C) cutoff = {ell}", f"M: {_dimvec(m)}"]
    for k, s in enumerate(v.witness.steps):
        lines.append(f"step {k}: cover {_dimvec(s.cover)} syzygy {_dimvec(s.syzygy)}")
    if v.kind == "Infinite":
        lines.append("reason: " + BOUND_NOTE.format(ell=ell))
    payload = _verdict_payload(v, m)
    if v.kind == "Infinite":
        payload["reason"] = BOUND_NOTE.format(ell=ell)
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_gldim(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field)
    g = global_dim(c, f, args.budget)
    inv = aut_invertibility(c, f)
    payload = {"field": f.name, "gldim": _gldim_json(g), "chain_length": c.chain_length,
               "aut_invertible": {x: i.invertible for x, i in inv.items()}}
    if g == math.inf:
        bad = [x for x, i in inv.items() if not i.invertible]
        text = f"gl.dim = ∞ (|Aut(x)| not invertible in {f.name} for x in {', '.join(bad)})"
    else:
        text = f"gl.dim = {g} (ℓ(C) = {c.chain_length})"
    _emit(args, payload, text)
    return 0


def cmd_resolve(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field)
    m = load_module_arg(c, f, args.module)
    res = resolve(m, Strategy.parse(args.strategy), args.max_steps, budget=args.budget)
    payload = res.to_json()
    payload["chain_length"] = c.chain_length
    payload["objects"] = list(c.objects)
    lines = [f"M: {_dimvec(m)}  (ℓ(C) = {c.chain_length}, strategy {res.strategy.value})"]
    for k, s in enumerate(res.steps):
        lines.append(f"P_{k} = " + " + ".join(f"P[{x}]" for x in s.summands)
                     + f"  dims {_dimvec(s.cover)}; syzygy {_dimvec(s.syzygy)}")
    if res.truncated_at is not None:
        lines.append(f"truncated after {res.truncated_at} step(s)")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_probe(args) -> int:
    c = load_category_arg(args.category)
    f = FieldSpec.parse(args.field)
    r = findim_probe(c, f, args.samples, args.max_dim, args.seed, strategy=Strategy.parse(args.strategy),
                     workers=args.workers, budget=args.budget)
    hist = ", ".join(f"{k}: {n}" for k, n in r.histogram.items())
    text = "\n".join([
        f"{r.samples} samples over {r.field} (seed {r.seed}), {r.zero_samples} zero modules skipped",
        f"pd histogram: {hist}",
        f"max finite pd = {r.max_finite_pd} (a lower bound for fin.dim); ℓ(C) = {r.category_chain_length}",
        f"violations: {len(r.violations)}",
    ])
    _emit(args, r.to_json(), text)
    return 2 if r.violations else 0


def cmd_builtin(args) -> int:
    if args.list or not args.emit:
        names = list(builtins.NAMES)
        if args.json:
            print(json.dumps(names))
        else:
            print("\n".join(names))
        return 0
    try:
        spec = builtins.builtin_spec(args.emit) if args.builder else \
            builtins.builtin_category(args.emit).to_spec()
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    print(json.dumps(spec, indent=2, ensure_ascii=False))
    return 0


# parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="vector-enumeration budget for the exhaustive radical fallback")
    field_req = argparse.ArgumentParser(add_help=False)
    field_req.add_argument("--field", required=True, help="Q, F2, F3, F5, ...")
    strategy = argparse.ArgumentParser(add_help=False)
    strategy.add_argument("--strategy", default="min", choices=["min", "full"])

    p = argparse.ArgumentParser(prog="eica", description="Finite EI category algebras and their homological invariants.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a category file")
    s.add_argument("category")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("info", parents=[common], help="iso classes, ℓ(C) and |Aut|")
    s.add_argument("category")
    s.add_argument("--field", default=None)
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("algebra", parents=[common, field_req, budget], help="dimension, unit, radical")
    s.add_argument("category")
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("pd", parents=[common, field_req, strategy, budget], help="projective dimension")
    s.add_argument("category")
    s.add_argument("module")
    s.set_defaults(func=cmd_pd)

    s = sub.add_parser("gldim", parents=[common, field_req, budget], help="global dimension")
    s.add_argument("category")
    s.set_defaults(func=cmd_gldim)

    s = sub.add_parser("resolve", parents=[common, field_req, strategy, budget], help="projective resolution")
    s.add_argument("category")
    s.add_argument("module")
    s.add_argument("--max-steps", type=int, default=None)
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("probe", parents=[common, field_req, strategy, budget], help="finitistic-dimension probe")
    s.add_argument("category")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-dim", type=int, default=6)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("builtin", parents=[common], help="list or emit bundled categories")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    s.add_argument("--builder", action="store_true", help="emit the group/poset/quiver builder file instead")
    s.set_defaults(func=cmd_builtin)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 2
    except (EicaError, InputError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
