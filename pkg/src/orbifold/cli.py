"""Command line entry point: every check and evaluation as a subcommand.

stdout carries exactly one JSON document (sorted keys, exact scalars);
human-readable notes go to stderr. Exit codes: 0 all checks pass, 1 a
mathematical check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import FIELD_ENV, SessionConfig
from .io import (InputError, KINDS, dump, load_algebra, load_bimodule, load_bordism, load_fusion,
                 load_triangulation, schema_validate)
from .scalars import format_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(doc: dict, ok: bool) -> int:
    sys.stdout.write(dump(doc) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _config(args) -> SessionConfig:
    return SessionConfig.from_env(field=getattr(args, "field", None), epsilon=getattr(args, "epsilon", None),
                                  seed=getattr(args, "seed", None), size_cap=getattr(args, "size_cap", None))


def _explicit_field(args):
    """Field to force onto loaded files: --field or ORBIFOLD_FIELD, else None (use the file's)."""
    if getattr(args, "field", None) or os.environ.get(FIELD_ENV):
        return _config(args).scalar_field
    return None


# ---------------------------------------------------------------------------
# handlers


def cmd_check_frobenius(args) -> int:
    from .frobenius import check_axioms
    A = load_algebra(args.file, _explicit_field(args))
    rep = check_axioms(A)
    doc = dict(rep.flags())
    doc.update({"dim": A.dim, "field": A.field.name, "name": A.name, "witnesses": rep.witnesses})
    return _emit(doc, rep.all_true)


def cmd_morita(args) -> int:
    from . import morita as mo
    fld = _explicit_field(args)
    if args.action == "compose":
        if len(args.files) not in (2, 3):
            raise UsageError("morita compose takes two or three bimodule files")
        mods = [load_bimodule(f, fld) for f in args.files]
        rt = mo.relative_tensor(mods[0], mods[1])
        rep = mo.check_bimodule(rt.bimodule)
        doc = {"dim": rt.bimodule.dim, "raw_dim": mods[0].dim * mods[1].dim, "bimodule": rep.flags()}
        ok = rep.all_true
        if len(mods) == 3:
            try:
                phi = mo.compose_check(*mods)
                doc["associator_invertible"] = phi.is_isomorphism()
            except mo.MoritaError as e:
                doc["associator_invertible"] = False
                doc["associator_error"] = str(e)
            ok &= doc["associator_invertible"]
        return _emit(doc, ok)
    if len(args.files) != 1:
        raise UsageError("morita qdim takes one bimodule file")
    X = load_bimodule(args.files[0], fld)
    q = mo.quantum_dimensions(X)
    zig = mo.zigzag_holds(X)
    doc = {"dim": X.dim, "dim_l": [format_scalar(x) for x in q.dim_l.entries],
           "dim_r": [format_scalar(x) for x in q.dim_r.entries], "zigzag": zig,
           "bimodule": mo.check_bimodule(X).flags()}
    return _emit(doc, zig and all(doc["bimodule"].values()))


def cmd_tri(args) -> int:
    from .simplicial import euler_characteristic, random_pachner_walk, validate
    T = load_triangulation(args.file)
    if args.action == "validate":
        rep = validate(T, strict=args.strict)
        doc = {"valid": rep.valid, "closed": rep.closed, "counts": list(rep.counts),
               "errors": list(rep.errors)}
        if rep.valid:
            doc["chi"] = euler_characteristic(T)
        return _emit(doc, rep.valid)
    if args.action == "chi":
        rep = validate(T)
        if not rep.valid:
            return _emit({"valid": False, "errors": list(rep.errors)}, False)
        return _emit({"chi": euler_characteristic(T), "counts": list(rep.counts)}, True)
    cfg = _config(args)
    kinds = args.kinds.split(",") if args.kinds else None
    W = random_pachner_walk(T, args.steps, cfg.seed, cfg.size_cap, kinds)
    rep = validate(W)
    chi0, chi1 = euler_characteristic(T), euler_characteristic(W)
    doc = {"steps": args.steps, "seed": cfg.seed, "start_counts": list(T.counts()),
           "end_counts": list(rep.counts), "chi_start": chi0, "chi_end": chi1, "valid": rep.valid,
           "triangulation": W.to_json()}
    return _emit(doc, rep.valid and chi0 == chi1)


def cmd_tqft2d(args) -> int:
    from . import tqft2d as t2
    from .library import standard_library
    from .simplicial import random_pachner_walk
    A = load_algebra(args.algebra, _explicit_field(args))
    if args.action == "closed":
        if not args.tri:
            raise UsageError("tqft2d closed needs --tri")
        z = t2.statesum_closed(A, load_triangulation(args.tri))
        return _emit({"value": z}, True)
    if args.action == "orbifold":
        if not args.bordism:
            raise UsageError("tqft2d orbifold needs --bordism")
        B = load_bordism(args.bordism)
        M = t2.orbifold_evaluate(A, B)
        doc = {"in_sizes": list(B.in_sizes), "out_sizes": list(B.out_sizes),
               "shape": list(M.matrix.shape), "matrix": M.matrix.entries}
        return _emit(doc, True)
    cfg = _config(args)
    try:
        T0 = standard_library(args.surface) if args.surface else load_triangulation(args.tri)
    except ValueError as e:
        raise InputError(str(e)) from None
    z0 = t2.statesum_closed(A, T0)
    T = random_pachner_walk(T0, args.steps, cfg.seed, cfg.size_cap)
    z = t2.statesum_closed(A, T, check=False)
    doc = {"value": z0, "walk_value": z, "walk_invariant": z0 == z, "steps": args.steps,
           "seed": cfg.seed, "end_counts": list(T.counts())}
    return _emit(doc, z0 == z)


def cmd_tqft3d(args) -> int:
    from . import tqft3d as t3
    S = load_fusion(args.fusion, _explicit_field(args))
    if args.action == "pentagon":
        rep = t3.validate_fusion(S)
        doc = dict(rep.flags())
        doc["witnesses"] = rep.witnesses
        inv = t3.check_3d_invariance(t3.orbifold_datum_from_fusion(S)) if S.multiplicity_free else None
        if inv is not None:
            doc["invariance"] = inv.flags()
            doc["one_four_raw_factor"] = inv.one_four_raw_factor
        return _emit(doc, rep.all_true)
    if not args.tri:
        raise UsageError("tqft3d tv needs --tri")
    T = load_triangulation(args.tri)
    rep = t3.validate_fusion(S)
    if not rep.all_true:
        return _emit({"error": "fusion data fail validation", "flags": rep.flags(),
                      "witnesses": rep.witnesses}, False)
    z = t3.tv_invariant(S, T)
    return _emit({"value": z, "counts": list(T.counts())}, True)


def cmd_euler(args) -> int:
    from . import tqft2d as t2
    from .scalars import parse_scalar
    T = load_triangulation(args.tri)
    fld = _config(args).scalar_field
    if args.algebra:
        A = load_algebra(args.algebra, _explicit_field(args))
        W = t2.compensating_weights(A)
        z = t2.euler_completed_statesum(A, W, T)
        return _emit({"value": z, "weights": list(W.psi)}, True)
    if args.psi is None:
        raise UsageError("euler needs --psi or --algebra")
    psi = parse_scalar(args.psi, fld)
    return _emit({"value": t2.euler_tqft(psi, T, fld), "psi": psi}, True)


def cmd_schema(args) -> int:
    rep = schema_validate(args.file, args.kind)
    return _emit(rep.to_json(), rep.ok)


def cmd_suite(args) -> int:
    from .acceptance import run_criterion
    which = args.criteria or list(range(1, 11))
    results = []
    for k in which:
        r = run_criterion(k)
        print(r.line(), file=sys.stderr)
        results.append(r)
    doc = {"results": [{"criterion": r.number, "title": r.title, "passed": r.passed, "summary": r.summary}
                       for r in results],
           "passed": sum(r.passed for r in results), "total": len(results)}
    if args.details:
        doc["details"] = {str(r.number): r.details for r in results}
    return _emit(doc, all(r.passed for r in results))


# ---------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--field", help='scalar field: "Q", "Q(sqrt:5)" or "C64" (env ORBIFOLD_FIELD)')
    p.add_argument("--epsilon", type=float, help="relative tolerance for C64")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orbifold", description="State-sum TQFT and orbifold toolkit.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("check-frobenius", help="Frobenius axiom report for an algebra file")
    p.add_argument("file", help="algebra.json or builtin:<name>")
    _common(p)
    p.set_defaults(func=cmd_check_frobenius)

    p = sub.add_parser("morita", help="relative tensor products and quantum dimensions")
    p.add_argument("action", choices=["compose", "qdim"])
    p.add_argument("files", nargs="+", help="bimodule.json files or builtin:<name>")
    _common(p)
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("tri", help="triangulation validation, Euler characteristic, Pachner walks")
    p.add_argument("action", choices=["validate", "chi", "pachner-walk"])
    p.add_argument("file", help="tri.json or library:<name>")
    p.add_argument("--strict", action="store_true", help="also require a genuine simplicial complex")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--size-cap", type=int)
    p.add_argument("--kinds", help="comma separated move kinds, e.g. 2-3,3-2")
    p.set_defaults(func=cmd_tri)

    p = sub.add_parser("tqft2d", help="2d state sums")
    p.add_argument("action", choices=["closed", "orbifold", "fuzz"])
    p.add_argument("--algebra", required=True)
    p.add_argument("--tri")
    p.add_argument("--bordism")
    p.add_argument("--surface", help="library surface name for fuzz")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--size-cap", type=int)
    _common(p)
    p.set_defaults(func=cmd_tqft2d)

    p = sub.add_parser("tqft3d", help="Turaev-Viro state sums and pentagon checks")
    p.add_argument("action", choices=["tv", "pentagon"])
    p.add_argument("--fusion", required=True, help="fusion.json or builtin:<name>")
    p.add_argument("--tri")
    _common(p)
    p.set_defaults(func=cmd_tqft3d)

    p = sub.add_parser("euler", help="Euler TQFT or Euler-completed state sum")
    p.add_argument("--tri", required=True)
    p.add_argument("--psi")
    p.add_argument("--algebra", help="evaluate the state sum with compensating Euler weights")
    _common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("schema", help="structural validation of an input file")
    p.add_argument("kind", choices=list(KINDS))
    p.add_argument("file")
    p.set_defaults(func=cmd_schema)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--criteria", type=int, nargs="*", choices=range(1, 11))
    p.add_argument("--details", action="store_true")
    p.set_defaults(func=cmd_suite)
    return ap


def run(argv=None) -> int:
    from .frobenius import AxiomError
    from .morita import MoritaError
    from .simplicial import TriangulationError
    from .tensor import ShapeError
    from .tqft2d import StateSumError
    from .tqft3d import FusionError, StateSumError3
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        return args.func(args)
    except UsageError as e:
        sys.stdout.write(dump({"error": "usage", "message": str(e)}) + "\n")
        return EXIT_USAGE
    except (InputError, ShapeError) as e:
        sys.stdout.write(dump({"error": "input", "message": str(e)}) + "\n")
        return EXIT_USAGE
    except (AxiomError, MoritaError, TriangulationError, StateSumError, StateSumError3, FusionError) as e:
        sys.stdout.write(dump({"error": type(e).__name__, "message": str(e)}) + "\n")
        return EXIT_FAIL
    except ValueError as e:
        sys.stdout.write(dump({"error": "input", "message": str(e)}) + "\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
