"""Tabulate closed-surface state sums and Turaev-Viro values for the built-ins."""

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from orbifold import frobenius as fr
from orbifold import tqft2d as t2
from orbifold import tqft3d as t3
from orbifold.library import standard_library
from orbifold.scalars import Q, format_scalar
from orbifold.simplicial import euler_characteristic


@dataclass(frozen=True)
class TableConfig:
    algebras: tuple = ("trivial", "z2", "end2", "s3", "klein_twisted")
    surfaces: tuple = ("sphere2", "torus2_7v", "genus_g(2)", "genus_g(3)")
    fusion: tuple = ("trivial", "vec_z2", "vec_z3", "vec_z4", "fibonacci")
    manifolds: tuple = ("sphere3", "s2xs1", "t3")
    out: Path | None = None


def surface_table(cfg: TableConfig) -> dict:
    algs = fr.builtin_algebras(Q)
    tris = {s: standard_library(s) for s in cfg.surfaces}
    rows = {}
    for a in cfg.algebras:
        rows[a] = {s: format_scalar(t2.statesum_closed(algs[a], T)) for s, T in tris.items()}
    return {"chi": {s: euler_characteristic(T) for s, T in tris.items()}, "values": rows}


def manifold_table(cfg: TableConfig) -> dict:
    fus = t3.builtin_fusion()
    tris = {m: standard_library(m) for m in cfg.manifolds}
    return {f: {m: format_scalar(t3.tv_invariant(fus[f], T)) for m, T in tris.items()} for f in cfg.fusion}


def _print(title, cols, rows):
    print(title)
    w = max(18, *(len(c) + 2 for c in cols))
    print(" " * 16 + "".join(f"{c:>{w}}" for c in cols))
    for name, vals in rows.items():
        print(f"{name:16s}" + "".join(f"{str(vals[c]):>{w}}" for c in cols))
    print()


def main(cfg: TableConfig):
    s = surface_table(cfg)
    m = manifold_table(cfg)
    _print("2d state sums (columns: surfaces)", list(cfg.surfaces), s["values"])
    _print("Turaev-Viro (columns: 3-manifolds)", list(cfg.manifolds), m)
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(json.dumps({"surfaces": s, "manifolds": m}, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path)
    main(TableConfig(out=ap.parse_args().out))
