"""Regenerate the sample input files under inputs/."""

import json
from pathlib import Path

from orbifold.frobenius import builtin_algebras
from orbifold.io import algebra_to_obj, bimodule_to_obj, dump, schema_validate
from orbifold.library import sphere2, sphere3, torus2_7v
from orbifold.morita import builtin_bimodules
from orbifold.scalars import Q
from orbifold.tqft2d import cylinder_bordism, pair_of_pants
from orbifold.tqft3d import builtin_fusion

OUT = Path(__file__).resolve().parents[1] / "inputs"


def samples() -> dict:
    algs = builtin_algebras(Q)
    mods = builtin_bimodules(Q)
    fus = builtin_fusion()
    out = {}
    for name in ("z2", "z2_unscaled", "s3", "end2"):
        out[f"algebra_{name}.json"] = ("algebra", algebra_to_obj(algs[name]))
    for name in ("column_k2", "row_k2", "regular_z2"):
        obj = bimodule_to_obj(mods[name])
        # reference shipped algebra files instead of inlining where one exists
        for side in ("left", "right"):
            alg = obj[side]["name"]
            if f"algebra_{alg}.json" in out:
                obj[side] = f"algebra_{alg}.json"
        out[f"bimodule_{name}.json"] = ("bimodule", obj)
    for name, T in (("sphere2", sphere2()), ("torus", torus2_7v()), ("sphere3", sphere3())):
        out[f"tri_{name}.json"] = ("tri", T.to_json())
    for name in ("vec_z2", "fibonacci", "fibonacci_perturbed"):
        out[f"fusion_{name}.json"] = ("fusion", fus[name].to_json())
    out["bordism_pants.json"] = ("bordism", pair_of_pants(2).to_json())
    out["bordism_cylinder.json"] = ("bordism", cylinder_bordism(2).to_json())
    return out


def main():
    OUT.mkdir(exist_ok=True)
    for fname, (kind, obj) in samples().items():
        path = OUT / fname
        path.write_text(json.dumps(json.loads(dump(obj)), indent=1, sort_keys=True) + "\n")
        rep = schema_validate(path, kind)
        print(f"{fname:32s} {kind:9s} {'ok' if rep.ok else rep.errors}")


if __name__ == "__main__":
    main()
