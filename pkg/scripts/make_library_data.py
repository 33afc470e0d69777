"""Regenerate the shipped 3-manifold triangulations (t3, s2xs1)."""

import itertools
import json
from pathlib import Path

from orbifold.simplicial import from_facet_keys, validate

OUT = Path(__file__).resolve().parents[1] / "src" / "orbifold" / "data"


def t3():
    """Freudenthal subdivision of the unit cube, opposite faces identified.

    Every lattice point is the same vertex (id 0). A triangle is determined
    up to translation by its two edge increments, which serve as face keys.
    """
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    simplices, keys = [], []
    for perm in itertools.permutations(range(3)):
        pts = [(0, 0, 0)]
        for p in perm:
            pts.append(tuple(a + b for a, b in zip(pts[-1], basis[p])))
        simplices.append((0, 0, 0, 0))
        row = []
        for f in range(4):
            tri = [pts[i] for i in range(4) if i != f]
            inc = tuple(tuple(b - a for a, b in zip(tri[k], tri[k + 1])) for k in range(2))
            row.append(inc)
        keys.append(row)
    return from_facet_keys(3, simplices, keys)


def s2xs1():
    """Pillow sphere (two triangles on vertices a<b<c) times a one-layer
    circle. Each prism is cut into three staircase tetrahedra; the two layer
    copies of a vertex share its id."""
    a, b, c = 0, 1, 2
    stairs = [
        [(a, 0), (b, 0), (c, 0), (c, 1)],
        [(a, 0), (b, 0), (b, 1), (c, 1)],
        [(a, 0), (a, 1), (b, 1), (c, 1)],
    ]
    simplices, keys = [], []
    for tri in range(2):
        for tet in stairs:
            simplices.append(tuple(v for v, _ in tet))
            row = []
            for f in range(4):
                face = [tet[i] for i in range(4) if i != f]
                layers = {l for _, l in face}
                letters = tuple(v for v, _ in face)
                label = tuple(face) if len(layers) > 1 else letters
                owner = tri if len(set(letters)) == 3 else None
                row.append((label, owner))
            keys.append(row)
    return from_facet_keys(3, simplices, keys)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, T in (("t3", t3()), ("s2xs1", s2xs1())):
        rep = validate(T)
        assert rep.valid and rep.closed, rep.errors
        print(name, "counts", rep.counts, "chi", rep.euler_characteristic)
        (OUT / f"{name}.json").write_text(json.dumps(T.to_json()) + "\n")


if __name__ == "__main__":
    main()
