"""Standard triangulations.

=============  =========================  ======================
name           model                      counts (V, E, F[, T])
=============  =========================  ======================
interval       one edge                   (2, 1)
circle(m)      m-gon                      (m, m)
sphere2        boundary of Δ³             (4, 6, 4)
torus2_7v      Möbius's 7-vertex torus    (7, 21, 14)
genus_g(g)     cone on the 4g-gon         (2, 6g, 4g)
cylinder2(m,l) m-gon × [0, l]             (m(l+1), m(3l+1), 2ml)
sphere3        boundary of Δ⁴             (5, 10, 10, 5)
s2xs1          pillow × one-layer circle  (3, 9, 12, 6)
t3             Freudenthal cube, 1 vertex (1, 7, 12, 6)
=============  =========================  ======================
"""

from __future__ import annotations

import itertools
import json
import re
from functools import lru_cache
from importlib import resources

from .simplicial import Triangulation, TriangulationError, from_facet_keys, from_simplices


def interval() -> Triangulation:
    return from_simplices(1, [(0, 1)])


def circle(m: int, base: int = 0) -> Triangulation:
    """Edges (c_i, c_{i+1}) for i < m-1 and the closing edge (c_0, c_{m-1})."""
    if m < 1:
        raise TriangulationError("circle needs m >= 1")
    c = [base + i for i in range(m)]
    edges = [(c[i], c[i + 1]) for i in range(m - 1)] + [(c[0], c[m - 1])]
    return from_simplices(1, edges)


def sphere2() -> Triangulation:
    return from_simplices(2, itertools.combinations(range(4), 3))


def torus2_7v() -> Triangulation:
    tris = []
    for i in range(7):
        tris.append(sorted({i, (i + 1) % 7, (i + 3) % 7}))
        tris.append(sorted({i, (i + 2) % 7, (i + 3) % 7}))
    return from_simplices(2, tris)


def genus_g(g: int) -> Triangulation:
    """The 4g-gon with word a1 b1 a1⁻¹ b1⁻¹ ..., coned from its centre.

    Corners become vertex 0, the centre vertex 1. A triangle traversing its
    polygon edge forwards lists the start corner first.
    """
    if g == 0:
        return sphere2()
    if g < 0:
        raise TriangulationError("genus must be >= 0")
    word = []
    for k in range(g):
        word += [("a", k, 1), ("b", k, 1), ("a", k, -1), ("b", k, -1)]
    m = len(word)
    simplices, keys = [], []
    for i, (letter, k, sign) in enumerate(word):
        start_spoke, end_spoke = ("spoke", i), ("spoke", (i + 1) % m)
        simplices.append((0, 0, 1))
        # positions (p0, p1, centre); face 0 omits p0, face 1 omits p1
        if sign == 1:
            keys.append([end_spoke, start_spoke, (letter, k)])
        else:
            keys.append([start_spoke, end_spoke, (letter, k)])
    return from_facet_keys(2, simplices, keys)


def cylinder2(m: int, layers: int = 1) -> Triangulation:
    """circle(m) × [0, layers]; ring r has ids r*m + i."""
    if m < 1 or layers < 1:
        raise TriangulationError("cylinder needs m >= 1 and layers >= 1")
    simplices, keys = [], []
    ring = lambda r, i: ("ring", r, i)
    rung = lambda r, i: ("rung", r, i)
    diag = lambda r, i: ("diag", r, i)
    for r in range(layers):
        b = lambda i: r * m + i
        t = lambda i: (r + 1) * m + i
        for i in range(m - 1):
            simplices.append((b(i), b(i + 1), t(i + 1)))
            keys.append([rung(r, i + 1), diag(r, i), ring(r, i)])
            simplices.append((b(i), t(i), t(i + 1)))
            keys.append([ring(r + 1, i), diag(r, i), rung(r, i)])
        w = m - 1
        simplices.append((b(0), b(w), t(0)))
        keys.append([diag(r, w), rung(r, 0), ring(r, w)])
        simplices.append((b(w), t(0), t(w)))
        keys.append([ring(r + 1, w), rung(r, w), diag(r, w)])
    bnd = {ring(0, i) for i in range(m)} | {ring(layers, i) for i in range(m)}
    keys = [[None if k in bnd else k for k in row] for row in keys]
    return from_facet_keys(2, simplices, keys)


def sphere3() -> Triangulation:
    return from_simplices(3, itertools.combinations(range(5), 4))


@lru_cache(maxsize=None)
def _data(name: str) -> Triangulation:
    text = resources.files("orbifold").joinpath("data", f"{name}.json").read_text()
    return Triangulation.from_json(json.loads(text))


def s2xs1() -> Triangulation:
    return _data("s2xs1")


def t3() -> Triangulation:
    return _data("t3")


_PLAIN = {"interval": interval, "sphere2": sphere2, "torus2_7v": torus2_7v,
          "sphere3": sphere3, "s2xs1": s2xs1, "t3": t3}
_PARAM = {"circle": circle, "genus_g": genus_g, "cylinder2": cylinder2}

LIBRARY_NAMES = ("sphere2", "torus2_7v", "genus_g(g)", "circle(m)", "interval", "sphere3",
                 "cylinder2(m, layers)", "s2xs1", "t3")


def standard_library(name: str) -> Triangulation:
    """Look up e.g. ``"sphere2"``, ``"genus_g(2)"`` or ``"cylinder2(3, 2)"``."""
    name = name.strip()
    if name in _PLAIN:
        return _PLAIN[name]()
    mt = re.fullmatch(r"(\w+)\(([\d,\s]*)\)", name)
    if mt and mt.group(1) in _PARAM:
        args = [int(a) for a in mt.group(2).split(",") if a.strip()]
        return _PARAM[mt.group(1)](*args)
    raise TriangulationError(f"unknown library triangulation {name!r}")


def closed_surfaces() -> dict[str, Triangulation]:
    return {"sphere2": sphere2(), "torus2_7v": torus2_7v(), "genus_g(1)": genus_g(1),
            "genus_g(2)": genus_g(2)}
