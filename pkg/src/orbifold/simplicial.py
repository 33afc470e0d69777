"""Oriented face-identification complexes and Pachner moves.

A top simplex is a non-decreasing tuple of vertex ids; its local vertex
order is tuple position. Face ``f`` of a simplex omits position ``f``.
A gluing identifies face (s, f) with face (s', f') position by position and
requires the two id tuples to agree. The induced orientation of face ``f``
is ``orientation[s] * (-1)**f`` and glued faces must carry opposite signs.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Hashable, Iterable, Sequence


class TriangulationError(ValueError):
    pass


class NonOrientableError(TriangulationError):
    pass


Gluing = "tuple[int, int] | None"


def face_tuple(simplex: Sequence[int], f: int) -> tuple:
    return tuple(simplex[:f]) + tuple(simplex[f + 1:])


@dataclass(frozen=True)
class Triangulation:
    n: int
    simplices: tuple
    gluings: tuple
    orientation: tuple

    def __post_init__(self):
        object.__setattr__(self, "simplices", tuple(tuple(int(v) for v in s) for s in self.simplices))
        object.__setattr__(self, "gluings", tuple(
            tuple(None if g is None else (int(g[0]), int(g[1])) for g in row) for row in self.gluings))
        object.__setattr__(self, "orientation", tuple(int(o) for o in self.orientation))
        if len(self.gluings) != len(self.simplices) or len(self.orientation) != len(self.simplices):
            raise TriangulationError("simplices, gluings and orientation must have equal length")

    @property
    def size(self) -> int:
        return len(self.simplices)

    @property
    def vertex_ids(self) -> set[int]:
        return {v for s in self.simplices for v in s}

    def is_closed(self) -> bool:
        return all(g is not None for row in self.gluings for g in row)

    def boundary_faces(self) -> list[tuple[int, int]]:
        return [(s, f) for s, row in enumerate(self.gluings) for f, g in enumerate(row) if g is None]

    # -- quotient cells ------------------------------------------------

    def cell_classes(self, j: int) -> dict[tuple[int, tuple], int]:
        """Map (simplex, positions) of every j-face to its class in the quotient."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in range(self.size):
            for pos in itertools.combinations(range(self.n + 1), j + 1):
                parent[(s, pos)] = (s, pos)
        if j < self.n:
            for s, row in enumerate(self.gluings):
                for f, g in enumerate(row):
                    if g is None or (g[0], g[1]) < (s, f):
                        continue
                    t, h = g
                    src = [p for p in range(self.n + 1) if p != f]
                    dst = [p for p in range(self.n + 1) if p != h]
                    m = dict(zip(src, dst))
                    for pos in itertools.combinations(src, j + 1):
                        a = find((s, pos))
                        b = find((t, tuple(m[p] for p in pos)))
                        if a != b:
                            parent[a] = b
        roots: dict = {}
        out = {}
        for key in sorted(parent):
            r = find(key)
            out[key] = roots.setdefault(r, len(roots))
        return out

    def counts(self) -> tuple[int, ...]:
        return tuple(len(set(self.cell_classes(j).values())) for j in range(self.n + 1))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "simplices": [list(s) for s in self.simplices],
                "gluings": [[None if g is None else list(g) for g in row] for row in self.gluings],
                "orientations": list(self.orientation)}

    @classmethod
    def from_json(cls, obj: dict) -> "Triangulation":
        try:
            n = int(obj["n"])
            simp = obj["simplices"]
            glue = obj.get("gluings")
            orient = obj.get("orientations")
        except (KeyError, TypeError) as e:
            raise TriangulationError(f"malformed triangulation: {e}") from None
        if glue is None:
            T = from_simplices(n, simp)
            if orient is not None:
                T = Triangulation(n, T.simplices, T.gluings, orient)
            return T
        if orient is None:
            return orient_bfs(n, simp, glue)
        return cls(n, simp, glue, orient)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    counts: tuple
    closed: bool
    errors: tuple = ()

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** j * c for j, c in enumerate(self.counts))


def validate(T: Triangulation, strict: bool = False) -> ValidationReport:
    """Check shapes, ordering, involutive gluings, face agreement and
    orientation. ``strict`` additionally demands a genuine simplicial complex
    (distinct ids per simplex and one quotient cell per vertex-id set)."""
    errs: list[str] = []
    n = T.n
    if n not in (0, 1, 2, 3):
        errs.append(f"dimension {n} not supported")
    for s, simp in enumerate(T.simplices):
        if len(simp) != n + 1:
            errs.append(f"simplex {s} has {len(simp)} vertices, expected {n + 1}")
        if any(a > b for a, b in zip(simp, simp[1:])):
            errs.append(f"simplex {s} {list(simp)} is not ordered")
        if strict and len(set(simp)) != len(simp):
            errs.append(f"simplex {s} repeats a vertex")
        if T.orientation[s] not in (1, -1):
            errs.append(f"simplex {s} has orientation {T.orientation[s]}")
        if len(T.gluings[s]) != (n + 1 if n > 0 else 0) and not (n == 0 and all(g is None for g in T.gluings[s])):
            errs.append(f"simplex {s} has {len(T.gluings[s])} gluing slots")
    if errs:
        return ValidationReport(False, (), False, tuple(errs))
    for s, row in enumerate(T.gluings):
        for f, g in enumerate(row):
            if g is None:
                continue
            t, h = g
            if not (0 <= t < T.size and 0 <= h <= n):
                errs.append(f"face ({s},{f}) glued to nonexistent ({t},{h})")
                continue
            if (t, h) == (s, f):
                errs.append(f"face ({s},{f}) glued to itself")
                continue
            if T.gluings[t][h] != (s, f):
                errs.append(f"gluing ({s},{f})->({t},{h}) is not an involution")
            if face_tuple(T.simplices[s], f) != face_tuple(T.simplices[t], h):
                errs.append(f"faces ({s},{f}) and ({t},{h}) have different vertex ids")
            if T.orientation[s] * (-1) ** f != -T.orientation[t] * (-1) ** h:
                errs.append(f"orientation mismatch across ({s},{f})~({t},{h})")
    if errs:
        return ValidationReport(False, (), False, tuple(errs))
    counts = T.counts()
    if strict:
        for j in range(n + 1):
            cls = T.cell_classes(j)
            seen: dict = {}
            for (s, pos), c in cls.items():
                key = tuple(T.simplices[s][p] for p in pos)
                if seen.setdefault(key, c) != c:
                    errs.append(f"{j}-cells {key} occur more than once")
                    break
    return ValidationReport(not errs, counts, T.is_closed(), tuple(errs))


def euler_characteristic(T: Triangulation) -> int:
    rep = validate(T)
    if not rep.valid:
        raise TriangulationError("; ".join(rep.errors))
    return rep.euler_characteristic


def boundary(T: Triangulation) -> Triangulation:
    """The unmatched faces as an (n-1)-dimensional closed complex."""
    rep = validate(T)
    if not rep.valid:
        raise TriangulationError("; ".join(rep.errors))
    faces = T.boundary_faces()
    index = {sf: k for k, sf in enumerate(faces)}
    n = T.n
    simp = [face_tuple(T.simplices[s], f) for s, f in faces]
    orient = [T.orientation[s] * (-1) ** f for s, f in faces]
    if n == 1:
        return Triangulation(0, simp, [() for _ in faces], orient)
    glue = []
    for s, f in faces:
        pos_f = [p for p in range(n + 1) if p != f]
        row = []
        for g in range(n):
            ridge = set(pos_f) - {pos_f[g]}
            cur, cur_ridge, cur_face = s, ridge, f
            while True:
                other = [p for p in range(n + 1) if p not in cur_ridge and p != cur_face]
                nf = other[0]
                nxt = T.gluings[cur][nf]
                if nxt is None:
                    break
                t, h = nxt
                m = dict(zip([p for p in range(n + 1) if p != nf], [p for p in range(n + 1) if p != h]))
                cur, cur_ridge, cur_face = t, {m[p] for p in cur_ridge}, h
            pos_b = [p for p in range(n + 1) if p != nf]
            miss = [k for k, p in enumerate(pos_b) if p not in cur_ridge][0]
            row.append((index[(cur, nf)], miss))
        glue.append(row)
    return Triangulation(n - 1, simp, glue, orient)


# ---------------------------------------------------------------------------
# builders


def orient_bfs(n: int, simplices, gluings) -> Triangulation:
    """Assign orientations propagating from simplex 0 of each component."""
    simplices = [tuple(s) for s in simplices]
    gluings = [[None if g is None else tuple(g) for g in row] for row in gluings]
    orient = [0] * len(simplices)
    for start in range(len(simplices)):
        if orient[start]:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for f, g in enumerate(gluings[s]):
                if g is None:
                    continue
                t, h = g
                want = -orient[s] * (-1) ** (f + h)
                if orient[t] == 0:
                    orient[t] = want
                    queue.append(t)
                elif orient[t] != want:
                    raise NonOrientableError(f"orientation conflict across ({s},{f})~({t},{h})")
    return Triangulation(n, simplices, gluings, orient)


def from_facet_keys(n: int, simplices, keys) -> Triangulation:
    """Glue faces carrying equal hashable keys (each key at most twice)."""
    where: dict[Hashable, list] = {}
    for s, row in enumerate(keys):
        if len(row) != n + 1:
            raise TriangulationError(f"simplex {s} needs {n + 1} face keys")
        for f, k in enumerate(row):
            if k is not None:
                where.setdefault(k, []).append((s, f))
    gluings = [[None] * (n + 1) for _ in simplices]
    for k, occ in where.items():
        if len(occ) > 2:
            raise TriangulationError(f"face key {k!r} occurs {len(occ)} times")
        if len(occ) == 2:
            (s, f), (t, h) = occ
            gluings[s][f] = (t, h)
            gluings[t][h] = (s, f)
    return orient_bfs(n, simplices, gluings)


def from_simplices(n: int, simplices) -> Triangulation:
    """Glue faces with identical vertex-id tuples."""
    simplices = [tuple(sorted(s)) for s in simplices]
    if n == 0:
        return Triangulation(0, simplices, [() for _ in simplices], [1] * len(simplices))
    keys = [[face_tuple(s, f) for f in range(n + 1)] for s in simplices]
    return from_facet_keys(n, simplices, keys)


# ---------------------------------------------------------------------------
# Pachner moves


@dataclass(frozen=True)
class PachnerMove:
    """Replace the facets ``site`` of ∂Δ^{n+1} (on positions of ``W``) by the
    complementary facets. ``site[t]`` omits position ``omitted[t]`` of W."""

    n: int
    site: tuple
    omitted: tuple
    W: tuple
    sigma: int

    @property
    def k(self) -> int:
        return len(self.site)

    @property
    def kind(self) -> str:
        return f"{self.k}-{self.n + 2 - self.k}"

    @property
    def delta_size(self) -> int:
        return self.n + 2 - 2 * self.k


def _pos_without(i: int, j: int) -> int:
    """Position of W-index j inside W with index i removed."""
    return j if j < i else j - 1


def enumerate_pachner(T: Triangulation) -> list[PachnerMove]:
    n = T.n
    if n < 1:
        return []
    fresh = max(T.vertex_ids) + 1
    moves = []
    for s, simp in enumerate(T.simplices):
        W = tuple(simp) + (fresh,)
        moves.append(PachnerMove(n, (s,), (n + 1,), W, T.orientation[s] * (-1) ** (n + 1)))
    by_ids: dict[tuple, list[int]] = {}
    for s, simp in enumerate(T.simplices):
        if len(set(simp)) == n + 1:
            by_ids.setdefault(simp, []).append(s)
    Ws = set()
    for s, simp in enumerate(T.simplices):
        if len(set(simp)) != n + 1:
            continue
        for f, g in enumerate(T.gluings[s]):
            if g is None:
                continue
            t, h = g
            x = T.simplices[t][h]
            if x not in simp and len(set(T.simplices[t])) == n + 1:
                Ws.add(tuple(sorted(simp + (x,))))
    for W in sorted(Ws):
        groups = {i: by_ids.get(face_tuple(W, i), []) for i in range(n + 2)}
        avail = [i for i in range(n + 2) if groups[i]]
        for k in range(2, n + 2):
            for F in itertools.combinations(avail, k):
                for choice in itertools.product(*(groups[i] for i in F)):
                    if _site_ok(T, W, F, choice):
                        sigma = T.orientation[choice[0]] * (-1) ** F[0]
                        moves.append(PachnerMove(n, tuple(choice), tuple(F), W, sigma))
    return moves


def _site_ok(T: Triangulation, W, F, choice) -> bool:
    sig = {T.orientation[t] * (-1) ** i for t, i in zip(choice, F)}
    if len(sig) != 1:
        return False
    for (t, i), (u, j) in itertools.combinations(zip(choice, F), 2):
        if T.gluings[t][_pos_without(i, j)] != (u, _pos_without(j, i)):
            return False
    return True


def apply_pachner(T: Triangulation, m: PachnerMove) -> Triangulation:
    n = T.n
    W = m.W
    F = list(m.omitted)
    site = list(m.site)
    if len(set(site)) != len(site):
        raise TriangulationError("site simplices must be distinct")
    for t, i in zip(site, F):
        if T.simplices[t] != face_tuple(W, i):
            raise TriangulationError(f"simplex {t} does not match the move site")
    if m.k > 1 and not _site_ok(T, W, F, site):
        raise TriangulationError(f"inapplicable {m.kind} move")
    if m.k == 1 and (W[-1] in T.vertex_ids or F != [n + 1]):
        raise TriangulationError("1-(n+1) move needs a fresh maximal vertex")
    C = [i for i in range(n + 2) if i not in F]
    site_of = dict(zip(F, site))
    omit_of = dict(zip(site, F))
    kept = [s for s in range(T.size) if s not in omit_of]
    new_index = {s: k for k, s in enumerate(kept)}
    base = len(kept)
    new_pos = {i: base + k for k, i in enumerate(C)}

    def ext(t: int, f: int):
        """Where face f of site simplex t lives after the move."""
        j = omit_of[t]
        q = f if f < j else f + 1
        if q not in new_pos:
            raise TriangulationError("internal site face reached from outside")
        return new_pos[q], _pos_without(q, j)

    def remap(g):
        if g is None:
            return None
        u, h = g
        if u in omit_of:
            return ext(u, h)
        return new_index[u], h

    simplices = [T.simplices[s] for s in kept]
    gluings = [[remap(g) for g in T.gluings[s]] for s in kept]
    orient = [T.orientation[s] for s in kept]
    for i in C:
        simplices.append(face_tuple(W, i))
        orient.append(-m.sigma * (-1) ** i)
        row = []
        for j in range(n + 2):
            if j == i:
                continue
            if j in new_pos:
                row.append((new_pos[j], _pos_without(j, i)))
            else:
                t = site_of[j]
                row.append(remap(T.gluings[t][_pos_without(j, i)]))
        gluings.append(row)
    return Triangulation(n, simplices, gluings, orient)


def random_pachner_walk(T: Triangulation, steps: int, seed: int, size_cap: int | None = None,
                        kinds: Iterable[str] | None = None, check: bool = True) -> Triangulation:
    """Seeded random walk; moves that would push the top-simplex count past
    ``size_cap`` (default: initial size + 12) are rejected."""
    rng = random.Random(seed)
    cap = T.size + 12 if size_cap is None else size_cap
    allowed = None if kinds is None else set(kinds)
    for _ in range(steps):
        moves = [m for m in enumerate_pachner(T)
                 if (allowed is None or m.kind in allowed) and T.size + m.delta_size <= cap]
        if not moves:
            continue
        T = apply_pachner(T, rng.choice(moves))
        if check:
            rep = validate(T)
            if not rep.valid:
                raise TriangulationError("walk produced an invalid triangulation: " + "; ".join(rep.errors))
    return T
