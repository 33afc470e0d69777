"""2d state sums, orbifold state spaces, Euler weights and twisted sectors.

Conventions. A positively oriented triangle with positional vertices 0<1<2
contributes C(x01, x12, x02) with C_ijk = ε(a_i a_j a_k); a negative one
contributes C(x02, x12, x01). Every glued edge carries g^{-1}. On a bordism
an incoming boundary edge is a free (lowered) slot, an outgoing one is
raised by g^{-1}, so gluing two bordisms contracts exactly one g^{-1} per
edge.

A boundary circle is read starting at its least vertex id and following the
induced orientation (outgoing circles) or its reverse (incoming circles).
"""

from __future__ import annotations

import functools
import graphlib
from dataclasses import dataclass
from typing import Sequence

from .frobenius import (AxiomError, FrobeniusAlgebra, GroupTable, TwoCocycle, center, center_basis,
                        check_axioms, twisted_group_algebra)
from .linalg import inverse, rank, split_idempotent
from .scalars import Field
from .simplicial import (Triangulation, TriangulationError, boundary, euler_characteristic, face_tuple,
                         from_facet_keys, random_pachner_walk, validate)
from .tensor import LinearMap, Tensor, contract_network


class StateSumError(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebra data


@functools.lru_cache(maxsize=128)
def _report(A: FrobeniusAlgebra):
    return check_axioms(A)


def require_datum(A: FrobeniusAlgebra):
    rep = _report(A)
    missing = [k for k in ("frobenius", "symmetric", "delta_separable") if not getattr(rep, k)]
    if missing:
        raise AxiomError(f"algebra {A.name!r} lacks {', '.join(missing)}")


def require_separable(A: FrobeniusAlgebra):
    rep = _report(A)
    missing = [k for k in ("frobenius", "symmetric", "separable") if not getattr(rep, k)]
    if missing:
        raise AxiomError(f"algebra {A.name!r} lacks {', '.join(missing)}")


@functools.lru_cache(maxsize=128)
def triangle_tensor(A: FrobeniusAlgebra) -> Tensor:
    return contract_network([A.mu, A.mu, A.counit], [["i", "j", "p"], ["p", "k", "q"], ["q"]], ["i", "j", "k"])


@functools.lru_cache(maxsize=128)
def inverse_pairing(A: FrobeniusAlgebra) -> Tensor:
    try:
        return inverse(A.pairing())
    except ZeroDivisionError:
        raise AxiomError("degenerate pairing ε∘μ") from None


# ---------------------------------------------------------------------------
# bordisms


@dataclass(frozen=True)
class Bordism2:
    """A triangulated surface whose boundary circles are split into incoming
    and outgoing ones; each circle is the list of its boundary faces (s, f)
    in reading order."""

    triangulation: Triangulation
    in_circles: tuple = ()
    out_circles: tuple = ()

    @property
    def in_sizes(self) -> tuple:
        return tuple(len(c) for c in self.in_circles)

    @property
    def out_sizes(self) -> tuple:
        return tuple(len(c) for c in self.out_circles)

    def circle_vertices(self, circle) -> list[int]:
        """Vertex ids c_0, c_1, ... along a declared circle."""
        T = self.triangulation
        out = []
        for (s, f), forward in zip(circle, self._directions(circle)):
            e = face_tuple(T.simplices[s], f)
            out.append(e[0] if forward else e[1])
        return out

    def _directions(self, circle):
        T = self.triangulation
        outgoing = any(circle == c for c in self.out_circles)
        sign = 1 if outgoing else -1
        return [sign * T.orientation[s] * (-1) ** f == 1 for s, f in circle]

    def to_json(self) -> dict:
        return {"tri": self.triangulation.to_json(),
                "in": [min(self.circle_vertices(c)) for c in self.in_circles],
                "out": [min(self.circle_vertices(c)) for c in self.out_circles]}

    @classmethod
    def from_json(cls, obj: dict) -> "Bordism2":
        T = Triangulation.from_json(obj["tri"])
        return make_bordism(T, obj.get("in", []), obj.get("out", []))


def boundary_circles(T: Triangulation) -> list[list[tuple[int, int]]]:
    """Connected components of the boundary, each as a list of faces (s, f)."""
    faces = T.boundary_faces()
    if not faces:
        return []
    B = boundary(T)
    seen, comps = set(), []
    for k in range(len(faces)):
        if k in seen:
            continue
        stack, comp = [k], []
        seen.add(k)
        while stack:
            x = stack.pop()
            comp.append(x)
            for g in B.gluings[x]:
                if g[0] not in seen:
                    seen.add(g[0])
                    stack.append(g[0])
        comps.append(sorted(comp))
    return [[faces[k] for k in c] for c in comps]


def _read_circle(T: Triangulation, comp: list[tuple[int, int]], outgoing: bool) -> tuple:
    faces = T.boundary_faces()
    idx = {sf: k for k, sf in enumerate(faces)}
    B = boundary(T)
    sign = 1 if outgoing else -1

    def ends(k):
        s, f = faces[k]
        e = face_tuple(T.simplices[s], f)
        tau = sign * T.orientation[s] * (-1) ** f
        return (e[0], e[1], 0) if tau == 1 else (e[1], e[0], 1)

    ks = [idx[sf] for sf in comp]
    start = min(ks, key=lambda k: (ends(k)[0], ends(k)[1], k))
    order = [start]
    cur = start
    while True:
        # leave through the end vertex: the boundary face omitting the start position
        nxt = B.gluings[cur][ends(cur)[2]][0]
        if nxt == start:
            break
        if nxt in order:
            raise TriangulationError("boundary circle does not close up")
        order.append(nxt)
        cur = nxt
    if len(order) != len(ks):
        raise TriangulationError("boundary component is not a single circle")
    return tuple(faces[k] for k in order)


def make_bordism(T: Triangulation, in_ids: Sequence[int] = (), out_ids: Sequence[int] = ()) -> Bordism2:
    """Declare boundary circles by their least vertex id."""
    rep = validate(T)
    if not rep.valid:
        raise TriangulationError("; ".join(rep.errors))
    if T.n != 2:
        raise TriangulationError("bordisms are 2-dimensional")
    comps = boundary_circles(T)
    by_min = {}
    for c in comps:
        lo = min(v for s, f in c for v in face_tuple(T.simplices[s], f))
        if lo in by_min:
            raise TriangulationError(f"two boundary circles share least vertex id {lo}")
        by_min[lo] = c
    used = list(in_ids) + list(out_ids)
    if sorted(used) != sorted(by_min) or len(set(used)) != len(used):
        raise TriangulationError(f"declared circles {used} do not match boundary circles {sorted(by_min)}")
    ins = tuple(_read_circle(T, by_min[v], False) for v in in_ids)
    outs = tuple(_read_circle(T, by_min[v], True) for v in out_ids)
    return Bordism2(T, ins, outs)


def closed_bordism(T: Triangulation) -> Bordism2:
    return make_bordism(T)


def flip(T: Triangulation) -> Triangulation:
    return Triangulation(T.n, T.simplices, T.gluings, [-o for o in T.orientation])


# ---------------------------------------------------------------------------
# standard bordisms


def _zipper(inner, outer, inner_keys, outer_keys, tag="z"):
    """Annulus between two cyclic vertex sequences.

    ``inner``/``outer`` are lists of vertex ids; edge k joins entries k and
    k+1 (cyclically) and carries key ``*_keys[k]`` (None for boundary).
    Rungs are keyed by step so that repeated ids are harmless.
    """
    m, p = len(inner), len(outer)
    steps = []
    i = j = 0
    while i < m or j < p:
        if j >= p or (i < m and (i + 1) * p <= (j + 1) * m):
            steps.append("in")
            i += 1
        else:
            steps.append("out")
            j += 1
    total = len(steps)
    simplices, keys = [], []
    i = j = 0
    for s, kind in enumerate(steps):
        prev_r, next_r = (tag, "rung", s), (tag, "rung", (s + 1) % total)
        if kind == "in":
            verts = [(inner[i], 0, 0), (inner[(i + 1) % m], 0, 1), (outer[j % p], 1, 0)]
            edge_keys = {(0, 1): inner_keys[i], (0, 2): prev_r, (1, 2): next_r}
            i += 1
        else:
            verts = [(inner[i % m], 0, 0), (outer[j], 1, 0), (outer[(j + 1) % p], 1, 1)]
            edge_keys = {(1, 2): outer_keys[j], (0, 1): prev_r, (0, 2): next_r}
            j += 1
        order = sorted(range(3), key=lambda r: verts[r])
        simplices.append(tuple(verts[r][0] for r in order))
        row = []
        for f in range(3):
            pair = tuple(sorted(order[q] for q in range(3) if q != f))
            row.append(edge_keys[pair])
        keys.append(row)
    return simplices, keys


def _as_bordism(simplices, keys, in_ids, out_ids) -> Bordism2:
    T = from_facet_keys(2, simplices, keys)
    for cand in (T, flip(T)):
        B = make_bordism(cand, in_ids, out_ids)
        if all(_increasing(B, c) for c in B.in_circles + B.out_circles):
            return B
    raise TriangulationError("no orientation reads every circle in increasing order")


def _increasing(B: Bordism2, circle) -> bool:
    """Is the circle read as the canonical circle(m): ids increasing, every
    edge but the closing one traversed in position order?"""
    vs = B.circle_vertices(circle)
    dirs = B._directions(circle)
    return vs == sorted(vs) and dirs == [True] * (len(dirs) - 1) + [False]


def cylinder_bordism(m: int, layers: int = 1) -> Bordism2:
    from .library import cylinder2

    T = cylinder2(m, layers)
    for cand in (flip(T), T):
        B = make_bordism(cand, [0], [layers * m])
        if all(_increasing(B, c) for c in B.in_circles + B.out_circles):
            return B
    raise TriangulationError("cylinder construction failed")


def annulus(m_in: int, m_out: int) -> Bordism2:
    """Cylinder from circle(m_in) (ids 0..m_in-1) to circle(m_out)."""
    inner = list(range(m_in))
    outer = list(range(m_in, m_in + m_out))
    for rev_in in (False, True):
        for rev_out in (False, True):
            a = inner[:1] + inner[1:][::-1] if rev_in else inner
            b = outer[:1] + outer[1:][::-1] if rev_out else outer
            simp, keys = _zipper(a, b, [None] * m_in, [None] * m_out)
            try:
                return _as_bordism(simp, keys, [0], [m_in])
            except TriangulationError:
                continue
    raise TriangulationError("annulus construction failed")


def disk(m: int, outgoing: bool = True) -> Bordism2:
    """Cone on circle(m) with apex id m."""
    simplices, keys = [], []
    edges = [(i, i + 1) for i in range(m - 1)] + [(0, m - 1)]
    for idx, (a, b) in enumerate(edges):
        if idx < m - 1:
            ka, kb = ("spoke", idx), ("spoke", idx + 1)
        else:
            ka, kb = ("spoke", 0), ("spoke", m - 1)
        simplices.append((a, b, m))
        keys.append([kb, ka, None])
    T = from_facet_keys(2, simplices, keys)
    for cand in (T, flip(T)):
        B = make_bordism(cand, [] if outgoing else [0], [0] if outgoing else [])
        if all(_increasing(B, c) for c in B.in_circles + B.out_circles):
            return B
    raise TriangulationError("disk construction failed")


def pair_of_pants(m: int, m_out: int | None = None, reverse: bool = False) -> Bordism2:
    """Two incoming circle(m) (ids 0..m-1 and m..2m-1) and one outgoing
    circle(m_out) (ids from 2m). With ``reverse`` the roles are swapped:
    one incoming circle(m_out), two outgoing circle(m)."""
    m_out = m if m_out is None else m_out
    c1, c2 = list(range(m)), list(range(m, 2 * m))
    outer = list(range(2 * m, 2 * m + m_out))
    for r1 in (False, True):
        for r2 in (False, True):
            for r3 in (False, True):
                a = c1[:1] + c1[1:][::-1] if r1 else c1
                b = c2[:1] + c2[1:][::-1] if r2 else c2
                o = outer[:1] + outer[1:][::-1] if r3 else outer
                walk = a + [a[0]] + b + [b[0]]
                wkeys = [None] * m + [("bridge",)] + [None] * m + [("bridge",)]
                simp, keys = _zipper(walk, o, wkeys, [None] * m_out)
                try:
                    T = from_facet_keys(2, simp, keys)
                except TriangulationError:
                    continue
                ins, outs = ([0, m], [2 * m]) if not reverse else ([2 * m], [0, m])
                for cand in (T, flip(T)):
                    try:
                        B = make_bordism(cand, ins, outs)
                    except TriangulationError:
                        break
                    if all(_increasing(B, c) for c in B.in_circles + B.out_circles):
                        return B
    raise TriangulationError("pair of pants construction failed")


def _merge_orders(ids_m, ids_n, ident):
    """Relabel two vertex sets into one total order extending both, with
    ``ident`` (N id -> M id) identifying shared vertices."""
    def node(side, v):
        if side == "M":
            return ("M", v)
        return ("M", ident[v]) if v in ident else ("N", v)

    ts = graphlib.TopologicalSorter()
    for side, ids in (("M", sorted(ids_m)), ("N", sorted(ids_n))):
        for v in ids:
            ts.add(node(side, v))
        for a, b in zip(ids, ids[1:]):
            ts.add(node(side, b), node(side, a))
    try:
        order = []
        ts.prepare()
        while ts.is_active():
            ready = sorted(ts.get_ready(), key=lambda x: (x[1], x[0]))
            order.extend(ready)
            ts.done(*ready)
    except graphlib.CycleError:
        raise TriangulationError("vertex orders of the two bordisms are incompatible") from None
    rank_of = {x: k for k, x in enumerate(order)}
    return (lambda v: rank_of[("M", v)]), (lambda v: rank_of[node("N", v)])


def glue(M: Bordism2, N: Bordism2, k: int = 0, j: int = 0) -> Bordism2:
    """N ∘ M along outgoing circle k of M and incoming circle j of N.

    Edge i of one circle is identified with edge i of the other. Vertex ids
    of both pieces are merged into one total order extending both orders.
    """
    TM, TN = M.triangulation, N.triangulation
    cm, cn = M.out_circles[k], N.in_circles[j]
    if len(cm) != len(cn):
        raise TriangulationError("circle sizes differ")
    vm, vn = M.circle_vertices(cm), N.circle_vertices(cn)
    if M._directions(cm) != N._directions(cn):
        raise TriangulationError("circles are traversed against their vertex orders differently")
    ident = {}
    for a, b in zip(vm, vn):
        if ident.setdefault(b, a) != a:
            raise TriangulationError("circle vertex sequences do not match")
    fm, fn = _merge_orders(TM.vertex_ids, TN.vertex_ids, ident)
    off = TM.size
    simplices = [tuple(fm(v) for v in s) for s in TM.simplices] + [tuple(fn(v) for v in s) for s in TN.simplices]
    gluings = [list(r) for r in TM.gluings] + [[None if g is None else (g[0] + off, g[1]) for g in r]
                                               for r in TN.gluings]
    for (s, a), (t, b) in zip(cm, cn):
        if simplices[s][:a] + simplices[s][a + 1:] != simplices[t + off][:b] + simplices[t + off][b + 1:]:
            raise TriangulationError("glued edges disagree after relabelling")
        gluings[s][a] = (t + off, b)
        gluings[t + off][b] = (s, a)
    orient = list(TM.orientation) + list(TN.orientation)
    T = Triangulation(2, simplices, gluings, orient)
    rep = validate(T)
    if not rep.valid:
        raise TriangulationError("glued bordism is invalid: " + "; ".join(rep.errors))
    remap_n = lambda circ: tuple((s + off, a) for s, a in circ)
    ins = M.in_circles + tuple(remap_n(c) for i, c in enumerate(N.in_circles) if i != j)
    outs = tuple(c for i, c in enumerate(M.out_circles) if i != k) + tuple(remap_n(c) for c in N.out_circles)
    return Bordism2(T, ins, outs)


def disjoint_union(M: Bordism2, N: Bordism2) -> Bordism2:
    """Side by side, N's ids shifted above M's."""
    TM, TN = M.triangulation, N.triangulation
    shift = max(TM.vertex_ids) + 1
    off = TM.size
    T = Triangulation(2, list(TM.simplices) + [tuple(v + shift for v in s) for s in TN.simplices],
                      list(TM.gluings) + [[None if g is None else (g[0] + off, g[1]) for g in r]
                                          for r in TN.gluings],
                      list(TM.orientation) + list(TN.orientation))
    r = lambda circ: tuple((s + off, a) for s, a in circ)
    return Bordism2(T, M.in_circles + tuple(r(c) for c in N.in_circles),
                    M.out_circles + tuple(r(c) for c in N.out_circles))


# ---------------------------------------------------------------------------
# evaluation


def _network(A: FrobeniusAlgebra, B: Bordism2):
    T = B.triangulation
    C = triangle_tensor(A)
    ginv = inverse_pairing(A)
    tensors, labels = [], []
    for s in range(T.size):
        tensors.append(C)
        if T.orientation[s] == 1:
            labels.append([(s, 2), (s, 0), (s, 1)])
        else:
            labels.append([(s, 1), (s, 0), (s, 2)])
    for s, row in enumerate(T.gluings):
        for f, g in enumerate(row):
            if g is not None and (s, f) < g:
                tensors.append(ginv)
                labels.append([(s, f), g])
    in_labels = [sf for c in B.in_circles for sf in c]
    out_labels = []
    for c in B.out_circles:
        for sf in c:
            tensors.append(ginv)
            labels.append([sf, ("out", sf)])
            out_labels.append(("out", sf))
    return tensors, labels, out_labels, in_labels


def statesum_bordism(A: FrobeniusAlgebra, B: Bordism2, check: bool = True) -> LinearMap:
    """The state sum as a map A^{⊗m_in} → A^{⊗m_out}."""
    if check:
        require_datum(A)
    return _evaluate(A, B)


def _evaluate(A: FrobeniusAlgebra, B: Bordism2) -> LinearMap:
    tensors, labels, outs, ins = _network(A, B)
    t = contract_network(tensors, labels, outs + ins, field=A.field)
    d = A.dim
    return LinearMap(t.reshape(d ** len(outs), d ** len(ins)))


def statesum_closed(A: FrobeniusAlgebra, T: Triangulation, check: bool = True):
    if T.n != 2:
        raise TriangulationError("statesum_closed needs a surface")
    rep = validate(T)
    if not rep.valid or not rep.closed:
        raise TriangulationError("statesum_closed needs a valid closed surface")
    return statesum_bordism(A, Bordism2(T), check).matrix.item()


def cylinder_idempotent(A: FrobeniusAlgebra, m: int, layers: int = 1) -> LinearMap:
    if m < 1:
        raise ValueError("m must be >= 1")
    return statesum_bordism(A, cylinder_bordism(m, layers))


@dataclass(frozen=True, eq=False)
class OrbifoldStateSpace:
    algebra: FrobeniusAlgebra
    circle_size: int
    inj: LinearMap
    surj: LinearMap
    idempotent: LinearMap

    @property
    def dim(self) -> int:
        return self.inj.domain_dim


@functools.lru_cache(maxsize=256)
def orbifold_state_space(A: FrobeniusAlgebra, m: int) -> OrbifoldStateSpace:
    e = cylinder_idempotent(A, m)
    inj, surj = split_idempotent(e)
    return OrbifoldStateSpace(A, m, inj, surj, e)


def _kron_all(maps: list[LinearMap], field: Field) -> LinearMap:
    out = LinearMap.identity(1, field)
    for mp in maps:
        out = out.kron(mp)
    return out


def orbifold_evaluate(A: FrobeniusAlgebra, B: Bordism2) -> LinearMap:
    """surj_out ∘ Z(B) ∘ inj_in between orbifold state spaces."""
    raw = statesum_bordism(A, B)
    inj = _kron_all([orbifold_state_space(A, m).inj for m in B.in_sizes], A.field)
    surj = _kron_all([orbifold_state_space(A, m).surj for m in B.out_sizes], A.field)
    return surj @ raw @ inj


@functools.lru_cache(maxsize=256)
def transition_map(A: FrobeniusAlgebra, m_from: int, m_to: int) -> LinearMap:
    """The evaluated annulus circle(m_from) → circle(m_to) on orbifold state spaces."""
    return orbifold_evaluate(A, annulus(m_from, m_to))


# ---------------------------------------------------------------------------
# Euler layer


@dataclass(frozen=True)
class EulerWeights:
    psi: tuple

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(self.psi))
        for j, p in enumerate(self.psi, start=1):
            if p == 0:
                raise ValueError(f"ψ_{j} must be invertible")


def euler_tqft(psi, T: Triangulation, field: Field | None = None):
    """ψ^{χ(M) - χ(∂M)/2}."""
    if psi == 0:
        raise ValueError("ψ must be invertible")
    chi = euler_characteristic(T)
    chi_b = 0 if T.is_closed() else euler_characteristic(boundary(T))
    if chi_b % 2:
        raise TriangulationError("χ(∂M) is odd")
    e = chi - chi_b // 2
    if field is not None:
        psi = field(psi)
    return psi ** e if e >= 0 else (1 / psi) ** (-e)


def dual_strata_exponents(T: Triangulation) -> dict[int, int]:
    """Σ over dual j-strata of χ(σ) - χ(∂σ)/2 for a closed surface.

    The dual 2-cell of a vertex is a disk (link is a circle): 1 - 0/2.
    The dual 1-cell of an edge is a segment between two triangle centres:
    1 - 2/2. Dual 0-cells carry no weight.
    """
    if T.n != 2 or not T.is_closed():
        raise TriangulationError("closed surface expected")
    V, E, F = T.counts()
    return {1: E * (1 - 1), 2: V * 1}


def euler_completed_statesum(A: FrobeniusAlgebra, weights: EulerWeights, T: Triangulation):
    """Raw state sum times Π_j ψ_j^{Σ_σ (χ(σ) - χ(∂σ)/2)} over dual strata."""
    require_separable(A)
    if len(weights.psi) != 2:
        raise ValueError("surfaces need (ψ_1, ψ_2)")
    raw = statesum_closed(A, T, check=False)
    f = A.field
    out = raw
    for j, e in dual_strata_exponents(T).items():
        p = f(weights.psi[j - 1])
        out = out * (p ** e if e >= 0 else f.inverse(p) ** (-e))
    return out


def separability_scalar(A: FrobeniusAlgebra):
    """λ with μ∘Δ = λ·id, or None."""
    md = contract_network([A.comul, A.mu], [["i", "j", "k"], ["j", "k", "l"]], ["i", "l"])
    lam = md[0, 0]
    if md.equals(Tensor.identity(A.dim, A.field).scale(lam)):
        return lam
    return None


def compensating_weights(A: FrobeniusAlgebra) -> EulerWeights:
    """Ψ = (1, 1/λ) for μ∘Δ = λ·id, which makes the weighted sum triangulation independent."""
    lam = separability_scalar(A)
    if lam is None or A.field.is_zero(lam):
        raise AxiomError("μ∘Δ is not an invertible multiple of the identity")
    f = A.field
    return EulerWeights((f.one(), f.inverse(lam)))


# ---------------------------------------------------------------------------
# twisted sectors


def twisted_sectors(G: GroupTable, theta: TwoCocycle | None = None, field: Field | None = None):
    """Centre of k_θ[G] graded by conjugacy class (representative, dimension)."""
    from .scalars import Q

    field = field or Q
    A = twisted_group_algebra(G, theta, field=field)
    basis = center_basis(A)
    out = []
    total = 0
    for cls in G.conjugacy_classes():
        idx = sorted(cls)
        if not basis:
            continue
        M = Tensor([b[i] for b in basis for i in idx], field, shape=(len(basis), len(idx)))
        r = rank(M)
        if r:
            out.append((idx[0], r))
            total += r
    if total != len(basis):
        raise StateSumError("centre does not split along conjugacy classes")
    return out
