"""Spherical fusion data, Turaev-Viro-Barrett-Westbury state sums and the
3d orbifold datum built from a fusion category.

Conventions (multiplicity-free data):

* ``N[i, j, k]`` is the multiplicity of k in i (x) j.
* ``F[(i, j, k, l, m, n)]`` is the 1x1 block of the associator
  (i j) k -> i (j k) with outer label l, left channel m (i j -> m) and right
  channel n (j k -> n).
* A tetrahedron with vertices 0<1<2<3 carries i=x01, j=x12, k=x23, l=x03,
  m=x02, n=x13. Positive tetrahedra weigh F[m, n] / d_n, negative ones
  Finv[n, m] / d_m, where Finv is the blockwise inverse of F^{ijk}_l.
* Z(M) = (D^2)^(-V) * sum over edge colourings of prod_e d_e * prod_t W(t).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .frobenius import FrobeniusAlgebra, direct_sum, trivial_algebra
from .linalg import inverse
from .scalars import ComplexFloats, Field, Q, QuadraticField, QuadraticNumber
from .simplicial import Triangulation, face_tuple, validate
from .tensor import ShapeError, Tensor, contract_network

# tetrahedron edge slots (i, j, k, l, m, n) as vertex-position pairs
TET_EDGES = ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3))


class FusionError(ValueError):
    """Malformed or unsupported fusion data."""


@dataclass(frozen=True, eq=False)
class SphericalFusionData:
    labels: tuple
    dual: tuple
    N: np.ndarray
    qdim: tuple
    F: dict
    field: Field = Q
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        N = np.asarray(self.N, dtype=np.int64)
        if N.shape != (n, n, n):
            raise ShapeError(f"N has shape {N.shape}, expected {(n, n, n)}")
        if (N < 0).any():
            raise FusionError("fusion multiplicities must be non-negative")
        if len(self.dual) != n or len(self.qdim) != n:
            raise ShapeError("dual and qdim need one entry per label")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dual", tuple(int(x) for x in self.dual))
        object.__setattr__(self, "qdim", tuple(self.field(x) for x in self.qdim))
        F = {}
        for key, block in self.F.items():
            key = tuple(int(x) for x in key)
            if len(key) != 6:
                raise ShapeError(f"F key {key} needs six labels")
            i, j, k, l, m, n_ = key
            shape = (int(N[i, j, m] * N[m, k, l]), int(N[j, k, n_] * N[i, n_, l]))
            t = block if isinstance(block, Tensor) else Tensor(block, self.field, shape=shape)
            if t.shape != shape:
                raise ShapeError(f"F{key} has shape {t.shape}, expected {shape}")
            F[key] = t
        object.__setattr__(self, "F", F)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def unit(self) -> int:
        return 0

    @property
    def total_dim_sq(self):
        return sum((d * d for d in self.qdim), self.field.zero())

    @property
    def multiplicity_free(self) -> bool:
        return bool((self.N <= 1).all())

    def admissible(self, i, j, k) -> bool:
        return bool(self.N[i, j, k])

    def six_tuples(self):
        """Admissible (i, j, k, l, m, n) in lexicographic order."""
        r = range(self.rank)
        for i, j, k, l, m, n in itertools.product(r, repeat=6):
            if self.N[i, j, m] and self.N[m, k, l] and self.N[j, k, n] and self.N[i, n, l]:
                yield (i, j, k, l, m, n)

    def f(self, key):
        """Scalar F entry of a multiplicity-free admissible tuple (0 if not admissible)."""
        t = self.F.get(key)
        if t is None:
            return self.field.zero()
        return t.array[0, 0]

    def with_F(self, key, value, name: str | None = None) -> "SphericalFusionData":
        F = dict(self.F)
        F[key] = Tensor([value], self.field, shape=(1, 1))
        return SphericalFusionData(self.labels, self.dual, self.N, self.qdim, F, self.field,
                                   self.name if name is None else name)

    def to_json(self) -> dict:
        from .scalars import format_scalar
        return {"labels": list(self.labels), "dual": list(self.dual),
                "N": [int(x) for x in self.N.reshape(-1)],
                "qdim": [format_scalar(d) for d in self.qdim],
                "F": {str(tuple(k)): [format_scalar(x) for x in v.entries] for k, v in sorted(self.F.items())},
                "field": self.field.name}

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "SphericalFusionData":
        import ast
        from .scalars import field_from_name, parse_scalar
        fld = field or field_from_name(obj.get("field", "Q"))
        n = len(obj["labels"])
        N = np.asarray(obj["N"], dtype=np.int64)
        if N.size != n ** 3:
            raise ShapeError(f"N has {N.size} entries, expected {n ** 3}")
        F = {}
        for k, v in obj["F"].items():
            key = tuple(ast.literal_eval(k))
            vals = v if isinstance(v, list) else [v]
            F[key] = [parse_scalar(x, fld) for x in vals]
        return cls(tuple(obj["labels"]), tuple(obj["dual"]), N.reshape(n, n, n),
                   tuple(parse_scalar(d, fld) for d in obj["qdim"]), F, fld, obj.get("name", ""))


def _require_mf(S: SphericalFusionData):
    if not S.multiplicity_free:
        raise FusionError("only multiplicity-free fusion data are supported by the evaluators")


# ---------------------------------------------------------------------------
# blockwise inverse and validation


@lru_cache(maxsize=64)
def _inverse_blocks(S: SphericalFusionData) -> dict:
    """Finv[(i,j,k,l,n,m)] = (F^{ijk}_l)^{-1}[n, m] for multiplicity-free data."""
    _require_mf(S)
    blocks: dict = {}
    for key in S.six_tuples():
        blocks.setdefault(key[:4], set()).add(key[4:])
    inv = {}
    for (i, j, k, l), mns in blocks.items():
        ms = sorted({m for m, _ in mns})
        ns = sorted({n for _, n in mns})
        if len(ms) != len(ns):
            raise FusionError(f"F^{(i, j, k)}_{l} is not square")
        mat = Tensor([S.f((i, j, k, l, m, n)) for m in ms for n in ns], S.field, shape=(len(ms), len(ns)))
        try:
            mi = inverse(mat)
        except ZeroDivisionError:
            raise FusionError(f"F^{(i, j, k)}_{l} is singular") from None
        for a, n in enumerate(ns):
            for b, m in enumerate(ms):
                inv[(i, j, k, l, n, m)] = mi.array[a, b]
    return inv


@dataclass
class FusionReport:
    unit: bool
    duality: bool
    pentagon: bool
    unit_F_normalized: bool
    spherical_dims: bool
    witnesses: dict = dc_field(default_factory=dict)

    def flags(self) -> dict:
        return {"unit": self.unit, "duality": self.duality, "pentagon": self.pentagon,
                "unit_F_normalized": self.unit_F_normalized, "spherical_dims": self.spherical_dims}

    @property
    def all_true(self) -> bool:
        return all(self.flags().values())


def pentagon_violations(S: SphericalFusionData, limit: int | None = 1) -> list[dict]:
    """Admissible (a,b,c,d; x02,x03,x04,x14,x24) where
    F^{x02 c d}_{x04}[x03,x24] F^{a b x24}_{x04}[x02,x14]
      != sum_{x13} F^{abc}_{x03}[x02,x13] F^{a x13 d}_{x04}[x03,x14] F^{bcd}_{x14}[x13,x24]."""
    _require_mf(S)
    fld, N, r = S.field, S.N, range(S.rank)
    f = S.f
    out = []
    for a, b, c, d in itertools.product(r, repeat=4):
        for x02, x03, x04 in itertools.product(r, repeat=3):
            if not (N[a, b, x02] and N[x02, c, x03] and N[x03, d, x04]):
                continue
            for x14, x24 in itertools.product(r, repeat=2):
                if not (N[c, d, x24] and N[b, x24, x14] and N[a, x14, x04]):
                    continue
                lhs = f((x02, c, d, x04, x03, x24)) * f((a, b, x24, x04, x02, x14))
                rhs = fld.zero()
                for x13 in r:
                    if N[b, c, x13] and N[a, x13, x03] and N[x13, d, x14]:
                        rhs = rhs + f((a, b, c, x03, x02, x13)) * f((a, x13, d, x04, x03, x14)) \
                            * f((b, c, d, x14, x13, x24))
                if not fld.eq(lhs, rhs):
                    out.append({"labels": [a, b, c, d], "channels": [x02, x03, x04, x14, x24],
                                "lhs": lhs, "rhs": rhs})
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def validate_fusion(S: SphericalFusionData) -> FusionReport:
    n, N, u, fld = S.rank, S.N, S.unit, S.field
    wit: dict = {}
    eye = np.eye(n, dtype=np.int64)
    unit = bool((N[u] == eye).all() and (N[:, u, :] == eye).all())
    if not unit:
        wit["unit"] = "N with the unit label is not the identity"
    duality = all(sorted(S.dual) == list(range(n)) and S.dual[S.dual[i]] == i for i in range(n)) \
        and all(N[i, j, u] == (1 if j == S.dual[i] else 0) for i in range(n) for j in range(n))
    if not duality:
        wit["duality"] = "N_{ij}^1 != delta_{j,i*} or dual is not an involution"
    norm = True
    for key in S.six_tuples():
        if u in key[:3]:
            blk = S.F.get(key)
            if blk is None or not blk.equals(Tensor.identity(blk.shape[0], fld)):
                norm = False
                wit["unit_F_normalized"] = list(key)
                break
    dims = all(not fld.is_zero(d) for d in S.qdim) and \
        all(fld.eq(S.qdim[i], S.qdim[S.dual[i]]) for i in range(n)) and \
        all(fld.eq(S.qdim[i] * S.qdim[j], sum((N[i, j, k] * S.qdim[k] for k in range(n)), fld.zero()))
            for i in range(n) for j in range(n))
    if not dims:
        wit["spherical_dims"] = "dimensions are zero, not dual-invariant or not a fusion character"
    missing = [k for k in S.six_tuples() if k not in S.F]
    if missing:
        pent = False
        wit["pentagon"] = {"missing_F": list(missing[0])}
    else:
        viol = pentagon_violations(S)
        pent = not viol
        if viol:
            wit["pentagon"] = viol[0]
    return FusionReport(unit, duality, pent, norm, dims, wit)


# ---------------------------------------------------------------------------
# orbifold datum


@dataclass(frozen=True, eq=False)
class OrbifoldDatum3:
    """A2 = sum of trivial algebras, A1 = sum of multiplicity spaces S(i(x)j, k)
    with basis ``triples``, A0+/- = associator and its inverse on four A1 legs
    ordered by the omitted tetrahedron vertex (face 0, 1, 2, 3)."""
    A2: FrobeniusAlgebra
    triples: tuple
    left_action: Tensor
    right_action: Tensor
    A0_plus: Tensor
    A0_minus: Tensor
    edge_weight: Tensor
    vertex_weight: object
    field: Field = Q

    @property
    def A1_dim(self) -> int:
        return len(self.triples)

    def with_A0_plus(self, t: Tensor) -> "OrbifoldDatum3":
        return OrbifoldDatum3(self.A2, self.triples, self.left_action, self.right_action, t,
                              self.A0_minus, self.edge_weight, self.vertex_weight, self.field)


def _tet_faces(i, j, k, l, m, n):
    """A1 triples on faces 0..3 of a tetrahedron coloured (i, j, k, l, m, n)."""
    return ((j, k, n), (m, k, l), (i, n, l), (i, j, m))


def orbifold_datum_from_fusion(S: SphericalFusionData) -> OrbifoldDatum3:
    _require_mf(S)
    fld, r = S.field, S.rank
    A2 = trivial_algebra(fld)
    for _ in range(r - 1):
        A2 = direct_sum(A2, trivial_algebra(fld))
    triples = tuple((i, j, k) for i in range(r) for j in range(r) for k in range(r) if S.N[i, j, k])
    idx = {t: a for a, t in enumerate(triples)}
    d1 = len(triples)
    one, zero = fld.one(), fld.zero()
    left = np.full((r, d1, d1), zero, dtype=object)
    right = np.full((d1, r * r, d1), zero, dtype=object)
    for a, (i, j, k) in enumerate(triples):
        left[k, a, a] = one
        right[a, i * r + j, a] = one
    inv = _inverse_blocks(S)
    plus = np.full((d1,) * 4, zero, dtype=object)
    minus = np.full((d1,) * 4, zero, dtype=object)
    for key in S.six_tuples():
        i, j, k, l, m, n = key
        pos = tuple(idx[t] for t in _tet_faces(*key))
        plus[pos] = S.f(key)
        minus[pos] = inv[(i, j, k, l, n, m)]
    return OrbifoldDatum3(A2, triples, Tensor._wrap(left, fld), Tensor._wrap(right, fld),
                          Tensor._wrap(plus, fld), Tensor._wrap(minus, fld),
                          Tensor(list(S.qdim), fld, shape=(r,)), fld.inverse(S.total_dim_sq), fld)


@lru_cache(maxsize=32)
def tetrahedron_weights(D: OrbifoldDatum3) -> tuple[Tensor, Tensor]:
    """Edge-indexed weights W+[i,j,k,l,m,n] = A0+ / d_n and W-[...] = A0- / d_m."""
    fld = D.field
    r = D.A2.dim
    idx = {t: a for a, t in enumerate(D.triples)}
    dims = D.edge_weight.array
    wp = np.full((r,) * 6, fld.zero(), dtype=object)
    wm = np.full((r,) * 6, fld.zero(), dtype=object)
    for key in itertools.product(range(r), repeat=6):
        faces = _tet_faces(*key)
        if not all(t in idx for t in faces):
            continue
        pos = tuple(idx[t] for t in faces)
        wp[key] = D.A0_plus.array[pos] / dims[key[5]]
        wm[key] = D.A0_minus.array[pos] / dims[key[4]]
    return Tensor._wrap(wp, fld), Tensor._wrap(wm, fld)


# ---------------------------------------------------------------------------
# state sums


class StateSumError3(ValueError):
    """Triangulation or data not accepted by the 3d state sum."""


@lru_cache(maxsize=32)
def _datum(S: SphericalFusionData) -> OrbifoldDatum3:
    return orbifold_datum_from_fusion(S)


def tv_network(S: SphericalFusionData, T: Triangulation):
    """Tensors and edge-class labels of the closed state sum (without (D^2)^-V)."""
    D = _datum(S)
    wp, wm = tetrahedron_weights(D)
    classes = T.cell_classes(1)
    tensors, labels = [], []
    for s in range(T.size):
        tensors.append(wp if T.orientation[s] > 0 else wm)
        labels.append([classes[(s, pq)] for pq in TET_EDGES])
    for e in sorted(set(classes.values())):
        tensors.append(D.edge_weight)
        labels.append([e])
    return tensors, labels


def _check_closed(S: SphericalFusionData, T: Triangulation):
    if T.n != 3:
        raise StateSumError3(f"need a 3-dimensional triangulation, got n={T.n}")
    rep = validate(T)
    if not rep.valid:
        raise StateSumError3(f"invalid triangulation: {rep.errors[:1]}")
    if not rep.closed:
        raise StateSumError3("triangulation has boundary")
    _require_mf(S)


def tv_invariant(S: SphericalFusionData, T: Triangulation, check: bool = True):
    """Turaev-Viro-Barrett-Westbury invariant of a closed oriented 3-manifold."""
    if check:
        _check_closed(S, T)
    tensors, labels = tv_network(S, T)
    V = T.counts()[0]
    z = contract_network(tensors, labels, (), S.field).item()
    return z * S.field.inverse(S.total_dim_sq) ** V


def tv_enumerate(S: SphericalFusionData, T: Triangulation, coloring_cap: int = 2 ** 20):
    """Brute-force sum over edge colourings; refuses more than ``coloring_cap`` colourings."""
    _check_closed(S, T)
    D = _datum(S)
    wp, wm = tetrahedron_weights(D)
    wp, wm = wp.array, wm.array
    classes = T.cell_classes(1)
    edges = sorted(set(classes.values()))
    total = S.rank ** len(edges)
    if total > coloring_cap:
        raise StateSumError3(f"{total} colourings exceed the cap {coloring_cap}")
    pos = {e: a for a, e in enumerate(edges)}
    tet_edges = [[pos[classes[(s, pq)]] for pq in TET_EDGES] for s in range(T.size)]
    fld = S.field
    acc = fld.zero()
    for col in itertools.product(range(S.rank), repeat=len(edges)):
        w = fld.one()
        for s, es in enumerate(tet_edges):
            key = tuple(col[e] for e in es)
            w = w * (wp[key] if T.orientation[s] > 0 else wm[key])
            if fld.is_zero(w):
                break
        else:
            for c in col:
                w = w * S.qdim[c]
            acc = acc + w
    return acc * fld.inverse(S.total_dim_sq) ** T.counts()[0]


# ---------------------------------------------------------------------------
# local Pachner equations


@dataclass
class Invariance3Report:
    two_three: bool
    two_three_negative: bool
    one_four: bool
    one_four_raw_factor: object
    witnesses: dict = dc_field(default_factory=dict)

    def flags(self) -> dict:
        return {"two_three": self.two_three, "two_three_negative": self.two_three_negative,
                "one_four": self.one_four}

    @property
    def all_true(self) -> bool:
        return all(self.flags().values())


def _move_sides(k: int, sigma: int):
    """Tetrahedra (vertex tuples, signs) on both sides of the k-(5-k) move
    inside the boundary of the 4-simplex on vertices 0..4."""
    W = tuple(range(5))
    # omitting {1, 3} makes every tetrahedron of the 2-3 move share one sign
    omitted = {1: {4}, 2: {1, 3}}[k]
    faces = [(face_tuple(W, i), i) for i in range(5)]
    old = [(v, sigma * (-1) ** i) for v, i in faces if i in omitted]
    new = [(v, -sigma * (-1) ** i) for v, i in faces if i not in omitted]
    return old, new


def _edges_of(tets):
    return {tuple(sorted((v[p], v[q]))) for v, _ in tets for p, q in TET_EDGES}


def _side_value(D: OrbifoldDatum3, tets, boundary_edges) -> dict:
    """Sparse amplitude {boundary colouring: value} by backtracking over
    admissible colourings; interior edges weighted by d."""
    wp, wm = tetrahedron_weights(D)
    wp, wm = wp.array, wm.array
    fld = D.field
    dims = D.edge_weight.array
    r = D.A2.dim
    adm = {(i, j, k) for i, j, k in D.triples}
    edges = sorted(boundary_edges) + sorted(_edges_of(tets) - set(boundary_edges))
    pos = {e: a for a, e in enumerate(edges)}
    tris = {tuple(sorted(t)) for v, _ in tets for t in itertools.combinations(v, 3)}
    # triangles checked once their last edge is coloured
    due: dict[int, list] = {}
    for p, q, t in tris:
        es = (pos[(p, q)], pos[(q, t)], pos[(p, t)])
        due.setdefault(max(es), []).append(es)
    tet_pos = [([pos[tuple(sorted((v[a], v[b])))] for a, b in TET_EDGES], sg) for v, sg in tets]
    nb = len(boundary_edges)
    out: dict = {}
    col = [0] * len(edges)

    def rec(e):
        if e == len(edges):
            w = fld.one()
            for es, sg in tet_pos:
                w = w * (wp if sg > 0 else wm)[tuple(col[x] for x in es)]
            for x in range(nb, len(edges)):
                w = w * dims[col[x]]
            key = tuple(col[:nb])
            out[key] = out.get(key, fld.zero()) + w
            return
        for c in range(r):
            col[e] = c
            if all((col[a], col[b], col[c2]) in adm for a, b, c2 in due.get(e, ())):
                rec(e + 1)

    rec(0)
    return {k: v for k, v in out.items() if not fld.is_zero(v)}


def local_move_sides(D: OrbifoldDatum3, k: int, sigma: int = 1) -> tuple[dict, dict]:
    """Both sides of a k-(5-k) move as sparse amplitudes over the shared
    boundary edges (interior edges weighted by d, no vertex weights)."""
    old, new = _move_sides(k, sigma)
    bnd = sorted(_edges_of(old) & _edges_of(new))
    return _side_value(D, old, bnd), _side_value(D, new, bnd)


def _same(a: dict, b: dict, fld: Field, c=None):
    """First boundary colouring where a != c * b, or None."""
    one = fld.one() if c is None else c
    for key in sorted(set(a) | set(b)):
        if not fld.eq(a.get(key, fld.zero()), one * b.get(key, fld.zero())):
            return key
    return None


def _ratio(a: dict, b: dict, fld: Field):
    """c with a == c * b, or None."""
    if not b:
        return fld.one() if not a else None
    key = min(b)
    c = a.get(key, fld.zero()) / b[key]
    return c if _same(a, b, fld, c) is None else None


def check_3d_invariance(D: OrbifoldDatum3) -> Invariance3Report:
    fld = D.field
    wit: dict = {}
    lhs, rhs = local_move_sides(D, 2, -1)
    bad = _same(lhs, rhs, fld)
    two_three = bad is None
    if not two_three:
        wit["two_three"] = {"boundary_colouring": list(bad)}
    lhs_n, rhs_n = local_move_sides(D, 2, 1)
    bad = _same(lhs_n, rhs_n, fld)
    two_three_neg = bad is None
    if not two_three_neg:
        wit["two_three_negative"] = {"boundary_colouring": list(bad)}
    # 1-4: one extra interior vertex weighs vertex_weight on the split side
    one_ok = True
    factor = None
    for sigma in (1, -1):
        old, new = local_move_sides(D, 1, sigma)
        c = _ratio(new, old, fld)
        if c is None or not fld.eq(c * D.vertex_weight, fld.one()):
            one_ok = False
            wit.setdefault("one_four", {"sigma": sigma, "raw_factor": c})
        if sigma == 1:
            factor = c
    return Invariance3Report(two_three, two_three_neg, one_ok, factor, wit)


# ---------------------------------------------------------------------------
# built-in fusion data


def vec_cyclic(N: int, field: Field = Q) -> SphericalFusionData:
    """Vec_{Z/N} with trivial associator."""
    if N < 1:
        raise ValueError("N must be positive")
    Nt = np.zeros((N, N, N), dtype=np.int64)
    for i in range(N):
        for j in range(N):
            Nt[i, j, (i + j) % N] = 1
    one = field.one()
    F = {}
    for i, j, k in itertools.product(range(N), repeat=3):
        F[(i, j, k, (i + j + k) % N, (i + j) % N, (j + k) % N)] = [one]
    return SphericalFusionData(tuple(range(N)), tuple((-i) % N for i in range(N)), Nt,
                               (one,) * N, F, field, f"vec_z{N}")


def _fib_rules() -> np.ndarray:
    Nt = np.zeros((2, 2, 2), dtype=np.int64)
    Nt[0, 0, 0] = Nt[0, 1, 1] = Nt[1, 0, 1] = Nt[1, 1, 0] = Nt[1, 1, 1] = 1
    return Nt


def _fib(phi, top: list, field: Field, name: str) -> SphericalFusionData:
    Nt = _fib_rules()
    one = field.one()
    F = {}
    for key in itertools.product(range(2), repeat=6):
        i, j, k, l, m, n = key
        if Nt[i, j, m] and Nt[m, k, l] and Nt[j, k, n] and Nt[i, n, l]:
            F[key] = [one]
    (a, b), (c, e) = top
    F[(1, 1, 1, 1, 0, 0)] = [a]
    F[(1, 1, 1, 1, 0, 1)] = [b]
    F[(1, 1, 1, 1, 1, 0)] = [c]
    F[(1, 1, 1, 1, 1, 1)] = [e]
    return SphericalFusionData(("1", "tau"), (0, 1), Nt, (one, phi), F, field, name)


def fibonacci(field: QuadraticField | None = None) -> SphericalFusionData:
    """Fibonacci category over Q(sqrt 5) in the gauge F^{ttt}_t = [[1/phi, 1], [1/phi, -1/phi]]."""
    field = field or QuadraticField(5)
    phi = QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    ip = phi.inverse()
    return _fib(phi, [[ip, field.one()], [ip, -ip]], field, "fibonacci")


def fibonacci_unitary(field: ComplexFloats | None = None) -> SphericalFusionData:
    """Fibonacci with the unitary F^{ttt}_t = [[1/phi, 1/sqrt(phi)], [1/sqrt(phi), -1/phi]]."""
    field = field or ComplexFloats()
    phi = (1 + math.sqrt(5)) / 2
    s = 1 / math.sqrt(phi)
    return _fib(field(phi), [[field(1 / phi), field(s)], [field(s), field(-1 / phi)]], field,
                "fibonacci_unitary")


def fibonacci_perturbed(field: QuadraticField | None = None) -> SphericalFusionData:
    """Negative control: one entry of F^{ttt}_t shifted by 1."""
    S = fibonacci(field)
    key = (1, 1, 1, 1, 1, 1)
    return S.with_F(key, S.f(key) + 1, "fibonacci_perturbed")


def builtin_fusion() -> dict[str, SphericalFusionData]:
    out = {"trivial": vec_cyclic(1)}
    for N in range(2, 6):
        out[f"vec_z{N}"] = vec_cyclic(N)
    out["fibonacci"] = fibonacci()
    out["fibonacci_unitary"] = fibonacci_unitary()
    out["fibonacci_perturbed"] = fibonacci_perturbed()
    return out
