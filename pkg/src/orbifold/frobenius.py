"""Finite-dimensional Frobenius algebras given by structure constants.

Conventions: ``mu[i, j, k]`` is the coefficient of ``a_k`` in ``a_i a_j``;
``comul[i, j, k]`` the coefficient of ``a_j ⊗ a_k`` in ``Δ(a_i)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .linalg import inverse, kernel, solve
from .scalars import Field, Q
from .tensor import ShapeError, Tensor, contract_network


class AxiomError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    dim: int
    mu: Tensor
    unit: Tensor
    counit: Tensor
    comul: Tensor
    name: str = ""

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise ShapeError("dimension must be >= 1")
        for nm, t, shp in (("mu", self.mu, (n, n, n)), ("unit", self.unit, (n,)),
                           ("counit", self.counit, (n,)), ("comul", self.comul, (n, n, n))):
            if t.shape != shp:
                raise ShapeError(f"{nm} has shape {list(t.shape)}, expected {list(shp)}")

    @property
    def field(self) -> Field:
        return self.mu.field

    def pairing(self) -> Tensor:
        """g[i, j] = ε(a_i a_j)."""
        return contract_network([self.mu, self.counit], [["i", "j", "k"], ["k"]], ["i", "j"])

    def multiply(self, x: Tensor, y: Tensor) -> Tensor:
        return contract_network([x, y, self.mu], [["i"], ["j"], ["i", "j", "k"]], ["k"])

    def is_commutative(self) -> bool:
        return self.mu.equals(self.mu.transpose(1, 0, 2))

    def with_name(self, name: str) -> "FrobeniusAlgebra":
        return FrobeniusAlgebra(self.dim, self.mu, self.unit, self.counit, self.comul, name)


@dataclass(frozen=True)
class AxiomReport:
    associative: bool
    unital: bool
    coassociative: bool
    counital: bool
    frobenius: bool
    symmetric: bool
    delta_separable: bool
    pairing_nondegenerate: bool
    separable: bool
    witnesses: dict = dc_field(default_factory=dict)

    FLAGS = ("associative", "unital", "coassociative", "counital", "frobenius",
             "symmetric", "delta_separable", "pairing_nondegenerate", "separable")

    def flags(self) -> dict[str, bool]:
        return {f: getattr(self, f) for f in self.FLAGS}

    @property
    def all_true(self) -> bool:
        return all(self.flags().values())

    @property
    def is_orbifold_datum(self) -> bool:
        """Δ-separable symmetric Frobenius."""
        return self.delta_separable and self.symmetric and self.frobenius


def _compare(lhs: Tensor, rhs: Tensor):
    diff = lhs.first_difference(rhs)
    if diff is None:
        return True, None
    return False, diff


def _identity(n, field):
    return Tensor.identity(n, field)


def check_axioms(A: FrobeniusAlgebra) -> AxiomReport:
    n, f = A.dim, A.field
    mu, eta, eps, dl = A.mu, A.unit, A.counit, A.comul
    wit = {}
    res = {}

    def record(name, checks):
        ok = True
        for lhs, rhs in checks:
            good, diff = _compare(lhs, rhs)
            if not good:
                ok = False
                wit[name] = {"index": list(diff[0]), "lhs": diff[1], "rhs": diff[2]}
                break
        res[name] = ok

    N = contract_network
    record("associative", [(N([mu, mu], [["i", "j", "m"], ["m", "k", "l"]], ["i", "j", "k", "l"]),
                            N([mu, mu], [["j", "k", "m"], ["i", "m", "l"]], ["i", "j", "k", "l"]))])
    eye = _identity(n, f)
    record("unital", [(N([eta, mu], [["i"], ["i", "j", "k"]], ["j", "k"]), eye),
                      (N([eta, mu], [["j"], ["i", "j", "k"]], ["i", "k"]), eye)])
    record("coassociative", [(N([dl, dl], [["i", "m", "l"], ["m", "j", "k"]], ["i", "j", "k", "l"]),
                              N([dl, dl], [["i", "j", "m"], ["m", "k", "l"]], ["i", "j", "k", "l"]))])
    record("counital", [(N([eps, dl], [["j"], ["i", "j", "k"]], ["i", "k"]), eye),
                        (N([eps, dl], [["k"], ["i", "j", "k"]], ["i", "j"]), eye)])
    dm = N([mu, dl], [["i", "j", "m"], ["m", "k", "l"]], ["i", "j", "k", "l"])
    record("frobenius", [(N([dl, mu], [["i", "k", "m"], ["m", "j", "l"]], ["i", "j", "k", "l"]), dm),
                         (N([dl, mu], [["j", "m", "l"], ["i", "m", "k"]], ["i", "j", "k", "l"]), dm)])
    g = A.pairing()
    record("symmetric", [(g, g.transpose(1, 0))])
    record("delta_separable", [(N([dl, mu], [["i", "j", "k"], ["j", "k", "l"]], ["i", "l"]), eye)])
    try:
        inverse(g)
        res["pairing_nondegenerate"] = True
    except ZeroDivisionError:
        res["pairing_nondegenerate"] = False
        wit["pairing_nondegenerate"] = {"index": [], "lhs": "det(g)", "rhs": 0}
    res["separable"] = separability_element(A) is not None
    if not res["separable"]:
        wit["separable"] = {"index": [], "lhs": "no s with μ(s)=η, as=sa", "rhs": None}
    if res["delta_separable"] and not res["frobenius"]:
        res["delta_separable"] = False
        wit.setdefault("delta_separable", {"index": [], "lhs": "μ∘Δ = id but Frobenius relation fails",
                                           "rhs": None})
    return AxiomReport(witnesses=wit, **res)


def _is_separability_element(A: FrobeniusAlgebra, s: Tensor) -> bool:
    N = contract_network
    if not N([s, A.mu], [["j", "k"], ["j", "k", "l"]], ["l"]).equals(A.unit):
        return False
    left = N([A.mu, s], [["i", "j", "m"], ["j", "q"]], ["i", "m", "q"])
    right = N([s, A.mu], [["m", "k"], ["k", "i", "q"]], ["i", "m", "q"])
    return left.equals(right)


def separability_element(A: FrobeniusAlgebra):
    """Some s ∈ A⊗A with μ(s) = η and a·s = s·a for all a, or ``None``."""
    n, f = A.dim, A.field
    mu = A.mu
    # Δ(η) works whenever A is Δ-separable Frobenius; test it before solving
    cand = contract_network([A.unit, A.comul], [["i"], ["i", "j", "k"]], ["j", "k"])
    if _is_separability_element(A, cand):
        return cand.reshape(n * n)
    zero = f.zero()
    m_arr = mu.array
    # μ(s) = η: rows l, columns (j, k)
    top = m_arr.transpose(2, 0, 1).reshape(n, n * n)
    # (a_i s)_{mq} = (s a_i)_{mq}: rows (i, m, q), columns (j, k)
    comm = np.full((n, n, n, n, n), zero, dtype=object)
    for q in range(n):
        comm[:, :, q, :, q] += m_arr.transpose(0, 2, 1)
    for m in range(n):
        comm[:, m, :, m, :] -= m_arr.transpose(1, 2, 0)
    M = Tensor._wrap(np.concatenate([top, comm.reshape(n ** 3, n * n)]), f)
    b = Tensor._wrap(np.concatenate([A.unit.array, np.full(n ** 3, zero, dtype=object)]), f)
    return solve(M, b)


def comul_from_form(mu: Tensor, unit: Tensor, counit: Tensor) -> Tensor:
    """Δ(x) = Σ_{jk} g^{jk} (x a_j) ⊗ a_k with g = ε∘μ."""
    g = contract_network([mu, counit], [["i", "j", "k"], ["k"]], ["i", "j"])
    try:
        ginv = inverse(g)
    except ZeroDivisionError:
        raise AxiomError("degenerate pairing ε∘μ: no Frobenius comultiplication") from None
    return contract_network([mu, ginv], [["i", "j", "p"], ["j", "k"]], ["i", "p", "k"])


def make_algebra(mu: Tensor, unit: Tensor, counit: Tensor, comul: Tensor | None = None,
                 name: str = "") -> FrobeniusAlgebra:
    if comul is None:
        comul = comul_from_form(mu, unit, counit)
    return FrobeniusAlgebra(mu.shape[0], mu, unit, counit, comul, name)


def rescale_counit(A: FrobeniusAlgebra, lam) -> FrobeniusAlgebra:
    """Same algebra, ε ↦ λε, Δ recomputed from the new form."""
    return make_algebra(A.mu, A.unit, A.counit.scale(lam), name=f"{A.name}*{lam}")


def change_basis(A: FrobeniusAlgebra, P: Tensor) -> FrobeniusAlgebra:
    """Structure constants in the basis b_i = Σ_j P[j, i] a_j."""
    Pi = inverse(P)
    N = contract_network
    mu = N([P, P, A.mu, Pi], [["a", "i"], ["b", "j"], ["a", "b", "c"], ["k", "c"]], ["i", "j", "k"])
    unit = N([Pi, A.unit], [["i", "a"], ["a"]], ["i"])
    counit = N([A.counit, P], [["a"], ["a", "i"]], ["i"])
    comul = N([P, A.comul, Pi, Pi], [["a", "i"], ["a", "b", "c"], ["j", "b"], ["k", "c"]], ["i", "j", "k"])
    return FrobeniusAlgebra(A.dim, mu, unit, counit, comul, A.name)


# ---------------------------------------------------------------------------
# centre


def _coordinates(basis: Sequence[Tensor], v: Tensor) -> Tensor:
    f = v.field
    n = v.shape[0]
    M = Tensor([basis[c][r] for r in range(n) for c in range(len(basis))], f, shape=(n, len(basis)))
    x = solve(M, v)
    if x is None:
        raise ValueError("vector is not in the span")
    return x


def center_basis(A: FrobeniusAlgebra) -> list[Tensor]:
    n, f = A.dim, A.field
    rows = []
    for b in range(n):
        for k in range(n):
            rows.append([A.mu[i, b, k] - A.mu[b, i, k] for i in range(n)])
    M = Tensor([x for r in rows for x in r], f, shape=(len(rows), n))
    return kernel(M)


def center(A: FrobeniusAlgebra) -> tuple[list[Tensor], FrobeniusAlgebra]:
    """Basis of Z(A) and Z(A) as a commutative Frobenius algebra."""
    basis = center_basis(A)
    f = A.field
    r = len(basis)
    mu = []
    for p in range(r):
        for q in range(r):
            mu.extend(_coordinates(basis, A.multiply(basis[p], basis[q])).entries)
    mu_t = Tensor(mu, f, shape=(r, r, r))
    unit = _coordinates(basis, A.unit)
    counit = Tensor([contract_network([A.counit, z], [["i"], ["i"]]).item() for z in basis], f, shape=(r,))
    return basis, make_algebra(mu_t, unit, counit, name=f"Z({A.name})")


# ---------------------------------------------------------------------------
# groups and cocycles


@dataclass(frozen=True, eq=False)
class GroupTable:
    product: tuple
    labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        n = len(self.product)
        if any(len(r) != n for r in self.product):
            raise ShapeError("product table must be square")
        e = self.identity
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    if self.product[self.product[g][h]][k] != self.product[g][self.product[h][k]]:
                        raise ValueError("product table is not associative")
        for g in range(n):
            if e not in self.product[g]:
                raise ValueError(f"element {g} has no inverse")

    @property
    def order(self) -> int:
        return len(self.product)

    @property
    def identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self.product[e][g] == g and self.product[g][e] == g for g in range(n)):
                return e
        raise ValueError("no identity element")

    @property
    def inverse(self) -> tuple:
        e = self.identity
        return tuple(self.product[g].index(e) for g in range(self.order))

    def mul(self, g: int, h: int) -> int:
        return self.product[g][h]

    def conjugacy_classes(self) -> list[frozenset]:
        inv = self.inverse
        seen, out = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            cls = frozenset(self.mul(self.mul(h, g), inv[h]) for h in range(self.order))
            seen |= cls
            out.append(cls)
        return out


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(tuple(tuple((g + h) % n for h in range(n)) for g in range(n)),
                      tuple(str(g) for g in range(n)), f"Z{n}")


def product_group(G: GroupTable, H: GroupTable) -> GroupTable:
    """Elements (g, h) indexed g * |H| + h."""
    m = H.order
    idx = lambda g, h: g * m + h
    prod = tuple(tuple(idx(G.mul(g1, g2), H.mul(h1, h2))
                       for g2 in range(G.order) for h2 in range(m))
                 for g1 in range(G.order) for h1 in range(m))
    labels = tuple(f"({a},{b})" for a in (G.labels or range(G.order)) for b in (H.labels or range(m)))
    return GroupTable(prod, labels, f"{G.name}x{H.name}")


def symmetric_group(n: int) -> GroupTable:
    """Permutations composed right-to-left: (p*q)(x) = p(q(x))."""
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    prod = tuple(tuple(index[tuple(p[q[x]] for x in range(n))] for q in perms) for p in perms)
    return GroupTable(prod, tuple("".join(map(str, p)) for p in perms), f"S{n}")


@dataclass(frozen=True, eq=False)
class TwoCocycle:
    group: GroupTable
    theta: tuple

    def violations(self) -> list[tuple[int, int, int]]:
        G, th = self.group, self.theta
        out = []
        n = G.order
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    lhs = th[g][h] * th[G.mul(g, h)][k]
                    rhs = th[h][k] * th[g][G.mul(h, k)]
                    if lhs != rhs:
                        out.append((g, h, k))
        return out

    def is_cocycle(self) -> bool:
        return not self.violations()


def trivial_cocycle(G: GroupTable, field: Field = Q) -> TwoCocycle:
    one = field.one()
    return TwoCocycle(G, tuple(tuple(one for _ in range(G.order)) for _ in range(G.order)))


def klein_twist(field: Field = Q) -> TwoCocycle:
    """θ((a,b),(c,d)) = (-1)^{bc} on Z2×Z2 (element index 2a + b)."""
    G = product_group(cyclic_group(2), cyclic_group(2))
    th = tuple(tuple(field(-1 if (g % 2) * (h // 2) else 1) for h in range(4)) for g in range(4))
    return TwoCocycle(G, th)


def twisted_group_algebra(G: GroupTable, theta: TwoCocycle | None = None, normalization=None,
                          field: Field = Q) -> FrobeniusAlgebra:
    """k_θ[G] with μ(g, h) = θ(g, h) gh and ε(g) = normalization·δ_{g,e}.

    With normalization |G| (the default) and normalized θ the result is
    Δ-separable.
    """
    n = G.order
    if theta is None:
        theta = trivial_cocycle(G, field)
    if theta.group is not G and theta.group.product != G.product:
        raise ValueError("cocycle is defined on a different group")
    bad = theta.violations()
    if bad:
        raise AxiomError(f"θ fails the cocycle identity at (g,h,k)={bad[0]}")
    if any(field.is_zero(field(x)) for r in theta.theta for x in r):
        raise AxiomError("θ takes the value 0")
    if normalization is None:
        normalization = n
    normalization = field(normalization)
    if field.is_zero(normalization):
        raise AxiomError("normalization must be nonzero")
    e = G.identity
    mu = Tensor.zeros((n, n, n), field).array
    for g in range(n):
        for h in range(n):
            mu[g, h, G.mul(g, h)] = field(theta.theta[g][h])
    mu_t = Tensor(mu, field)
    # unit: η = θ(e,e)^{-1} e
    unit = [field.zero()] * n
    unit[e] = field.inverse(field(theta.theta[e][e]))
    counit = [field.zero()] * n
    counit[e] = normalization
    name = f"k[{G.name}]" if all(x == field.one() for r in theta.theta for x in r) else f"k_θ[{G.name}]"
    return make_algebra(mu_t, Tensor(unit, field), Tensor(counit, field), name=name)


def group_algebra(G: GroupTable, normalization=None, field: Field = Q) -> FrobeniusAlgebra:
    return twisted_group_algebra(G, None, normalization, field)


# ---------------------------------------------------------------------------
# other constructors


def trivial_algebra(field: Field = Q) -> FrobeniusAlgebra:
    one = field.one()
    t = lambda shp: Tensor([one], field, shape=shp)
    return FrobeniusAlgebra(1, t((1, 1, 1)), t((1,)), t((1,)), t((1, 1, 1)), "1")


def matrix_algebra(n: int, trace_scale=None, field: Field = Q) -> FrobeniusAlgebra:
    """End(k^n) with basis E_ij (index i*n + j) and ε = trace_scale·trace."""
    if trace_scale is None:
        trace_scale = n
    d = n * n
    mu = Tensor.zeros((d, d, d), field).array
    for i in range(n):
        for j in range(n):
            for l in range(n):
                mu[i * n + j, j * n + l, i * n + l] = field.one()
    unit = [field.one() if i == j else field.zero() for i in range(n) for j in range(n)]
    counit = [field(trace_scale) if i == j else field.zero() for i in range(n) for j in range(n)]
    return make_algebra(Tensor(mu, field), Tensor(unit, field), Tensor(counit, field),
                        name=f"End(k^{n})")


def endomorphism_orbifold_datum(n: int, field: Field = Q) -> FrobeniusAlgebra:
    """X*⊗X ≅ End(k^n) with counit n·trace; Δ carries the factor 1/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if field.characteristic_divides(n):
        raise AxiomError(f"{n} is not invertible in {field.name}: quantum dimension has no inverse")
    if n == 1:
        return trivial_algebra(field)
    return matrix_algebra(n, n, field)


def direct_sum(A: FrobeniusAlgebra, B: FrobeniusAlgebra) -> FrobeniusAlgebra:
    if A.field != B.field:
        raise ValueError("field mismatch")
    f = A.field
    n, m = A.dim, B.dim
    d = n + m

    def block3(a, b):
        out = Tensor.zeros((d, d, d), f).array
        out[:n, :n, :n] = a.array
        out[n:, n:, n:] = b.array
        return Tensor(out, f)

    def cat(a, b):
        return Tensor(a.entries + b.entries, f, shape=(d,))

    return FrobeniusAlgebra(d, block3(A.mu, B.mu), cat(A.unit, B.unit), cat(A.counit, B.counit),
                            block3(A.comul, B.comul), f"{A.name}+{B.name}")


def tensor_product(A: FrobeniusAlgebra, B: FrobeniusAlgebra) -> FrobeniusAlgebra:
    if A.field != B.field:
        raise ValueError("field mismatch")
    n, m = A.dim, B.dim
    d = n * m
    N = contract_network
    mu = N([A.mu, B.mu], [["i", "j", "k"], ["p", "q", "r"]], ["i", "p", "j", "q", "k", "r"]).reshape(d, d, d)
    dl = N([A.comul, B.comul], [["i", "j", "k"], ["p", "q", "r"]], ["i", "p", "j", "q", "k", "r"]).reshape(d, d, d)
    unit = N([A.unit, B.unit], [["i"], ["p"]], ["i", "p"]).reshape(d)
    counit = N([A.counit, B.counit], [["i"], ["p"]], ["i", "p"]).reshape(d)
    return FrobeniusAlgebra(d, mu, unit, counit, dl, f"{A.name}⊗{B.name}")


def builtin_algebras(field: Field = Q) -> dict[str, FrobeniusAlgebra]:
    """The shipped examples, keyed by name."""
    return {
        "trivial": trivial_algebra(field),
        "z2": group_algebra(cyclic_group(2), field=field).with_name("z2"),
        "z2_unscaled": group_algebra(cyclic_group(2), 1, field).with_name("z2_unscaled"),
        "end2": endomorphism_orbifold_datum(2, field).with_name("end2"),
        "end3": endomorphism_orbifold_datum(3, field).with_name("end3"),
        "s3": group_algebra(symmetric_group(3), field=field).with_name("s3"),
        "klein_twisted": twisted_group_algebra(klein_twist(field).group, klein_twist(field),
                                               field=field).with_name("klein_twisted"),
    }
