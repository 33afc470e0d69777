"""Bimodules between Frobenius algebras, relative tensor products, duals.

``left_action[a, m, n]`` is the coefficient of x_n in a·x_m and
``right_action[m, b, n]`` the coefficient of x_n in x_m·b.
Raw tensor products X⊗Y are indexed by m * dim Y + n.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass

from .frobenius import AxiomError, FrobeniusAlgebra, center, check_axioms, make_algebra, trivial_algebra
from .linalg import inverse, kernel, solve, split_idempotent
from .scalars import Field
from .tensor import LinearMap, ShapeError, Tensor, contract_network as N


class MoritaError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Bimodule:
    left_algebra: FrobeniusAlgebra
    right_algebra: FrobeniusAlgebra
    dim: int
    left_action: Tensor
    right_action: Tensor
    name: str = ""

    def __post_init__(self):
        a, b, d = self.left_algebra.dim, self.right_algebra.dim, self.dim
        if self.left_action.shape != (a, d, d):
            raise ShapeError(f"left action has shape {list(self.left_action.shape)}, expected {[a, d, d]}")
        if self.right_action.shape != (d, b, d):
            raise ShapeError(f"right action has shape {list(self.right_action.shape)}, expected {[d, b, d]}")

    @property
    def field(self) -> Field:
        return self.left_action.field

    def act_left(self, a: Tensor) -> LinearMap:
        """Matrix of x ↦ a·x for an algebra element a."""
        return LinearMap(N([a, self.left_action], [["a"], ["a", "m", "n"]], ["n", "m"]))

    def act_right(self, b: Tensor) -> LinearMap:
        return LinearMap(N([b, self.right_action], [["b"], ["m", "b", "n"]], ["n", "m"]))


@dataclass(frozen=True, eq=False)
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    map: LinearMap

    def intertwines(self) -> bool:
        f = self.map.matrix
        S, T = self.source, self.target
        lhs = N([f, S.left_action], [["q", "n"], ["a", "m", "n"]], ["a", "m", "q"])
        rhs = N([T.left_action, f], [["a", "p", "q"], ["p", "m"]], ["a", "m", "q"])
        if not lhs.equals(rhs):
            return False
        lhs = N([f, S.right_action], [["q", "n"], ["m", "b", "n"]], ["m", "b", "q"])
        rhs = N([T.right_action, f], [["p", "b", "q"], ["p", "m"]], ["m", "b", "q"])
        return lhs.equals(rhs)

    def is_isomorphism(self) -> bool:
        if self.map.domain_dim != self.map.codomain_dim or not self.intertwines():
            return False
        try:
            inverse(self.map.matrix)
        except ZeroDivisionError:
            return False
        return True


@dataclass(frozen=True)
class BimoduleReport:
    left_unital: bool
    left_associative: bool
    right_unital: bool
    right_associative: bool
    commuting_actions: bool
    witnesses: dict

    def flags(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in ("left_unital", "left_associative", "right_unital",
                                               "right_associative", "commuting_actions")}

    @property
    def all_true(self) -> bool:
        return all(self.flags().values())


def check_bimodule(X: Bimodule) -> BimoduleReport:
    A, B = X.left_algebra, X.right_algebra
    L, R = X.left_action, X.right_action
    eye = Tensor.identity(X.dim, X.field)
    wit, res = {}, {}

    def record(name, lhs, rhs):
        diff = lhs.first_difference(rhs)
        res[name] = diff is None
        if diff is not None:
            wit[name] = {"index": list(diff[0]), "lhs": diff[1], "rhs": diff[2]}

    record("left_unital", N([A.unit, L], [["a"], ["a", "m", "n"]], ["m", "n"]), eye)
    record("left_associative",
           N([A.mu, L], [["a", "b", "c"], ["c", "m", "n"]], ["a", "b", "m", "n"]),
           N([L, L], [["b", "m", "p"], ["a", "p", "n"]], ["a", "b", "m", "n"]))
    record("right_unital", N([B.unit, R], [["b"], ["m", "b", "n"]], ["m", "n"]), eye)
    record("right_associative",
           N([B.mu, R], [["b", "c", "d"], ["m", "d", "n"]], ["b", "c", "m", "n"]),
           N([R, R], [["m", "b", "p"], ["p", "c", "n"]], ["b", "c", "m", "n"]))
    record("commuting_actions",
           N([L, R], [["a", "m", "p"], ["p", "b", "n"]], ["a", "b", "m", "n"]),
           N([R, L], [["m", "b", "p"], ["a", "p", "n"]], ["a", "b", "m", "n"]))
    return BimoduleReport(witnesses=wit, **res)


# ---------------------------------------------------------------------------
# constructors


def regular_bimodule(A: FrobeniusAlgebra) -> Bimodule:
    return Bimodule(A, A, A.dim, A.mu, A.mu, f"{A.name}")


def left_regular(A: FrobeniusAlgebra) -> Bimodule:
    """A as an (A, 1)-bimodule."""
    one = trivial_algebra(A.field)
    R = N([Tensor.identity(A.dim, A.field)], [["m", "n"]], ["m", "n"]).reshape(A.dim, 1, A.dim)
    return Bimodule(A, one, A.dim, A.mu, R, f"{A.name}|1")


def vector_space(n: int, field: Field) -> Bimodule:
    one = trivial_algebra(field)
    eye = Tensor.identity(n, field)
    return Bimodule(one, one, n, eye.reshape(1, n, n), eye.reshape(n, 1, n), f"k^{n}")


def column_module(A: FrobeniusAlgebra, n: int) -> Bimodule:
    """k^n as an (End(k^n), 1)-bimodule; ``A`` must use the matrix-unit basis."""
    if A.dim != n * n:
        raise ShapeError("algebra is not End(k^n) in the matrix-unit basis")
    f = A.field
    L = Tensor.zeros((n * n, n, n), f).array
    for i in range(n):
        for j in range(n):
            L[i * n + j, j, i] = f.one()
    one = trivial_algebra(f)
    R = Tensor.identity(n, f).reshape(n, 1, n)
    return Bimodule(A, one, n, Tensor(L, f), R, f"k^{n}")


def change_basis(X: Bimodule, P: Tensor) -> Bimodule:
    """Same bimodule in the basis y_i = Σ_j P[j, i] x_j."""
    Pi = inverse(P)
    L = N([P, X.left_action, Pi], [["p", "m"], ["a", "p", "q"], ["n", "q"]], ["a", "m", "n"])
    R = N([P, X.right_action, Pi], [["p", "m"], ["p", "b", "q"], ["n", "q"]], ["m", "b", "n"])
    return Bimodule(X.left_algebra, X.right_algebra, X.dim, L, R, X.name)


def direct_sum(X: Bimodule, Y: Bimodule) -> Bimodule:
    if not (same_algebra(X.left_algebra, Y.left_algebra) and same_algebra(X.right_algebra, Y.right_algebra)):
        raise MoritaError("direct sum needs identical algebras")
    f = X.field
    d, m = X.dim + Y.dim, X.dim
    L = Tensor.zeros((X.left_algebra.dim, d, d), f).array
    L[:, :m, :m] = X.left_action.array
    L[:, m:, m:] = Y.left_action.array
    R = Tensor.zeros((d, X.right_algebra.dim, d), f).array
    R[:m, :, :m] = X.right_action.array
    R[m:, :, m:] = Y.right_action.array
    return Bimodule(X.left_algebra, X.right_algebra, d, Tensor(L, f), Tensor(R, f), f"{X.name}+{Y.name}")


def free_bimodule(A: FrobeniusAlgebra, B: FrobeniusAlgebra) -> Bimodule:
    """A⊗B with a·(x⊗y)·b = ax⊗yb."""
    f = A.field
    d = A.dim * B.dim
    ea, eb = Tensor.identity(A.dim, f), Tensor.identity(B.dim, f)
    L = N([A.mu, eb], [["a", "m", "p"], ["n", "q"]], ["a", "m", "n", "p", "q"]).reshape(A.dim, d, d)
    R = N([ea, B.mu], [["m", "p"], ["n", "b", "q"]], ["m", "n", "b", "p", "q"]).reshape(d, B.dim, d)
    return Bimodule(A, B, d, L, R, f"{A.name}⊗{B.name}")


def random_bimodule(A: FrobeniusAlgebra, B: FrobeniusAlgebra, rng: random.Random,
                    max_dim: int = 8) -> Bimodule:
    """A random change of basis of a sum of free bimodules (a verified bimodule)."""
    X = free_bimodule(A, B)
    if X.dim > max_dim:
        raise MoritaError(f"smallest free bimodule has dim {X.dim} > {max_dim}")
    while X.dim * 2 <= max_dim and rng.random() < 0.3:
        X = direct_sum(X, free_bimodule(A, B))
    f = X.field
    while True:
        P = Tensor([rng.randint(-2, 2) for _ in range(X.dim ** 2)], f, shape=(X.dim, X.dim))
        try:
            return change_basis(X, P)
        except ZeroDivisionError:
            continue


# ---------------------------------------------------------------------------
# relative tensor products


@functools.lru_cache(maxsize=128)
def _middle_ok(B: FrobeniusAlgebra) -> bool:
    return check_axioms(B).is_orbifold_datum


def delta_unit(B: FrobeniusAlgebra) -> Tensor:
    """Δ(1) as a [dim, dim] tensor."""
    return N([B.unit, B.comul], [["i"], ["i", "j", "k"]], ["j", "k"])


@dataclass(frozen=True, eq=False)
class RelativeTensor:
    bimodule: Bimodule
    proj: LinearMap
    incl: LinearMap
    idempotent: LinearMap


def same_algebra(A: FrobeniusAlgebra, B: FrobeniusAlgebra) -> bool:
    """Identical, or equal structure tensors over the same field."""
    if A is B:
        return True
    if A.dim != B.dim or A.field.name != B.field.name:
        return False
    return all(getattr(A, k).equals(getattr(B, k)) for k in ("mu", "unit", "counit", "comul"))


def relative_tensor(X: Bimodule, Y: Bimodule) -> RelativeTensor:
    """X ⊗_B Y as the image of e(x⊗y) = Σ (x·b_i) ⊗ (b_i'·y), Σ b_i⊗b_i' = Δ(1)."""
    B = X.right_algebra
    if not same_algebra(Y.left_algebra, B):
        raise MoritaError("bimodules are not composable (middle algebras differ)")
    if not _middle_ok(B):
        raise MoritaError(f"middle algebra {B.name!r} is not Δ-separable symmetric Frobenius")
    dx, dy = X.dim, Y.dim
    n = dx * dy
    E = N([delta_unit(B), X.right_action, Y.left_action],
          [["i", "j"], ["m", "i", "p"], ["j", "n", "q"]], ["p", "q", "m", "n"]).reshape(n, n)
    e = LinearMap(E)
    inj, surj = split_idempotent(e)
    r = inj.domain_dim
    I3 = inj.matrix.reshape(dx, dy, r)
    S3 = surj.matrix.reshape(r, dx, dy)
    L = N([S3, X.left_action, I3], [["t", "q", "n"], ["a", "m", "q"], ["m", "n", "s"]], ["a", "s", "t"])
    R = N([S3, Y.right_action, I3], [["t", "m", "q"], ["n", "c", "q"], ["m", "n", "s"]], ["s", "c", "t"])
    Z = Bimodule(X.left_algebra, Y.right_algebra, r, L, R, f"({X.name})⊗({Y.name})")
    return RelativeTensor(Z, surj, inj, e)


def _dual_module(X: Bimodule) -> Bimodule:
    L = X.right_action.transpose(1, 2, 0)
    R = X.left_action.transpose(2, 0, 1)
    return Bimodule(X.right_algebra, X.left_algebra, X.dim, L, R, f"{X.name}*")


@dataclass(frozen=True, eq=False)
class Duality:
    """X* with the raw pairings.

    ``ev[m, n, j]``: X*⊗X → B, φ_m⊗x_n ↦ Σ Δ_B(1)_{ij} φ_m(x_n·b_i) b_j.
    ``ev_tilde[m, n, j]``: X⊗X* → A, x_m⊗φ_n ↦ Σ Δ_A(1)_{ij} φ_n(a_i·x_m) a_j.
    ``coev[a, p, n]``: A → X⊗X*, a ↦ Σ_n (a·x_n)⊗φ_n.
    ``coev_tilde[b, n, p]``: B → X*⊗X, b ↦ Σ_n (b·φ_n)⊗x_n.
    """

    dual: Bimodule
    ev: Tensor
    ev_tilde: Tensor
    coev: Tensor
    coev_tilde: Tensor


def dual_bimodule(X: Bimodule) -> Duality:
    A, B = X.left_algebra, X.right_algebra
    D = _dual_module(X)
    ev = N([delta_unit(B), X.right_action], [["i", "j"], ["n", "i", "m"]], ["m", "n", "j"])
    ev_t = N([delta_unit(A), X.left_action], [["i", "j"], ["i", "m", "n"]], ["m", "n", "j"])
    coev = X.left_action.transpose(0, 2, 1)
    coev_t = D.left_action.transpose(0, 2, 1)
    return Duality(D, ev, ev_t, coev, coev_t)


def zigzag_maps(X: Bimodule) -> tuple[LinearMap, LinearMap]:
    """The two snake composites X → X and X* → X*, each routed through the
    relative-tensor idempotents."""
    dd = dual_bimodule(X)
    A = X.left_algebra
    d = X.dim
    # X → X⊗_B X*⊗_A X → X, starting from coev(1_A)
    e_xd = relative_tensor(X, dd.dual).idempotent.matrix.reshape(d, d, d, d)
    e_dx = relative_tensor(dd.dual, X).idempotent.matrix.reshape(d, d, d, d)
    c = N([A.unit, dd.coev, e_xd], [["a"], ["a", "p", "q"], ["r", "s", "p", "q"]], ["r", "s"])
    z1 = N([c, e_dx, dd.ev, X.right_action],
           [["r", "s"], ["u", "w", "s", "x"], ["u", "w", "j"], ["r", "j", "y"]], ["y", "x"])
    # X* → X*⊗_A X⊗_B X* → X*, starting from coev~(1_B)
    B = X.right_algebra
    ct = N([B.unit, dd.coev_tilde, e_dx], [["b"], ["b", "p", "q"], ["r", "s", "p", "q"]], ["r", "s"])
    z2 = N([ct, e_xd, dd.ev_tilde, dd.dual.right_action],
           [["r", "s"], ["u", "w", "s", "x"], ["u", "w", "j"], ["r", "j", "y"]], ["y", "x"])
    return LinearMap(z1), LinearMap(z2)


def zigzag_holds(X: Bimodule) -> bool:
    z1, z2 = zigzag_maps(X)
    eye = LinearMap.identity(X.dim, X.field)
    return z1.equals(eye) and z2.equals(eye)


# ---------------------------------------------------------------------------
# quantum dimensions


@dataclass(frozen=True, eq=False)
class QuantumDimensions:
    """dim_r ∈ Z(A) and dim_l ∈ Z(B), as algebra elements and in centre coordinates."""

    dim_l: Tensor
    dim_r: Tensor
    dim_l_center: Tensor
    dim_r_center: Tensor


def _center_coords(A: FrobeniusAlgebra, z: Tensor):
    basis, _ = center(A)
    f = A.field
    M = Tensor([basis[c][r] for r in range(A.dim) for c in range(len(basis))], f, shape=(A.dim, len(basis)))
    x = solve(M, z)
    if x is None:
        raise MoritaError("quantum dimension is not central")
    return x


def quantum_dimensions(X: Bimodule) -> QuantumDimensions:
    A, B = X.left_algebra, X.right_algebra
    dim_r = N([delta_unit(A), X.left_action], [["i", "j"], ["i", "m", "m"]], ["j"])
    dim_l = N([delta_unit(B), X.right_action], [["i", "j"], ["m", "i", "m"]], ["j"])
    return QuantumDimensions(dim_l, dim_r, _center_coords(B, dim_l), _center_coords(A, dim_r))


def central_inverse(A: FrobeniusAlgebra, z: Tensor):
    """x with z·x = 1, solved inside Z(A); ``None`` if z is not invertible there."""
    basis, _ = center(A)
    f = A.field
    cols = [A.multiply(z, b) for b in basis]
    M = Tensor([cols[c][r] for r in range(A.dim) for c in range(len(basis))], f, shape=(A.dim, len(basis)))
    x = solve(M, A.unit)
    if x is None:
        return None
    out = Tensor.zeros((A.dim,), f)
    for c, b in zip(x.entries, basis):
        out = out + b.scale(c)
    return out


def algebra_from_bimodule(X: Bimodule) -> FrobeniusAlgebra:
    """The Δ-separable Frobenius algebra on X*⊗_A X.

    Multiplication contracts the middle X⊗X* with ev~, the comultiplication
    inserts ★·coev with ★ = dim_r(X)^{-1}, and the counit is ε_B∘ev with
    dim_r(X) inserted so that Δ stays counital.
    """
    A, B = X.left_algebra, X.right_algebra
    qd = quantum_dimensions(X)
    if A.field.characteristic_divides(X.dim) and all(A.field.is_zero(x) for x in qd.dim_r.entries):
        raise MoritaError("dim_r(X) vanishes")
    star = central_inverse(A, qd.dim_r)
    if star is None:
        raise MoritaError(f"dim_r(X) = {qd.dim_r.entries} is not invertible in Z({A.name})")
    dd = dual_bimodule(X)
    rt = relative_tensor(dd.dual, X)
    d, r, f = X.dim, rt.bimodule.dim, X.field
    I3 = rt.incl.matrix.reshape(d, d, r)
    P3 = rt.proj.matrix.reshape(r, d, d)
    L = X.left_action
    mu = N([I3, I3, dd.ev_tilde, L, P3],
           [["m", "n", "p"], ["m2", "n2", "q"], ["n", "m2", "j"], ["j", "n2", "n3"], ["s", "m", "n3"]],
           ["p", "q", "s"])
    raw_unit = Tensor.identity(d, f)
    unit = N([P3, raw_unit], [["s", "m", "n"], ["m", "n"]], ["s"])
    Ldim = N([qd.dim_r, L], [["a"], ["a", "m", "n"]], ["m", "n"])
    counit = N([I3, Ldim, dd.ev, B.counit], [["m", "n", "p"], ["n", "u"], ["m", "u", "j"], ["j"]], ["p"])
    Lstar = N([star, L], [["a"], ["a", "q", "u"]], ["q", "u"])
    comul = N([I3, Lstar, P3, P3], [["m", "n", "p"], ["q", "u"], ["s", "m", "u"], ["t", "q", "n"]],
              ["p", "s", "t"])
    return make_algebra(mu, unit, counit, comul, name=f"{X.name}*⊗{X.name}")


def endomorphism_comparison(X: Bimodule) -> Tensor:
    """Basis change P with change_basis(algebra_from_bimodule(X), P) in the
    matrix-unit basis of End(k^n): φ_m⊗x_n goes to E_mn (index m·dim + n),
    matching (φ_m⊗x_n)(φ_m'⊗x_n') = δ_nm'·φ_m⊗x_n'.
    Only for bimodules over (𝟙, 𝟙)."""
    if X.left_algebra.dim != 1 or X.right_algebra.dim != 1:
        raise MoritaError("comparison with End(k^n) needs trivial algebras on both sides")
    rt = relative_tensor(dual_bimodule(X).dual, X)
    d, r = X.dim, rt.bimodule.dim
    P3 = rt.proj.matrix.reshape(r, d, d)
    return P3.reshape(r, d * d)


# ---------------------------------------------------------------------------
# isomorphisms


def intertwiner_space(X: Bimodule, Y: Bimodule) -> list[Tensor]:
    """Basis of bimodule maps X → Y, as [dim Y, dim X] matrices."""
    if not (same_algebra(X.left_algebra, Y.left_algebra) and same_algebra(X.right_algebra, Y.right_algebra)):
        raise MoritaError("bimodules over different algebras")
    f = X.field
    dx, dy = X.dim, Y.dim
    rows = []
    for left, acts, ax in ((True, X.left_action, Y.left_action), (False, X.right_action, Y.right_action)):
        n_alg = acts.shape[0] if left else acts.shape[1]
        for a in range(n_alg):
            Mx = acts.array[a].T if left else acts.array[:, a, :].T   # [out, in]
            My = ax.array[a].T if left else ax.array[:, a, :].T
            # (F Mx - My F)[q, m] = 0, unknown F[q, n] at index q*dx + n
            for q in range(dy):
                for m in range(dx):
                    row = [f.zero()] * (dx * dy)
                    for n in range(dx):
                        row[q * dx + n] = row[q * dx + n] + Mx[n, m]
                    for p in range(dy):
                        row[p * dx + m] = row[p * dx + m] - My[q, p]
                    rows.append(row)
    if not rows:
        rows = [[f.zero()] * (dx * dy)]
    M = Tensor([x for r in rows for x in r], f, shape=(len(rows), dx * dy))
    return [v.reshape(dy, dx) for v in kernel(M)]


def find_isomorphism(X: Bimodule, Y: Bimodule, rng: random.Random | None = None,
                     attempts: int = 20) -> BimoduleMap | None:
    if X.dim != Y.dim:
        return None
    basis = intertwiner_space(X, Y)
    if not basis:
        return None if X.dim else BimoduleMap(X, Y, LinearMap(Tensor.zeros((0, 0), X.field)))
    rng = rng or random.Random(0)
    f = X.field
    for k in range(attempts):
        coeffs = [f(1)] * len(basis) if k == 0 else [f(rng.randint(-5, 5)) for _ in basis]
        F = basis[0].scale(coeffs[0])
        for c, b in zip(coeffs[1:], basis[1:]):
            F = F + b.scale(c)
        cand = BimoduleMap(X, Y, LinearMap(F))
        if cand.is_isomorphism():
            return cand
    return None


def unitor(X: Bimodule, side: str = "right") -> BimoduleMap:
    """X⊗_B B → X (side='right') or A⊗_A X → X (side='left') via the action."""
    if side == "right":
        rt = relative_tensor(X, regular_bimodule(X.right_algebra))
        act = X.right_action.reshape(X.dim * X.right_algebra.dim, X.dim).transpose(1, 0)
    elif side == "left":
        rt = relative_tensor(regular_bimodule(X.left_algebra), X)
        act = X.left_action.reshape(X.left_algebra.dim * X.dim, X.dim).transpose(1, 0)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return BimoduleMap(rt.bimodule, X, LinearMap(act) @ rt.incl)


def compose_check(X: Bimodule, Y: Bimodule, Z: Bimodule) -> BimoduleMap:
    """The associator (X⊗Y)⊗Z → X⊗(Y⊗Z), built from the splitting data and verified."""
    xy = relative_tensor(X, Y)
    left = relative_tensor(xy.bimodule, Z)
    yz = relative_tensor(Y, Z)
    right = relative_tensor(X, yz.bimodule)
    f = X.field
    incl_l = xy.incl.kron(LinearMap.identity(Z.dim, f)) @ left.incl
    proj_r = right.proj @ LinearMap.identity(X.dim, f).kron(yz.proj)
    phi = BimoduleMap(left.bimodule, right.bimodule, proj_r @ incl_l)
    if not phi.is_isomorphism():
        raise MoritaError("associator is not an invertible bimodule map")
    return phi


def builtin_bimodules(field: Field) -> dict[str, Bimodule]:
    from .frobenius import builtin_algebras

    algs = builtin_algebras(field)
    k2 = column_module(algs["end2"], 2)
    return {
        "trivial": vector_space(1, field),
        "k2": vector_space(2, field),
        "k3": vector_space(3, field),
        "regular_z2": regular_bimodule(algs["z2"]),
        "regular_s3": regular_bimodule(algs["s3"]),
        "column_k2": k2,
        "row_k2": _dual_module(k2),
        "z2_left_regular": left_regular(algs["z2"]),
    }
