"""Echelon reduction, kernels, inverses and idempotent splitting.

Exact fields use Gauss-Jordan (gmpy2 rationals over Q, Python scalars otherwise; fine at
the dimensions used here); complex floats go through numpy's SVD with the
field's epsilon as the rank threshold.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .scalars import Field, Rationals
from .tensor import LinearMap, ShapeError, Tensor


class NotIdempotentError(ValueError):
    pass


class RankAmbiguityError(ValueError):
    """A singular value fell between the zero threshold and the idempotent floor."""


def _rows(m: Tensor) -> list[list]:
    r, c = m.shape
    flat = m.entries
    return [flat[i * c:(i + 1) * c] for i in range(r)]


def _tensor(rows, field: Field, ncols: int | None = None) -> Tensor:
    nr = len(rows)
    nc = len(rows[0]) if rows else (ncols or 0)
    return Tensor([x for r in rows for x in r], field, shape=(nr, nc))


def _rref_q(m: Tensor) -> tuple[list[list], list[int]]:
    """Gauss-Jordan over ℚ with gmpy2 rationals; only nonzero pivot-row
    entries are touched."""
    rows = [[mpq(x.numerator, x.denominator) for x in r] for r in _rows(m)]
    nr, nc = m.shape
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        support = [k for k, y in enumerate(rows[r]) if y]
        pr = rows[r]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                for k in support:
                    ri[k] -= f * pr[k]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in rows[:r]], pivots


def rref(m: Tensor) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an exact field.

    Returns the nonzero rows and the pivot columns.
    """
    field = m.field
    if not field.exact:
        raise TypeError("rref needs an exact field")
    if type(field) is Rationals:
        return _rref_q(m)
    rows = [list(r) for r in _rows(m)]
    nr, nc = m.shape
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inverse(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows[:r], pivots


def _svd(m: Tensor):
    a = np.asarray(m.array, dtype=np.complex128)
    if a.size == 0:
        return np.zeros((a.shape[0], 0)), np.zeros(0), np.zeros((0, a.shape[1]))
    return np.linalg.svd(a)


def rank(m: Tensor) -> int:
    if m.field.exact:
        return len(rref(m)[1])
    _, s, _ = _svd(m)
    if s.size == 0:
        return 0
    return int(np.sum(s > m.field.epsilon * max(1.0, s[0])))


def kernel(m: Tensor) -> list[Tensor]:
    """Basis of {v : m v = 0}; in reduced echelon form over exact fields."""
    field = m.field
    nc = m.shape[1]
    if field.exact:
        rows, pivots = rref(m)
        free = [c for c in range(nc) if c not in pivots]
        basis = []
        for f in free:
            v = [field.zero()] * nc
            v[f] = field.one()
            for row, p in zip(rows, pivots):
                v[p] = -row[f]
            basis.append(Tensor(v, field, shape=(nc,)))
        return basis
    _, s, vh = _svd(m)
    r = int(np.sum(s > field.epsilon * max(1.0, s[0] if s.size else 1.0)))
    null = vh[r:].conj()
    return [Tensor(list(v), field, shape=(nc,)) for v in null]


def solve_linear(system: LinearMap) -> list[Tensor]:
    """Kernel basis of a linear map."""
    return kernel(system.matrix)


def solve(a: Tensor, b: Tensor):
    """One solution x of a x = b (b a vector), or ``None``."""
    field = a.field
    nr, nc = a.shape
    if field.exact:
        aug = _tensor([r + [bb] for r, bb in zip(_rows(a), b.entries)], field, nc + 1)
        rows, piv = rref(aug)
        if nc in piv:
            return None
        x = [field.zero()] * nc
        for row, p in zip(rows, piv):
            x[p] = row[nc]
        return Tensor(x, field, shape=(nc,))
    am = np.asarray(a.array, dtype=np.complex128)
    bv = np.asarray(b.array, dtype=np.complex128)
    x, *_ = np.linalg.lstsq(am, bv, rcond=None)
    if np.linalg.norm(am @ x - bv) > field.epsilon * max(1.0, np.linalg.norm(bv)):
        return None
    return Tensor(list(x), field, shape=(nc,))


def inverse(m: Tensor) -> Tensor:
    n, n2 = m.shape
    if n != n2:
        raise ShapeError("inverse of a non-square matrix")
    field = m.field
    if field.exact:
        eye = _rows(Tensor.identity(n, field))
        aug = _tensor([r + e for r, e in zip(_rows(m), eye)], field, 2 * n)
        rows, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return _tensor([r[n:] for r in rows], field, n)
    a = np.asarray(m.array, dtype=np.complex128)
    if rank(m) < n:
        raise ZeroDivisionError("matrix is singular")
    return Tensor(np.linalg.inv(a), field)


def is_idempotent(e: LinearMap) -> bool:
    return e.domain_dim == e.codomain_dim and e.compose(e).equals(e)


def split_idempotent(e: LinearMap) -> tuple[LinearMap, LinearMap]:
    """Factor an idempotent as ``e = inj ∘ surj`` with ``surj ∘ inj = id``."""
    if e.domain_dim != e.codomain_dim:
        raise ShapeError("idempotents are square")
    if not is_idempotent(e):
        diff = e.compose(e).matrix.first_difference(e.matrix)
        raise NotIdempotentError(f"e∘e != e (first difference at {diff})")
    field = e.field
    n = e.domain_dim
    if field.exact:
        rows, piv = rref(e.matrix)
        cols = _rows(e.matrix.transpose(1, 0))
        inj = _tensor([list(r) for r in zip(*[cols[p] for p in piv])] if piv else [[] for _ in range(n)],
                      field, len(piv))
        if not piv:
            inj = Tensor.zeros((n, 0), field)
            surj = Tensor.zeros((0, n), field)
        else:
            surj = _tensor(rows, field)
        return LinearMap(inj), LinearMap(surj)
    u, s, _ = _svd(e.matrix)
    eps = field.epsilon
    scale = max(1.0, s[0]) if s.size else 1.0
    amb = [float(x) for x in s if eps * scale < x < 0.5]
    if amb:
        raise RankAmbiguityError(
            f"singular values {amb} are neither ~0 nor >= 1 (epsilon={eps}, "
            f"condition={s[0] / s[-1] if s[-1] else float('inf'):.3g})")
    r = int(np.sum(s > eps * scale))
    ur = u[:, :r]
    a = np.asarray(e.matrix.array, dtype=np.complex128)
    return (LinearMap(Tensor(ur, field)),
            LinearMap(Tensor(ur.conj().T @ a, field)))
