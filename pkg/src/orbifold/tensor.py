"""Dense tensors over an exact or floating field, and their contraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
from opt_einsum import paths as oe_paths

from .scalars import (ComplexFloats, Field, Q, QuadraticField, QuadraticNumber,
                      format_scalar, parse_scalar)


class ShapeError(ValueError):
    pass


def _as_array(entries, shape, field: Field) -> np.ndarray:
    if field.exact:
        flat = [field(x) for x in np.asarray(entries, dtype=object).reshape(-1)]
        arr = np.empty(len(flat), dtype=object)
        arr[:] = flat
        return arr.reshape(shape)
    return np.asarray(entries, dtype=np.complex128).reshape(shape)


class Tensor:
    """Immutable dense multi-index array.

    Entries are stored row-major; ``axis_labels`` are optional names.
    """

    __slots__ = ("_data", "field", "axis_labels", "_split_cache")

    def __init__(self, data, field: Field = Q, shape: Sequence[int] | None = None,
                 axis_labels: Sequence[str] | None = None):
        if isinstance(data, Tensor):
            data = data._data
        if shape is None:
            shape = np.shape(data)
        shape = tuple(int(s) for s in shape)
        if np.size(data) != math.prod(shape):
            raise ShapeError(f"{np.size(data)} entries do not fit shape {list(shape)}")
        self._data = _as_array(data, shape, field)
        self._data.flags.writeable = False
        self.field = field
        if axis_labels is not None and len(axis_labels) != len(shape):
            raise ShapeError("one axis label per axis")
        self.axis_labels = tuple(axis_labels) if axis_labels is not None else None

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: Field) -> "Tensor":
        t = cls.__new__(cls)
        if not field.exact:
            arr = np.asarray(arr, dtype=np.complex128)
        elif arr.dtype != object:
            arr = arr.astype(object)
        if arr.ndim == 0 and field.exact:
            a = np.empty((), dtype=object)
            a[()] = arr[()]
            arr = a
        arr.flags.writeable = False
        t._data = arr
        t.field = field
        t.axis_labels = None
        return t

    # constructors
    @classmethod
    def zeros(cls, shape, field: Field = Q) -> "Tensor":
        shape = tuple(shape)
        if field.exact:
            arr = np.empty(shape, dtype=object)
            arr.fill(field.zero())
            return cls._wrap(arr, field)
        return cls._wrap(np.zeros(shape, dtype=np.complex128), field)

    @classmethod
    def identity(cls, n: int, field: Field = Q) -> "Tensor":
        t = cls.zeros((n, n), field).array
        for i in range(n):
            t[i, i] = field.one()
        return cls._wrap(t, field)

    @classmethod
    def scalar(cls, x, field: Field = Q) -> "Tensor":
        return cls([x], field, shape=())

    # accessors
    @property
    def shape(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def ndim(self) -> int:
        return self._data.ndim

    @property
    def array(self) -> np.ndarray:
        """A writable copy of the underlying array."""
        return self._data.copy()

    @property
    def entries(self) -> list:
        return list(self._data.reshape(-1))

    def __getitem__(self, idx):
        return self._data[idx]

    def item(self):
        if self._data.size != 1:
            raise ShapeError("not a scalar tensor")
        return self._data.reshape(-1)[0]

    # algebra
    def _check_field(self, other: "Tensor"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return Tensor._wrap(self._data + other._data, self.field)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + other.scale(-1)

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def scale(self, c) -> "Tensor":
        return Tensor._wrap(self._data * self.field(c), self.field)

    def __mul__(self, c):
        if isinstance(c, Tensor):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self, *axes) -> "Tensor":
        if len(axes) == 1 and not isinstance(axes[0], int):
            axes = tuple(axes[0])
        return Tensor._wrap(np.transpose(self._data, axes or None), self.field)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and not isinstance(shape[0], int):
            shape = tuple(shape[0])
        if math.prod(shape) != self._data.size:
            raise ShapeError(f"cannot reshape {self.shape} to {shape}")
        return Tensor._wrap(self._data.reshape(shape), self.field)

    def outer(self, other: "Tensor") -> "Tensor":
        return contract(self, other, [])

    def map_entries(self, fn) -> "Tensor":
        flat = [fn(x) for x in self.entries]
        return Tensor(flat, self.field, shape=self.shape)

    def to_field(self, field: Field) -> "Tensor":
        if field == self.field:
            return self
        if not field.exact:
            return Tensor([complex(x) for x in self.entries], field, shape=self.shape)
        return Tensor([field(x) for x in self.entries], field, shape=self.shape)

    def nonzero(self) -> list[tuple[int, ...]]:
        return [idx for idx, x in np.ndenumerate(self._data) if not self.field.is_zero(x)]

    # comparison
    def equals(self, other: "Tensor") -> bool:
        if self.shape != other.shape:
            return False
        return self.first_difference(other) is None

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def first_difference(self, other: "Tensor"):
        """``(index, mine, theirs)`` for the first differing entry, or ``None``."""
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.field.exact and other.field == self.field:
            bad = np.argwhere(_exact_mismatch(self, other))
            if not len(bad):
                return None
            idx = tuple(int(i) for i in bad[0])
            return idx, self._data[idx], other._data[idx]
        for idx, x in np.ndenumerate(self._data):
            y = other._data[idx]
            if not self.field.eq(x, y):
                return idx, x, y
        return None

    def __repr__(self):
        return f"Tensor(shape={list(self.shape)}, field={self.field.name})"

    # json
    def to_json(self) -> dict:
        return {"shape": list(self.shape), "entries": [format_scalar(x) for x in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, field: Field = Q) -> "Tensor":
        shape = obj["shape"]
        entries = obj["entries"]
        if len(entries) != math.prod(shape):
            raise ShapeError(f"entries length {len(entries)} != product of shape {shape}")
        return cls([parse_scalar(x, field) for x in entries], field, shape=shape)


# ---------------------------------------------------------------------------
# pairwise contraction


def _check_pairs(a_shape, b_shape, pairs):
    seen_a, seen_b = set(), set()
    for i, j in pairs:
        if not (0 <= i < len(a_shape)) or not (0 <= j < len(b_shape)):
            raise ShapeError(f"axis pair {(i, j)} out of range")
        if i in seen_a or j in seen_b:
            raise ShapeError(f"repeated axis in pairs {pairs}")
        seen_a.add(i)
        seen_b.add(j)
        if a_shape[i] != b_shape[j]:
            raise ShapeError(f"dimension mismatch on pair {(i, j)}: {a_shape[i]} vs {b_shape[j]}")


def contract(a: Tensor, b: Tensor, pairs: Sequence[tuple[int, int]]) -> Tensor:
    """Sum over paired axes. Free axes of ``a`` precede free axes of ``b``."""
    a._check_field(b)
    pairs = [tuple(p) for p in pairs]
    _check_pairs(a.shape, b.shape, pairs)
    ax_a = [p[0] for p in pairs]
    ax_b = [p[1] for p in pairs]
    if a.field.exact:
        la = [("a", k) for k in range(a.ndim)]
        lb = [("b", k) for k in range(b.ndim)]
        for i, j in pairs:
            lb[j] = la[i]
        free = [l for k, l in enumerate(la) if k not in ax_a] + [l for k, l in enumerate(lb) if k not in ax_b]
        return contract_network([a, b], [la, lb], free)
    out = np.tensordot(a._data, b._data, axes=(ax_a, ax_b))
    return Tensor._wrap(np.asarray(out), a.field)


def self_trace(a: Tensor, pairs: Sequence[tuple[int, int]]) -> Tensor:
    """Partial trace over the listed axis pairs."""
    used = [ax for p in pairs for ax in p]
    if len(set(used)) != len(used):
        raise ShapeError(f"repeated axis in pairs {pairs}")
    for i, j in pairs:
        if not (0 <= i < a.ndim and 0 <= j < a.ndim):
            raise ShapeError(f"axis pair {(i, j)} out of range")
        if a.shape[i] != a.shape[j]:
            raise ShapeError(f"dimension mismatch on pair {(i, j)}")
    labels = list(range(a.ndim))
    for i, j in pairs:
        labels[j] = labels[i]
    free = [labels[k] for k in range(a.ndim) if k not in used]
    return Tensor._wrap(np.asarray(np.einsum(a._data, labels, free)), a.field)


# ---------------------------------------------------------------------------
# linear maps


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A map k^domain_dim -> k^codomain_dim stored as a [codomain, domain] matrix."""

    matrix: Tensor

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ShapeError("a linear map needs a rank-2 matrix")

    @property
    def domain_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def field(self) -> Field:
        return self.matrix.field

    @classmethod
    def identity(cls, n: int, field: Field = Q) -> "LinearMap":
        return cls(Tensor.identity(n, field))

    @classmethod
    def from_rows(cls, rows, field: Field = Q, domain_dim: int | None = None) -> "LinearMap":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else (domain_dim or 0)
        return cls(Tensor([x for r in rows for x in r], field, shape=(len(rows), cols)))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        if self.domain_dim != other.codomain_dim:
            raise ShapeError(f"cannot compose {self.codomain_dim}x{self.domain_dim} "
                             f"after {other.codomain_dim}x{other.domain_dim}")
        return LinearMap(contract(self.matrix, other.matrix, [(1, 0)]))

    __matmul__ = compose

    def __call__(self, v: Tensor) -> Tensor:
        return contract(self.matrix, v, [(1, 0)])

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix - other.matrix)

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.matrix.scale(c))

    def trace(self):
        if self.domain_dim != self.codomain_dim:
            raise ShapeError("trace of a non-square map")
        return self_trace(self.matrix, [(0, 1)]).item()

    def kron(self, other: "LinearMap") -> "LinearMap":
        m = self.matrix.outer(other.matrix).transpose(0, 2, 1, 3)
        return LinearMap(m.reshape(self.codomain_dim * other.codomain_dim,
                                   self.domain_dim * other.domain_dim))

    def equals(self, other: "LinearMap") -> bool:
        return self.matrix.equals(other.matrix)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"LinearMap({self.codomain_dim}x{self.domain_dim}, {self.field.name})"


# ---------------------------------------------------------------------------
# network contraction
#
# Exact tensors are split into integer component arrays over a common
# denominator (one component for Q, two for Q(sqrt d)); pairwise steps then
# run on int64 whenever a magnitude bound rules out overflow, else on Python
# ints. Floating tensors contract directly in complex128.

_INT64_SAFE = 2**62


class _Exact:
    __slots__ = ("comps", "den", "labels")

    def __init__(self, comps, den, labels):
        self.comps = comps
        self.den = den
        self.labels = labels


def _es(*args):
    """``np.einsum`` in sublist form with arbitrary hashable labels."""
    *ops, out = args
    table: dict = {}
    conv = []
    for k, x in enumerate(ops):
        if k % 2:
            conv.append([table.setdefault(l, len(table)) for l in x])
        else:
            conv.append(x)
    return np.einsum(*conv, [table.setdefault(l, len(table)) for l in out])


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _split(t: Tensor, labels) -> _Exact:
    """Integer components over a common denominator (cached per tensor)."""
    cached = getattr(t, "_split_cache", None)
    if cached is None:
        cached = _split_arrays(t)
        t._split_cache = cached
    arrs, den = cached
    return _Exact(list(arrs), den, list(labels))


def _split_arrays(t: Tensor):
    field = t.field
    flat = t.entries
    if isinstance(field, QuadraticField):
        parts = [(Fraction(x.a), Fraction(x.b)) for x in flat]
    else:
        parts = [(x if isinstance(x, Fraction) else Fraction(x),) for x in flat]
    den = reduce(_lcm, {p.denominator for pr in parts for p in pr}, 1)
    comps = [[p[k].numerator * (den // p[k].denominator) for p in parts] for k in range(len(parts[0]) if parts else 1)]
    if not parts and isinstance(field, QuadraticField):
        comps = [[], []]
    arrs = []
    for c in comps:
        a = np.empty(len(c), dtype=object)
        a[:] = c
        arrs.append(_narrow(a.reshape(t.shape)))
    return tuple(arrs), den


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.reshape(-1))
    return int(np.max(np.abs(a)))


def _narrow(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < _INT64_SAFE:
        return a.astype(np.int64)
    return a


def _einsum_int(x, lx, y, ly, lout, summed_size):
    bound = _maxabs(x) * _maxabs(y) * max(1, summed_size)
    if bound < _INT64_SAFE and x.dtype != object and y.dtype != object:
        return _es(x, lx, y, ly, lout)
    return _es(x.astype(object), lx, y.astype(object), ly, lout)


def _reduce_exact(e: _Exact) -> _Exact:
    g = e.den
    for c in e.comps:
        if c.size == 0:
            continue
        if c.dtype == object:
            g = reduce(math.gcd, (int(v) for v in c.reshape(-1)), g)
        else:
            g = math.gcd(g, int(np.gcd.reduce(np.abs(c).reshape(-1))))
        if g == 1:
            return e
    if g > 1:
        comps = [_narrow(c // g) for c in e.comps]
        return _Exact(comps, e.den // g, e.labels)
    return e


def _pair_exact(x: _Exact, y: _Exact, lout, dims, d: int | None) -> _Exact:
    summed = set(x.labels) | set(y.labels)
    summed_size = math.prod(dims[l] for l in summed if l not in lout)
    if d is None:
        comps = [_einsum_int(x.comps[0], x.labels, y.comps[0], y.labels, lout, summed_size)]
    else:
        a1, b1 = x.comps
        a2, b2 = y.comps
        aa = _einsum_int(a1, x.labels, a2, y.labels, lout, summed_size)
        bb = _einsum_int(b1, x.labels, b2, y.labels, lout, summed_size)
        ab = _einsum_int(a1, x.labels, b2, y.labels, lout, summed_size)
        ba = _einsum_int(b1, x.labels, a2, y.labels, lout, summed_size)
        comps = [_add_int(aa, _mul_int(bb, d)), _add_int(ab, ba)]
    comps = [_narrow(np.asarray(c)) if np.asarray(c).dtype == object else np.asarray(c) for c in comps]
    return _reduce_exact(_Exact(comps, x.den * y.den, list(lout)))


def _mul_int(a, k):
    if a.dtype != object and _maxabs(a) * abs(k) < _INT64_SAFE:
        return a * k
    return a.astype(object) * k


def _add_int(a, b):
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _INT64_SAFE:
        return a + b
    return a.astype(object) + b.astype(object)


def _join(x: _Exact, field: Field) -> Tensor:
    shape = x.comps[0].shape
    if isinstance(field, QuadraticField):
        a, b = x.comps
        flat = [QuadraticNumber(Fraction(int(p), x.den), Fraction(int(q), x.den), field.d)
                for p, q in zip(a.reshape(-1), b.reshape(-1))]
    else:
        # entries repeat a lot (mostly 0 and ±1): build each Fraction once
        memo: dict = {}
        den = x.den
        flat = []
        for p in x.comps[0].reshape(-1).tolist():
            f = memo.get(p)
            if f is None:
                f = memo[p] = Fraction(int(p), den)
            flat.append(f)
    arr = np.empty(len(flat), dtype=object)
    arr[:] = flat
    t = Tensor._wrap(arr.reshape(shape), field)
    t._split_cache = (tuple(x.comps), x.den)
    return t


def _exact_mismatch(a: Tensor, b: Tensor):
    """Boolean array of differing entries, compared on integer components."""
    ea, eb = _split(a, ()), _split(b, ())
    bad = None
    for ca, cb in zip(ea.comps, eb.comps):
        lhs, rhs = _mul_int(ca, eb.den), _mul_int(cb, ea.den)
        ne = np.asarray(lhs != rhs, dtype=bool)
        bad = ne if bad is None else (bad | ne)
    return bad


def _diagonalize(arr_list, labels):
    """Collapse repeated labels inside one operand to a diagonal."""
    uniq = list(dict.fromkeys(labels))
    if len(uniq) == len(labels):
        return arr_list, list(labels)
    return [_es(a, list(labels), uniq) for a in arr_list], uniq


def plan_greedy(label_sets: list[list], dims: dict, output: Sequence) -> list[tuple[int, int]]:
    """Pairwise contraction order from opt_einsum's path optimizers.

    Returns a list of (i, j) positions into the shrinking operand list; the
    merged operand is appended at the end.
    """
    if len(label_sets) < 2:
        return []
    inputs = [frozenset(s) for s in label_sets]
    out = frozenset(output)
    if len(inputs) <= 6:
        path = oe_paths.optimal(inputs, out, dims)
    elif len(inputs) <= 14:
        path = oe_paths.branch(inputs, out, dims, nbranch=2)
    else:
        path = oe_paths.greedy(inputs, out, dims)
    # replay by node identity: single-operand steps only reorder opt_einsum's list
    theirs = list(range(len(inputs)))
    mine = list(theirs)
    fresh = len(inputs)
    steps = []
    for step in path:
        nodes = [theirs[k] for k in step]
        theirs = [n for k, n in enumerate(theirs) if k not in step]
        if len(nodes) == 1:
            theirs.append(nodes[0])
            continue
        i, j = sorted(mine.index(n) for n in nodes)
        steps.append((i, j))
        mine = [n for k, n in enumerate(mine) if k not in (i, j)] + [fresh]
        theirs.append(fresh)
        fresh += 1
    return steps


def contract_network(tensors: Sequence[Tensor], labels: Sequence[Sequence], output: Sequence = (),
                     field: Field | None = None) -> Tensor:
    """Einsum-style contraction of a whole network.

    Each label names a summation index; labels may appear in any number of
    operands (hyperedges). Labels in ``output`` are kept, in that order.
    """
    if not tensors:
        raise ValueError("empty network")
    field = field or tensors[0].field
    dims: dict = {}
    for t, ls in zip(tensors, labels):
        if len(ls) != t.ndim:
            raise ShapeError(f"{len(ls)} labels for a rank-{t.ndim} tensor")
        for l, n in zip(ls, t.shape):
            if dims.setdefault(l, n) != n:
                raise ShapeError(f"label {l!r} has inconsistent dimensions")
    output = list(output)
    exact = field.exact
    qd = field.d if isinstance(field, QuadraticField) else None
    ops = []
    for t, ls in zip(tensors, labels):
        if t.field != field:
            t = t.to_field(field)
        if exact:
            e = _split(t, ls)
            e.comps, e.labels = _diagonalize(e.comps, ls)
            ops.append(e)
        else:
            (a,), ls2 = _diagonalize([t._data], ls)
            ops.append(_Exact([a], 1, ls2))
    # drop labels summed within a single operand before planning
    for k, e in enumerate(ops):
        elsewhere = set(output)
        for m, f in enumerate(ops):
            if m != k:
                elsewhere.update(f.labels)
        keep = [l for l in e.labels if l in elsewhere]
        if len(keep) != len(e.labels):
            e.comps = [_es(c, e.labels, keep) for c in e.comps]
            e.labels = keep
    steps = plan_greedy([e.labels for e in ops], dims, output)
    for i, j in steps:
        x, y = ops[i], ops[j]
        others = set(output)
        for k, e in enumerate(ops):
            if k not in (i, j):
                others.update(e.labels)
        lout = [l for l in dict.fromkeys(x.labels + y.labels) if l in others]
        if exact:
            z = _pair_exact(x, y, lout, dims, qd)
        else:
            z = _Exact([_es(x.comps[0], x.labels, y.comps[0], y.labels, lout)], 1, lout)
        ops = [e for k, e in enumerate(ops) if k not in (i, j)] + [z]
    final = ops[0]
    missing = [l for l in output if l not in final.labels]
    if missing:
        raise ShapeError(f"output labels {missing} do not occur in the network")
    final.comps = [np.asarray(_es(c, final.labels, output)) for c in final.comps]
    final.labels = output
    if exact:
        return _join(final, field)
    return Tensor._wrap(np.asarray(final.comps[0]), field)
