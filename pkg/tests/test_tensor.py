from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifold.linalg import inverse, kernel, rank, rref, solve
from orbifold.scalars import (ComplexFloats, Q, QuadraticField, QuadraticNumber, field_from_name,
                              format_scalar, parse_scalar)
from orbifold.tensor import LinearMap, ShapeError, Tensor, contract, contract_network, self_trace

small = st.integers(-4, 4)
Q5 = QuadraticField(5)


def int_array(shape):
    n = int(np.prod(shape))
    return st.lists(small, min_size=n, max_size=n).map(lambda xs: np.array(xs, dtype=np.int64).reshape(shape))


@st.composite
def pair_for_contract(draw):
    a_shape = tuple(draw(st.lists(st.integers(1, 3), min_size=1, max_size=3)))
    k = draw(st.integers(0, len(a_shape)))
    ax_a = draw(st.permutations(range(len(a_shape))))[:k]
    extra = tuple(draw(st.lists(st.integers(1, 3), max_size=2)))
    b_shape = tuple(a_shape[i] for i in ax_a) + extra
    perm = draw(st.permutations(range(len(b_shape))))
    b_shape = tuple(b_shape[p] for p in perm)
    inv = {p: i for i, p in enumerate(perm)}
    pairs = [(ax_a[i], inv[i]) for i in range(k)]
    return draw(int_array(a_shape)), draw(int_array(b_shape)), pairs


@settings(max_examples=60, deadline=None)
@given(pair_for_contract())
def test_contract_matches_numpy(data):
    a, b, pairs = data
    got = contract(Tensor(a.tolist(), Q, a.shape), Tensor(b.tolist(), Q, b.shape), pairs)
    want = np.tensordot(a, b, axes=([p[0] for p in pairs], [p[1] for p in pairs]))
    assert got.shape == want.shape
    assert [int(x) for x in got.entries] == want.reshape(-1).tolist()


@settings(max_examples=40, deadline=None)
@given(int_array((2, 3)), int_array((3, 2, 2)), int_array((2, 2)))
def test_network_matches_einsum(x, y, z):
    ts = [Tensor(m.tolist(), Q, m.shape) for m in (x, y, z)]
    got = contract_network(ts, [["i", "j"], ["j", "k", "l"], ["l", "i"]], ["k"])
    want = np.einsum("ij,jkl,li->k", x, y, z)
    assert [int(v) for v in got.entries] == want.tolist()


@settings(max_examples=40, deadline=None)
@given(int_array((2, 2)), int_array((2, 2)), int_array((2, 2)))
def test_linear_map_compose_associative(x, y, z):
    X, Y, Z = (LinearMap(Tensor(m.tolist(), Q, m.shape)) for m in (x, y, z))
    assert X.compose(Y).compose(Z).equals(X.compose(Y.compose(Z)))
    assert X.kron(Y).trace() == X.trace() * Y.trace()


def test_hyperedge_label():
    a = Tensor([1, 2], Q)
    b = Tensor([3, 4], Q)
    c = Tensor([5, 6], Q)
    assert contract_network([a, b, c], [["i"], ["i"], ["i"]]).item() == 1 * 3 * 5 + 2 * 4 * 6


def test_self_trace():
    t = Tensor(list(range(8)), Q, (2, 2, 2))
    tr = self_trace(t, [(0, 2)])
    assert tr.entries == [0 + 5, 2 + 7]


def test_shape_errors():
    with pytest.raises(ShapeError):
        Tensor([1, 2, 3], Q, (2, 2))
    with pytest.raises(ShapeError):
        contract(Tensor.zeros((2,)), Tensor.zeros((3,)), [(0, 0)])
    with pytest.raises(ShapeError):
        self_trace(Tensor.zeros((2, 2)), [(0, 0)])


def test_json_roundtrip():
    t = Tensor([Fraction(1, 3), 2, -5, 0], Q, (2, 2))
    assert Tensor.from_json(t.to_json(), Q).equals(t)


def test_c64_tolerance():
    f = ComplexFloats(1e-9)
    a = Tensor([1.0, 2.0], f)
    assert a.equals(Tensor([1.0 + 1e-12, 2.0], f))
    assert not a.equals(Tensor([1.0 + 1e-3, 2.0], f))


# scalars

quad = st.builds(lambda a, b: QuadraticNumber(Fraction(a, 3), Fraction(b, 2), 5), small, small)


@settings(max_examples=100, deadline=None)
@given(quad, quad, quad)
def test_quadratic_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if x != 0:
        assert x * x.inverse() == 1


def test_sqrt5_squares():
    s = Q5.sqrt_d
    assert s * s == 5
    phi = (1 + s) / 2
    assert phi * phi == phi + 1


@pytest.mark.parametrize("text,field", [("3/4", Q), ("-1/2+3/2*sqrt(5)", Q5), ("sqrt(5)", Q5), ("0", Q5)])
def test_parse_format_roundtrip(text, field):
    x = parse_scalar(text, field)
    assert parse_scalar(format_scalar(x), field) == x


def test_field_names():
    assert field_from_name("Q") == Q
    assert field_from_name("Q(sqrt:5)").name == "Q(sqrt:5)"
    assert not field_from_name("C64").exact
    with pytest.raises(ValueError):
        field_from_name("R")


def test_float_refused_in_exact_field():
    with pytest.raises(TypeError):
        Q5(0.5)


# linear algebra oracles: exact identities that must hold


@settings(max_examples=40, deadline=None)
@given(int_array((3, 3)))
def test_rank_nullity_and_kernel(m):
    T = Tensor(m.tolist(), Q, m.shape)
    ker = kernel(T)
    assert rank(T) + len(ker) == 3
    assert rank(T) == np.linalg.matrix_rank(m.astype(float))
    for v in ker:
        assert all(x == 0 for x in contract(T, v, [(1, 0)]).entries)


@settings(max_examples=40, deadline=None)
@given(int_array((3, 3)), int_array((3,)))
def test_inverse_and_solve(m, b):
    T = Tensor(m.tolist(), Q, m.shape)
    B = Tensor(b.tolist(), Q)
    if rank(T) == 3:
        Ti = inverse(T)
        assert contract(T, Ti, [(1, 0)]).equals(Tensor.identity(3))
        x = solve(T, B)
        assert contract(T, x, [(1, 0)]).equals(B)


def test_rref_pivots():
    rows, piv = rref(Tensor([1, 2, 2, 4], Q, (2, 2)))
    assert piv == [0]
    assert rows[0] == [1, 2]


def test_quadratic_inverse_matrix():
    s = Q5.sqrt_d
    T = Tensor([1, s, s, 1], Q5, (2, 2))
    assert contract(T, inverse(T), [(1, 0)]).equals(Tensor.identity(2, Q5))


@settings(max_examples=100, deadline=None)
@given(quad)
def test_quadratic_format_roundtrip(x):
    assert parse_scalar(format_scalar(x), Q5) == x
