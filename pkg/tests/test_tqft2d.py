from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifold import frobenius as fr
from orbifold import library as lib
from orbifold import tqft2d as t2
from orbifold.acceptance import character_oracle
from orbifold.linalg import rank
from orbifold.scalars import Q
from orbifold.simplicial import euler_characteristic, random_pachner_walk
from orbifold.tensor import LinearMap

ALGS = fr.builtin_algebras(Q)
SEPARABLE = ["trivial", "z2", "end2", "s3", "klein_twisted"]
SURFACES = {"sphere2": lib.sphere2(), "torus2_7v": lib.torus2_7v(), "genus_g(2)": lib.genus_g(2)}


@pytest.mark.parametrize("group,order", [("z2", 2), ("s3", 6)])
@pytest.mark.parametrize("surface", sorted(SURFACES))
def test_group_algebra_against_character_oracle(group, order, surface):
    # the Δ-separable state sum of k[G] equals |G|^χ times the character-table sum Σ (d_i/|G|)^χ
    T = SURFACES[surface]
    chi = euler_characteristic(T)
    z = t2.statesum_closed(ALGS[group], T)
    assert z == Fraction(order) ** chi * character_oracle(group, chi)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("surface", sorted(SURFACES))
def test_endomorphism_datum_gives_n_to_chi(n, surface):
    T = SURFACES[surface]
    A = fr.endomorphism_orbifold_datum(n, Q)
    assert t2.statesum_closed(A, T) == Fraction(n) ** euler_characteristic(T)


@pytest.mark.parametrize("name", SEPARABLE)
def test_cylinder_idempotent_rank_and_torus(name):
    A = ALGS[name]
    e = t2.cylinder_idempotent(A, 1)
    assert e.compose(e).equals(e)
    zdim = len(fr.center_basis(A))
    assert rank(e.matrix) == zdim
    assert t2.statesum_closed(A, lib.torus2_7v()) == zdim
    assert e.trace() == zdim


@pytest.mark.parametrize("name", SEPARABLE)
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("layers", [1, 2])
def test_cylinder_layers_idempotent_same_image(name, m, layers):
    A = ALGS[name]
    e = t2.cylinder_idempotent(A, m, layers)
    assert e.compose(e).equals(e)
    assert e.equals(t2.cylinder_idempotent(A, m, 1))
    assert rank(e.matrix) == len(fr.center_basis(A))


@pytest.mark.parametrize("name", ["z2", "s3", "end2"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_disk_into_pants_is_cylinder(name, m):
    A = ALGS[name]
    glued = t2.glue(t2.disk(m), t2.pair_of_pants(m), 0, 0)
    assert t2.statesum_bordism(A, glued).equals(t2.statesum_bordism(A, t2.cylinder_bordism(m)))
    assert t2.orbifold_evaluate(A, glued).equals(t2.orbifold_evaluate(A, t2.cylinder_bordism(m)))


@pytest.mark.parametrize("name", ["z2", "s3"])
def test_gluing_is_functorial(name):
    A = ALGS[name]
    M, N = t2.cylinder_bordism(2), t2.annulus(2, 3)
    lhs = t2.statesum_bordism(A, t2.glue(M, N, 0, 0))
    rhs = t2.statesum_bordism(A, N).compose(t2.statesum_bordism(A, M))
    assert lhs.equals(rhs)


@pytest.mark.parametrize("name", ["z2", "s3"])
def test_transition_maps_compose(name):
    A = ALGS[name]
    d = t2.orbifold_state_space(A, 2).dim
    assert d == len(fr.center_basis(A))
    round_trip = t2.transition_map(A, 3, 2).compose(t2.transition_map(A, 2, 3))
    assert round_trip.equals(LinearMap.identity(d, Q))


def test_closed_orbifold_matches_closed_statesum():
    A = ALGS["s3"]
    for T in SURFACES.values():
        v = t2.orbifold_evaluate(A, t2.closed_bordism(T)).matrix.item()
        assert v == t2.statesum_closed(A, T)


def test_non_separable_rejected():
    with pytest.raises(fr.AxiomError):
        t2.statesum_closed(ALGS["z2_unscaled"], lib.sphere2())


def test_raw_unscaled_sum_depends_on_triangulation():
    A = ALGS["z2_unscaled"]
    T = lib.sphere2()
    U = random_pachner_walk(T, 1, 0, kinds=["1-3"])
    a = t2.statesum_closed(A, T, check=False)
    b = t2.statesum_closed(A, U, check=False)
    assert a != b


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(SEPARABLE), st.sampled_from(sorted(SURFACES)), st.integers(0, 2**16))
def test_walk_invariance(name, surface, seed):
    A = ALGS[name]
    T = SURFACES[surface]
    assert t2.statesum_closed(A, random_pachner_walk(T, 15, seed)) == t2.statesum_closed(A, T)


@pytest.mark.parametrize("surface", sorted(SURFACES))
def test_euler_tqft(surface):
    T = SURFACES[surface]
    chi = euler_characteristic(T)
    assert t2.euler_tqft(Fraction(3), T) == Fraction(3) ** chi


@settings(max_examples=6, deadline=None)
@given(st.sampled_from(sorted(SURFACES)), st.integers(0, 2**16))
def test_euler_completion_of_unscaled_algebra(surface, seed):
    A = ALGS["z2_unscaled"]
    W = t2.compensating_weights(A)
    assert t2.separability_scalar(A) == 2
    T = SURFACES[surface]
    chi = euler_characteristic(T)
    z = t2.euler_completed_statesum(A, W, T)
    assert z == Fraction(2) ** (-chi) * 2
    assert t2.euler_completed_statesum(A, W, random_pachner_walk(T, 10, seed)) == z


def test_twisted_sectors():
    G = fr.product_group(fr.cyclic_group(2), fr.cyclic_group(2))
    assert t2.twisted_sectors(G) == [(0, 1), (1, 1), (2, 1), (3, 1)]
    assert t2.twisted_sectors(G, fr.klein_twist(Q)) == [(0, 1)]
    s3 = t2.twisted_sectors(fr.symmetric_group(3))
    assert sum(r for _, r in s3) == 3


def test_bordism_json_roundtrip():
    B = t2.pair_of_pants(2)
    C = t2.Bordism2.from_json(B.to_json())
    assert C.in_sizes == B.in_sizes and C.out_sizes == B.out_sizes
    assert t2.statesum_bordism(ALGS["z2"], C).equals(t2.statesum_bordism(ALGS["z2"], B))


@pytest.mark.parametrize("A", [ALGS["z2_unscaled"], fr.matrix_algebra(2, 1)], ids=["z2_unscaled", "end2_trace"])
@pytest.mark.parametrize("surface", sorted(SURFACES))
def test_euler_completion_relation(A, surface):
    # weighted sum of a λ-separable algebra = λ^{-χ} times the sum of its Δ-normalized rescaling
    T = SURFACES[surface]
    lam = t2.separability_scalar(A)
    z = t2.euler_completed_statesum(A, t2.compensating_weights(A), T)
    assert z == Fraction(lam) ** (-euler_characteristic(T)) * t2.statesum_closed(fr.rescale_counit(A, lam), T)
