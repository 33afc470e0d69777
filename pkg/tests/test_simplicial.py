import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifold import library as lib
from orbifold.simplicial import (NonOrientableError, Triangulation, TriangulationError, apply_pachner, boundary,
                                 enumerate_pachner, euler_characteristic, from_simplices, random_pachner_walk,
                                 validate)

EXPECTED_CHI = {
    "sphere2": 2, "torus2_7v": 0, "genus_g(1)": 0, "genus_g(2)": -2, "genus_g(3)": -4,
    "sphere3": 0, "s2xs1": 0, "t3": 0, "circle(4)": 0, "interval": 1, "cylinder2(3, 2)": 0,
}


def subset_count_chi(T: Triangulation) -> int:
    """χ from distinct vertex-id subsets; valid for genuine simplicial complexes."""
    faces = set()
    for s in T.simplices:
        for k in range(1, len(s) + 1):
            faces.update(itertools.combinations(s, k))
    return sum((-1) ** (len(f) - 1) for f in faces)


@pytest.mark.parametrize("name,chi", sorted(EXPECTED_CHI.items()))
def test_library_valid_with_expected_chi(name, chi):
    T = lib.standard_library(name)
    rep = validate(T)
    assert rep.valid, rep.errors
    assert euler_characteristic(T) == chi


@pytest.mark.parametrize("name", ["sphere2", "torus2_7v", "sphere3", "cylinder2(3, 2)"])
def test_chi_against_subset_oracle(name):
    T = lib.standard_library(name)
    assert validate(T, strict=True).valid
    assert euler_characteristic(T) == subset_count_chi(T)


@pytest.mark.parametrize("name", ["t3", "s2xs1", "genus_g(2)"])
def test_delta_complexes_are_not_strict(name):
    T = lib.standard_library(name)
    assert validate(T).valid and not validate(T, strict=True).valid


def test_closedness_and_boundary():
    assert all(lib.standard_library(n).is_closed() for n in ("sphere2", "torus2_7v", "sphere3", "t3"))
    C = lib.cylinder2(4, 2)
    B = boundary(C)
    assert B.n == 1 and B.size == 8
    assert validate(B).closed and euler_characteristic(B) == 0
    assert boundary(boundary(C)).size == 0


def test_non_orientable_rejected():
    rp2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
           (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
    with pytest.raises(NonOrientableError):
        from_simplices(2, rp2)


def test_validate_reports_broken_gluing():
    obj = lib.sphere2().to_json()
    obj["gluings"][0][0] = list(obj["gluings"][0][1])
    rep = validate(Triangulation.from_json(obj))
    assert not rep.valid and rep.errors
    with pytest.raises(TriangulationError):
        euler_characteristic(Triangulation.from_json(obj))


def test_validate_reports_orientation_mismatch():
    obj = lib.sphere2().to_json()
    obj["orientations"][0] *= -1
    rep = validate(Triangulation.from_json(obj))
    assert not rep.valid
    assert any("orientation" in e for e in rep.errors)


def test_json_roundtrip():
    for name in ("torus2_7v", "t3"):
        T = lib.standard_library(name)
        assert Triangulation.from_json(T.to_json()) == T


@pytest.mark.parametrize("name", ["sphere2", "torus2_7v", "sphere3"])
def test_every_move_keeps_validity_and_chi(name):
    T = lib.standard_library(name)
    chi = euler_characteristic(T)
    moves = enumerate_pachner(T)
    assert moves
    for m in moves:
        U = apply_pachner(T, m)
        assert validate(U).valid
        assert euler_characteristic(U) == chi
        assert U.size == T.size + m.delta_size


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["sphere2", "torus2_7v", "genus_g(2)", "sphere3"]), st.integers(0, 2**16),
       st.integers(1, 25))
def test_random_walk_invariants(name, seed, steps):
    T = lib.standard_library(name)
    U = random_pachner_walk(T, steps, seed)
    assert validate(U).valid
    assert euler_characteristic(U) == euler_characteristic(T)
    assert U.size <= T.size + 12


def test_walk_is_deterministic_and_capped():
    T = lib.sphere2()
    assert random_pachner_walk(T, 30, 5) == random_pachner_walk(T, 30, 5)
    U = random_pachner_walk(T, 60, 1, size_cap=8)
    assert U.size <= 8


def test_move_kinds_filter():
    T = lib.sphere3()
    U = random_pachner_walk(T, 10, 0, kinds=["1-4"])
    # each 1-4 move adds three tetrahedra; the default cap (+12) stops after four
    assert U.size == T.size + 12
    assert {m.kind for m in enumerate_pachner(U)} <= {"1-4", "2-3", "3-2", "4-1"}


def test_two_three_needs_distinct_ids():
    # the one-vertex 3-torus admits no 2-3 move: every candidate pair repeats a vertex id
    assert not [m for m in enumerate_pachner(lib.t3()) if m.kind == "2-3"]
