from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifold import library as lib
from orbifold import tqft3d as t3
from orbifold.acceptance import dijkgraaf_witten_count
from orbifold.scalars import QuadraticField
from orbifold.simplicial import from_simplices, random_pachner_walk

FUS = t3.builtin_fusion()
MANIFOLDS = {"sphere3": lib.sphere3(), "s2xs1": lib.s2xs1(), "t3": lib.t3()}
Q5 = QuadraticField(5)
SQRT5 = Q5.sqrt_d


@pytest.mark.parametrize("name", ["trivial", "vec_z2", "vec_z3", "vec_z4", "vec_z5", "fibonacci",
                                  "fibonacci_unitary"])
def test_builtins_validate(name):
    rep = t3.validate_fusion(FUS[name])
    assert rep.all_true, rep.witnesses


def test_perturbed_fibonacci_fails_pentagon_with_witness():
    rep = t3.validate_fusion(FUS["fibonacci_perturbed"])
    assert not rep.pentagon
    assert rep.flags()["unit"] and rep.flags()["duality"]
    w = rep.witnesses["pentagon"]
    assert w["lhs"] != w["rhs"]
    assert t3.pentagon_violations(FUS["fibonacci_perturbed"], limit=None)


@pytest.mark.parametrize("name", ["vec_z2", "vec_z3", "fibonacci"])
@pytest.mark.parametrize("mfd", sorted(MANIFOLDS))
def test_network_matches_brute_force_enumeration(name, mfd):
    S, T = FUS[name], MANIFOLDS[mfd]
    assert t3.tv_invariant(S, T) == t3.tv_enumerate(S, T)


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("mfd", sorted(MANIFOLDS))
def test_cyclic_against_dijkgraaf_witten_count(N, mfd):
    T = MANIFOLDS[mfd]
    assert t3.tv_invariant(FUS[f"vec_z{N}"], T) == dijkgraaf_witten_count(N, T)


def test_known_values():
    z2 = [t3.tv_invariant(FUS["vec_z2"], MANIFOLDS[m]) for m in ("sphere3", "s2xs1", "t3")]
    assert z2 == [Fraction(1, 2), 1, 4]
    fib = FUS["fibonacci"]
    d2 = fib.total_dim_sq
    assert d2 == (5 + SQRT5) / 2
    assert t3.tv_invariant(fib, MANIFOLDS["sphere3"]) == 1 / d2
    assert t3.tv_invariant(fib, MANIFOLDS["sphere3"]) == Q5("1/2-1/10*sqrt(5)")
    assert t3.tv_invariant(fib, MANIFOLDS["s2xs1"]) == 1
    assert t3.tv_invariant(fib, MANIFOLDS["t3"]) == 4


def test_unitary_gauge_agrees_numerically():
    exact = FUS["fibonacci"]
    uni = FUS["fibonacci_unitary"]
    for T in MANIFOLDS.values():
        a = t3.tv_invariant(exact, T)
        b = t3.tv_invariant(uni, T)
        assert abs(complex(a) - complex(b)) < 1e-9


@pytest.mark.parametrize("name", ["vec_z2", "vec_z3", "fibonacci"])
def test_local_moves(name):
    S = FUS[name]
    rep = t3.check_3d_invariance(t3.orbifold_datum_from_fusion(S))
    assert rep.all_true, rep.witnesses
    assert rep.one_four_raw_factor == S.total_dim_sq


def test_pentagon_failure_breaks_two_three():
    rep = t3.check_3d_invariance(t3.orbifold_datum_from_fusion(FUS["fibonacci_perturbed"]))
    assert not rep.two_three and "two_three" in rep.witnesses


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**16))
def test_sphere_walk_invariance(seed):
    T = MANIFOLDS["sphere3"]
    for name in ("vec_z2", "fibonacci"):
        S = FUS[name]
        U = random_pachner_walk(T, 12, seed, kinds=["2-3", "3-2", "1-4", "4-1"])
        assert t3.tv_invariant(S, U) == t3.tv_invariant(S, T)


def test_json_roundtrip():
    for name in ("vec_z3", "fibonacci"):
        S = FUS[name]
        R = t3.SphericalFusionData.from_json(S.to_json())
        assert R.qdim == S.qdim and np.array_equal(R.N, S.N)
        assert all(R.F[k].equals(S.F[k]) for k in S.F)
        assert t3.tv_invariant(R, MANIFOLDS["sphere3"]) == t3.tv_invariant(S, MANIFOLDS["sphere3"])


def test_multiplicity_rejected():
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = 1
    N[1, 1, 1] = 2
    S = t3.SphericalFusionData((0, 1), (0, 1), N, (1, 1), {}, name="multi")
    assert not S.multiplicity_free
    with pytest.raises(t3.FusionError):
        t3.tv_invariant(S, MANIFOLDS["sphere3"])


def test_open_triangulation_rejected():
    with pytest.raises(t3.StateSumError3, match="boundary"):
        t3.tv_invariant(FUS["vec_z2"], from_simplices(3, [(0, 1, 2, 3)]))
