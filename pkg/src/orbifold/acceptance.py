"""Acceptance battery: ten criteria, each run against an independent oracle.

Every criterion returns a :class:`CriterionResult`; ``passed`` reflects the
stated target exactly, never a relaxed version of it. Oracles (character
tables, flat-connection counting) are computed here without going through the
state-sum code.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import frobenius as fr
from . import morita as mo
from .library import closed_surfaces, standard_library
from .linalg import rank
from .scalars import Q, QuadraticNumber
from .simplicial import apply_pachner, enumerate_pachner, euler_characteristic, random_pachner_walk
from .tensor import Tensor
from . import tqft2d as t2
from . import tqft3d as t3

CORE_ALGEBRAS = ("trivial", "z2", "end2", "s3", "klein_twisted")

# flags each shipped algebra is documented to fail (all others hold)
DOCUMENTED_FAILURES = {
    "trivial": frozenset(),
    "z2": frozenset(),
    "z2_unscaled": frozenset({"delta_separable"}),
    "end2": frozenset(),
    "end3": frozenset(),
    "s3": frozenset(),
    "klein_twisted": frozenset(),
}

SURFACES = ("sphere2", "torus2_7v", "genus_g(2)")

# character tables: class sizes and one row per irreducible character
CHARACTER_TABLES = {
    "z2": {"order": 2, "class_sizes": (1, 1), "rows": ((1, 1), (1, -1))},
    "s3": {"order": 6, "class_sizes": (1, 3, 2), "rows": ((1, 1, 1), (1, -1, 1), (2, 0, -1))},
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = dc_field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:>2}: {self.title}: {self.summary} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "summary": self.summary, "details": self.details, "seconds": round(self.seconds, 2)}


def _s(x) -> str:
    from .scalars import format_scalar
    v = format_scalar(x)
    return v if isinstance(v, str) else str(v)


# ---------------------------------------------------------------------------
# oracles


def character_oracle(group: str, chi: int) -> Fraction:
    """Σ_i (d_i/|G|)^χ from a character table, after checking row orthogonality."""
    tab = CHARACTER_TABLES[group]
    n, sizes, rows = tab["order"], tab["class_sizes"], tab["rows"]
    for a, b in itertools.product(range(len(rows)), repeat=2):
        inner = Fraction(sum(s * x * y for s, x, y in zip(sizes, rows[a], rows[b])), n)
        if inner != (1 if a == b else 0):
            raise AssertionError(f"character table of {group} is not orthonormal")
    return sum((Fraction(r[0], n) ** chi for r in rows), Fraction(0))


def dijkgraaf_witten_count(N: int, T) -> Fraction:
    """|flat Z/N connections on the edge classes| / N^V."""
    classes = T.cell_classes(1)
    edges = sorted(set(classes.values()))
    pos = {e: k for k, e in enumerate(edges)}
    tris = set()
    for s in range(T.size):
        for p, q, r in itertools.combinations(range(T.n + 1), 3):
            tris.add((pos[classes[(s, (p, q))]], pos[classes[(s, (q, r))]], pos[classes[(s, (p, r))]]))
    # propagate constraints edge by edge
    tris = sorted(tris)
    count = 0
    col = [0] * len(edges)
    due: dict[int, list] = {}
    for t in tris:
        due.setdefault(max(t), []).append(t)

    def rec(e):
        nonlocal count
        if e == len(edges):
            count += 1
            return
        for g in range(N):
            col[e] = g
            if all((col[a] + col[b] - col[c]) % N == 0 for a, b, c in due.get(e, ())):
                rec(e + 1)

    rec(0)
    return Fraction(count, N ** T.counts()[0])


# ---------------------------------------------------------------------------
# criteria


def _perturb(A: fr.FrobeniusAlgebra, rng: random.Random) -> tuple[fr.FrobeniusAlgebra, str]:
    which = rng.choice(["mu", "unit", "counit", "comul"])
    arr = getattr(A, which).array.copy()
    idx = tuple(rng.randrange(s) for s in arr.shape)
    delta = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
    arr[idx] = arr[idx] + delta
    parts = {k: getattr(A, k) for k in ("mu", "unit", "counit", "comul")}
    parts[which] = Tensor._wrap(arr, A.field)
    return fr.FrobeniusAlgebra(A.dim, name=A.name, **parts), f"{which}{list(idx)}+={delta}"


def criterion_1(perturbations: int = 1000, seed: int = 0) -> CriterionResult:
    algs = fr.builtin_algebras(Q)
    patterns = {}
    ok_patterns = True
    for name, fails in DOCUMENTED_FAILURES.items():
        rep = fr.check_axioms(algs[name])
        got = frozenset(k for k, v in rep.flags().items() if not v)
        patterns[name] = {"fails": sorted(got), "documented": sorted(fails), "match": got == fails}
        ok_patterns &= got == fails
    rng = random.Random(seed)
    unflipped = []
    t0 = time.perf_counter()
    for k in range(perturbations):
        name = CORE_ALGEBRAS[k % len(CORE_ALGEBRAS)]
        A = algs[name]
        B, what = _perturb(A, rng)
        if fr.check_axioms(B).all_true:
            unflipped.append(f"{name}: {what}")
    elapsed = time.perf_counter() - t0
    passed = ok_patterns and not unflipped and elapsed < 10
    return CriterionResult(1, "Frobenius axiom suite", passed,
                           f"patterns {'match' if ok_patterns else 'differ'}; "
                           f"{perturbations - len(unflipped)}/{perturbations} perturbations flip a flag "
                           f"in {elapsed:.1f}s (limit 10s)",
                           {"patterns": patterns, "unflipped": unflipped[:5], "perturbation_seconds": elapsed})


def criterion_2(steps: int = 100, seeds=(0, 1, 2)) -> CriterionResult:
    algs = fr.builtin_algebras(Q)
    names = [n for n in algs if fr.check_axioms(algs[n]).delta_separable]
    bad, rows = [], {}
    t0 = time.perf_counter()
    for name in names:
        A = algs[name]
        for surf in SURFACES:
            T0 = standard_library(surf)
            z0 = t2.statesum_closed(A, T0)
            vals = {_s(z0)}
            for seed in seeds:
                T = random_pachner_walk(T0, steps, seed)
                z = t2.statesum_closed(A, T, check=False)
                vals.add(_s(z))
                if z != z0:
                    bad.append({"algebra": name, "surface": surf, "seed": seed, "start": _s(z0), "end": _s(z)})
            rows[f"{name}/{surf}"] = sorted(vals)
    elapsed = time.perf_counter() - t0
    passed = not bad and elapsed < 60
    return CriterionResult(2, "2d Pachner invariance", passed,
                           f"{len(names)} algebras x {len(SURFACES)} surfaces x {len(seeds)} seeds, "
                           f"{len(bad)} changes, {elapsed:.1f}s (limit 60s)",
                           {"values": rows, "changes": bad[:5], "algebras": names})


def criterion_3() -> CriterionResult:
    algs = fr.builtin_algebras(Q)
    targets = [("z2", "sphere2", Fraction(1, 2)), ("z2", "torus2_7v", Fraction(2)),
               ("z2", "genus_g(2)", Fraction(8)), ("s3", "torus2_7v", Fraction(3))]
    rows, passed = [], True
    for name, surf, want in targets:
        T = standard_library(surf)
        chi = euler_characteristic(T)
        got = t2.statesum_closed(algs[name], T)
        oracle = character_oracle(name, chi)
        order = CHARACTER_TABLES[name]["order"]
        rows.append({"algebra": name, "surface": surf, "chi": chi, "target": _s(want),
                     "statesum": _s(got), "character_oracle": _s(oracle),
                     "statesum_equals_target": got == want,
                     "statesum_equals_order_pow_chi_times_oracle": got == Fraction(order) ** chi * oracle})
        passed &= got == want
    summ = ", ".join(f"{r['algebra']}/{r['surface']}={r['statesum']} (target {r['target']})" for r in rows)
    return CriterionResult(3, "state sums vs character oracle", passed, summ, {"rows": rows})


def criterion_4() -> CriterionResult:
    rows, passed = [], True
    for n in (2, 3):
        A = fr.endomorphism_orbifold_datum(n, Q)
        for surf in closed_surfaces():
            T = standard_library(surf)
            got = t2.statesum_closed(A, T)
            chi = euler_characteristic(T)
            rows.append({"n": n, "surface": surf, "chi": chi, "value": _s(got),
                         "equals_1": got == 1, "equals_n_pow_chi": got == Fraction(n) ** chi})
            passed &= got == 1
    ok = sum(r["equals_1"] for r in rows)
    return CriterionResult(4, "End(k^n) datum matches the trivial theory", passed,
                           f"{ok}/{len(rows)} surfaces give 1; values "
                           + ", ".join(f"n={r['n']} {r['surface']}={r['value']}" for r in rows),
                           {"rows": rows})


def criterion_5(ms=(1, 2, 3)) -> CriterionResult:
    algs = fr.builtin_algebras(Q)
    names = [n for n in algs if fr.check_axioms(algs[n]).delta_separable]
    ranks, traces, pants = {}, {}, {}
    passed = True
    for name in names:
        A = algs[name]
        zdim = len(fr.center_basis(A))
        got = []
        for m in ms:
            r = rank(t2.cylinder_idempotent(A, m).matrix)
            got.append((m, r))
            passed &= r == zdim
        ranks[name] = {"center_dim": zdim, "ranks": got}
        zt = t2.statesum_closed(A, standard_library("torus2_7v"))
        tr = t2.orbifold_evaluate(A, t2.cylinder_bordism(1)).trace()
        traces[name] = {"Z(T2)": _s(zt), "trace": _s(tr), "dim": t2.orbifold_state_space(A, 1).dim}
        passed &= zt == tr == t2.orbifold_state_space(A, 1).dim
        for m in (1, 2):
            cyl = t2.cylinder_bordism(m)
            glued = t2.glue(t2.disk(m), t2.pair_of_pants(m), 0, 0)
            raw = t2.statesum_bordism(A, glued).equals(t2.statesum_bordism(A, cyl))
            orb = t2.orbifold_evaluate(A, glued).equals(t2.orbifold_evaluate(A, cyl))
            comp = (t2.statesum_bordism(A, t2.pair_of_pants(m))
                    @ t2.statesum_bordism(A, t2.disk(m)).kron(t2.statesum_bordism(A, cyl)))
            composed = comp.equals(t2.statesum_bordism(A, cyl))
            pants[f"{name}/m={m}"] = {"glued_raw": raw, "glued_orbifold": orb, "composed": composed}
            passed &= raw and orb and composed
    return CriterionResult(5, "cylinder idempotent and pair-of-pants functoriality", passed,
                           f"{len(names)} algebras; rank = dim Z(A), Z(T2) = trace, pants composition "
                           f"{'exact' if passed else 'mismatch'}",
                           {"ranks": ranks, "traces": traces, "pants": pants})


def criterion_6() -> CriterionResult:
    mods = mo.builtin_bimodules(Q)
    unitors = {}
    passed = True
    for name, X in mods.items():
        right = mo.unitor(X, "right").is_isomorphism()
        left = mo.unitor(X, "left").is_isomorphism()
        unitors[name] = {"right": right, "left": left}
        passed &= right and left
    qd = {}
    for n in (1, 2, 3, 4):
        q = mo.quantum_dimensions(mo.vector_space(n, Q))
        vals = q.dim_r.entries + q.dim_l.entries
        qd[n] = [_s(v) for v in vals]
        passed &= all(v == n for v in vals)
    X = mo.vector_space(2, Q)
    D = mo.algebra_from_bimodule(X)
    P = mo.endomorphism_comparison(X)
    C = fr.change_basis(D, P)
    E = fr.endomorphism_orbifold_datum(2, Q)
    same = all(getattr(C, k).equals(getattr(E, k)) for k in ("mu", "unit", "counit", "comul"))
    passed &= same
    return CriterionResult(6, "Morita layer", passed,
                           f"unitors invertible for {sum(all(u.values()) for u in unitors.values())}/{len(unitors)} "
                           f"bimodules; dim k^n = n for n<=4: {all(all(v == str(n) for v in qd[n]) for n in qd)}; "
                           f"X*(x)X ~ End(k^2) via explicit basis change: {same}",
                           {"unitors": unitors, "qdims": qd, "basis_change": [_s(x) for x in P.entries]})


def criterion_7(steps: int = 100, seeds=(0, 1, 2)) -> CriterionResult:
    rows, passed = [], True
    for psi in (2, 3):
        for g in (0, 1, 2):
            T = standard_library(f"genus_g({g})")
            got = t2.euler_tqft(psi, T, Q)
            want = Fraction(psi) ** (2 - 2 * g)
            rows.append({"psi": psi, "g": g, "value": _s(got), "target": _s(want)})
            passed &= got == want
    A = fr.builtin_algebras(Q)["z2_unscaled"]
    W = t2.compensating_weights(A)
    targets = {"sphere2": Fraction(1, 2), "torus2_7v": Fraction(2), "genus_g(2)": Fraction(8)}
    euler = {}
    for surf, want in targets.items():
        T0 = standard_library(surf)
        z0 = t2.euler_completed_statesum(A, W, T0)
        walk = [t2.euler_completed_statesum(A, W, random_pachner_walk(T0, steps, s)) for s in seeds]
        ok = z0 == want and all(z == z0 for z in walk)
        euler[surf] = {"value": _s(z0), "target": _s(want), "walk_values": [_s(z) for z in walk], "ok": ok}
        passed &= ok
    return CriterionResult(7, "Euler layer", passed,
                           "psi^(2-2g) exact; Euler-completed unnormalized Z/2 = "
                           + ", ".join(f"{k}={v['value']}" for k, v in euler.items()),
                           {"euler_tqft": rows, "weights": [_s(p) for p in W.psi], "euler_completed": euler})


def criterion_8() -> CriterionResult:
    z2 = fr.cyclic_group(2)
    G = fr.product_group(z2, z2)
    plain = t2.twisted_sectors(G, None, Q)
    twisted = t2.twisted_sectors(G, fr.klein_twist(Q), Q)
    dim_plain = len(fr.center_basis(fr.twisted_group_algebra(G, None, field=Q)))
    dim_tw = len(fr.center_basis(fr.twisted_group_algebra(G, fr.klein_twist(Q), field=Q)))
    ok_plain = dim_plain == 4 and sorted(plain) == [(g, 1) for g in range(4)]
    ok_tw = dim_tw == 1 and twisted == [(G.identity, 1)]
    return CriterionResult(8, "twisted sectors", ok_plain and ok_tw,
                           f"untwisted centre dim {dim_plain} sectors {plain}; twisted centre dim {dim_tw} "
                           f"sectors {twisted}",
                           {"untwisted": plain, "twisted": twisted})


def criterion_9(walk_steps: int = 50, seeds=(0, 1)) -> CriterionResult:
    t0 = time.perf_counter()
    data = t3.builtin_fusion()
    pent = {}
    for name in ["trivial", "vec_z2", "vec_z3", "vec_z4", "vec_z5", "fibonacci", "fibonacci_unitary",
                 "fibonacci_perturbed"]:
        pent[name] = t3.validate_fusion(data[name]).pentagon
    passed = all(v for k, v in pent.items() if k != "fibonacci_perturbed") and not pent["fibonacci_perturbed"]
    manifolds = ("sphere3", "s2xs1", "t3")
    tv, dw = {}, {}
    for N in range(1, 6):
        S = data["trivial" if N == 1 else f"vec_z{N}"]
        for M in manifolds:
            T = standard_library(M)
            z, o = t3.tv_invariant(S, T), dijkgraaf_witten_count(N, T)
            tv[f"Z/{N}/{M}"] = _s(z)
            dw[f"Z/{N}/{M}"] = _s(o)
            passed &= z == o
    z2_vals = tuple(t3.tv_invariant(data["vec_z2"], standard_library(M)) for M in manifolds)
    passed &= z2_vals == (Fraction(1, 2), Fraction(1), Fraction(4))
    fib = data["fibonacci"]
    s3 = standard_library("sphere3")
    fib_s3 = t3.tv_invariant(fib, s3)
    target = QuadraticNumber(Fraction(1, 2), Fraction(-1, 10), 5)
    fib_enum = t3.tv_enumerate(fib, s3)
    passed &= fib_s3 == target and fib_enum == target
    walks = {}
    for name in ("vec_z2", "fibonacci"):
        S = data[name]
        z0 = t3.tv_invariant(S, s3)
        vals = [t3.tv_invariant(S, random_pachner_walk(s3, walk_steps, seed, kinds=["2-3", "3-2"]), check=False)
                for seed in seeds]
        # explicit 1-4 move followed by a 4-1 move
        T1 = apply_pachner(s3, next(m for m in enumerate_pachner(s3) if m.kind == "1-4"))
        T2 = apply_pachner(T1, next(m for m in enumerate_pachner(T1) if m.kind == "4-1"))
        vals += [t3.tv_invariant(S, T1), t3.tv_invariant(S, T2)]
        ok = all(v == z0 for v in vals)
        # repeated vertex ids block 2-3 moves on these, so walk with all kinds
        for M in ("s2xs1", "t3"):
            T = standard_library(M)
            ok &= t3.tv_invariant(S, T) == t3.tv_invariant(S, random_pachner_walk(T, 20, seeds[0]))
        walks[name] = {"start": _s(z0), "values": [_s(v) for v in vals], "ok": ok}
        passed &= ok
    elapsed = time.perf_counter() - t0
    passed &= elapsed < 300
    return CriterionResult(9, "3d pentagon, TV values and Pachner invariance", passed,
                           f"pentagon {pent}; Vec_Z2 (S3,S2xS1,T3) = {tuple(_s(v) for v in z2_vals)}; "
                           f"Fibonacci S3 = {_s(fib_s3)}; walks invariant "
                           f"{all(w['ok'] for w in walks.values())}; {elapsed:.1f}s (limit 300s)",
                           {"pentagon": pent, "tv": tv, "dijkgraaf_witten": dw, "walks": walks,
                            "fibonacci_s3": _s(fib_s3), "coloring_cap_enumeration": 2 ** 20})


def criterion_10() -> CriterionResult:
    data = t3.builtin_fusion()
    rows = {}
    passed = True
    for name, S in data.items():
        p = t3.validate_fusion(S).pentagon
        inv = t3.check_3d_invariance(t3.orbifold_datum_from_fusion(S))
        rows[name] = {"pentagon": p, "two_three": inv.two_three}
        passed &= p == inv.two_three
    D = t3.orbifold_datum_from_fusion(data["fibonacci"])
    arr = D.A0_plus.array.copy()
    nz = [i for i, x in np.ndenumerate(arr) if x != 0]
    arr[nz[-1]] = arr[nz[-1]] + 1
    bad = t3.check_3d_invariance(D.with_A0_plus(Tensor._wrap(arr, D.field)))
    rows["fibonacci_A0_replaced"] = {"pentagon": False, "two_three": bad.two_three}
    passed &= not bad.two_three
    both = any(r["two_three"] for r in rows.values()) and any(not r["two_three"] for r in rows.values())
    passed &= both
    return CriterionResult(10, "2-3 invariance iff pentagon", passed,
                           ", ".join(f"{k}: {v['pentagon']}/{v['two_three']}" for k, v in rows.items()),
                           {"rows": rows})


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_criterion(k: int) -> CriterionResult:
    t = time.perf_counter()
    res = CRITERIA[k]()
    res.seconds = time.perf_counter() - t
    return res


def run_all(which=None) -> list[CriterionResult]:
    return [run_criterion(k) for k in (which or sorted(CRITERIA))]
