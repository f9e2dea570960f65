"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Expected table values are transcribed by hand from the published tables;
all comparisons are exact integer equality.  Runtime limits are pinned per
criterion.  Run ``python3 tests/test_acceptance.py`` for the bare report.
"""

from __future__ import annotations

import functools
import time
from itertools import product

import numpy as np

from stabhom.cohomology import cech_complex, cohomology_basis, cohomology_dims, euler_characteristic, invariant_table, local_invariants, local_invariants_rel
from stabhom.duality import check_perfect, middle_symplectic, pair_classes
from stabhom.ffla import Subspace, random_subspace, rref
from stabhom.simplicial import codim1_gamma, codim1_gamma_perp, codim1_oracle, cohomology_dims as simp_dims, dual, gamma_sphere
from stabhom.structure import coarsen, external_sum, ghz_count, ghz_extraction, internal_sum
from stabhom.symplectic import PartyStructure, SymplecticForm, family, graph_lagrangian, orthogonal_complement, random_lagrangian

from oracles import kunneth

RESULTS: dict = {}

# h^{k,j} rows for k = 1..|P|-1 as printed; the k = |P| row is the caption's
# "trivial information" and is checked separately.
TABLE_I = {
    "A_2": (("path", 2), [[0, 0, 2]]),
    "A_3": (("path", 3), [[0, 0, 1, 1], [0, 0, 0, 3]]),
    "GHZ_4": (("star", 4), [[0, 0, 1, 0, 1], [0, 0, 0, 1, 3], [0, 0, 0, 0, 4]]),
    "Ahat_3": (("cycle", 4), [[0, 0, 0, 2, 0], [0, 0, 0, 1, 3], [0, 0, 0, 0, 4]]),
    "GHZ_5": (("star", 5), [[0, 0, 1, 0, 0, 1], [0, 0, 0, 1, 0, 4], [0, 0, 0, 0, 1, 6], [0, 0, 0, 0, 0, 5]]),
    "D_5": (("D", 5), [[0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 3, 2], [0, 0, 0, 0, 1, 6], [0, 0, 0, 0, 0, 5]]),
    "A_5": (("path", 5), [[0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 4, 1], [0, 0, 0, 0, 1, 6], [0, 0, 0, 0, 0, 5]]),
    "Ahat_4": (("cycle", 5), [[0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 5, 0], [0, 0, 0, 0, 1, 6], [0, 0, 0, 0, 0, 5]]),
}

TABLE_II = {
    "GHZ_6": (("star", 6), [0, 0, 1, 0, 0, 0, 1]),
    "GHZ_7": (("star", 7), [0, 0, 1, 0, 0, 0, 0, 1]),
    "A_6": (("path", 6), [0, 0, 0, 0, 2, 0, 0]),
    "Ahat_5": (("cycle", 6), [0, 0, 0, 0, 4, 0, 0]),
    "A_7": (("path", 7), [0, 0, 0, 0, 1, 1, 0, 0]),
    "Ahat_6": (("cycle", 7), [0, 0, 0, 0, 1, 1, 0, 0]),
}

# tier 2: depends on the documented Dynkin layouts
TABLE_II_TIER2 = {
    "D_6": (("D", 6), [0, 0, 0, 1, 0, 1, 0]),
    "D_7": (("D", 7), [0, 0, 0, 0, 1, 1, 0, 0]),
    "E_6": (("E6", 6), [0, 0, 0, 0, 2, 0, 0]),
    "E_7": (("E7", 7), [0, 0, 0, 0, 1, 1, 0, 0]),
    "Dhat_5": (("Dhat", 5), [0, 0, 0, 0, 2, 0, 0]),
    "Ehat_6": (("E6hat", 6), [0, 0, 0, 0, 1, 1, 0, 0]),
    "Dhat_6": (("Dhat", 6), [0, 0, 0, 1, 0, 0, 1, 0]),
}


def named(spec, p=2):
    return graph_lagrangian(family(*spec), p)


def all_named():
    for d in (TABLE_I, TABLE_II, TABLE_II_TIER2):
        for name, (spec, _) in d.items():
            yield name, named(spec)


def criterion(number: int, title: str, limit_s: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            status, detail = "PASS", ""
            try:
                fn()
                elapsed = time.perf_counter() - t0
                if elapsed >= limit_s:
                    status, detail = "FAIL", f"runtime {elapsed:.2f}s exceeds {limit_s}s"
            except AssertionError as exc:
                status, detail = "FAIL", str(exc) or "assertion failed"
            elapsed = time.perf_counter() - t0
            line = f"[{status}] criterion {number:>2d}: {title} ({elapsed:.2f}s, limit {limit_s:g}s)"
            if detail:
                line += f" -- {detail}"
            RESULTS[number] = line
            print(line)
            assert status == "PASS", line

        return run

    return wrap


def random_cases(count, sizes, primes, seed):
    rng = np.random.default_rng(seed)
    out = []
    for t in range(count):
        p = primes[t % len(primes)]
        n = sizes[t % len(sizes)]
        qudits = tuple(int(q) for q in rng.integers(1, 3, size=n)) if n <= 3 else (1,) * n
        s = PartyStructure(qudits, p)
        out.append((random_lagrangian(s, int(rng.integers(1 << 31))), s))
    return out


@criterion(1, "Table I named rows, full h^{kj} grids", 1.0)
def test_criterion_01_table_one():
    for name, (spec, rows) in TABLE_I.items():
        l, s = named(spec)
        n = s.n_parties
        got = [local_invariants(l, s, k) for k in range(1, n)]
        assert got == rows, f"{name}: {got} != {rows}"
        top = local_invariants(l, s, n)
        assert top == [0] * n + [1], f"{name}: top row {top}"
        assert all(local_invariants(l, s, k)[j] == 0 for k in range(1, n + 1) for j in range(k)), name


@criterion(2, "Table II first-order rows incl. Dynkin tier", 10.0)
def test_criterion_02_table_two():
    for d in (TABLE_II, TABLE_II_TIER2):
        for name, (spec, row) in d.items():
            l, s = named(spec)
            got = local_invariants(l, s, 1)
            assert got == row, f"{name}: {got} != {row}"


@criterion(3, "duality perfect on named and 200 random lagrangians", 60.0)
def test_criterion_03_duality():
    cases = [c for _, c in all_named()]
    cases += random_cases(200, [2, 3, 4, 5], [2, 3, 5], 3)
    for l, s in cases:
        ok, rep = check_perfect(l, s)
        assert ok, f"not perfect: {s.qudits} p={s.p} {rep}"
        n = s.n_parties
        row = local_invariants(l, s, 1)
        rowp = local_invariants(orthogonal_complement(SymplecticForm(s), l), s, 1)
        for j in range(2, n + 1):
            assert row[j] == rowp[n + 2 - j]
        for i, v in rep.items():
            assert v["rows"] == v["cols"] == v["rank"]


@criterion(4, "char-2 alternation and middle-degree symplectic form", 30.0)
def test_criterion_04_alternation():
    cases = [c for _, c in all_named()] + random_cases(40, [2, 4], [2], 4)
    for l, s in cases:
        n = s.n_parties
        if n % 2:
            continue
        i = (n + 2) // 2
        for x in cohomology_basis(l, s, 1, i).representatives:
            assert pair_classes(x, x, l, l, s, i) == 0
        g = middle_symplectic(l, s)
        assert g.shape[0] == local_invariants(l, s, 1)[i]
        assert g.shape[0] % 2 == 0
    g = middle_symplectic(*named(("cycle", 6)))
    assert g.shape == (4, 4)


@criterion(5, "GHZ extraction count equals h^2", 30.0)
def test_criterion_05_ghz():
    cases = [c for _, c in all_named()] + random_cases(60, [3, 4, 5], [2, 3], 5)
    for l, s in cases:
        if s.n_parties <= 2:
            continue
        count, _, rl, rs = ghz_extraction(l, s)
        assert count == local_invariants(l, s, 1)[2]
        if rs.n_parties >= 2:
            assert local_invariants(rl, rs, 1)[2] == 0
    for n in range(2, 8):
        assert ghz_count(*named(("star", n))) == 1
    for a, b in [(("star", 3), ("star", 3)), (("path", 2), ("path", 2)), (("star", 3), ("path", 2))]:
        la, sa = named(a)
        lb, sb = named(b)
        assert ghz_count(*external_sum(la, lb, sa, sb)) == 0
    g, sg = named(("star", 4))
    assert ghz_count(*internal_sum(g, g, sg, sg)) == 2


@criterion(6, "Kunneth identity on pairs from {A_2, A_3, GHZ_3, GHZ_4, Ahat_3}", 30.0)
def test_criterion_06_kunneth():
    states = [named(x) for x in [("path", 2), ("path", 3), ("star", 3), ("star", 4), ("cycle", 4)]]
    tables = [[list(r) for r in invariant_table(l, s).h] for l, s in states]
    for (a, sa), ta in zip(states, tables):
        for (b, sb), tb in zip(states, tables):
            l, s = external_sum(a, b, sa, sb)
            direct = [list(r) for r in invariant_table(l, s).h]
            assert direct == kunneth(ta, tb, l.dim, s.n_parties)


@criterion(7, "internal-sum additivity on 50 random pairs", 30.0)
def test_criterion_07_internal_sum():
    rng = np.random.default_rng(7)
    for t in range(50):
        p = (2, 3, 5)[t % 3]
        n = 2 + t % 3
        s1 = PartyStructure(tuple(int(q) for q in rng.integers(1, 3, size=n)), p)
        s2 = PartyStructure((1,) * n, p)
        a = random_lagrangian(s1, int(rng.integers(1 << 31)))
        b = random_lagrangian(s2, int(rng.integers(1 << 31)))
        l, s = internal_sum(a, b, s1, s2)
        want = [x + y for x, y in zip(local_invariants(a, s1, 1), local_invariants(b, s2, 1))]
        assert local_invariants(l, s, 1) == want


def _hyperplane(l, rng):
    p = l.p
    c = np.zeros(l.dim, dtype=int)
    while not c.any():
        c = rng.integers(0, p, size=l.dim)
    piv = int(np.flatnonzero(c)[0])
    rows = []
    for t in range(l.dim):
        if t != piv:
            v = np.zeros(l.dim, dtype=int)
            v[t] = 1
            v[piv] = (-c[t] * pow(int(c[piv]), -1, p)) % p
            rows.append(v)
    return Subspace.span(np.array(rows, dtype=int).reshape(-1, l.dim) @ l.basis % p, p, l.ambient_dim)


@criterion(8, "sheaf pipeline equals simplicial oracle on 200 codim-1 pairs", 60.0)
def test_criterion_08_oracle():
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 200:
        p = (2, 3)[checked % 2]
        n = 2 + checked % 4
        s = PartyStructure(tuple(int(q) for q in rng.integers(1, 3 if n <= 3 else 2, size=n)), p)
        if rng.random() < 0.5:
            l = random_lagrangian(s, int(rng.integers(1 << 31)))
        else:
            l = random_subspace(s.dim, int(rng.integers(1, s.dim + 1)), p, rng)
        m = _hyperplane(l, rng)
        sheaf = local_invariants_rel(l, m, s)
        simp = codim1_oracle(l, m, s)
        assert sheaf[0] == 0 and sheaf[1:] == simp, (sheaf, simp)
        g = codim1_gamma(l, m, s)
        if g.is_proper:
            assert codim1_gamma_perp(l, m, s) == dual(g)
        checked += 1


@criterion(9, "some (2,2,1,1) coarsening of the 6-cycle has h^3 = 4", 10.0)
def test_criterion_09_coarsening():
    l, s = named(("cycle", 6))
    values = set()
    for phi in product(range(4), repeat=6):
        if sorted(phi.count(q) for q in range(4)) == [1, 1, 2, 2]:
            values.add(local_invariants(*coarsen(l, s, phi, 4), 1)[3])
    assert 4 in values, values


@criterion(10, "structural property suite", 30.0)
def test_criterion_10_structure():
    rng = np.random.default_rng(10)
    cases = [c for name, c in all_named() if c[1].n_parties <= 5] + random_cases(20, [2, 3, 4], [2, 3, 5], 10)
    for l, s in cases:
        for k in range(1, min(l.dim, 3) + 1):
            c = cech_complex(l, s, k)
            for i in range(len(c.coboundaries) - 1):
                assert not (c.coboundaries[i + 1] @ c.coboundaries[i] % c.p).any()
            h = cohomology_dims(c)
            assert euler_characteristic(c.dims) == euler_characteristic(h)
        t = invariant_table(l, s)
        assert all(x == 0 for x in t.h[0])
        assert t.get(l.dim + 1, 1) == 0 and t.get(1, s.n_parties + 1) == 0
        form = SymplecticForm(s)
        assert orthogonal_complement(form, orthogonal_complement(form, l)) == l
    for p in (2, 3, 5):
        for _ in range(50):
            m = rng.integers(0, p, size=(int(rng.integers(1, 6)), int(rng.integers(1, 6))))
            r = rref(m, p)
            assert (rref(r[0], p)[0] == r[0]).all()
            a = random_subspace(6, int(rng.integers(0, 7)), p, rng)
            form = SymplecticForm(PartyStructure.uniform(3, p))
            assert orthogonal_complement(form, orthogonal_complement(form, a)) == a
    for n in range(1, 6):
        chi = euler_characteristic(simp_dims(gamma_sphere(n)))
        assert chi == 1 + (-1) ** (n - 1)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    print(f"{len(tests) - failed}/{len(tests)} criteria passed")
