"""The duality pairing on local cohomology, evaluated on Čech cochains.

For classes x of H^i(L) and y of H^j(M) with i + j = |P| + 2 and
ω(L, M) = 0, both cocycles are lifted to cochains u, v of the full sheaf
(δu = x, δv = y) and the pairing is

    Σ_{S+T ⊆ P∖{p}} (-1)^{p+a+r} sgn(p, r) sgn(s, t) ω_p(u_{pS}, v_{pT})

where a = i - 1 is the Čech degree of x, |S| = i - 2, |T| = j - 2 and r is
the one party left out.  The overall sign is fixed only up to ±1, so every
check here is sign-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .cohomology import (
    CechComplex,
    cech_complex,
    cochain_vectors,
    cohomology_basis,
    full_complex,
)
from .ffla import DTYPE, Subspace, rank, solve
from .symplectic import PartyStructure, SymplecticForm, mask_of, orthogonal_complement, parties_of


@dataclass(frozen=True)
class Orientation:
    """Ascending party order with a chosen base party for the evaluation."""

    n_parties: int
    base_party: int = 0

    def __post_init__(self):
        if not 0 <= self.base_party < max(self.n_parties, 1):
            raise ValueError("base party must be one of the parties")


@dataclass
class PairingMatrix:
    left_degree: int
    right_degree: int
    entries: np.ndarray

    @property
    def shape(self):
        return self.entries.shape


def _perm_sign(seq) -> int:
    inv = sum(1 for a, b in combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def to_full_coords(c: CechComplex, degree: int, coords, structure: PartyStructure) -> np.ndarray:
    """Re-express a k = 1 cochain of FL in the full sheaf's coordinates."""
    cg = full_complex(structure)
    out = np.zeros(cg.dims[degree], dtype=DTYPE)
    for m, vec in cochain_vectors(c, degree, coords).items():
        cols = structure.coords(parties_of(m))
        out[cg.block(degree, m)] = vec[cols]
    return out


def lift_coboundary(x, c: CechComplex, degree: int, structure: PartyStructure) -> np.ndarray:
    """Cochain u of the full sheaf at ``degree - 1`` with δu = x.

    ``x`` is a cocycle of ``c`` (a k = 1 complex of some FL) at Čech degree
    ``degree``; the lift is the zero-free-variable solution.
    """
    n = structure.n_parties
    if n < 2 or not 1 <= degree <= n - 1:
        raise ValueError(f"lifts exist for Čech degrees 1..{n - 1} with at least two parties")
    xg = to_full_coords(c, degree, x, structure)
    cg = full_complex(structure)
    D = cg.coboundary(degree - 1)
    u = solve(D.T, xg, structure.p)
    if u is None:
        raise AssertionError("cocycle is not a coboundary in the full sheaf")
    return u


def _ambient(cg: CechComplex, degree: int, u, mask: int, structure: PartyStructure) -> np.ndarray:
    v = np.zeros(structure.dim, dtype=DTYPE)
    v[structure.coords(parties_of(mask))] = u[cg.block(degree, mask)]
    return v


def pairing_from_lifts(u, v, i: int, j: int, structure: PartyStructure, orientation: Optional[Orientation] = None) -> int:
    """Evaluate the pairing from lifted cochains u (Čech degree i-2) and v (j-2)."""
    n = structure.n_parties
    p = structure.p
    orientation = orientation or Orientation(n)
    base = orientation.base_party
    a = i - 1
    cg = full_complex(structure)
    blk = structure.block(base)
    form = SymplecticForm(structure)
    others = [q for q in range(n) if q != base]
    total = 0
    for s in combinations(others, i - 2):
        rest = [q for q in others if q not in s]
        for t in combinations(rest, j - 2):
            (r,) = [q for q in rest if q not in t]
            sign = (-1) ** (base + a + r) * _perm_sign((base, r)) * _perm_sign(s + t)
            sign *= (-1) ** sum(1 for q in s if q < base) * (-1) ** sum(1 for q in t if q < base)
            us = _ambient(cg, i - 2, u, mask_of((base,) + s), structure)
            vt = _ambient(cg, j - 2, v, mask_of((base,) + t), structure)
            up = np.zeros_like(us)
            up[blk] = us[blk]
            vp = np.zeros_like(vt)
            vp[blk] = vt[blk]
            total += sign * form(up, vp)
    return int(total % p)


def _check_degrees(i, j, n):
    if n < 2:
        raise ValueError("the pairing needs at least two parties")
    if i + j != n + 2:
        raise ValueError(f"degrees must satisfy i + j = |P| + 2 = {n + 2}, got {i} + {j}")
    if not (2 <= i <= n and 2 <= j <= n):
        raise ValueError(f"local degrees must lie in 2..{n}")


def _check_orthogonal(l, m, structure):
    form = SymplecticForm(structure)
    if l.dim and m.dim and form.matrix(l.basis, m.basis).any():
        raise ValueError("ω(L, M) must vanish")


def pair_classes(
    x,
    y,
    l: Subspace,
    m: Subspace,
    structure: PartyStructure,
    i: int,
    orientation: Optional[Orientation] = None,
) -> int:
    """ω̂(x, y) for cocycles x of H^i(L) and y of H^j(M), j = |P| + 2 - i."""
    n = structure.n_parties
    j = n + 2 - i
    _check_degrees(i, j, n)
    _check_orthogonal(l, m, structure)
    cl = cech_complex(l, structure, 1)
    cm = cech_complex(m, structure, 1)
    u = lift_coboundary(x, cl, i - 1, structure)
    v = lift_coboundary(y, cm, j - 1, structure)
    return pairing_from_lifts(u, v, i, j, structure, orientation)


def pairing_matrix(
    l: Subspace,
    m: Subspace,
    structure: PartyStructure,
    i: int,
    orientation: Optional[Orientation] = None,
) -> PairingMatrix:
    n = structure.n_parties
    j = n + 2 - i
    _check_degrees(i, j, n)
    _check_orthogonal(l, m, structure)
    xs = cohomology_basis(l, structure, 1, i)
    ys = cohomology_basis(m, structure, 1, j)
    us = [lift_coboundary(x, xs.complex, i - 1, structure) for x in xs.representatives]
    vs = [lift_coboundary(y, ys.complex, j - 1, structure) for y in ys.representatives]
    out = np.zeros((len(us), len(vs)), dtype=DTYPE)
    for a, u in enumerate(us):
        for b, v in enumerate(vs):
            out[a, b] = pairing_from_lifts(u, v, i, j, structure, orientation)
    return PairingMatrix(i, j, out)


def check_perfect(l: Subspace, structure: PartyStructure, orientation: Optional[Orientation] = None) -> tuple[bool, dict]:
    """Check that ω̂ pairs H^*(L) perfectly with H^*(L^⊥) in every degree."""
    n = structure.n_parties
    if n < 2:
        raise ValueError("duality needs at least two parties")
    lp = orthogonal_complement(SymplecticForm(structure), l)
    report = {}
    ok = True
    for i in range(2, n + 1):
        pm = pairing_matrix(l, lp, structure, i, orientation)
        rows, cols = pm.shape
        rk = rank(pm.entries, structure.p) if pm.entries.size else 0
        good = rows == cols == rk
        ok &= good
        report[i] = {"dual_degree": n + 2 - i, "rows": rows, "cols": cols, "rank": rk, "perfect": good}
    return ok, report


def middle_symplectic(l: Subspace, structure: PartyStructure) -> np.ndarray:
    """Gram matrix of ω̂ on the self-dual degree (|P| + 2) / 2 in characteristic 2."""
    n = structure.n_parties
    if structure.p != 2:
        raise ValueError("the middle-degree form is defined in characteristic 2")
    if n % 2 or n < 2:
        raise ValueError("the middle-degree form needs an even number of parties")
    form = SymplecticForm(structure)
    if 2 * l.dim != structure.dim or (l.dim and form.matrix(l.basis, l.basis).any()):
        raise ValueError("L must be lagrangian")
    gram = pairing_matrix(l, l, structure, (n + 2) // 2).entries
    if gram.size:
        if np.diag(gram).any():
            raise AssertionError("middle-degree form is not alternating")
        if rank(gram, 2) != gram.shape[0]:
            raise AssertionError("middle-degree form is degenerate")
    return gram
