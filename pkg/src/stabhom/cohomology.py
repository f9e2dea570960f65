"""Čech cohomology of partition sheaves and the invariant table h^{ij}(L).

The partition space is never built.  Open sets U_S are indexed by party
subsets S (bitmasks), and the punctured space is covered by the U_p.  A
degree-i Čech cochain has one block per (i+1)-subset, ordered by size and
then lexicographically; the block at S holds Λ^k(L ∩ G_S).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .ffla import (
    DTYPE,
    Subspace,
    complement_basis,
    compound,
    det,
    intersect,
    is_subspace,
    kernel,
    rank,
    solve,
    sum_spaces,
)
from .symplectic import PartyStructure, mask_of, parties_of


# --- exterior powers -------------------------------------------------------


@dataclass(frozen=True)
class ExteriorBasisMap:
    """Lexicographic indexing of the k-subsets of {0..N-1}, i.e. of Λ^k F^N."""

    ambient_dim: int
    k: int

    def __post_init__(self):
        subsets = tuple(combinations(range(self.ambient_dim), self.k))
        object.__setattr__(self, "_subsets", subsets)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(subsets)})

    @property
    def dim(self) -> int:
        return len(self._subsets)

    @property
    def subsets(self) -> tuple:
        return self._subsets

    def index(self, subset: Sequence[int]) -> int:
        return self._index[tuple(sorted(subset))]


def wedge_embed(vectors, emap: ExteriorBasisMap, p: int) -> np.ndarray:
    """Coordinates of v_1 ∧ ... ∧ v_k in Λ^k: the k x k minors of the stack."""
    vecs = np.asarray(vectors, dtype=DTYPE).reshape(-1, emap.ambient_dim) % p
    if vecs.shape[0] != emap.k:
        raise ValueError(f"expected {emap.k} vectors, got {vecs.shape[0]}")
    out = np.zeros(emap.dim, dtype=DTYPE)
    if emap.k == 0:
        out[0] = 1
        return out
    for i, cols in enumerate(emap.subsets):
        out[i] = det(vecs[:, list(cols)], p)
    return out


def sections(l: Subspace, structure: PartyStructure, mask: int) -> Subspace:
    """L ∩ G_S for the party set encoded by ``mask``."""
    outside = [c for c in range(structure.dim) if c not in set(structure.coords(parties_of(mask)))]
    if l.dim == 0 or not outside:
        return l
    ker = kernel(l.basis[:, outside].T, l.p)
    return Subspace.span(ker.basis @ l.basis % l.p, l.p, l.ambient_dim)


def section_space(l: Subspace, structure: PartyStructure, s: Sequence[int], k: int) -> Subspace:
    """Λ^k(L ∩ G_S) embedded in Λ^k G."""
    s = list(s)
    if not s:
        raise ValueError("party subset must be nonempty")
    base = sections(l, structure, mask_of(s))
    if k == 1:
        return base
    emap = ExteriorBasisMap(structure.dim, k)
    wedges = [wedge_embed(base.basis[list(idx)], emap, l.p) for idx in combinations(range(base.dim), k)]
    return Subspace.span(np.array(wedges, dtype=DTYPE).reshape(len(wedges), emap.dim), l.p, emap.dim)


# --- Čech complexes --------------------------------------------------------


@dataclass
class CechComplex:
    """Čech complex over the cover (U_p) of the punctured partition space.

    ``coboundaries[i]`` maps degree-i cochains (column vectors) to degree i+1.
    """

    n_parties: int
    p: int
    subsets: list
    block_dims: list
    offsets: list
    coboundaries: list
    block_bases: dict = field(default_factory=dict)

    @property
    def dims(self) -> list:
        return [sum(d) for d in self.block_dims]

    def block(self, degree: int, mask: int) -> slice:
        t = self.subsets[degree].index(mask)
        start = self.offsets[degree][t]
        return slice(start, start + self.block_dims[degree][t])

    def coboundary(self, degree: int) -> np.ndarray:
        """D^degree, with zero maps outside the valid range."""
        dims = self.dims
        if 0 <= degree < len(self.coboundaries):
            return self.coboundaries[degree]
        rows = dims[degree + 1] if 0 <= degree + 1 < len(dims) else 0
        cols = dims[degree] if 0 <= degree < len(dims) else 0
        return np.zeros((rows, cols), dtype=DTYPE)


def _subsets_by_degree(n: int) -> list:
    return [[mask_of(c) for c in combinations(range(n), i + 1)] for i in range(n)]


def assemble_complex(
    n: int,
    p: int,
    block_dim: Callable[[int], int],
    transition: Callable[[int, int], np.ndarray],
    block_bases: Optional[dict] = None,
) -> CechComplex:
    """Build a Čech complex from per-subset block sizes and inclusion maps.

    ``transition(small, big)`` returns the (dim big) x (dim small) matrix of
    the restriction from the block at ``small`` into the block at ``big``.
    """
    subsets = _subsets_by_degree(n)
    dims = [[block_dim(m) for m in deg] for deg in subsets]
    offsets = [list(np.concatenate([[0], np.cumsum(d)[:-1]]).astype(int)) if d else [] for d in dims]
    where = [{m: (int(o), d) for m, o, d in zip(subsets[i], offsets[i], dims[i])} for i in range(n)]
    cobs = []
    for i in range(n - 1):
        D = np.zeros((sum(dims[i + 1]), sum(dims[i])), dtype=DTYPE)
        for big in subsets[i + 1]:
            ob, db = where[i + 1][big]
            if db == 0:
                continue
            for alpha, q in enumerate(parties_of(big)):
                small = big & ~(1 << q)
                os_, ds = where[i][small]
                if ds == 0:
                    continue
                t = transition(small, big)
                if alpha % 2:
                    t = -t
                D[ob : ob + db, os_ : os_ + ds] += t
        cobs.append(D % p)
    return CechComplex(n, p, subsets, dims, [list(map(int, o)) for o in offsets], cobs, block_bases or {})


@lru_cache(maxsize=512)
def _section_table(l: Subspace, structure: PartyStructure) -> dict:
    n = structure.n_parties
    return {m: sections(l, structure, m) for m in range(1, 1 << n)}


def cech_complex(l: Subspace, structure: PartyStructure, k: int = 1) -> CechComplex:
    return _cech_complex(l, structure, k)


@lru_cache(maxsize=512)
def _cech_complex(l: Subspace, structure: PartyStructure, k: int) -> CechComplex:
    if l.ambient_dim != structure.dim:
        raise ValueError("subspace does not live in the structure's ambient space")
    n = structure.n_parties
    p = l.p
    sec = _section_table(l, structure)

    def block_dim(m):
        return comb(sec[m].dim, k)

    def transition(small, big):
        a, b = sec[small], sec[big]
        c = b.coordinates(a.basis)  # a.basis = c @ b.basis
        return compound(c, k, p).T

    bases = {m: sec[m].basis for m in sec} if k == 1 else {}
    return assemble_complex(n, p, block_dim, transition, bases)


def full_complex(structure: PartyStructure) -> CechComplex:
    """Čech complex of the full partition sheaf G_S (unit-vector bases)."""
    return cech_complex(Subspace.full(structure.dim, structure.p), structure, 1)


def cohomology_dims(c: CechComplex) -> list:
    """dim H^i = dim C^i - rank D^i - rank D^{i-1}."""
    ranks = [rank(D, c.p) if D.size else 0 for D in c.coboundaries]
    out = []
    for i, d in enumerate(c.dims):
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i >= 1 else 0
        out.append(d - r_out - r_in)
    return out


def euler_characteristic(dims: Sequence[int]) -> int:
    return sum((-1) ** i * d for i, d in enumerate(dims))


def _local_from_w(w_dims: Sequence[int], n: int) -> list:
    row = [0] * (n + 1)
    for i, d in enumerate(w_dims):
        if i + 1 <= n:
            row[i + 1] = d
    return row


def local_invariants(l: Subspace, structure: PartyStructure, k: int) -> list:
    """Row (h^{k,0}, ..., h^{k,|P|}) of local cohomology dimensions."""
    n = structure.n_parties
    if n == 0:
        return [1 if k == 0 else 0]
    if k == 0 or k > l.dim:
        return [0] * (n + 1)
    return _local_from_w(cohomology_dims(cech_complex(l, structure, k)), n)


@dataclass(frozen=True)
class InvariantTable:
    """h[i][j] = dim H^{ij}(L) for 0 <= i <= dim L and 0 <= j <= |P|."""

    n_parties: int
    h: tuple

    @property
    def first_order(self) -> tuple:
        return self.h[1] if len(self.h) > 1 else (0,) * (self.n_parties + 1)

    def get(self, i: int, j: int) -> int:
        if 0 <= i < len(self.h) and 0 <= j <= self.n_parties:
            return self.h[i][j]
        return 0

    def to_dict(self) -> dict:
        return {"n_parties": self.n_parties, "h": [list(r) for r in self.h]}

    @classmethod
    def from_dict(cls, d: dict) -> "InvariantTable":
        return cls(int(d["n_parties"]), tuple(tuple(int(x) for x in r) for r in d["h"]))

    def format(self) -> str:
        """Text grid; the k = 0 row is omitted unless P is empty (it vanishes otherwise)."""
        n = self.n_parties
        head = "k\\j " + " ".join(f"{j:>4d}" for j in range(n + 1))
        lines = [head]
        for i, r in enumerate(self.h):
            if i == 0 and n > 0:
                continue
            lines.append(f"{i:>3d} " + " ".join(f"{x:>4d}" for x in r))
        return "\n".join(lines)


def invariant_table(l: Subspace, structure: PartyStructure, kmax: Optional[int] = None) -> InvariantTable:
    top = l.dim if kmax is None else min(kmax, l.dim)
    rows = tuple(tuple(local_invariants(l, structure, k)) for k in range(top + 1))
    return InvariantTable(structure.n_parties, rows)


# --- cohomology representatives -------------------------------------------


@dataclass
class CohomologyClasses:
    """Cocycles spanning a complement of the coboundaries at local degree j."""

    degree: int
    representatives: np.ndarray
    complex: CechComplex

    @property
    def w_degree(self) -> int:
        return self.degree - 1

    def __len__(self):
        return self.representatives.shape[0]


def _classes(c: CechComplex, d: int) -> np.ndarray:
    n_cols = c.dims[d]
    p = c.p
    z = kernel(c.coboundary(d), p, cols=n_cols)
    incoming = c.coboundary(d - 1) if d >= 1 else np.zeros((n_cols, 0), dtype=DTYPE)
    b = Subspace.span(incoming.T, p, n_cols)
    reps = complement_basis(b, sum_spaces(b, z)) if z.dim else np.zeros((0, n_cols), dtype=DTYPE)
    return reps


def cohomology_basis(l: Subspace, structure: PartyStructure, k: int, j: int) -> CohomologyClasses:
    """Representatives of H^{k,j}(L) as W-degree (j-1) Čech cocycles."""
    n = structure.n_parties
    if not 1 <= j <= n:
        raise ValueError(f"local degree j must lie in 1..{n}, got {j}")
    c = cech_complex(l, structure, k)
    return CohomologyClasses(j, _classes(c, j - 1), c)


def cochain_vectors(c: CechComplex, degree: int, coords) -> dict:
    """Turn cochain coordinates (k = 1 complexes) into ambient vectors per subset."""
    coords = np.asarray(coords, dtype=DTYPE)
    out = {}
    for m in c.subsets[degree]:
        blk = c.block(degree, m)
        basis = c.block_bases[m]
        out[m] = coords[blk] @ basis % c.p if basis.shape[0] else np.zeros(basis.shape[1], dtype=DTYPE)
    return out


# --- quotients -------------------------------------------------------------


def quotient_complex(l: Subspace, m: Subspace, structure: PartyStructure) -> CechComplex:
    """Čech complex of FL/FM with blocks (L ∩ G_S)/(M ∩ G_S)."""
    if not is_subspace(m, l):
        raise ValueError("m must be contained in l")
    p = l.p
    n = structure.n_parties
    sl = _section_table(l, structure)
    sm = _section_table(m, structure)
    comp = {}
    stacked = {}
    for mask in sl:
        cb = complement_basis(sm[mask], sl[mask])
        comp[mask] = cb
        stacked[mask] = np.vstack([sm[mask].basis, cb])

    def block_dim(mask):
        return comp[mask].shape[0]

    def transition(small, big):
        nb_m = sm[big].dim
        cols = []
        for v in comp[small]:
            x = solve(stacked[big], v, p)
            assert x is not None
            cols.append(x[nb_m:])
        return np.array(cols, dtype=DTYPE).reshape(len(cols), block_dim(big)).T

    return assemble_complex(n, p, block_dim, transition, comp)


def local_invariants_rel(l: Subspace, m: Subspace, structure: PartyStructure) -> list:
    """Local cohomology dimensions of the quotient sheaf FL/FM."""
    n = structure.n_parties
    if n == 0:
        return [0]
    return _local_from_w(cohomology_dims(quotient_complex(l, m, structure)), n)
