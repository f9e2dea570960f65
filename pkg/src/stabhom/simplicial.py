"""Polyhedra (simplicial complexes) on a vertex set P, stored as bitmasks.

This is the independent route: relative simplicial cohomology of
(Δ_P, Γ) reproduces the sheaf computation for codimension-one quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .cohomology import local_invariants_rel, sections
from .ffla import DTYPE, Subspace, is_subspace, rank
from .symplectic import PartyStructure, SymplecticForm, mask_of, orthogonal_complement, parties_of


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class Polyhedron:
    """Downward-closed family of nonempty subsets of {0..n-1}."""

    n_vertices: int
    faces: frozenset

    def __post_init__(self):
        faces = frozenset(int(f) for f in self.faces)
        full = (1 << self.n_vertices) - 1
        for f in faces:
            if f == 0 or f & ~full:
                raise ValueError(f"face {parties_of(f)} is empty or outside the vertex set")
        object.__setattr__(self, "faces", faces)
        for f in faces:
            for q in parties_of(f):
                sub = f & ~(1 << q)
                if sub and sub not in faces:
                    raise ValueError(f"not downward closed: {parties_of(f)} present, {parties_of(sub)} missing")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Polyhedron":
        return cls(n, frozenset(mask_of(s) for s in sets))

    @classmethod
    def generated(cls, n: int, maximal: Iterable[Iterable[int]]) -> "Polyhedron":
        """Union of full simplices on the given vertex sets."""
        faces = set()
        for s in maximal:
            m = mask_of(s)
            sub = m
            while sub:
                faces.add(sub)
                sub = (sub - 1) & m
        return cls(n, frozenset(faces))

    @classmethod
    def simplex(cls, n: int) -> "Polyhedron":
        return cls(n, frozenset(range(1, 1 << n)))

    @classmethod
    def boundary(cls, n: int) -> "Polyhedron":
        return cls(n, frozenset(range(1, (1 << n) - 1)))

    @classmethod
    def empty(cls, n: int) -> "Polyhedron":
        return cls(n, frozenset())

    def __contains__(self, s) -> bool:
        m = s if isinstance(s, int) else mask_of(s)
        return m in self.faces

    def __len__(self):
        return len(self.faces)

    def face_sets(self) -> list:
        return sorted((parties_of(f) for f in self.faces), key=lambda t: (len(t), t))

    def union(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.n_vertices, self.faces | other.faces)

    def intersection(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.n_vertices, self.faces & other.faces)

    @property
    def is_proper(self) -> bool:
        return ((1 << self.n_vertices) - 1) not in self.faces


def polyhedron_of_closed(s_list: Sequence[Iterable[int]], n: int) -> Polyhedron:
    """Polyhedron of Y = X_{S_1} ∪ ... ∪ X_{S_r}: faces disjoint from some S_i."""
    masks = [mask_of(s) for s in s_list]
    faces = frozenset(f for f in range(1, 1 << n) if any(f & m == 0 for m in masks))
    return Polyhedron(n, faces)


def dual(gamma: Polyhedron) -> Polyhedron:
    """Faces S with P∖S nonempty and not a face of Γ."""
    if not gamma.is_proper:
        raise ValueError("the full simplex has no dual polyhedron")
    full = (1 << gamma.n_vertices) - 1
    faces = frozenset(f for f in range(1, full) if (full & ~f) not in gamma.faces)
    return Polyhedron(gamma.n_vertices, faces)


def join(gamma: Polyhedron, theta: Polyhedron) -> Polyhedron:
    """Join on the vertex set P + Q; Q's vertices are shifted past P's."""
    shift = gamma.n_vertices
    left = list(gamma.faces) + [0]
    right = [t << shift for t in theta.faces] + [0]
    faces = frozenset(s | t for s in left for t in right if s | t)
    return Polyhedron(gamma.n_vertices + theta.n_vertices, faces)


def gamma_sphere(n: int) -> Polyhedron:
    """Faces S + T ⊆ P + P with S ∩ T = ∅; a sphere of dimension n - 1."""
    faces = frozenset(
        s | (t << n) for s in range(1 << n) for t in range(1 << n) if s & t == 0 and (s | t)
    )
    return Polyhedron(2 * n, faces)


def _coboundary(lower: list, upper: list, p: int) -> np.ndarray:
    index = {f: i for i, f in enumerate(lower)}
    D = np.zeros((len(upper), len(lower)), dtype=DTYPE)
    for r, f in enumerate(upper):
        for alpha, q in enumerate(parties_of(f)):
            c = index.get(f & ~(1 << q))
            if c is not None:
                D[r, c] = (-1) ** alpha % p
    return D


def cohomology_dims(
    complex_: Polyhedron,
    sub: Optional[Polyhedron] = None,
    coeff_dim: int = 1,
    p: int = 2,
) -> list:
    """dim H^i(K, Γ; F_p^d) for i = 0..n-1; ``sub`` defaults to the empty polyhedron."""
    n = complex_.n_vertices
    sub_faces = sub.faces if sub is not None else frozenset()
    if not sub_faces <= complex_.faces:
        raise ValueError("relative pair needs Γ ⊆ K")
    faces = complex_.faces - sub_faces
    by_deg = [sorted(f for f in faces if _popcount(f) == i + 1) for i in range(n)]
    ranks = []
    for i in range(n - 1):
        D = _coboundary(by_deg[i], by_deg[i + 1], p)
        ranks.append(rank(D, p) if D.size else 0)
    out = []
    for i in range(n):
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i >= 1 else 0
        out.append(coeff_dim * (len(by_deg[i]) - r_out - r_in))
    return out


def relative_cohomology_dims(gamma: Polyhedron, coeff_dim: int = 1, p: int = 2) -> list:
    """dim H^i(Δ_P, Γ; F_p^d)."""
    return cohomology_dims(Polyhedron.simplex(gamma.n_vertices), gamma, coeff_dim, p)


def reduced_cohomology_dims(k: Polyhedron, p: int = 2) -> list:
    dims = cohomology_dims(k, None, 1, p)
    if k.faces:
        dims[0] -= 1
    return dims


# --- the codimension-one oracle -------------------------------------------


def codim1_gamma(l: Subspace, m: Subspace, structure: PartyStructure) -> Polyhedron:
    """Γ = {S : L ∩ G_S ⊆ M}."""
    n = structure.n_parties
    faces = frozenset(s for s in range(1, 1 << n) if is_subspace(sections(l, structure, s), m))
    return Polyhedron(n, faces)


def codim1_gamma_perp(l: Subspace, m: Subspace, structure: PartyStructure) -> Polyhedron:
    """Γ' = {S : M^⊥ ∩ G_S ⊆ L^⊥}."""
    form = SymplecticForm(structure)
    lp = orthogonal_complement(form, l)
    mp = orthogonal_complement(form, m)
    n = structure.n_parties
    faces = frozenset(s for s in range(1, 1 << n) if is_subspace(sections(mp, structure, s), lp))
    return Polyhedron(n, faces)


def codim1_oracle(l: Subspace, m: Subspace, structure: PartyStructure) -> list:
    """Relative cohomology dims of (Δ_P, Γ) with one-dimensional coefficients."""
    if not is_subspace(m, l) or l.dim != m.dim + 1:
        raise ValueError("m must be a hyperplane of l")
    return relative_cohomology_dims(codim1_gamma(l, m, structure), 1, l.p)


def oracle_agrees(l: Subspace, m: Subspace, structure: PartyStructure) -> bool:
    """Sheaf pipeline at local degree j versus the oracle at simplicial degree j - 1."""
    sheaf = local_invariants_rel(l, m, structure)
    simp = codim1_oracle(l, m, structure)
    return sheaf[0] == 0 and list(sheaf[1:]) == list(simp)
