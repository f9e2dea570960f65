"""Party structures, the symplectic form, and graph-state lagrangians.

Coordinates: party ``p`` owns a contiguous block of width ``2 * n_p``; inside
a block the coordinates alternate ``e_1, f_1, e_2, f_2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .ffla import DTYPE, FieldLike, FieldPrime, Subspace, as_field, kernel, unit_vectors


@dataclass(frozen=True)
class PartyStructure:
    qudits: tuple
    field: FieldPrime
    names: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "qudits", tuple(int(n) for n in self.qudits))
        object.__setattr__(self, "field", as_field(self.field))
        if any(n < 0 for n in self.qudits):
            raise ValueError("qudit counts must be non-negative")
        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != len(self.qudits):
                raise ValueError("one name per party required")
            object.__setattr__(self, "names", names)

    @classmethod
    def uniform(cls, n_parties: int, field: FieldLike, qudits: int = 1) -> "PartyStructure":
        return cls((qudits,) * n_parties, as_field(field))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n_parties(self) -> int:
        return len(self.qudits)

    @property
    def parties(self) -> range:
        return range(len(self.qudits))

    @cached_property
    def offsets(self) -> tuple:
        out = [0]
        for n in self.qudits:
            out.append(out[-1] + 2 * n)
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def block(self, party: int) -> slice:
        return slice(self.offsets[party], self.offsets[party + 1])

    def coords(self, parties: Iterable[int]) -> list:
        """Ambient coordinate indices of G_S, in party order."""
        out = []
        for q in sorted(set(parties)):
            out.extend(range(self.offsets[q], self.offsets[q + 1]))
        return out

    def coordinate_subspace(self, parties: Iterable[int]) -> Subspace:
        """G_S as a subspace of G."""
        return Subspace.span(unit_vectors(self.coords(parties), self.dim), self.p, self.dim)

    def e(self, party: int, qudit: int = 0) -> np.ndarray:
        v = np.zeros(self.dim, dtype=DTYPE)
        v[self.offsets[party] + 2 * qudit] = 1
        return v

    def f(self, party: int, qudit: int = 0) -> np.ndarray:
        v = np.zeros(self.dim, dtype=DTYPE)
        v[self.offsets[party] + 2 * qudit + 1] = 1
        return v

    def support(self, v) -> frozenset:
        v = np.asarray(v)
        return frozenset(q for q in self.parties if v[self.block(q)].any())

    def label(self, party: int) -> str:
        return self.names[party] if self.names else str(party)


def mask_of(parties: Iterable[int]) -> int:
    m = 0
    for q in parties:
        m |= 1 << q
    return m


def parties_of(mask: int) -> tuple:
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return tuple(out)


@dataclass(frozen=True)
class SymplecticForm:
    """ω = Σ_p ω_p with ω(e_i, f_i) = 1 = -ω(f_i, e_i)."""

    structure: PartyStructure

    @cached_property
    def gram(self) -> np.ndarray:
        n = self.structure.dim
        p = self.structure.p
        j = np.zeros((n, n), dtype=DTYPE)
        for i in range(0, n, 2):
            j[i, i + 1] = 1
            j[i + 1, i] = p - 1
        j.setflags(write=False)
        return j

    def __call__(self, u, v) -> int:
        return omega(self, u, v)

    def matrix(self, a, b) -> np.ndarray:
        """Pairing matrix ω(a_i, b_j) for the rows of a and b."""
        a = np.asarray(a, dtype=DTYPE).reshape(-1, self.structure.dim)
        b = np.asarray(b, dtype=DTYPE).reshape(-1, self.structure.dim)
        return a @ self.gram @ b.T % self.structure.p


def omega(form: SymplecticForm, u, v) -> int:
    n = form.structure.dim
    u = np.asarray(u, dtype=DTYPE)
    v = np.asarray(v, dtype=DTYPE)
    if u.shape != (n,) or v.shape != (n,):
        raise ValueError(f"vectors must have length {n}")
    p = form.structure.p
    return int((u[0::2] @ v[1::2] - u[1::2] @ v[0::2]) % p)


def orthogonal_complement(form: SymplecticForm, l: Subspace) -> Subspace:
    n = form.structure.dim
    if l.dim == 0:
        return Subspace.full(n, l.p)
    return kernel(l.basis @ form.gram % l.p, l.p, cols=n)


def is_isotropic(form: SymplecticForm, l: Subspace) -> bool:
    if l.dim == 0:
        return True
    return not form.matrix(l.basis, l.basis).any()


def is_lagrangian(form: SymplecticForm, l: Subspace) -> bool:
    return is_isotropic(form, l) and 2 * l.dim == form.structure.dim


# --- graphs ----------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset = dc_field(default_factory=frozenset)

    def __post_init__(self):
        clean = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) outside vertex range 0..{self.n - 1}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def neighbours(self, v: int) -> list:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    def edge_list(self) -> list:
        return sorted(self.edges)


def graph_lagrangian(g: Graph, field: FieldLike) -> tuple[Subspace, PartyStructure]:
    """Lagrangian spanned by g_v = e_v + Σ_{w ~ v} f_w, one qudit per vertex."""
    structure = PartyStructure.uniform(g.n, field)
    gens = np.zeros((g.n, structure.dim), dtype=DTYPE)
    for v in range(g.n):
        gens[v, 2 * v] = 1
        for w in g.neighbours(v):
            gens[v, 2 * w + 1] = 1
    return Subspace.span(gens, structure.p, structure.dim), structure


def lagrangian_of_graph(g: Graph, structure: PartyStructure) -> Subspace:
    """Graph lagrangian inside an existing one-qudit-per-party structure."""
    if any(n != 1 for n in structure.qudits) or structure.n_parties != g.n:
        raise ValueError("graph states need exactly one qudit per party")
    return graph_lagrangian(g, structure.field)[0]


FAMILIES = ("path", "star", "cycle", "D", "E6", "E7", "Dhat", "E6hat")


def family(name: str, n: Optional[int] = None) -> Graph:
    """Named graph families with a fixed vertex layout.

    path: edges (i, i+1).  star: centre 0.  cycle: path plus (n-1, 0).
    D: path 0..n-2 plus edge (1, n-1).  E6/E7: path on k-1 vertices with a
    branch vertex attached at node 2.  Dhat (n+1 vertices for affine D_n):
    path 0..n-2 plus leaves n-1 on node 1 and n on node n-3.  E6hat: path
    0..4 plus the arm 2-5-6.
    """
    if name == "path":
        _need(n, 1, name)
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if name == "star":
        _need(n, 1, name)
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if name == "cycle":
        _need(n, 3, name)
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if name == "D":
        _need(n, 4, name)
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 2)] + [(1, n - 1)])
    if name in ("E6", "E7"):
        k = int(name[1])
        if n not in (None, k):
            raise ValueError(f"{name} has exactly {k} vertices")
        return Graph.from_edges(k, [(i, i + 1) for i in range(k - 2)] + [(2, k - 1)])
    if name == "Dhat":
        _need(n, 4, name)
        edges = [(i, i + 1) for i in range(n - 2)] + [(1, n - 1), (n - 3, n)]
        return Graph.from_edges(n + 1, edges)
    if name == "E6hat":
        if n not in (None, 6):
            raise ValueError("E6hat is affine E_6 on 7 vertices")
        return Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)])
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def _need(n, least, name):
    if n is None or n < least:
        raise ValueError(f"family {name!r} needs n >= {least}, got {n}")


# --- random lagrangians ----------------------------------------------------


def transvection(form: SymplecticForm, vectors: np.ndarray, h, c: int = 1) -> np.ndarray:
    """Apply x -> x + c ω(x, h) h to each row."""
    p = form.structure.p
    h = np.asarray(h, dtype=DTYPE)
    coef = vectors @ form.gram @ h % p
    return (vectors + c * np.outer(coef, h)) % p


def random_lagrangian(structure: PartyStructure, seed: int) -> Subspace:
    """Seed-deterministic lagrangian in ``structure``.

    Starts from span{e_i} and applies global transvections (to leave the
    product-state orbit) followed by local transvections and qudit swaps
    inside each party.
    """
    rng = np.random.default_rng(seed)
    form = SymplecticForm(structure)
    n = structure.dim
    p = structure.p
    total = n // 2
    vecs = unit_vectors(range(0, n, 2), n)
    if n == 0:
        return Subspace.zero(0, p)
    for _ in range(2 * n + 2):
        h = rng.integers(0, p, size=n)
        vecs = transvection(form, vecs, h, int(rng.integers(1, p)) if p > 2 else 1)
    for q in structure.parties:
        blk = structure.block(q)
        width = blk.stop - blk.start
        if width == 0:
            continue
        for _ in range(width + 1):
            h = np.zeros(n, dtype=DTYPE)
            h[blk] = rng.integers(0, p, size=width)
            vecs = transvection(form, vecs, h, int(rng.integers(1, p)) if p > 2 else 1)
        nq = structure.qudits[q]
        if nq > 1:
            perm = rng.permutation(nq)
            cols = np.arange(n)
            for a, b in enumerate(perm):
                cols[blk.start + 2 * a] = blk.start + 2 * b
                cols[blk.start + 2 * a + 1] = blk.start + 2 * b + 1
            vecs = vecs[:, cols]
    out = Subspace.span(vecs, p, n)
    assert out.dim == total
    return out
