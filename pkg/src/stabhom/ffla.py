"""Exact linear algebra over prime fields F_p.

Matrices are plain 2-d numpy integer arrays with entries in ``[0, p)``.
Row vectors are the default: a subspace is the row space of its basis.
Over F_2 the elimination runs on rows packed into Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

import numpy as np

DTYPE = np.int64


@dataclass(frozen=True)
class FieldPrime:
    """The prime field F_p, 2 <= p < 2**16."""

    p: int

    def __post_init__(self):
        p = int(self.p)
        if not 2 <= p < 2**16 or not _is_prime(p):
            raise ValueError(f"field modulus must be a prime below 2**16, got {self.p}")
        object.__setattr__(self, "p", p)

    def __int__(self):
        return self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)


FieldLike = Union[FieldPrime, int]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def as_field(field: FieldLike) -> FieldPrime:
    return field if isinstance(field, FieldPrime) else FieldPrime(int(field))


def as_matrix(m, p: int, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a 2-d residue array (reduced mod p)."""
    a = np.asarray(m, dtype=DTYPE)
    if a.ndim == 1:
        if a.size == 0 and cols is not None:
            a = a.reshape(0, cols)
        else:
            a = a.reshape(1, -1)
    elif a.ndim != 2:
        raise ValueError("expected a matrix")
    if a.size == 0 and cols is not None and a.shape[1] != cols:
        a = a.reshape(a.shape[0], cols)
    return np.mod(a, p)


# --- elimination -----------------------------------------------------------


def _pack_rows(a: np.ndarray) -> list[int]:
    n = a.shape[1]
    if n == 0:
        return [0] * a.shape[0]
    packed = np.packbits(a.astype(np.uint8), axis=1)
    shift = 8 * packed.shape[1] - n
    return [int.from_bytes(row.tobytes(), "big") >> shift for row in packed]


def _unpack_rows(rows: Sequence[int], n: int) -> np.ndarray:
    out = np.zeros((len(rows), n), dtype=DTYPE)
    if n == 0:
        return out
    nbytes = (n + 7) // 8
    shift = 8 * nbytes - n
    for i, r in enumerate(rows):
        bits = np.unpackbits(np.frombuffer((r << shift).to_bytes(nbytes, "big"), dtype=np.uint8))
        out[i] = bits[:n]
    return out


def _rref_gf2(a: np.ndarray):
    nrows, n = a.shape
    rows = _pack_rows(a)
    pivots = []
    r = 0
    for col in range(n):
        if r == nrows:
            break
        bit = 1 << (n - 1 - col)
        for i in range(r, nrows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        r += 1
    return _unpack_rows(rows, n), pivots


def _rref_modp(a: np.ndarray, p: int):
    a = a.copy()
    nrows, n = a.shape
    pivots = []
    r = 0
    for col in range(n):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, col])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, col]), -1, p) % p
        factors = a[:, col].copy()
        factors[r] = 0
        if factors.any():
            a = (a - np.outer(factors, a[r])) % p
        pivots.append(col)
        r += 1
    return a, pivots


def rref(m, field: FieldLike) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form of ``m`` over F_p.

    Returns ``(R, pivots, rank)`` where ``R`` has the shape of ``m`` with the
    zero rows at the bottom.
    """
    p = int(field)
    a = as_matrix(m, p)
    if a.size == 0:
        return a.copy(), [], 0
    if p == 2:
        r, piv = _rref_gf2(a)
    else:
        r, piv = _rref_modp(a, p)
    return r, piv, len(piv)


def rank(m, field: FieldLike) -> int:
    return rref(m, field)[2]


def det(m, field: FieldLike) -> int:
    """Determinant of a square matrix mod p."""
    p = int(field)
    a = as_matrix(m, p).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    d = 1
    for col in range(n):
        nz = np.flatnonzero(a[col:, col])
        if nz.size == 0:
            return 0
        i = col + int(nz[0])
        if i != col:
            a[[col, i]] = a[[i, col]]
            d = -d
        piv = int(a[col, col])
        d = d * piv % p
        inv = pow(piv, -1, p)
        below = a[col + 1 :, col] * inv % p
        if below.any():
            a[col + 1 :] = (a[col + 1 :] - np.outer(below, a[col])) % p
    return d % p


def compound(a, k: int, field: FieldLike) -> np.ndarray:
    """k-th compound matrix: all k x k minors, rows/cols in lex subset order."""
    p = int(field)
    a = as_matrix(a, p)
    r, c = a.shape
    row_sets = list(combinations(range(r), k))
    col_sets = list(combinations(range(c), k))
    out = np.zeros((len(row_sets), len(col_sets)), dtype=DTYPE)
    if k == 0:
        out[:] = 1
        return out
    if k == 1:
        return a.copy()
    for i, rs in enumerate(row_sets):
        sub = a[list(rs)]
        if not sub.any():
            continue
        for j, cs in enumerate(col_sets):
            out[i, j] = det(sub[:, list(cs)], p)
    return out


# --- subspaces -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of F_p^N held in canonical (RREF) form."""

    ambient_dim: int
    basis: np.ndarray
    pivots: tuple
    p: int

    @classmethod
    def span(cls, vectors, field: FieldLike, ambient_dim: Optional[int] = None) -> "Subspace":
        p = int(field)
        a = as_matrix(vectors, p, cols=ambient_dim)
        if ambient_dim is not None and a.shape[1] != ambient_dim:
            raise ValueError(f"vectors have length {a.shape[1]}, expected {ambient_dim}")
        r, piv, rk = rref(a, p)
        basis = r[:rk].copy()
        basis.setflags(write=False)
        return cls(a.shape[1], basis, tuple(piv), p)

    @classmethod
    def zero(cls, n: int, field: FieldLike) -> "Subspace":
        return cls.span(np.zeros((0, n), dtype=DTYPE), field, n)

    @classmethod
    def full(cls, n: int, field: FieldLike) -> "Subspace":
        return cls.span(np.eye(n, dtype=DTYPE), field, n)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.pivots, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, p={self.p})"

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` (or each row of a matrix) on the basis.

        Only meaningful for vectors inside the subspace; the RREF makes the
        coefficients the entries at the pivot columns.
        """
        v = np.asarray(v, dtype=DTYPE)
        return v[..., list(self.pivots)] % self.p

    def __contains__(self, v) -> bool:
        return contains(self, v)


def _check_same(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} != {b.ambient_dim}")
    if a.p != b.p:
        raise ValueError(f"field mismatch: F_{a.p} vs F_{b.p}")


def kernel(m, field: FieldLike, cols: Optional[int] = None) -> Subspace:
    """Right kernel ``{v : m v = 0}`` as a subspace of F_p^cols."""
    p = int(field)
    a = as_matrix(m, p, cols=cols)
    n = a.shape[1]
    r, piv, rk = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    vecs = np.zeros((len(free), n), dtype=DTYPE)
    for t, f in enumerate(free):
        vecs[t, f] = 1
        for i, pc in enumerate(piv):
            vecs[t, pc] = (-r[i, f]) % p
    return Subspace.span(vecs, p, n)


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace.span(np.vstack([a.basis, b.basis]), a.p, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b via the kernel of the stacked bases."""
    _check_same(a, b)
    p = a.p
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, p)
    stacked = np.vstack([a.basis, (-b.basis) % p])
    ker = kernel(stacked.T, p)
    vecs = ker.basis[:, : a.dim] @ a.basis % p
    return Subspace.span(vecs, p, a.ambient_dim)


def contains(a: Subspace, v) -> bool:
    v = np.asarray(v, dtype=DTYPE) % a.p
    if v.shape != (a.ambient_dim,):
        raise ValueError(f"vector of length {v.size}, expected {a.ambient_dim}")
    if a.dim == 0:
        return not v.any()
    residual = (v - a.coordinates(v) @ a.basis) % a.p
    return not residual.any()


def is_subspace(a: Subspace, b: Subspace) -> bool:
    """True iff a ⊆ b."""
    _check_same(a, b)
    return all(contains(b, row) for row in a.basis)


def solve(a, rhs, field: FieldLike) -> Optional[np.ndarray]:
    """Solve ``x @ a = rhs`` for a row vector x, or return None.

    Free variables are set to zero so the answer is reproducible.
    """
    p = int(field)
    rhs = np.asarray(rhs, dtype=DTYPE) % p
    a = np.asarray(a, dtype=DTYPE)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if rhs.shape != (a.shape[1],):
        raise ValueError(f"rhs has length {rhs.size}, expected {a.shape[1]}")
    nvars = a.shape[0]
    if nvars == 0:
        return np.zeros(0, dtype=DTYPE) if not rhs.any() else None
    aug = np.hstack([a.T % p, rhs.reshape(-1, 1)])
    r, piv, rk = rref(aug, p)
    if piv and piv[-1] == nvars:
        return None
    x = np.zeros(nvars, dtype=DTYPE)
    for i, c in enumerate(piv):
        x[c] = r[i, nvars]
    return x


def complement_basis(sub: Subspace, sup: Subspace) -> np.ndarray:
    """Rows of ``sup``'s basis that extend ``sub`` to a basis of ``sup``."""
    _check_same(sub, sup)
    chosen = []
    current = sub
    for row in sup.basis:
        if not contains(current, row):
            chosen.append(row)
            current = sum_spaces(current, Subspace.span(row, sub.p, sub.ambient_dim))
    return np.array(chosen, dtype=DTYPE).reshape(len(chosen), sub.ambient_dim)


def random_subspace(n: int, d: int, field: FieldLike, rng: np.random.Generator) -> Subspace:
    """A uniformly drawn spanning set of size d; the span may be smaller."""
    p = int(field)
    return Subspace.span(rng.integers(0, p, size=(d, n)), p, n)


def unit_vectors(indices: Iterable[int], n: int) -> np.ndarray:
    idx = list(indices)
    out = np.zeros((len(idx), n), dtype=DTYPE)
    out[np.arange(len(idx)), idx] = 1
    return out
