"""Operations on multi-party states: splittings, GHZ extraction, sums,
coarsening and discarding parties.

Every splitting G = G' ⊕ G'' is returned together with a way to re-express
the remainder L'' = L ∩ G'' in fresh per-party symplectic coordinates, so
the operations can be iterated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .cohomology import cohomology_basis, full_complex, local_invariants, sections
from .duality import lift_coboundary
from .ffla import DTYPE, Subspace, contains, intersect, solve, sum_spaces
from .symplectic import (
    PartyStructure,
    SymplecticForm,
    is_isotropic,
    is_lagrangian,
    mask_of,
    orthogonal_complement,
)


@dataclass
class Splitting:
    """Orthogonal splitting G = G' ⊕ G'' with L = L' ⊕ L''."""

    g_prime: Subspace
    g_doubleprime: Subspace
    l_prime: Subspace
    l_doubleprime: Subspace
    kind: str = "local"
    parties: tuple = ()

    def validate(self, l: Subspace, structure: PartyStructure) -> None:
        form = SymplecticForm(structure)
        n = structure.dim
        gp, gpp, lp, lpp = self.g_prime, self.g_doubleprime, self.l_prime, self.l_doubleprime
        assert gp.dim + gpp.dim == n, "G' and G'' do not fill G"
        assert intersect(gp, gpp).dim == 0, "G' ∩ G'' is not zero"
        assert gp.dim % 2 == 0 and _rank_form(form, gp) == gp.dim, "ω is degenerate on G'"
        assert lp.dim + lpp.dim == l.dim, "L' ⊕ L'' has the wrong dimension"
        assert sum_spaces(lp, lpp) == l, "L' + L'' is not L"

    def remainder(self, structure: PartyStructure) -> tuple[Subspace, PartyStructure]:
        """L'' in symplectic coordinates of G'' = ⊕_q (G'' ∩ G_q)."""
        return _recoordinatize(self.l_doubleprime, self.g_doubleprime, structure)

    def summand(self, structure: PartyStructure) -> tuple[Subspace, PartyStructure]:
        """L' in symplectic coordinates of G' = ⊕_q (G' ∩ G_q)."""
        return _recoordinatize(self.l_prime, self.g_prime, structure)


def _rank_form(form, space: Subspace) -> int:
    from .ffla import rank

    if space.dim == 0:
        return 0
    return rank(form.matrix(space.basis, space.basis), space.p)


def symplectic_basis(vectors: np.ndarray, form: SymplecticForm) -> list:
    """Pairs (e_i, f_i) with ω(e_i, f_i) = 1 spanning a symplectic subspace."""
    p = form.structure.p
    work = [np.asarray(v, dtype=DTYPE) % p for v in vectors]
    pairs = []
    while work:
        a = work.pop(0)
        if not a.any():
            continue
        for idx, b in enumerate(work):
            w = form(a, b)
            if w:
                break
        else:
            raise ValueError("subspace is not symplectic")
        b = work.pop(idx) * pow(w, -1, p) % p
        pairs.append((a, b))
        work = [(x - form(x, b) * a + form(x, a) * b) % p for x in work]
    return pairs


def _recoordinatize(l: Subspace, g: Subspace, structure: PartyStructure) -> tuple[Subspace, PartyStructure]:
    form = SymplecticForm(structure)
    p = structure.p
    new_qudits = []
    all_pairs = []
    for q in structure.parties:
        gq = structure.coordinate_subspace([q])
        part = intersect(g, gq)
        if part == gq:
            pairs = [(structure.e(q, i), structure.f(q, i)) for i in range(structure.qudits[q])]
        else:
            pairs = symplectic_basis(part.basis, form)
        new_qudits.append(len(pairs))
        all_pairs.extend(pairs)
    new = PartyStructure(tuple(new_qudits), structure.field, structure.names)
    if not all_pairs:
        return Subspace.zero(0, p), new
    es = np.array([e for e, _ in all_pairs], dtype=DTYPE)
    fs = np.array([f for _, f in all_pairs], dtype=DTYPE)
    coords = np.zeros((l.dim, new.dim), dtype=DTYPE)
    if l.dim:
        coords[:, 0::2] = form.matrix(l.basis, fs)
        coords[:, 1::2] = (-form.matrix(l.basis, es)) % p
    return Subspace.span(coords, p, new.dim), new


# --- local summands ----------------------------------------------------------


def split_local(l: Subspace, structure: PartyStructure, party: int) -> Optional[Splitting]:
    """Split off a summand of G_p carrying L ∩ G_p, if that is nonzero."""
    form = SymplecticForm(structure)
    if not is_isotropic(form, l):
        raise ValueError("L must be isotropic")
    p = structure.p
    lp = sections(l, structure, 1 << party)
    if lp.dim == 0:
        return None
    blk = structure.block(party)
    gram_cols = form.gram[:, blk]
    partners = []
    for i in range(lp.dim):
        functionals = [row @ gram_cols % p for row in lp.basis] + [b @ gram_cols % p for b in partners]
        rhs = np.zeros(len(functionals), dtype=DTYPE)
        rhs[i] = 1
        x = solve(np.array(functionals, dtype=DTYPE).T, rhs, p)
        if x is None:
            raise AssertionError("no symplectic partner found")
        b = np.zeros(structure.dim, dtype=DTYPE)
        b[blk] = x
        partners.append(b)
    gp = Subspace.span(np.vstack([lp.basis, np.array(partners)]), p, structure.dim)
    gpp = orthogonal_complement(form, gp)
    lpp = intersect(l, gpp)
    sp = Splitting(gp, gpp, lp, lpp, "local", (party,))
    sp.validate(l, structure)
    return sp


# --- GHZ extraction ----------------------------------------------------------


@dataclass
class GhzWitness:
    """Per-party vectors f_s ∈ G_s and h ∈ L with f_s - f_t ∈ L and ω(f_s, h) = 1."""

    parties: tuple
    f: dict
    h: np.ndarray

    def validate(self, l: Subspace, structure: PartyStructure) -> None:
        form = SymplecticForm(structure)
        for s in self.parties:
            outside = np.ones(structure.dim, dtype=bool)
            outside[structure.block(s)] = False
            if self.f[s][outside].any():
                raise ValueError(f"f_{s} is not supported on party {s}")
            if form(self.f[s], self.h) != 1:
                raise ValueError(f"ω(f_{s}, h) != 1")
        for s, t in combinations(self.parties, 2):
            if not contains(l, (self.f[s] - self.f[t]) % structure.p):
                raise ValueError(f"f_{s} - f_{t} is not in L")
        if not contains(sections(l, structure, mask_of(self.parties)), self.h):
            raise ValueError("h is not in L ∩ G_P'")


def _no_local_sections(l: Subspace, structure: PartyStructure) -> bool:
    return all(sections(l, structure, 1 << q).dim == 0 for q in structure.parties)


def find_ghz_witness(l: Subspace, structure: PartyStructure, parties: Optional[Sequence[int]] = None) -> Optional[GhzWitness]:
    """Look for a GHZ summand over ``parties`` (default: all parties).

    Requires L ∩ G_p = 0 for every party.  Classes of H^2(L ∩ G_P') are
    lifted to families (f_s) and paired against vectors h ∈ L ∩ G_P'.
    """
    if not _no_local_sections(l, structure):
        raise ValueError("split off single-party summands first (L ∩ G_p must vanish)")
    sub = tuple(sorted(structure.parties if parties is None else parties))
    if len(sub) < 2:
        return None
    drop = [q for q in structure.parties if q not in sub]
    lsub, ssub = discard(l, structure, drop)
    classes = cohomology_basis(lsub, ssub, 1, 2)
    if len(classes) == 0:
        return None
    p = structure.p
    form = SymplecticForm(ssub)
    cols = structure.coords(sub)
    first = ssub.block(0)
    cg = full_complex(ssub)
    for g in classes.representatives:
        u = lift_coboundary(g, classes.complex, 1, ssub)
        # degree-0 blocks of the full complex are the single parties, in order
        fvec = {}
        for t, s in enumerate(sub):
            v = np.zeros(ssub.dim, dtype=DTYPE)
            v[ssub.block(t)] = u[cg.block(0, 1 << t)]
            fvec[s] = v
        f0 = np.zeros(ssub.dim, dtype=DTYPE)
        f0[first] = fvec[sub[0]][first]
        for h in lsub.basis:
            val = form(f0, h)
            if val:
                scale = pow(val, -1, p)
                f_full = {}
                for s in sub:
                    v = np.zeros(structure.dim, dtype=DTYPE)
                    v[cols] = fvec[s] * scale % p
                    f_full[s] = v
                h_full = np.zeros(structure.dim, dtype=DTYPE)
                h_full[cols] = h
                w = GhzWitness(sub, f_full, h_full)
                w.validate(l, structure)
                return w
    return None


def split_ghz(l: Subspace, structure: PartyStructure, w: GhzWitness) -> Splitting:
    """Split off the GHZ summand spanned by {f_s - f_t} and h."""
    w.validate(l, structure)
    p = structure.p
    form = SymplecticForm(structure)
    planes = []
    for s in w.parties:
        hs = np.zeros(structure.dim, dtype=DTYPE)
        hs[structure.block(s)] = w.h[structure.block(s)]
        planes.extend([w.f[s], hs])
    gp = Subspace.span(np.array(planes), p, structure.dim)
    s0 = w.parties[0]
    gens = [(w.f[s0] - w.f[t]) % p for t in w.parties[1:]] + [w.h]
    expected = Subspace.span(np.array(gens), p, structure.dim)
    lp = intersect(l, gp)
    if lp != expected:
        raise AssertionError("L ∩ G' is not spanned by the witness")
    gpp = orthogonal_complement(form, gp)
    lpp = intersect(l, gpp)
    sp = Splitting(gp, gpp, lp, lpp, "ghz", tuple(w.parties))
    sp.validate(l, structure)
    return sp


def _exhaust_local(l, structure, transcript):
    changed = True
    while changed:
        changed = False
        for q in structure.parties:
            sp = split_local(l, structure, q)
            if sp is not None:
                transcript.append({"step": "local", "parties": [q], "summand_dim": sp.l_prime.dim})
                l, structure = sp.remainder(structure)
                changed = True
                break
    return l, structure


def ghz_extraction(l: Subspace, structure: PartyStructure) -> tuple[int, list, Subspace, PartyStructure]:
    """Split off all-party GHZ summands until none is left.

    Returns the count, a transcript of the steps, and the remainder.
    """
    if not is_lagrangian(SymplecticForm(structure), l):
        raise ValueError("L must be lagrangian")
    transcript = []
    count = 0
    while True:
        l, structure = _exhaust_local(l, structure, transcript)
        if structure.n_parties < 2:
            break
        w = find_ghz_witness(l, structure)
        if w is None:
            break
        sp = split_ghz(l, structure, w)
        count += 1
        l, structure = sp.remainder(structure)
        transcript.append(
            {
                "step": "ghz",
                "parties": list(w.parties),
                "f": {str(s): w.f[s].tolist() for s in w.parties},
                "h": w.h.tolist(),
                "remainder_h2": local_invariants(l, structure, 1)[2] if structure.n_parties >= 2 else 0,
            }
        )
    return count, transcript, l, structure


def ghz_count(l: Subspace, structure: PartyStructure) -> int:
    return ghz_extraction(l, structure)[0]


# --- sums and party maps -------------------------------------------------------


def internal_sum(l: Subspace, m: Subspace, sl: PartyStructure, sm: PartyStructure) -> tuple[Subspace, PartyStructure]:
    """L + M with party q owning G_q ⊕ H_q (L's qudits first)."""
    if sl.n_parties != sm.n_parties:
        raise ValueError("internal sums need the same party set")
    if sl.p != sm.p:
        raise ValueError("field mismatch")
    new = PartyStructure(tuple(a + b for a, b in zip(sl.qudits, sm.qudits)), sl.field, sl.names)
    lcols, mcols = [], []
    for q in sl.parties:
        start = new.offsets[q]
        wl = 2 * sl.qudits[q]
        lcols.extend(range(start, start + wl))
        mcols.extend(range(start + wl, new.offsets[q + 1]))
    vecs = np.zeros((l.dim + m.dim, new.dim), dtype=DTYPE)
    vecs[: l.dim][:, lcols] = l.basis
    vecs[l.dim :][:, mcols] = m.basis
    return Subspace.span(vecs, sl.p, new.dim), new


def external_sum(l: Subspace, m: Subspace, sl: PartyStructure, sm: PartyStructure) -> tuple[Subspace, PartyStructure]:
    """L ⊕ M over the disjoint union of the party sets (L's parties first)."""
    if sl.p != sm.p:
        raise ValueError("field mismatch")
    names = None
    if sl.names or sm.names:
        left = sl.names or tuple(str(q) for q in sl.parties)
        right = sm.names or tuple(str(q) for q in sm.parties)
        if set(left) & set(right):
            raise ValueError("external sums need disjoint party labels")
        names = left + right
    new = PartyStructure(sl.qudits + sm.qudits, sl.field, names)
    vecs = np.zeros((l.dim + m.dim, new.dim), dtype=DTYPE)
    vecs[: l.dim, : sl.dim] = l.basis
    vecs[l.dim :, sl.dim :] = m.basis
    return Subspace.span(vecs, sl.p, new.dim), new


def coarsen(l: Subspace, structure: PartyStructure, phi: Sequence[int], n_targets: Optional[int] = None) -> tuple[Subspace, PartyStructure]:
    """Merge parties along phi: P -> Q; new party q owns G_{phi^-1(q)}."""
    phi = [int(x) for x in phi]
    if len(phi) != structure.n_parties:
        raise ValueError("phi must assign a target to every party")
    nq = max(phi, default=-1) + 1 if n_targets is None else int(n_targets)
    if any(not 0 <= x < nq for x in phi):
        raise ValueError("phi has targets outside 0..n_targets-1")
    perm = []
    qudits = []
    for q in range(nq):
        fibre = [a for a in structure.parties if phi[a] == q]
        perm.extend(structure.coords(fibre))
        qudits.append(sum(structure.qudits[a] for a in fibre))
    new = PartyStructure(tuple(qudits), structure.field)
    return Subspace.span(l.basis[:, perm], l.p, new.dim), new


def discard(l: Subspace, structure: PartyStructure, drop: Sequence[int]) -> tuple[Subspace, PartyStructure]:
    """L ∩ G_{P∖P'} with the coordinates of the dropped parties removed."""
    drop = set(int(q) for q in drop)
    if not drop <= set(structure.parties):
        raise ValueError("can only discard existing parties")
    keep = [q for q in structure.parties if q not in drop]
    cols = structure.coords(keep)
    names = tuple(structure.names[q] for q in keep) if structure.names else None
    new = PartyStructure(tuple(structure.qudits[q] for q in keep), structure.field, names)
    kept = sections(l, structure, mask_of(keep))
    return Subspace.span(kept.basis[:, cols], l.p, new.dim), new


# --- decomposability -----------------------------------------------------------


def reduction_hypothesis(l: Subspace, structure: PartyStructure, sub: Sequence[int]) -> bool:
    """(L ∩ G_P') + Σ_{P' ⊄ Q} (L ∩ G_Q) = L."""
    target = mask_of(sub)
    total = sections(l, structure, target)
    full = (1 << structure.n_parties) - 1
    for q in range(full + 1):
        if target & ~q:
            total = sum_spaces(total, sections(l, structure, q))
    return total == l


def _h2_of_sub(l, structure, sub) -> int:
    drop = [q for q in structure.parties if q not in sub]
    lsub, ssub = discard(l, structure, drop)
    return local_invariants(lsub, ssub, 1)[2]


def split_over(l: Subspace, structure: PartyStructure, sub: Sequence[int]) -> Optional[Splitting]:
    """GHZ summand over a party subset, when the reduction hypothesis holds."""
    sub = tuple(sorted(sub))
    if len(sub) < 2 or _h2_of_sub(l, structure, sub) == 0:
        return None
    if not reduction_hypothesis(l, structure, sub):
        return None
    w = find_ghz_witness(l, structure, sub)
    if w is None:
        return None
    return split_ghz(l, structure, w)


def is_decomposable_3party(l: Subspace, structure: PartyStructure) -> bool:
    """Decide decomposability of a three-party lagrangian via local or EPR splits."""
    if structure.n_parties != 3:
        raise ValueError("exactly three parties required")
    if not is_lagrangian(SymplecticForm(structure), l):
        raise ValueError("L must be lagrangian")
    if l.dim == 0:
        return True
    # a party with no qudits makes L an external product
    if any(n == 0 for n in structure.qudits):
        return True
    if any(split_local(l, structure, q) is not None for q in structure.parties):
        return True
    for sub in combinations(structure.parties, 2):
        if split_over(l, structure, sub) is not None:
            return True
    return False


@dataclass
class Decomposition:
    steps: list = field(default_factory=list)
    remainder: Optional[Subspace] = None
    structure: Optional[PartyStructure] = None


def try_decompose(l: Subspace, structure: PartyStructure) -> Decomposition:
    """Best effort: apply local, all-party GHZ and sub-party GHZ splits.

    Incomplete for four or more parties; an empty step list does not prove
    that L is indecomposable.
    """
    out = Decomposition()
    while True:
        l, structure = _exhaust_local(l, structure, out.steps)
        done = True
        for size in range(structure.n_parties, 1, -1):
            for sub in combinations(structure.parties, size):
                sp = split_over(l, structure, sub)
                if sp is not None:
                    out.steps.append({"step": "ghz", "parties": list(sub), "summand_dim": sp.l_prime.dim})
                    l, structure = sp.remainder(structure)
                    done = False
                    break
            if not done:
                break
        if done:
            break
    out.remainder, out.structure = l, structure
    return out
