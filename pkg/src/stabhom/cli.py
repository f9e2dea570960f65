"""Command-line front end: ``stabhom <command> [file|-] [flags]``.

Exit codes: 0 success, 1 golden-table mismatch, 2 input error,
3 precondition error.  The JSON problem format is described in
docs/formats.md.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .cohomology import InvariantTable, invariant_table, local_invariants, local_invariants_rel
from .duality import check_perfect
from .ffla import DTYPE, FieldPrime, Subspace
from .simplicial import codim1_gamma, codim1_gamma_perp, codim1_oracle, dual
from .structure import coarsen, discard, external_sum, ghz_extraction, internal_sum
from .symplectic import (
    FAMILIES,
    Graph,
    PartyStructure,
    SymplecticForm,
    family,
    graph_lagrangian,
    is_lagrangian,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


class PreconditionError(Exception):
    pass


@dataclass
class Problem:
    structure: PartyStructure
    l: Subspace
    source: dict

    @property
    def p(self) -> int:
        return self.structure.p


# --- parsing -------------------------------------------------------------------

_PAULI = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


def _parties(data: dict, default_n: Optional[int], field: FieldPrime) -> PartyStructure:
    spec = data.get("parties")
    if spec is None:
        if default_n is None:
            raise InputError("'parties' is required for this state source")
        return PartyStructure.uniform(default_n, field)
    if not isinstance(spec, list):
        raise InputError("'parties' must be a list")
    names, qudits = [], []
    for i, entry in enumerate(spec):
        if isinstance(entry, dict):
            names.append(str(entry.get("name", i)))
            qudits.append(entry.get("qudits", 1))
        else:
            names.append(str(entry))
            qudits.append(1)
    if any(not isinstance(q, int) or q < 0 for q in qudits):
        raise InputError("qudit counts must be non-negative integers")
    if len(set(names)) != len(names):
        raise InputError("party names must be distinct")
    return PartyStructure(tuple(qudits), field, tuple(names))


def _pauli_rows(paulis, structure: PartyStructure) -> np.ndarray:
    rows = []
    for s in paulis:
        s = str(s).lstrip("+-").upper()
        if len(s) != structure.n_parties:
            raise InputError(f"Pauli string {s!r} has length {len(s)}, expected {structure.n_parties}")
        v = np.zeros(structure.dim, dtype=DTYPE)
        for q, ch in enumerate(s):
            if ch not in _PAULI:
                raise InputError(f"unknown Pauli letter {ch!r} in {s!r}")
            v[2 * q], v[2 * q + 1] = _PAULI[ch]
        rows.append(v)
    return np.array(rows, dtype=DTYPE).reshape(-1, structure.dim)


def load_problem(data: dict) -> Problem:
    """Validate a decoded problem dictionary and build its subspace."""
    if not isinstance(data, dict):
        raise InputError("problem must be a JSON object")
    sources = [k for k in ("graph", "paulis", "generators") if k in data]
    if len(sources) != 1:
        raise InputError("exactly one of 'graph', 'paulis', 'generators' is required")
    kind = sources[0]
    p = data.get("p", 2)
    try:
        field = FieldPrime(int(p))
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid field: {exc}") from None

    if kind == "graph":
        g = data["graph"]
        if not isinstance(g, dict):
            raise InputError("'graph' must be an object with 'edges'")
        n = g.get("n", len(data["parties"]) if "parties" in data else None)
        if n is None:
            raise InputError("graph needs 'n' or a 'parties' list")
        structure = _parties(data, int(n), field)
        if structure.n_parties != n or any(q != 1 for q in structure.qudits):
            raise InputError("graph states need one qudit per party")
        try:
            graph = Graph.from_edges(int(n), g.get("edges", []))
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad edge list: {exc}") from None
        rows = graph_lagrangian(graph, field)[0].basis
    elif kind == "paulis":
        if field.p != 2:
            raise InputError("Pauli strings require p = 2")
        paulis = data["paulis"]
        if not isinstance(paulis, list) or not paulis:
            raise InputError("'paulis' must be a non-empty list of strings")
        structure = _parties(data, len(str(paulis[0]).lstrip("+-")), field)
        if any(q != 1 for q in structure.qudits):
            raise InputError("Pauli strings need one qubit per party")
        rows = _pauli_rows(paulis, structure)
    else:
        gens = data["generators"]
        try:
            rows = np.array(gens, dtype=DTYPE)
        except (TypeError, ValueError):
            raise InputError("'generators' must be a rectangular integer matrix") from None
        if rows.ndim != 2:
            raise InputError("'generators' must be a list of vectors")
        default_n = rows.shape[1] // 2 if rows.shape[1] % 2 == 0 else None
        structure = _parties(data, default_n, field)
        if rows.shape[1] != structure.dim:
            raise InputError(f"generators have length {rows.shape[1]}, expected {structure.dim}")
        rows = rows % field.p

    if 2 * rows.shape[0] > structure.dim:
        raise InputError(f"{rows.shape[0]} generators exceed half the ambient dimension {structure.dim}")
    form = SymplecticForm(structure)
    gram = form.matrix(rows, rows) if rows.size else np.zeros((0, 0))
    bad = np.argwhere(gram)
    if bad.size:
        i, j = bad[0]
        raise InputError(f"generators {int(i)} and {int(j)} are not ω-orthogonal (ω = {int(gram[i, j])})")
    l = Subspace.span(rows, field.p, structure.dim)
    return Problem(structure, l, data)


def parse_problem(path: str) -> Problem:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    return load_problem(data)


def problem_dict(l: Subspace, structure: PartyStructure, name: Optional[str] = None) -> dict:
    """Serialize a subspace as a generator-form problem."""
    out = {
        "p": structure.p,
        "parties": [{"name": structure.label(q), "qudits": structure.qudits[q]} for q in structure.parties],
        "generators": l.basis.tolist(),
    }
    if name:
        out["name"] = name
    return out


# --- output helpers ------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _table_csv(table: InvariantTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "j", "h"])
    for k, row in enumerate(table.h):
        for j, h in enumerate(row):
            w.writerow([k, j, h])
    return buf.getvalue().rstrip("\n")


def _emit_table(table: InvariantTable, fmt: str, report: dict, args) -> str:
    if fmt == "csv":
        return _table_csv(table)
    if fmt == "json":
        report["table"] = table.to_dict()
        return _dump(_finish(report, args))
    return table.format()


def _finish(report: dict, args) -> dict:
    if not getattr(args, "no_timing", False):
        report["timing_s"] = round(time.perf_counter() - args._t0, 6)
    return report


def _require_lagrangian(prob: Problem):
    if not is_lagrangian(SymplecticForm(prob.structure), prob.l):
        raise PreconditionError("this command needs a lagrangian (2 dim L = dim G)")


def _threads() -> int:
    raw = os.environ.get("STABHOM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"STABHOM_THREADS must be an integer, got {raw!r}") from None


# --- commands ------------------------------------------------------------------


def _golden() -> dict:
    with resources.files("stabhom").joinpath("data/named_rows.json").open(encoding="utf-8") as fh:
        return json.load(fh)


def _check_named(entry: dict) -> dict:
    l, s = graph_lagrangian(family(entry["family"], entry["n"]), 2)
    if "rows" in entry:
        want = [list(r) for r in entry["rows"]]
        got = [local_invariants(l, s, k) for k in range(1, len(want) + 1)]
    else:
        want = [list(entry["first_order"])]
        got = [local_invariants(l, s, 1)]
    return {"name": entry["name"], "match": got == want, "expected": want, "computed": got}


def cmd_table_batch(args) -> int:
    entries = _golden()["states"]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(_check_named, entries))
    ok = all(r["match"] for r in results)
    if args.format == "json":
        print(_dump(_finish({"command": "invariants --tableI", "results": results, "all_match": ok}, args)))
    else:
        for r in results:
            status = "ok" if r["match"] else "MISMATCH"
            print(f"{r['name']:<8} {status}")
            if not r["match"]:
                print(f"  expected {r['expected']}\n  computed {r['computed']}")
        print("all rows match" if ok else "mismatches found")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_invariants(args) -> int:
    if args.tableI:
        return cmd_table_batch(args)
    if args.file is None:
        raise InputError("a problem file (or '-') is required")
    prob = parse_problem(args.file)
    if args.kmax is not None and args.kmax < 0:
        raise InputError("--kmax must be non-negative")
    table = invariant_table(prob.l, prob.structure, args.kmax)
    report = {"command": "invariants", "input": prob.source}
    print(_emit_table(table, args.format, report, args))
    return EXIT_OK


def cmd_duality(args) -> int:
    prob = parse_problem(args.file)
    if prob.structure.n_parties < 2:
        raise PreconditionError("duality needs at least two parties")
    ok, rep = check_perfect(prob.l, prob.structure)
    if args.format == "json":
        report = {
            "command": "duality",
            "input": prob.source,
            "degrees": {str(i): v for i, v in rep.items()},
            "perfect": ok,
        }
        print(_dump(_finish(report, args)))
    else:
        print("i  j  rows cols rank")
        for i, v in rep.items():
            print(f"{i:<2d} {v['dual_degree']:<2d} {v['rows']:>4d} {v['cols']:>4d} {v['rank']:>4d}")
        print("perfect" if ok else "not perfect")
    return EXIT_OK


def cmd_ghz(args) -> int:
    prob = parse_problem(args.file)
    _require_lagrangian(prob)
    h2 = local_invariants(prob.l, prob.structure, 1)[2] if prob.structure.n_parties >= 2 else 0
    count, transcript, _, _ = ghz_extraction(prob.l, prob.structure)
    if args.format == "json":
        report = {"command": "ghz", "input": prob.source, "ghz_count": count, "h2": h2, "transcript": transcript}
        print(_dump(_finish(report, args)))
    else:
        print(f"ghz_count {count}")
        print(f"h2 {h2}")
        for n, step in enumerate(transcript, 1):
            line = f"step {n}: {step['step']} on parties {step['parties']}"
            if step["step"] == "ghz":
                line += f", remainder h2 = {step['remainder_h2']}"
            print(line)
    return EXIT_OK


def _int_list(text: str, flag: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{flag} must be a comma-separated list of integers") from None


def _emit_problem(l, structure, args, name) -> int:
    if args.format is None:
        print(_dump(problem_dict(l, structure, name)))
    else:
        table = invariant_table(l, structure, args.kmax)
        print(_emit_table(table, args.format, {"command": name, "result": problem_dict(l, structure)}, args))
    return EXIT_OK


def cmd_coarsen(args) -> int:
    prob = parse_problem(args.file)
    phi = _int_list(args.map, "--map")
    if len(phi) != prob.structure.n_parties:
        raise InputError(f"--map needs {prob.structure.n_parties} entries, got {len(phi)}")
    if any(x < 0 for x in phi):
        raise InputError("--map targets must be non-negative")
    l, s = coarsen(prob.l, prob.structure, phi, args.targets)
    return _emit_problem(l, s, args, "coarsen")


def cmd_discard(args) -> int:
    prob = parse_problem(args.file)
    drop = _int_list(args.parties, "--parties")
    if any(not 0 <= q < prob.structure.n_parties for q in drop):
        raise InputError("--parties lists a party outside the problem")
    l, s = discard(prob.l, prob.structure, drop)
    return _emit_problem(l, s, args, "discard")


def cmd_product(args) -> int:
    a = parse_problem(args.file)
    b = parse_problem(args.other)
    if a.p != b.p:
        raise InputError("both problems must use the same field")
    if args.internal:
        if a.structure.n_parties != b.structure.n_parties:
            raise InputError("internal sums need the same number of parties")
        l, s = internal_sum(a.l, b.l, a.structure, b.structure)
    else:
        # relabel so the concatenated party names stay distinct
        sa = PartyStructure(a.structure.qudits, a.structure.field, tuple(f"a{q}" for q in a.structure.parties))
        sb = PartyStructure(b.structure.qudits, b.structure.field, tuple(f"b{q}" for q in b.structure.parties))
        l, s = external_sum(a.l, b.l, sa, sb)
    return _emit_problem(l, s, args, "product")


def cmd_family(args) -> int:
    try:
        g = family(args.name, args.n)
        field = FieldPrime(args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    data = {
        "p": field.p,
        "parties": [{"name": str(q), "qudits": 1} for q in range(g.n)],
        "graph": {"n": g.n, "edges": [list(e) for e in g.edge_list()]},
        "name": f"{args.name}_{args.n}" if args.n is not None else args.name,
    }
    print(_dump(data))
    return EXIT_OK


def _hyperplanes(l: Subspace, count: int, seed: int):
    """Seeded hyperplanes of l: kernels of random nonzero functionals."""
    rng = np.random.default_rng(seed)
    p = l.p
    for _ in range(count):
        c = np.zeros(l.dim, dtype=DTYPE)
        while not c.any():
            c = rng.integers(0, p, size=l.dim)
        # a basis of {x : c · x = 0} in coordinates of l
        piv = int(np.flatnonzero(c)[0])
        inv = pow(int(c[piv]), -1, p)
        rows = []
        for t in range(l.dim):
            if t == piv:
                continue
            v = np.zeros(l.dim, dtype=DTYPE)
            v[t] = 1
            v[piv] = (-c[t] * inv) % p
            rows.append(v)
        coeffs = np.array(rows, dtype=DTYPE).reshape(-1, l.dim)
        yield Subspace.span(coeffs @ l.basis % p, p, l.ambient_dim)


def cmd_oracle(args) -> int:
    prob = parse_problem(args.file)
    if prob.l.dim == 0:
        raise PreconditionError("the oracle needs dim L >= 1")
    cases = []
    for m in _hyperplanes(prob.l, args.count, args.seed):
        sheaf = local_invariants_rel(prob.l, m, prob.structure)
        simp = codim1_oracle(prob.l, m, prob.structure)
        gamma = codim1_gamma(prob.l, m, prob.structure)
        dual_ok = True
        if gamma.is_proper:
            dual_ok = codim1_gamma_perp(prob.l, m, prob.structure) == dual(gamma)
        agree = sheaf[0] == 0 and list(sheaf[1:]) == list(simp)
        cases.append({"sheaf": list(sheaf), "simplicial": list(simp), "agree": agree, "dual_ok": dual_ok})
    ok = all(c["agree"] and c["dual_ok"] for c in cases)
    if args.format == "json":
        print(_dump(_finish({"command": "oracle", "input": prob.source, "cases": cases, "all_agree": ok}, args)))
    else:
        for n, c in enumerate(cases):
            print(f"{n:>3d} sheaf {c['sheaf']} simplicial {c['simplicial']} {'ok' if c['agree'] and c['dual_ok'] else 'DISAGREE'}")
        print("all agree" if ok else "disagreement found")
    return EXIT_OK if ok else EXIT_MISMATCH


# --- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabhom", description="Homological invariants of stabilizer states.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=("table", "json", "csv"), default="table"):
        p.add_argument("--format", choices=fmt, default=default)
        p.add_argument("--no-timing", action="store_true", help="omit the timing field from JSON reports")

    p = sub.add_parser("invariants", help="print the h^{kj} table")
    p.add_argument("file", nargs="?")
    p.add_argument("--kmax", type=int)
    p.add_argument("--tableI", action="store_true", help="recompute the named rows and diff against the golden data")
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("duality", help="pairing ranks per degree")
    p.add_argument("file")
    common(p, ("table", "json"))
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("ghz", help="count all-party GHZ summands")
    p.add_argument("file")
    common(p, ("table", "json"))
    p.set_defaults(func=cmd_ghz)

    def transform(p):
        p.add_argument("--kmax", type=int)
        p.add_argument("--format", choices=("table", "json", "csv"), default=None,
                       help="print invariants of the result instead of the problem JSON")
        p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("coarsen", help="merge parties along a map")
    p.add_argument("file")
    p.add_argument("--map", required=True, help='target party for each party, e.g. "0,0,1,1"')
    p.add_argument("--targets", type=int, help="number of target parties (default: max + 1)")
    transform(p)
    p.set_defaults(func=cmd_coarsen)

    p = sub.add_parser("discard", help="trace out parties")
    p.add_argument("file")
    p.add_argument("--parties", required=True, help='parties to discard, e.g. "2,3"')
    transform(p)
    p.set_defaults(func=cmd_discard)

    p = sub.add_parser("product", help="internal or external sum of two problems")
    p.add_argument("file")
    p.add_argument("other")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--internal", action="store_true")
    g.add_argument("--external", action="store_true")
    transform(p)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("family", help="emit a named graph state as a problem file")
    p.add_argument("--name", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("oracle", help="compare the sheaf and simplicial routes on random hyperplanes")
    p.add_argument("file")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    common(p, ("table", "json"))
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args._t0 = time.perf_counter()
    try:
        return args.func(args)
    except InputError as exc:
        print(f"stabhom: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"stabhom: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"stabhom: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
