"""``ck-algebra``: generators, bracket verification, contractions, relations, spinors.

``--n`` is the index in the algebra's name: ``so --n 5`` is so(5; j) with
four parameters, ``u --n 3`` is u(3; j), ``sp --n 3`` is sp(3; j).  The
library functions count parameters instead; :func:`library_n` converts.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
JSON output uses sorted keys, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .ck_groups import PMatrix, check_j_orthogonality, so_generators, sp_generators, u_generators
from .contraction import ContractionSpec, gamma_table, predicted_decomposition, radical_block_structure, \
    verify_decomposition
from .pimenov import JValuation
from .relcat import (NULL, Category, compose, is_morphism, relation_from_json, relation_to_json,
                     standard_object)
from .repkit import exterior_power_rep, extension_type, lowering_functor, self_rep_A, spin_B, spin_operator, \
    subordinate
from .rootsys import KINDS, algebra_basis, dynkin_diagram, group_kind, rank_of, verify_cartan_weyl

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def section(name: str, columns: Sequence[str], rows: Sequence[Sequence]) -> dict:
    return {"name": name, "columns": list(columns), "rows": [[str(c) for c in r] for r in rows]}


def make_report(command: str, passed: bool, sections: List[dict], provenance: Dict[str, str],
                data: Optional[dict] = None) -> dict:
    out = {"command": command, "status": "pass" if passed else "fail",
           "sections": sections, "provenance": provenance}
    if data is not None:
        out["data"] = data
    return out


def render_table(sec: dict) -> str:
    cols, rows = sec["columns"], sec["rows"]
    widths = [max([len(c)] + [len(r[k]) for r in rows]) for k, c in enumerate(cols)]
    fmt = lambda r: "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    lines = [f"== {sec['name']}", fmt(cols), fmt(["-" * w for w in widths])]
    lines += [fmt(r) for r in rows]
    return "\n".join(lines)


def render_report(report: dict, preface: str = "") -> str:
    parts = [preface] if preface else []
    parts += [render_table(s) for s in report["sections"]]
    parts.append(f"status: {report['status']}")
    return "\n\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def library_n(kind: str, n: int) -> int:
    """Convert the CLI ``--n`` to the library's parameter count."""
    if kind == "sp":
        if n < 1:
            raise UsageError("sp needs --n >= 1")
        return n
    if n < 2:
        raise UsageError(f"{kind} needs --n >= 2")
    return n - 1


def parse_indices(text: Optional[str]) -> Tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def valuation(text: Optional[str], n: int) -> JValuation:
    if not text:
        return JValuation.ones(n)
    try:
        v = JValuation.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(v) != n:
        raise UsageError(f"--j needs {n} values, got {len(v)}")
    return v


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def object_for(cat: Category, dim: int):
    """The standard object of ``cat`` with total dimension ``dim``."""
    if cat in (Category.GA, Category.A):
        return standard_object(cat, dim - 1 if cat is Category.A else dim)
    if cat is Category.B:
        if dim % 2 == 0:
            raise UsageError(f"category B objects are odd-dimensional, got {dim}")
        return standard_object(cat, (dim - 1) // 2)
    if dim % 2:
        raise UsageError(f"category {cat.value} objects are even-dimensional, got {dim}")
    return standard_object(cat, dim // 2)


def load_relation(path: str, cat: Category, role: str):
    try:
        P = relation_from_json(load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{role}: malformed relation: {exc}") from None
    if P is not NULL:
        V, W = object_for(cat, P.source_dim), object_for(cat, P.target_dim)
        if not is_morphism(cat, P, V, W):
            raise UsageError(f"{role} is not a morphism of category {cat.value}")
    return P


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_generators(args) -> Tuple[int, str]:
    n = library_n(args.kind, args.n)
    v = valuation(args.j, n)
    if args.kind == "so":
        data = so_generators(n, v).to_json()
    elif args.kind in ("u", "su"):
        data = u_generators(n, v, special=args.kind == "su").to_json()
    elif args.kind == "sp":
        data = sp_generators(n, v).to_json()
    else:
        data = {"kind": "A_sl", "n": n, "valuation": str(v),
                "generators": [{"label": str(lab), "matrix": m.to_json()} for lab, m in algebra_basis("sl", n, v)]}
    if args.json:
        return EXIT_OK, dumps(data)
    blocks = [f"{g['label']}:\n" + "\n".join("  [ " + "  ".join(r) + " ]" for r in g["matrix"]["entries"])
              for g in data["generators"]]
    return EXIT_OK, f"{args.kind}({args.n}; {data['valuation']}): {len(blocks)} generators\n\n" + "\n\n".join(blocks) + "\n"


def cmd_check_orth(args) -> Tuple[int, str]:
    raw = load_json(args.matrix)
    try:
        A = PMatrix.from_json(raw.get("matrix", raw) if isinstance(raw, dict) else raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix: {exc}") from None
    if args.j:
        valuation(args.j, A.arity)
    ok = check_j_orthogonality(A)
    report = make_report("check-orth", ok,
                         [section("j-orthogonality", ["rows", "cols", "arity", "A A^t = A^t A = 1"],
                                  [[A.rows, A.cols, A.arity, "yes" if ok else "no"]])],
                         {"j-orthogonality": "exact product of Pimenov-valued matrices"})
    return (EXIT_OK if ok else EXIT_FAIL), dumps(report) if args.json else render_report(report)


def cmd_verify_cw(args) -> Tuple[int, str]:
    n = library_n(args.kind, args.n)
    v = valuation(args.j, n)
    rep = verify_cartan_weyl(args.kind, n, v)
    rows = [[m.x, m.y, m.formula, str(m.computed.to_json()["entries"]), str(m.predicted.to_json()["entries"])]
            for m in rep.mismatches]
    sections = [
        section("summary", ["algebra", "valuation", "pairs checked", "mismatches"],
                [[f"{args.kind}({args.n})", str(v), rep.pairs_checked, len(rep.mismatches)]]),
        section("mismatches", ["x", "y", "closed form", "computed", "predicted"], rows),
    ]
    data = rep.to_json()
    if args.emit_dynkin:
        series = group_kind(args.kind, n).value if args.kind in ("so", "sp") else "A"
        rank = rank_of(args.kind, n) if args.kind != "u" else n
        dd = dynkin_diagram(series, rank)
        data["dynkin"] = dd.to_json()
        sections.append(section("dynkin", ["diagram"], [[line] for line in dd.ascii().splitlines()]))
    report = make_report("verify-cw", rep.passed, sections,
                         {"brackets": "brute-force matrix commutators against the closed forms"}, data)
    return (EXIT_OK if rep.passed else EXIT_FAIL), dumps(report) if args.json else render_report(report)


def contract_report(kind: str, n_cli: int, iota: Sequence[int], j: Optional[str] = None,
                    order: Sequence[int] = ()) -> dict:
    n = library_n(kind, n_cli)
    base = valuation(j, n) if j else None
    try:
        spec = ContractionSpec.make(kind, n, iota, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lm = predicted_decomposition(kind, n, spec)
    rep = verify_decomposition(kind, n, spec, lm)
    table = gamma_table(kind, n, spec.valuation)
    sections = [
        section("gamma table", ["grid"], [[line] for line in table.render().splitlines()]),
        section("decomposition", ["algebra", "valuation", "formula", "dim T", "T abelian"],
                [[f"{kind}({n_cli})", str(spec.valuation), lm.formula(), len(lm.radical),
                  "yes" if rep.radical_abelian else "no"]]),
        section("radical", ["label"], [[str(x)] for x in lm.radical]),
        section("blocks", ["block", "dim", "labels"],
                [[b.name, b.dim, " ".join(str(x) for x in b.labels)] for b in lm.blocks]),
        section("checks", ["check", "result", "detail"],
                [[c.name, {True: "pass", False: "FAIL", None: "n/a"}[c.passed], c.detail] for c in rep.checks]),
    ]
    data = {"spec": {"kind": kind, "n": n_cli, "iota": list(spec.iota), "valuation": str(spec.valuation)},
            "gamma": table.to_json(), "decomposition": lm.to_json(), "report": rep.to_json()}
    if order:
        if sorted(order) != sorted(spec.iota):
            raise UsageError("--order must be a permutation of --iota")
        rb = radical_block_structure(kind, n, order, base)
        sections.append(section("ordered radical", ["step", "contracted", "dim", "abelian", "ideal in T"],
                                [[t + 1, b.index, len(b.labels), b.abelian, b.ideal_in_T]
                                 for t, b in enumerate(rb.blocks)]))
        sections.append(section("relation", ["radical"], [[rb.relation]]))
        data["ordered"] = rb.to_json()
    provenance = {c.name: "exact brackets of the contracted matrix algebra" for c in rep.checks}
    return make_report("contract", rep.passed, sections, provenance, data)


def cmd_contract(args) -> Tuple[int, str]:
    report = contract_report(args.kind, args.n, parse_indices(args.iota), args.j, parse_indices(args.order))
    code = EXIT_OK if report["status"] == "pass" else EXIT_FAIL
    return code, dumps(report) if args.json else render_report(report)


def cmd_relcat(args) -> Tuple[int, str]:
    cat = Category(args.cat)
    P = load_relation(args.p, cat, "--p")
    Q = load_relation(args.q, cat, "--q")
    if P is not NULL and Q is not NULL and P.target_dim != Q.source_dim:
        raise UsageError(f"cannot compose: --p ends in dim {P.target_dim}, --q starts in dim {Q.source_dim}")
    return EXIT_OK, dumps(relation_to_json(compose(cat, Q, P)))


def cmd_spin(args) -> Tuple[int, str]:
    cat = Category(args.cat)
    if cat not in (Category.GD, Category.B):
        raise UsageError("spin supports categories GD and B")
    P = load_relation(args.p, cat, "--p")
    if P is NULL:
        return EXIT_OK, dumps("null")
    V, W = object_for(cat, P.source_dim), object_for(cat, P.target_dim)
    S = spin_operator(P, V, W) if cat is Category.GD else spin_B(P, V, W)
    data = S.to_json()
    if args.json:
        return EXIT_OK, dumps(data)
    rows = data["matrix"]
    width = max((len(x) for r in rows for x in r), default=1)
    body = "\n".join("[ " + "  ".join(x.rjust(width) for x in r) + " ]" for r in rows)
    return EXIT_OK, f"Spin(P): {data['rows']} x {data['cols']}\n{body}\n"


def cmd_rep_lower(args) -> Tuple[int, str]:
    if args.family != "A":
        raise UsageError("rep lower supports family A (exterior powers of the defining representation)")
    hi, lo, j = args.from_rank, args.to_rank, args.j
    if not 0 <= lo < hi:
        raise UsageError("need 0 <= --to < --from")
    if j < 0:
        raise UsageError("--j must be non-negative")
    R = exterior_power_rep(self_rep_A(), j)
    F = lowering_functor(R, hi, lo)
    if F.dim == 0:
        branch = "vanishes"
    elif lo == 0:
        branch = "rank 0"
    else:
        branch = extension_type(F)
    rows = [[f"Lambda^{j}", hi, lo, R.dim(hi), F.dim, subordinate(R, lo).dim, branch]]
    report = make_report("rep lower", True,
                         [section("lowering", ["rep", "from", "to", "dim at from", "lowered dim",
                                               "dim at to", "branch"], rows)],
                         {"lowering": "image of theta under the representation, exact"},
                         {"family": "A", "j": j, "from": hi, "to": lo, "dim_from": R.dim(hi),
                          "dim_lowered": F.dim, "dim_to": subordinate(R, lo).dim, "branch": branch})
    return EXIT_OK, dumps(report) if args.json else render_report(report)


def selftest_report(suite) -> dict:
    rows = [[r.number, "pass" if r.passed else "FAIL", r.checked, len(r.failures), r.title] for r in suite.results]
    fails = [[r.number, f] for r in suite.results for f in r.failures[:5]]
    sections = [section("criteria", ["criterion", "status", "checks", "failures", "title"], rows)]
    if fails:
        sections.append(section("failures", ["criterion", "detail"], fails))
    provenance = {str(r.number): CRITERION_ORACLES.get(r.number, "") for r in suite.results}
    return make_report("selftest", suite.passed, sections, provenance,
                       {"criteria": [r.to_json() for r in suite.results]})


CRITERION_ORACLES = {
    1: "brute-force matrix commutators",
    2: "brute-force matrix commutators",
    3: "exact Lie-algebra checks on the contracted matrices; frozen worked examples",
    4: "sub-ideal bracket tests in the contracted algebra",
    5: "exact subspace arithmetic over Q(i)",
    6: "exact subspace arithmetic; component parity via intersection dimension",
    7: "exact intertwiner solve on Clifford modules",
    8: "Grassmann algebra arithmetic",
    9: "exact relation composition; intertwiner dimensions",
    10: "exact conjugation of Pimenov-valued matrices",
    11: "committed golden files; JSON schema",
}


def cmd_selftest(args) -> Tuple[int, str]:
    from .acceptance import CRITERIA, run_suite
    only = parse_indices(args.only) or None
    if only and any(k not in CRITERIA for k in only):
        raise UsageError(f"--only takes criterion numbers from 1 to {max(CRITERIA)}")
    echo = None if args.json else (lambda line: print(line, flush=True))
    suite = run_suite(only=only, quick=args.quick, workers=args.workers,
                      inject_fault=args.inject_fault, echo=echo)
    report = selftest_report(suite)
    code = EXIT_OK if suite.passed else EXIT_FAIL
    if args.json:
        return code, dumps(report)
    fails = [s for s in report["sections"] if s["name"] == "failures"]
    tail = "\n\n".join(render_table(s) for s in fails)
    return code, (tail + "\n\n" if tail else "") + f"status: {report['status']}\n"


# ---------------------------------------------------------------------------
# golden files and schemas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoldenCase:
    kind: str
    n: int
    iota: Tuple[int, ...]
    order: Tuple[int, ...] = ()

    @property
    def name(self) -> str:
        tag = f"contract_{self.kind}{self.n}_iota{'-'.join(map(str, self.iota))}"
        return tag + (f"_order{'-'.join(map(str, self.order))}" if self.order else "")

    def argv(self) -> List[str]:
        out = ["contract", "--kind", self.kind, "--n", str(self.n), "--iota", ",".join(map(str, self.iota))]
        if self.order:
            out += ["--order", ",".join(map(str, self.order))]
        return out + ["--json"]


def golden_cases() -> List[GoldenCase]:
    cases = [GoldenCase("so", 5, i) for i in ((2,), (4,), (2, 4))]
    cases += [GoldenCase("so", 5, (2, 4), (2, 4)), GoldenCase("so", 5, (2, 4), (4, 2))]
    cases += [GoldenCase("so", 4, (2,))]
    cases += [GoldenCase("so", 6, i) for i in ((2,), (4,), (2, 4))]
    cases += [GoldenCase(k, 3, i) for k in ("u", "su") for i in ((1,), (2,), (1, 2))]
    cases += [GoldenCase("sp", 3, (2,)), GoldenCase("sp", 4, (2, 4))]
    return cases


def render_golden(case: GoldenCase) -> str:
    code, out = run(case.argv())
    return out


def _data_dir():
    return resources.files("ck_algebra") / "data"


def read_golden(name: str) -> str:
    return (_data_dir() / "golden" / f"{name}.json").read_text(encoding="utf-8")


def load_schema(name: str) -> dict:
    return json.loads((_data_dir() / "schemas" / f"{name}.schema.json").read_text(encoding="utf-8"))


SCHEMAS = ("pmatrix", "linear_relation", "report", "selftest")


def schema_errors(obj, name: str) -> List[str]:
    """Validation messages for ``obj`` against a shipped schema (empty when valid)."""
    import jsonschema
    from referencing import Registry, Resource
    registry = Registry().with_resources(
        (f"urn:ck-algebra:{s}", Resource.from_contents(load_schema(s))) for s in SCHEMAS)
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=registry)
    return [f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}"
            for e in sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.path)))]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the verb; SUPPRESS keeps a
    # subparser from resetting a value given before it.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--max-dim", type=int, metavar="N", default=argparse.SUPPRESS,
                        help="cap on Grassmann operator sides (sets CK_ALGEBRA_MAX_DIM)")

    p = argparse.ArgumentParser(prog="ck-algebra", parents=[common],
                                description="Exact computations for Cayley-Klein groups and algebras.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def family(sp):
        sp.add_argument("--kind", required=True, choices=KINDS)
        sp.add_argument("--n", required=True, type=int)
        sp.add_argument("--j", help="comma-separated j values from 1, iota, i (default all 1)")

    g = sub.add_parser("generators", parents=[common], help="labelled generator matrices")
    family(g)
    g.set_defaults(fn=cmd_generators)

    c = sub.add_parser("check-orth", parents=[common], help="exact j-orthogonality of a matrix")
    c.add_argument("--matrix", required=True, help="PMatrix JSON file")
    c.add_argument("--j", help="valuation the matrix is taken under (checked for arity)")
    c.set_defaults(fn=cmd_check_orth)

    v = sub.add_parser("verify-cw", parents=[common], help="check every Cartan-Weyl bracket")
    family(v)
    v.add_argument("--emit-dynkin", action="store_true", help="append the Dynkin diagram")
    v.set_defaults(fn=cmd_verify_cw)

    k = sub.add_parser("contract", parents=[common], help="contraction report")
    k.add_argument("--kind", required=True, choices=("so", "u", "su", "sl", "sp"))
    k.add_argument("--n", required=True, type=int)
    k.add_argument("--iota", required=True, help="indices of the contracted parameters")
    k.add_argument("--j", help="base valuation for the remaining parameters")
    k.add_argument("--order", help="contraction order for the radical block structure")
    k.set_defaults(fn=cmd_contract)

    r = sub.add_parser("relcat", parents=[common], help="linear relations")
    rsub = r.add_subparsers(dest="action", required=True, metavar="ACTION")
    rc = rsub.add_parser("compose", parents=[common], help="QP for relation files P and Q")
    rc.add_argument("--cat", required=True, choices=[c.value for c in Category])
    rc.add_argument("--p", required=True)
    rc.add_argument("--q", required=True)
    rc.set_defaults(fn=cmd_relcat)

    s = sub.add_parser("spin", parents=[common], help="normalized spinor operator of a morphism")
    s.add_argument("--p", required=True, help="relation JSON file")
    s.add_argument("--cat", default="GD", choices=("GD", "B"))
    s.set_defaults(fn=cmd_spin)

    rp = sub.add_parser("rep", parents=[common], help="representations of ordered categories")
    rpsub = rp.add_subparsers(dest="action", required=True, metavar="ACTION")
    lo = rpsub.add_parser("lower", parents=[common], help="lowering functor on an exterior power")
    lo.add_argument("--family", default="A")
    lo.add_argument("--j", type=int, required=True, help="exterior power degree")
    lo.add_argument("--from", dest="from_rank", type=int, required=True)
    lo.add_argument("--to", dest="to_rank", type=int, required=True)
    lo.set_defaults(fn=cmd_rep_lower)

    st = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    st.add_argument("--only", help="comma-separated criterion numbers")
    st.add_argument("--quick", action="store_true", help="small samples")
    st.add_argument("--workers", type=int, help="process pool size (default: CPU count)")
    st.add_argument("--inject-fault", action="store_true",
                    help="flip the sign of one closed-form bracket; the suite must fail")
    st.set_defaults(fn=cmd_selftest)
    return p


def run(argv: Optional[Sequence[str]] = None) -> Tuple[int, str]:
    """Parse and execute; returns ``(exit code, stdout text)``.  Argparse errors raise SystemExit(2)."""
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.max_dim = getattr(args, "max_dim", None)
    if args.max_dim is not None:
        if args.max_dim <= 0:
            raise UsageError("--max-dim must be positive")
        os.environ["CK_ALGEBRA_MAX_DIM"] = str(args.max_dim)
    return args.fn(args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8")
    except (AttributeError, ValueError):
        pass
    try:
        code, out = run(argv)
    except UsageError as exc:
        print(f"ck-algebra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # bad input reaching the library (inadmissible spec, size cap, ...)
        print(f"ck-algebra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
