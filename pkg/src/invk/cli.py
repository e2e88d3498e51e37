"""Command line front end: ``invk validate|pbw|nf|hopf|rep <file> [flags]``.

The JSON report goes to stdout and is byte-for-byte deterministic; a short
human summary (with timing) goes to stderr.  Exit codes: 0 pass or
exploratory, 2 mathematical failure, 1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .coalgebra import HopfStructure, solve_antipode, verify_bialgebra, verify_hopflike
from .envelope import K_NONZERO_MESSAGE, build_reducer, check_embedding
from .errors import DegreeCapExceeded, InvkError, ParseError, PBWDefect, ZeroParameterError
from .files import AlgebraFile, FileFormatError, load_algebra
from .linrep import (FiniteInvariantAlgebra, LinearInvariantAlgebra, MatRep, check_rep,
                     extend_to_envelope, idempotent_violations, regular_embedding)
from .scalars import as_scalar, format_scalar
from .structures import validate_structure
from .words import format_terms, format_word, parse_expr, xdeg

EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


def _s(x) -> str:
    return format_scalar(x)


def _word(w, labels) -> str:
    return format_word(w, labels)


def _elem(e, labels) -> str:
    return e.format(labels) if hasattr(e, "format") else str(e)


def _check(name: str, passed: bool, exploratory: bool = False, **extra) -> dict:
    verdict = "pass" if passed else ("exploratory" if exploratory else "fail")
    return {"name": name, "verdict": verdict, **extra}


def _mat(m) -> list:
    return [[_s(x) for x in row] for row in m.rows]


def _report(command: str, alg: AlgebraFile, params: dict, checks: list, counts: dict,
            witnesses: list, exploratory: bool = False) -> dict:
    failed = any(c["verdict"] == "fail" for c in checks)
    verdict = "fail" if failed else ("exploratory" if exploratory else "pass")
    return {
        "command": command,
        "algebra": {"name": alg.name, "kind": alg.sc.kind, "dim": alg.sc.n,
                    "basis": list(alg.labels)},
        "parameters": params,
        "verdict": verdict,
        "checks": checks,
        "counts": counts,
        "witnesses": witnesses,
    }


def _parse_k(text: str):
    try:
        k = as_scalar(text)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad --k value {text!r}: {exc}") from None
    if not k:
        raise UsageError(K_NONZERO_MESSAGE)
    return k


def _structure_gate(alg: AlgebraFile, witnesses: list) -> dict:
    rep = validate_structure(alg.sc)
    for v in rep.violations[:5]:
        witnesses.append({"identity": v["identity"], "indices": list(v["indices"]),
                          "defect": _vec_str(v["defect"], alg.labels)})
    name = "Lie structure (antisymmetry, Jacobi)" if alg.sc.kind == "lie" \
        else "Leibniz structure (right Leibniz identity)"
    return _check(name, rep.valid, violations=len(rep.violations))


def _vec_str(vec, labels) -> str:
    terms = {(i + 1,): c for i, c in enumerate(vec) if c}
    return format_terms(sorted(terms.items()), labels)


# ------------------------------------------------------------------ commands

def cmd_validate(alg: AlgebraFile, args) -> dict:
    witnesses: list = []
    chk = _structure_gate(alg, witnesses)
    return _report("validate", alg, {}, [chk], {"structure_constants": len(alg.sc.table)},
                   witnesses)


def _variant_name(variant: str) -> str:
    return "extended-6th-PBW" if variant == "sixth" else "extended-4th-PBW"


def _envelope(alg: AlgebraFile, variant: str, k, D: int, checks: list, witnesses: list):
    """Build and certify the reducer; returns None (with a failing check) on defects."""
    if alg.sc.kind == "leibniz" and variant in ("6th", "sixth"):
        raise UsageError("the 6th envelope needs a Lie algebra; use --variant 4th")
    gate = _structure_gate(alg, witnesses)
    if gate["verdict"] == "fail":
        checks.append(gate)
        return None
    if D < 2:
        raise UsageError("--degree must be at least 2")
    r = build_reducer(alg.sc, k, variant, D, strict=False)
    cert = r.certificate
    checks.append(_check(f"{_variant_name(r.variant)} complementarity", cert.complementary))
    stab = _check(f"{_variant_name(r.variant)} filtration stability", bool(cert.stable))
    if cert.stable is None:
        stab["verdict"] = "skipped"
    checks.append(stab)
    if not cert.certified:
        witnesses.append({"kind": cert.witness_kind, "element": _elem(cert.witness, alg.labels)})
    return r


def _cert_counts(r) -> dict:
    c = r.certificate
    return {"basis_count": c.basis_count, "normal_count": c.normal_count,
            "span_rank": c.span_rank, "stacked_rank": c.stacked_rank,
            "relations": len(r.relations.generators)}


def cmd_pbw(alg: AlgebraFile, args) -> dict:
    k = _parse_k(args.k)
    params = {"variant": args.variant, "k": _s(k), "degree": args.degree}
    checks: list = []
    witnesses: list = []
    r = _envelope(alg, args.variant, k, args.degree, checks, witnesses)
    counts = {}
    if r is not None:
        counts = _cert_counts(r)
        emb = check_embedding(r)
        checks.append(_check("bracket embedding i(bracket) = bracket_variant(i, i)", emb.passed))
        for d in emb.defects[:5]:
            witnesses.append({"pair": list(d["pair"]),
                              "difference": _elem(d["difference"], alg.labels)})
    return _report("pbw", alg, params, checks, counts, witnesses)


def cmd_nf(alg: AlgebraFile, args) -> dict:
    k = _parse_k(args.k)
    params = {"variant": args.variant, "k": _s(k), "degree": args.degree, "expr": args.expr}
    try:
        e = parse_expr(args.expr, alg.labels)
    except ParseError as exc:
        raise UsageError(f"cannot parse --expr: {exc}") from None
    deg = e.xdeg() if e.terms else 0
    if deg > args.degree:
        raise UsageError(f"degree cap exceeded: expression has X-degree {deg} > D = {args.degree}")
    checks: list = []
    witnesses: list = []
    r = _envelope(alg, args.variant, k, args.degree, checks, witnesses)
    counts = {"expr_degree": deg}
    out = {}
    if r is not None and r.certificate.certified:
        nf = r.reduce(e)
        again = r.reduce(nf.lift())
        checks.append(_check("normal form idempotent", again == nf))
        out["normal_form"] = nf.format(alg.labels)
        counts["normal_terms"] = len(nf.terms)
    rep = _report("nf", alg, params, checks, counts, witnesses)
    rep.update(out)
    return rep


def cmd_hopf(alg: AlgebraFile, args) -> dict:
    k = _parse_k(args.k)
    which = {"6th": "sixth", "4th1": "fourth1", "4th2": "fourth2"}[args.variant]
    env_variant = "6th" if which == "sixth" else "4th"
    D = args.degree
    check_deg = args.check_degree if args.check_degree is not None else D - 1
    solve_deg = args.solve_degree if args.solve_degree is not None else min(2, check_deg)
    params = {"variant": args.variant, "k": _s(k), "degree": D, "check_degree": check_deg,
              "solve_degree": solve_deg, "s_source": args.s_source}
    if not 0 <= check_deg <= D - 1:
        raise UsageError("--check-degree must lie in 0..degree-1")
    if not 0 <= solve_deg <= check_deg:
        raise UsageError("--solve-degree must lie in 0..check-degree")
    checks: list = []
    witnesses: list = []
    r = _envelope(alg, env_variant, k, D, checks, witnesses)
    counts: dict = {}
    exploratory = False
    if r is not None:
        counts.update(_cert_counts(r))
        labels = alg.labels
        h = HopfStructure(r, check=False)
        checks.append(_check("Delta well-defined on relations", not h.relation_defects))
        for pair, rel, img in h.relation_defects[:3]:
            witnesses.append({"relation_pair": list(pair), "delta": img.format(labels)})
        counit = "sigma" if which == "sixth" else "ordinary"
        bi = verify_bialgebra(r, check_deg, counit=counit)
        checks.append(_check(f"bialgebra diagrams ({counit} counit)", bi.passed))
        counts["diagram_instances"] = sum(bi.checked.values())
        for f in bi.failures[:5]:
            witnesses.append({"diagram": f["diagram"],
                              "inputs": [_word(w, labels) for w in f["inputs"]],
                              "detail": f["detail"]})
        hop = verify_hopflike(r, which, check_deg, s_source=args.s_source)
        exploratory = hop.exploratory
        for name, pre in sorted(hop.preamble.items()):
            checks.append(_check(name, pre["passed"], checked=pre["checked"]))
        # 4th1 away from k = 1 is outside the claimed range: failures are informational
        checks.append(_check(f"antipode diagram ({which}, S from {args.s_source})",
                             not hop.failures, exploratory, checked=hop.checked))
        for f in hop.failures[:5]:
            if f.get("monomial") is None:
                witnesses.append({"antipode": f["detail"]})
                continue
            witnesses.append({"monomial": _word(f["monomial"], labels),
                              "left": f["left"].format(labels),
                              "middle": f["middle"].format(labels),
                              "right": f["right"].format(labels)})
        sol = solve_antipode(r, solve_deg, which)
        checks.append(_check("antipode linear system solvable", sol.solvable, exploratory))
        if sol.solvable:
            checks.append(_check("solver residuals exactly zero", bool(sol.residuals_zero)))
        counts.update({"solver_unknowns": sol.unknowns, "solver_equations": sol.equations,
                       "solver_rank": sol.rank, "solver_solution_dim": sol.solution_dim})
        counts["antihom_S_solves_system"] = bool(sol.paper_s_satisfies)
        if not sol.solvable:
            witnesses.append({"antipode_system": sol.witness})
    return _report("hopf", alg, params, checks, counts, witnesses, exploratory=exploratory)


def cmd_rep(alg: AlgebraFile, args) -> dict:
    m = alg.matrices
    if m is None:
        raise UsageError(f"{alg.path}: no 'matrices' section; rep needs dimV, W, q and rho")
    params = {"variant": m.variant, "k": _s(m.k)}
    if not m.k:
        raise UsageError(K_NONZERO_MESSAGE)
    checks: list = []
    witnesses: list = []
    counts: dict = {"dimV": m.dimV, "dimW": len(m.W)}
    try:
        bad = idempotent_violations(m.dimV, m.W, m.q)
    except ValueError as exc:
        raise UsageError(f"matrices: {exc}") from None
    checks.append(_check("W-idempotent: q(W) = 0 and q(v) - v in W", not bad))
    witnesses.extend({"violated": b} for b in bad)
    if not bad:
        for i, mat in sorted(m.rho.items()):
            if mat.shape != (m.dimV, m.dimV):
                raise UsageError(f"matrices.rho.{alg.labels[i - 1]} must be {m.dimV}x{m.dimV}")
        target = LinearInvariantAlgebra(m.dimV, m.W, m.q)
        rep = MatRep(m.rho, target, m.k)
        rc = check_rep(alg.sc, rep, m.variant)
        checks.append(_check(f"representation ({m.variant} bracket)", rc.passed))
        for i in rc.outside_end_w:
            witnesses.append({"outside_End_W": alg.labels[i - 1]})
        for d in rc.defects[:5]:
            witnesses.append({"pair": list(d["pair"]), "lhs": _mat(d["lhs"]),
                              "rhs": _mat(d["rhs"])})
        if m.envelope_degree is not None and rc.passed:
            r = build_reducer(alg.sc, m.k, m.variant, m.envelope_degree, strict=False)
            if not r.certificate.certified:
                checks.append(_check("envelope certificate", False))
            else:
                ext = extend_to_envelope(r, rep)
                checks.append(_check("extension to the envelope is multiplicative", ext.passed,
                                     pairs=ext.pairs_checked))
                for d in ext.defects[:5]:
                    witnesses.append({k: (_word(v[0], alg.labels) + " ; " + _word(v[1], alg.labels)
                                          if k == "pair" else v) for k, v in d.items()
                                      if k != "detail"})
    if m.embedding is not None:
        basis, q = m.embedding
        try:
            emb = regular_embedding(FiniteInvariantAlgebra(basis, q))
        except InvkError as exc:
            checks.append(_check("regular embedding", False))
            witnesses.append({"embedding": str(exc)})
        else:
            checks.append(_check("regular embedding", emb.passed,
                                 injective=emb.injective, multiplicative=emb.multiplicative,
                                 q_image=emb.q_image, ann_idempotent=emb.ann_idempotent))
            counts.update({"embedding_dim": emb.dim, "ann_dim": emb.ann_dim})
    return _report("rep", alg, params, checks, counts, witnesses)


COMMANDS = {"validate": cmd_validate, "pbw": cmd_pbw, "nf": cmd_nf, "hopf": cmd_hopf,
            "rep": cmd_rep}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invk", description="Exact verification of invariant "
                                "algebras, their enveloping algebras and Hopf-like structures.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", help="check the Lie/Leibniz identities").add_argument("file")
    for name in ("pbw", "nf"):
        sp = sub.add_parser(name, help="certify the PBW basis" if name == "pbw"
                            else "normal form of an expression")
        sp.add_argument("file")
        sp.add_argument("--variant", choices=["6th", "4th"], required=True)
        sp.add_argument("--k", required=True)
        sp.add_argument("--degree", type=int, required=True)
        if name == "nf":
            sp.add_argument("--expr", required=True)
    sp = sub.add_parser("hopf", help="check the Hopf-like structure")
    sp.add_argument("file")
    sp.add_argument("--variant", choices=["6th", "4th1", "4th2"], required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--check-degree", type=int, default=None,
                    help="X-degree of the monomials checked (default degree-1)")
    sp.add_argument("--solve-degree", type=int, default=None,
                    help="X-degree for the antipode solver (default min(2, check-degree))")
    sp.add_argument("--s-source", choices=["antihom", "solver"], default="antihom")
    sub.add_parser("rep", help="check a matrix representation").add_argument("file")
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, dict | None, str]:
    """Run a command; returns (exit code, report or None, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_PASS), None, ""
    try:
        alg = load_algebra(args.file)
        report = COMMANDS[args.command](alg, args)
    except FileNotFoundError:
        return EXIT_USAGE, None, f"error: file not found: {args.file}"
    except (OSError, FileFormatError, UsageError, ZeroParameterError, DegreeCapExceeded,
            ValueError) as exc:
        return EXIT_USAGE, None, f"error: {exc}"
    except PBWDefect as exc:  # pragma: no cover - commands build non-strict reducers
        return EXIT_FAIL, None, f"error: {exc}"
    code = EXIT_FAIL if report["verdict"] == "fail" else EXIT_PASS
    return code, report, _summary(report)


def _summary(report: dict) -> str:
    lines = [f"{report['command']} {report['algebra']['name']}: {report['verdict'].upper()}"]
    for c in report["checks"]:
        lines.append(f"  [{c['verdict']}] {c['name']}")
    if report["counts"]:
        lines.append("  counts: " + ", ".join(f"{k}={v}" for k, v in sorted(report["counts"].items())))
    for w in report["witnesses"][:3]:
        lines.append(f"  witness: {json.dumps(w, sort_keys=True)}")
    if "normal_form" in report:
        lines.append(f"  normal form: {report['normal_form']}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    t0 = time.perf_counter()
    code, report, text = run(argv)
    if report is not None:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if text:
        sys.stderr.write(text + "\n")
    if report is not None:
        sys.stderr.write(f"  elapsed: {time.perf_counter() - t0:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
