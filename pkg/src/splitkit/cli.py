"""Command-line driver.

Exit status: 0 when everything checked out, 2 when a checked statement was
falsified, 1 on usage or internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .corpus import (
    SpecError, build_factor, load_corpus, parse_element, parse_field, parse_group, parse_rep,
    parse_subgroup,
)
from .grp import GroupError, export_table, transversal_enumerate, unique_abelian_index_n
from .induce import (
    Rep, disjoint_coset_images, exact_sequence_gamma, induce, induced_split_check,
)
from .matgrp import render_matrix
from .repalg import (
    L_split_check, direct_sum, pair_group, pgl_psl_analysis, tensor, tensor_directsum_image_iso,
)
from .sdp import SdpData, fiber_product, psi_iso_check, sdp_build
from .split import dirichlet_condition_search, cyclic_transversal_search
from .suites import FALSIFIED, SUITES, jsonable, run_suite

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2
TABLE_EXPORT_LIMIT = 5000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def _emit(obj, path: str | None) -> None:
    text = _dump(obj)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def _table(report: dict) -> str:
    rows = [f"{'case':<48} {'verdict':<15} {'ms':>10}  statement"]
    for c in report["cases"]:
        rows.append(f"{c['id']:<48} {c['verdict']:<15} {c['elapsed_ms']:>10.1f}  {c['statement_id']}")
    s = report["summary"]
    rows.append(f"{s['total']} cases: {s['verified']} verified, {s['falsified']} falsified, "
                f"{s['not-applicable']} not-applicable, {s['indeterminate']} indeterminate")
    return "\n".join(rows)


# -- subcommands ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    corpus = load_corpus(args.corpus)
    report = run_suite(args.suite, corpus, seed=args.seed, samples=args.samples)
    if args.json:
        _emit(report, args.json)
    if not args.quiet:
        print(_table(report))
    if report["summary"]["errors"]:
        return EXIT_USAGE
    return EXIT_FALSIFIED if report["summary"][FALSIFIED] else EXIT_OK


def cmd_sdp(args) -> int:
    spec = json.loads(Path(args.spec).read_text())
    factors = spec["factors"]
    if "transversal" in spec:
        if len(spec["transversal"]) != len(factors):
            raise UsageError("need one transversal per factor")
        factors = [{**f, "transversal": t} for f, t in zip(factors, spec["transversal"])]
    data = SdpData([build_factor(f) for f in factors])
    out: dict = {"order": data.order(), "n": data.n, "l": data.l, "closed": data.all_closed()}
    if not data.all_closed():
        _, chk = psi_iso_check(data, samples=args.samples, seed=args.seed, require_closed=False)
        out.update(verdict="not-applicable", violations_without_closure=chk.violations)
        _emit(out, args.json)
        return EXIT_OK
    S = sdp_build(data)
    fp = fiber_product(data)
    _, chk = psi_iso_check(data, fp=fp, S=S, samples=args.samples, seed=args.seed)
    ax = S.verify_axioms(samples=args.samples, seed=args.seed)
    out.update(fiber_product_order=fp.order, psi_method=chk.method, psi_violations=chk.violations,
               axioms=ax, verdict="verified" if chk.ok and ax["violations"] == 0 else "falsified")
    if args.export:
        if S.order > TABLE_EXPORT_LIMIT:
            raise UsageError(f"table export only up to order {TABLE_EXPORT_LIMIT}")
        Path(args.export).write_text(export_table(S))
        out["table"] = args.export
    _emit(out, args.json)
    return EXIT_FALSIFIED if out["verdict"] == "falsified" else EXIT_OK


def _grid(F, M: np.ndarray, m: int) -> str:
    """Matrix as rows of numbers with '|' between blocks."""
    rows = []
    for i, row in enumerate(M.tolist()):
        if i and i % m == 0:
            rows.append("-" * (len(rows[-1])))
        cells = [F.render(int(x)) for x in row]
        parts = [" ".join(f"{c:>3}" for c in cells[k:k + m]) for k in range(0, len(cells), m)]
        rows.append(" | ".join(parts))
    return "\n".join(rows)


def cmd_induce(args) -> int:
    G = parse_group(args.group)
    H = parse_subgroup(G, args.subgroup)
    F = parse_field(args.ell)
    spec = json.loads(args.rep) if args.rep.lstrip().startswith("{") else args.rep
    Hg = H.as_group()
    if isinstance(spec, dict):
        images = {}
        for k, v in spec.items():
            g = parse_element(G, k)
            if g not in H:
                raise UsageError(f"{k} is not in the subgroup")
            images[int(H.position[g])] = np.asarray(v, dtype=np.int64) % F.q
        sigma = Rep.from_generators(Hg, F, images, name="sigma")
    else:
        sigma = parse_rep(Hg, F, spec, name="sigma")
    T = transversal_enumerate(G, H)
    B = induce(sigma, G, T)
    seq = exact_sequence_gamma(B)
    rep = induced_split_check(B)
    if not args.quiet:
        shown = list(dict.fromkeys(list(T.reps) + [int(x) for x in G.generators()]))
        for g in shown:
            print(f"rho({G.label(g)}) =")
            print(_grid(F, B.rho.mats[g], B.m))
            print()
    out = {
        "n": B.n, "m": B.m, "dim": B.rho.dim,
        "transversal": [G.label(x) for x in T.reps],
        "image_order": B.rho.image.order,
        "image_H_order": seq.kernel.order,
        "projective_image_order": B.rho.projective().image.order,
        "block_violations": B.block_structure_violations(),
        "exact": seq.violations == 0 and disjoint_coset_images(B),
        "split": rep.to_dict(),
    }
    _emit(out, args.json)
    ok = out["exact"] and out["block_violations"] == 0 and rep.details["routes_agree"]
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_splitcheck(args) -> int:
    G = parse_group(args.group)
    H = unique_abelian_index_n(G, args.index)
    rep = cyclic_transversal_search(G, H, args.index)
    out = rep.to_dict()
    if rep.witness is not None:
        out["witness_label"] = G.label(rep.witness)
    out.pop("powers")
    _emit(out, args.json)
    bic = rep.details.get("biconditional")
    return EXIT_FALSIFIED if bic is False else EXIT_OK


def cmd_primesearch(args) -> int:
    print(" ".join(map(str, dirichlet_condition_search(args.n, args.r, args.limit))))
    return EXIT_OK


def _reps_from_spec(spec: dict):
    G = parse_group(spec["group"])
    F = parse_field(spec["field"])
    reps = [parse_rep(G, F, r, name=f"pi{i + 1}") for i, r in enumerate(spec.get("reps", []))]
    return G, F, reps


def _rep_summary(r) -> dict:
    return {"dim": r.dim, "image_order": r.image.order,
            "projective_image_order": r.projective().image.order,
            "generators": {r.group.label(g): render_matrix(r.field, r.mats[g])
                           for g in r.group.generators()}}


def cmd_repalg(args) -> int:
    op = args.op
    if op == "pglpsl":
        if args.p is None:
            raise UsageError("pglpsl needs --p")
        res = pgl_psl_analysis(args.p, samples=args.samples, seed=args.seed)
        _emit(res, args.json)
        return EXIT_OK if res["ok"] else EXIT_FALSIFIED
    if not args.spec:
        raise UsageError(f"{op} needs --spec FILE")
    spec = json.loads(Path(args.spec).read_text())
    G, F, reps = _reps_from_spec(spec)
    if op in ("dsum", "tensor"):
        r = direct_sum(reps) if op == "dsum" else tensor(reps)
        _emit(_rep_summary(r), args.json)
        return EXIT_OK
    if op == "iso":
        res = tensor_directsum_image_iso(reps, samples=args.samples, seed=args.seed)
        res.pop("witness")
        _emit(res, args.json)
        return EXIT_OK if res["directsum_tensor_iso"] else EXIT_FALSIFIED
    # pair / split take pi on G, the subgroup H, and optionally H'
    if len(reps) != 1:
        raise UsageError(f"{op} needs exactly one rep pi on G")
    pi = reps[0]
    H = parse_subgroup(G, spec["subgroup"])
    B = induce(pi.restrict(H), G, transversal_enumerate(G, H))
    A, R = (pi.projective(), B.rho.projective()) if spec.get("projective") else (pi, B.rho)
    if op == "pair":
        Hp = parse_subgroup(G, spec["hprime"]) if "hprime" in spec else None
        P = pair_group(A, R, Hp)
        out = {"order": P.group.order, "phi_image": int(np.unique(P.phi.images).size),
               "psi_image": int(np.unique(P.psi.images).size),
               "ker_phi": P.phi.kernel().order, "ker_psi": P.psi.kernel().order}
        _emit(out, args.json)
        return EXIT_OK
    if op == "split":
        rep = L_split_check(A, B, R)
        _emit(rep.to_dict(), args.json)
        return EXIT_OK
    raise UsageError(f"unknown repalg op {op!r}")


# -- argument parsing -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="splitkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--corpus")
    v.add_argument("--json")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--samples", type=int, default=10**4)
    v.add_argument("--quiet", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sdp", help="build and check a semidirect product from a JSON spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--export")
    s.add_argument("--json")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--samples", type=int, default=10**4)
    s.set_defaults(func=cmd_sdp)

    i = sub.add_parser("induce", help="induced representation and its exact sequence")
    i.add_argument("--group", required=True)
    i.add_argument("--subgroup", required=True)
    i.add_argument("--rep", required=True)
    i.add_argument("--ell", required=True)
    i.add_argument("--json")
    i.add_argument("--quiet", action="store_true")
    i.set_defaults(func=cmd_induce)

    c = sub.add_parser("splitcheck", help="cyclic transversal search in G over its index-n subgroup")
    c.add_argument("--group", required=True)
    c.add_argument("--index", type=int, required=True)
    c.add_argument("--json")
    c.set_defaults(func=cmd_splitcheck)

    q = sub.add_parser("primesearch", help="primes with p^r = 1 mod n and gcd(n, (p^r-1)/n) = 1")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("-r", type=int, required=True)
    q.add_argument("--limit", type=int, required=True)
    q.set_defaults(func=cmd_primesearch)

    r = sub.add_parser("repalg", help="direct sums, tensors, pair groups, PGL2 vs PSL2")
    r.add_argument("op", choices=["dsum", "tensor", "iso", "pair", "split", "pglpsl"])
    r.add_argument("--spec")
    r.add_argument("--p", type=int)
    r.add_argument("--json")
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--samples", type=int, default=10**4)
    r.set_defaults(func=cmd_repalg)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        return args.func(args)
    except UsageError as exc:
        print(f"splitkit: usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (SpecError, GroupError, ValueError, OSError, KeyError) as exc:
        print(f"splitkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
