"""Verification suites: each case checks one statement on one corpus instance."""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .corpus import (
    build_factor, build_induce_instance, closed_transversal, parse_field, parse_group, parse_rep,
)
from .ffield import fq_make, nth_powers, unit_generator
from .grp import (
    GroupError, GroupHom, Indeterminate, Subgroup, Transversal, derived_subgroup, direct_product,
    has_abelian_quotient, is_isomorphic, normal_subgroups, quotient, subgroup_generated,
    trivial_subgroup, cyclic_group, unique_abelian_index_n, whole,
)
from .induce import (
    cyclic_display_violations, disjoint_coset_images, exact_sequence_gamma,
    general_subgroup_sequence, induce, induced_split_check, product_relation_table,
    rho_H_image_iso, transversal_change_violations,
)
from .matgrp import (
    det_kernel, det_power_subgroup, gl2_group, pgl2_group, psl2_group, psl2_order2_witness,
    scalar_subgroup,
)
from .repalg import (
    L_corollaries, L_split_check, PreconditionFailed, kernel_phi_analysis, pair_analysis,
    pgl_psl_analysis, scalar_detection_property, simple_image_propagation,
    tensor_directsum_image_iso, zywina_model,
)
from .sdp import SdpData, psi_iso_check, right_split_sequence_check, sdp_build
from .split import (
    NOT_APPLICABLE, SPLIT, SearchBudgetExceeded, abelianization_profile,
    cyclic_transversal_search, dirichlet_condition_search, is_complement,
    multiplicative_transversal_search, prime_sieve,
)

VERIFIED = "verified"
FALSIFIED = "falsified"
NOT_APPL = "not-applicable"
INDETERMINATE = "indeterminate"
VERDICTS = (VERIFIED, FALSIFIED, NOT_APPL, INDETERMINATE)
SUITES = ("section2", "induce", "repalg", "all")


@dataclass
class Outcome:
    verdict: str
    witness: object = None
    details: dict = field(default_factory=dict)


@dataclass
class Case:
    case_id: str
    anchor: str
    parameters: dict
    run: Callable[[int, int], Outcome]


def _ok(flag, witness=None, **details) -> Outcome:
    return Outcome(VERIFIED if flag else FALSIFIED, witness, details)


def jsonable(x):
    """Plain JSON types, with numpy scalars/arrays unwrapped."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if x is None or isinstance(x, (int, float, str)):
        return x
    return str(x)


def case_seed(seed: int, case_id: str) -> int:
    return (seed + zlib.crc32(case_id.encode())) % 2**32


def _odd(q: int) -> bool:
    return q % 2 == 1


# -- GL2 structure, splitting, fiber products --------------------------------------------------

def _commutator_case(q: int) -> Case:
    def run(seed, samples):
        G = gl2_group(parse_field(q))
        D = derived_subgroup(G)
        K = det_kernel(G)
        equal = D == K
        det = {"derived_order": D.order, "det_kernel_order": K.order, "equal": equal}
        if not _odd(q):
            return Outcome(NOT_APPL, None, {**det, "reason": "stated for odd characteristic"})
        return _ok(equal, **det)
    return Case(f"s2.commutator.q{q:02d}", "[GL2(Fq),GL2(Fq)] = SL2(Fq) (Cor cor: sl2)",
                {"q": q}, run)


def _uniqueness_case(spec: str, n: int) -> Case:
    def run(seed, samples):
        G = parse_group(spec)
        prof = abelianization_profile(G)
        if not prof["cyclic"] or prof["m"] % n:
            return Outcome(NOT_APPL, None, {"m": prof["m"], "cyclic": prof["cyclic"]})
        H = unique_abelian_index_n(G, n, prof["derived"])
        hits = [S for S in normal_subgroups(G) if S.index == n and has_abelian_quotient(G, S)]
        ok = len(hits) == 1 and hits[0] == H
        det = {"m": prof["m"], "candidates": len(hits), "order": H.order}
        if spec.startswith("gl2"):
            det["det_criterion"] = H == det_power_subgroup(G, n)
            ok = ok and det["det_criterion"]
        Q, _ = quotient(G, H)
        det["quotient_cyclic"] = bool(Q.element_orders.max() == Q.order)
        return _ok(ok and det["quotient_cyclic"], **det)
    return Case(f"s2.unique.{spec.replace(':', '')}.n{n:02d}",
                "unique index-n normal subgroup with abelian quotient (Lemma, Cor cor: unique)",
                {"group": spec, "n": n}, run)


def _beautiful_case(q: int, n: int, expected: bool | None) -> Case:
    def run(seed, samples):
        G = gl2_group(parse_field(q))
        H = det_power_subgroup(G, n)
        rep = cyclic_transversal_search(G, H, n)
        d = rep.details
        found = rep.verdict == SPLIT
        checks = [d.get("biconditional"), d.get("part1"), d.get("part2"),
                  d.get("part3") is not False, d.get("abelianization_splits")]
        if expected is not None:
            checks.append(found == expected)
        return _ok(all(checks), G.label(rep.witness) if found else None,
                   m=rep.m, gcd=rep.gcd_value, found=found, expected=expected, **d)
    return Case(f"s2.beautiful.q{q:02d}.n{n:02d}",
                "Prop prop: beautiful (1)(2)(3), Cor cor : beautiful",
                {"q": q, "n": n}, run)


def _gl2_abelianization_case(q: int) -> Case:
    def run(seed, samples):
        G = gl2_group(parse_field(q))
        prof = abelianization_profile(G)
        return _ok(prof["cyclic"] and prof["splits"] and prof["m"] == q - 1, m=prof["m"])
    return Case(f"s2.cor-beautiful.q{q:02d}", "Cor cor : beautiful (det section splits)", {"q": q}, run)


def _primes_case(spec: dict) -> Case:
    n, r, limit = spec["n"], spec["r"], spec["limit"]

    def run(seed, samples):
        got = dirichlet_condition_search(n, r, limit)
        primes = prime_sieve(limit)
        oracle = primes[np.isin(primes % spec["modulus"], spec["residues"])].tolist()
        return _ok(got == oracle, got[:4], count=len(got))
    return Case(f"s2.dirichlet.n{n}.r{r}",
                "Prop (infinitely many primes with p^r = 1 mod n, gcd(n,(p^r-1)/n) = 1) as a search",
                {"n": n, "r": r, "limit": limit}, run)


def _sdp_case(spec: dict) -> Case:
    def run(seed, samples):
        factors = [build_factor(f) for f in spec["factors"]]
        data = SdpData(factors)
        det: dict = {"order": data.order(), "closed": data.all_closed()}
        if not data.all_closed():
            _, chk = psi_iso_check(data, samples=samples, seed=seed, require_closed=False)
            det["violations_without_closure"] = chk.violations
            return Outcome(NOT_APPL, None, {**det, "reason": "transversal not multiplicatively closed"})
        S = sdp_build(data)
        psi, chk = psi_iso_check(data, S=S, samples=samples, seed=seed)
        det.update(method=chk.method, violations=chk.violations, checked=chk.checked)
        ok = chk.ok and S.order == data.order()
        det["right_split"] = all(right_split_sequence_check(f.group, f.subgroup, f.transversal)
                                 for f in factors)
        ok = ok and det["right_split"]
        if all(f.group.is_abelian for f in factors) and S.order <= 512:
            D = direct_product(factors[0].subgroup.as_group(), quotient(
                factors[0].group, factors[0].subgroup)[0])
            for f in factors[1:]:
                D = direct_product(D, f.subgroup.as_group())
            det["abelian_is_direct"] = is_isomorphic(S, D).isomorphic
            ok = ok and det["abelian_is_direct"]
        return _ok(ok, **det)
    return Case(f"s2.compositum.{spec['id']}", "Thm thm: compositum, Remark remark proof",
                {"factors": [f["group"] for f in spec["factors"]]}, run)


def _semidirect_gl2_case(q: int) -> Case:
    def run(seed, samples):
        F = parse_field(q)
        G = gl2_group(F)
        S = det_kernel(G)
        w = unit_generator(F).code
        d = G.index_of(np.array([[w, 0], [0, 1]]))
        T = multiplicative_transversal_search(G, S)
        diag_ok = is_complement(G, S, [d])
        split = right_split_sequence_check(G, S, closed_transversal(G, S, [d])) if diag_ok else False
        return _ok(T is not None and diag_ok and split, G.label(d),
                   complement_found=T is not None, diag_complement=diag_ok, section=split)
    return Case(f"s2.gl2-semidirect.q{q:02d}",
                "Thm semidirectwithGL2, Cor sl2 semi (GL2 = SL2 semidirect Fq^x)", {"q": q}, run)


def _det(M, p: int) -> int:
    return int(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]) % p


def _psl2_case(p: int) -> Case:
    def run(seed, samples):
        F = fq_make(p)
        G = gl2_group(F)
        Z = scalar_subgroup(G)
        S = det_kernel(G)
        ZS = Subgroup(G, np.unique(G.vmul(Z.members[:, None], S.members[None, :])))
        squares = nth_powers(F, 2)
        square_det = det_power_subgroup(G, 2)
        x = G.index_of(psl2_order2_witness(p).array())
        x2 = G.mul(x, x)
        P = pgl2_group(F)
        PS = psl2_group(F)
        xt = P.index_of(G.mats[x])
        det = {"index": ZS.index, "zs_is_square_det": ZS == square_det,
               "x_outside": x not in ZS, "x_squared_scalar": x2 in Z,
               "pgl_over_psl": P.order // PS.order, "x_class_order": int(P.element_orders[xt]),
               "det_nonsquare": _det(G.mats[x], p) not in squares}
        ok = det["index"] == 2 and det["zs_is_square_det"] and det["x_outside"] and \
            det["x_squared_scalar"] and det["pgl_over_psl"] == 2 and det["x_class_order"] == 2 \
            and det["det_nonsquare"]
        return _ok(ok, G.label(x), **det)
    return Case(f"s2.psl2.p{p:02d}", "Prop prop : psl2 (H = Z.SL2, order-2 witness)", {"p": p}, run)


def section2_cases(corpus: dict) -> list[Case]:
    cases = [_commutator_case(q) for q in corpus["commutator"]]
    for u in corpus["uniqueness"]:
        cases += [_uniqueness_case(u["group"], n) for n in u["n"]]
    for s in corpus["splitcheck"]:
        cases.append(_beautiful_case(s["q"], s["n"], s.get("expected")))
    cases += [_gl2_abelianization_case(q) for q in sorted({s["q"] for s in corpus["splitcheck"]})]
    cases += [_primes_case(s) for s in corpus["primes"]]
    cases += [_sdp_case(s) for s in corpus["sdp"]]
    cases += [_semidirect_gl2_case(q) for q in corpus["semidirect_gl2"]]
    cases += [_psl2_case(p) for p in corpus["psl2_witness"]]
    return cases


# -- induced representations -------------------------------------------------------------------

def _cyclic_transversal(G, H) -> Transversal | None:
    """1, s, ..., s^(n-1) for the least s whose coset generates a cyclic G/H."""
    Q, proj = quotient(G, H)
    n = Q.order
    if n == 1:
        return Transversal(G, H, (G.identity,))
    gens = np.flatnonzero(Q.element_orders[proj.images] == n)
    if not gens.size:
        return None
    s = int(gens[0])
    return Transversal(G, H, tuple(G.pow(s, k) for k in range(n)))


def _alt_transversal(G, H, T) -> Transversal:
    """Largest element of each coset, identity kept first."""
    reps = [G.identity]
    for k in range(1, len(T)):
        reps.append(int(np.flatnonzero(T.coset_index == k).max()))
    return Transversal(G, H, tuple(reps))


def _hprime_shapes(G, H, T) -> dict[str, Subgroup]:
    """G, H, trivial, and cyclic subgroups: <s_2>, maximal order, least prime order (anywhere / outside H)."""
    shapes = {"G": whole(G), "H": H, "trivial": trivial_subgroup(G)}
    if len(T) > 1:
        shapes["cyc-s"] = subgroup_generated(G, [T.reps[1]])
    x = int(np.argmax(G.element_orders))
    shapes["cyc-max"] = subgroup_generated(G, [x])
    orders = G.element_orders
    prime = np.array([o > 1 and all(o % d for d in range(2, o)) for o in orders.tolist()])
    for name, mask in (("cyc-prime", prime), ("cyc-prime-out", prime & ~H.mask)):
        hits = np.flatnonzero(mask)
        if hits.size:
            shapes[name] = subgroup_generated(G, [int(hits[0])])
    out: dict[str, Subgroup] = {}
    for k, S in shapes.items():
        if not any(S == v for v in out.values()):
            out[k] = S
    return out


def induce_cases(corpus: dict) -> list[Case]:
    cases = []
    for spec in corpus["induce"]:
        cases += _induce_instance_cases(spec)
    for p in corpus["model"]:
        cases.append(_thm_M_case(p))
    return cases


def _induce_instance_cases(spec: dict) -> list[Case]:
    iid = spec["id"]
    params = {k: spec[k] for k in ("group", "subgroup", "field") if k in spec}
    cache: dict = {}

    def inst():
        if not cache:
            G, H, pi, T = build_induce_instance(spec)
            B = induce(pi.restrict(H), G, T)
            cache.update(G=G, H=H, pi=pi, T=T, B=B)
        return cache

    def blocks(seed, samples):
        c = inst()
        B = c["B"]
        chk = B.rho.check(samples=samples, seed=seed)
        return _ok(B.block_structure_violations() == 0 and chk.ok and B.rho.dim == B.n * B.m,
                   n=B.n, m=B.m, hom_violations=chk.violations)

    def image_iso(seed, samples):
        c = inst()
        f, chk = rho_H_image_iso(c["B"], c["pi"])
        return _ok(chk.ok, order=f.domain.order, violations=chk.violations)

    def exact(seed, samples):
        c = inst()
        seq = exact_sequence_gamma(c["B"])
        return _ok(seq.violations == 0 and disjoint_coset_images(c["B"]),
                   image=seq.image.order, kernel=seq.kernel.order, index=seq.index)

    def product(seed, samples):
        c = inst()
        tab = product_relation_table(c["B"], c["pi"])
        return _ok(bool(tab.all()), triples=int(tab.size), disagreements=int((~tab).sum()))

    def display(seed, samples):
        c = inst()
        Tc = _cyclic_transversal(c["G"], c["H"])
        if Tc is None:
            return Outcome(NOT_APPL, None, {"reason": "G/H not cyclic"})
        Bc = induce(c["pi"].restrict(c["H"]), c["G"], Tc)
        bad = cyclic_display_violations(Bc, c["pi"])
        return _ok(bad == 0, violations=bad, n=Bc.n)

    def split(seed, samples):
        c = inst()
        rep = induced_split_check(c["B"], c["pi"])
        d = rep.details
        ok = d["routes_agree"] and d.get("pulled_back_ok", True) and \
            d.get("cyclic_corollary", True) and d.get("rho_pi_power_agree", True) and \
            d.get("cyclic_order_ok", True)
        exp = spec.get("expected_split")
        if exp is not None:
            ok = ok and (rep.verdict == SPLIT) == exp
        wit = [c["G"].label(x) for x in d["pulled_back"]] if "pulled_back" in d else None
        return _ok(ok, wit, verdict=rep.verdict, **{k: v for k, v in d.items() if k != "pulled_back"})

    def general(seed, samples):
        c = inst()
        g_split = induced_split_check(c["B"], c["pi"]).verdict == SPLIT
        res = {}
        for name, Hp in _hprime_shapes(c["G"], c["H"], c["T"]).items():
            res[name] = general_subgroup_sequence(c["B"], c["pi"], Hp, g_split)
        return _ok(all(r["ok"] for r in res.values()), shapes=res)

    def change(seed, samples):
        c = inst()
        T2 = _alt_transversal(c["G"], c["H"], c["T"])
        bad = transversal_change_violations(c["pi"].restrict(c["H"]), c["G"], c["T"], T2)
        return _ok(bad == 0, violations=bad)

    parts = [
        ("blocks", "induced block matrices, block-structure invariant", blocks),
        ("image-iso", "Lemma: images rho(H) and pi(H) are isomorphic", image_iso),
        ("exact", "Lemma lemma-exact", exact),
        ("product", "Lemma: rho(s_i)rho(s_j)=rho(s_k) iff pi-relation and coset relation", product),
        ("display", "Example: cyclic block display of rho(h s^i)", display),
        ("split", "Thm thm:induced, Cor rho(s)^n=1 iff pi(s)^n=1", split),
        ("general", "Thm general1 (1)-(4)", general),
        ("transversal-change", "induced rep independent of transversal up to conjugacy", change),
    ]
    return [Case(f"s31.{iid}.{name}", anchor, params, fn) for name, anchor, fn in parts]


def _thm_M_case(p: int) -> Case:
    def run(seed, samples):
        res = zywina_model(p)
        return _ok(all(c["thm_M"] for c in res["cases"]),
                   orders=[c["order_image"] for c in res["cases"]], order_M=res["order_M"])
    return Case(f"s31.thm-M.p{p}", "Thm thm: M (group side)", {"p": p, "G": f"SL2(F{p}) x C2"}, run)


# -- pair groups, tensors, PGL2 versus PSL2 ----------------------------------------------------

def _tensor_case(spec: dict, kind: str) -> Case:
    def run(seed, samples):
        G = parse_group(spec["group"])
        F = parse_field(spec["field"])
        reps = [parse_rep(G, F, r) for r in spec["reps"]]
        res = tensor_directsum_image_iso(reps, samples=samples, seed=seed)
        res.pop("witness")
        if kind == "prop":
            ok = res["directsum_tensor_iso"] and res["tuple_tensor_iso"]
        else:
            ok = res["directsum_tuple_iso"]
        return _ok(ok, **res)
    anchor = {"prop": "Prop tensor direct sum", "lemma": "Lemma: projective image of a direct sum"}[kind]
    return Case(f"s33.{kind}-dsum.{spec['id']}", anchor, {"group": spec["group"], "field": spec["field"]}, run)


def _scalar_case(spec: dict) -> Case:
    m1, m2 = spec["dims"]

    def run(seed, samples):
        res = scalar_detection_property(parse_field(spec["field"]), m1, m2, samples, seed)
        return _ok(res["violations"] == 0, **res)
    return Case(f"s33.scalar-detection.F{spec['field']}.{m1}x{m2}",
                "Prop tensor direct sum (proof: A1 (x) A2 scalar iff both scalar)", dict(spec), run)


def _pair_cases(spec: dict) -> list[Case]:
    iid = spec["id"]
    params = {k: spec[k] for k in ("group", "subgroup", "field")}
    cache: dict = {}

    def inst():
        if not cache:
            G, H, pi, T = build_induce_instance(spec)
            cache.update(G=G, H=H, pi=pi, T=T, B=induce(pi.restrict(H), G, T))
        return cache

    def lemma(seed, samples):
        c = inst()
        lin = kernel_phi_analysis(c["pi"], c["B"], samples=samples, seed=seed)
        proj = kernel_phi_analysis(c["pi"], c["B"], projective=True, samples=samples, seed=seed)
        ok = lin["ok"] and proj["ok"] and lin["theta_display"] in (0, None)
        return _ok(ok, linear=lin, projective=proj)

    def thm_L(seed, samples):
        c = inst()
        out = {}
        for mode in ("linear", "projective"):
            A = c["pi"] if mode == "linear" else c["pi"].projective()
            R = c["B"].rho if mode == "linear" else c["B"].rho.projective()
            rep = L_split_check(A, c["B"], R)
            out[mode] = {"verdict": rep.verdict, **rep.details}
        applicable = [v for v in out.values() if v["verdict"] != NOT_APPLICABLE]
        if not applicable:
            return Outcome(NOT_APPL, None, out)
        ok = all(v["verdict"] == SPLIT and v.get("complement") is not False for v in applicable)
        return _ok(ok, **out)

    def corollaries(seed, samples):
        c = inst()
        res = L_corollaries(c["pi"], c["B"])
        return _ok(all(v for k, v in res.items() if k != "coprime_hypothesis"), **res)

    def n_theorem(seed, samples):
        c = inst()
        res = {}
        for name, Hp in _hprime_shapes(c["G"], c["H"], c["T"]).items():
            for mode in ("linear", "projective"):
                A = c["pi"] if mode == "linear" else c["pi"].projective()
                R = c["B"].rho if mode == "linear" else c["B"].rho.projective()
                res[f"{name}.{mode}"] = pair_analysis(A, R, c["B"], Hp, samples=samples, seed=seed)
        return _ok(all(r["ok"] for r in res.values()), shapes=res)

    parts = [
        ("L-kernels", "Lemma projection kernels, Example theta^i, Cor iff, Lemma pi G ker phi", lemma),
        ("thm-L", "Thm thm : L", thm_L),
        ("L-corollaries", "Cor (ker(pi) n Hs nonempty), Cor ((n,|pi(G)|)=1)", corollaries),
        ("N-theorem", "final Thm on N = {(pi(h'),rho(h'))} parts (1)-(6)", n_theorem),
    ]
    return [Case(f"s33.{iid}.{name}", anchor, params, fn) for name, anchor, fn in parts]


def _pgl_psl_case(p: int) -> Case:
    def run(seed, samples):
        res = pgl_psl_analysis(p, samples=samples, seed=seed)
        return _ok(res["ok"], res["witness"], **{k: v for k, v in res.items() if k != "witness"})
    return Case(f"s32.pgl-psl.p{p:02d}", "Prop PGL-PSL, Thm thm : zywina case (3)(4) model", {"p": p}, run)


def _model_case(p: int) -> Case:
    def run(seed, samples):
        res = zywina_model(p)
        ok = res["ok"]
        return _ok(ok, **res)
    return Case(f"s32.zywina-model.p{p}", "Thm thm : zywina case (2)(3)(4), finite model",
                {"p": p, "G": f"SL2(F{p}) x C2"}, run)


def _simple_image_cases(p: int) -> list[Case]:
    """The lemma on the model corpus, including instances whose hypotheses fail."""
    def make(name, build, expect_clause=None):
        def run(seed, samples):
            f, H = build()
            try:
                ok = simple_image_propagation(f, H)
            except PreconditionFailed as exc:
                return Outcome(NOT_APPL, None, {"clause": exc.clause,
                                                "expected_clause": expect_clause})
            return _ok(ok)
        return Case(f"s32.simple-image.p{p}.{name}", "Lemma lemma (simple image propagation)",
                    {"p": p, "instance": name}, run)

    def identity():
        S = psl2_group(fq_make(p))
        return GroupHom(S, S, np.arange(S.order)), whole(S)

    def product(full: bool):
        def build():
            S = psl2_group(fq_make(p))
            D = direct_product(S, cyclic_group(2))
            f = GroupHom(D, S, np.arange(D.order) // 2)
            H = whole(D) if full else Subgroup(D, np.arange(S.order) * 2)
            return f, H
        return build

    def pgl():
        F = fq_make(p)
        P = pgl2_group(F)
        S = psl2_group(F)
        return GroupHom(S, P, P.lookup(S.mats)), whole(S)

    return [make("identity", identity), make("product-index2", product(False)),
            make("product-whole", product(True)),
            make("not-onto", pgl, "the image is not all of S")]


def repalg_cases(corpus: dict) -> list[Case]:
    cases = []
    for spec in corpus["tensor_pairs"] + corpus["tensor_counterexamples"]:
        cases += [_tensor_case(spec, "prop"), _tensor_case(spec, "lemma")]
    cases += [_scalar_case(s) for s in corpus["scalar_detection"]]
    for spec in corpus["induce"]:
        cases += _pair_cases(spec)
    cases += [_pgl_psl_case(p) for p in corpus["pgl_psl"]]
    for p in corpus["model"]:
        cases.append(_model_case(p))
        cases += _simple_image_cases(p)
    return cases


# -- running -----------------------------------------------------------------------------------

def suite_cases(suite: str, corpus: dict) -> list[Case]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    makers = {"section2": section2_cases, "induce": induce_cases, "repalg": repalg_cases}
    names = list(makers) if suite == "all" else [suite]
    cases = [c for n in names for c in makers[n](corpus)]
    ids = [c.case_id for c in cases]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate case ids")
    return sorted(cases, key=lambda c: c.case_id)


def run_case(case: Case, seed: int, samples: int) -> dict:
    t0 = time.perf_counter()
    error = None
    try:
        out = case.run(case_seed(seed, case.case_id), samples)
    except (Indeterminate, SearchBudgetExceeded) as exc:
        out = Outcome(INDETERMINATE, None, {"reason": str(exc)})
    except Exception as exc:  # reported, and turned into exit status 1 by the driver
        out = Outcome(INDETERMINATE, None, {"error": f"{type(exc).__name__}: {exc}"})
        error = str(exc)
    if out.verdict not in VERDICTS:
        raise GroupError(f"bad verdict {out.verdict}")
    return {
        "id": case.case_id,
        "statement_id": case.anchor,
        "parameters": jsonable(case.parameters),
        "verdict": out.verdict,
        "witness": jsonable(out.witness),
        "details": jsonable(out.details),
        "error": error,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def run_suite(suite: str, corpus: dict, seed: int = 42, samples: int = 10**4,
              progress: Callable[[dict], None] | None = None) -> dict:
    """Run every case in order of case id; timings live only in ``elapsed_ms`` fields."""
    t0 = time.perf_counter()
    results = []
    for case in suite_cases(suite, corpus):
        res = run_case(case, seed, samples)
        results.append(res)
        if progress:
            progress(res)
    summary = {v: sum(r["verdict"] == v for r in results) for v in VERDICTS}
    summary["total"] = len(results)
    summary["errors"] = sum(r["error"] is not None for r in results)
    return {
        "suite": suite,
        "seed": seed,
        "samples": samples,
        "version": __version__,
        "cases": results,
        "summary": summary,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def strip_timing(report):
    """Copy of a report without the elapsed_ms fields."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "elapsed_ms"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report
