"""Group/element/rep spec parsing and the built-in verification corpus.

Group specs: ``gl2:q``, ``sl2:q``, ``pgl2:q``, ``psl2:q``, ``cyclic:n``, ``sym:n``,
``table:FILE``.  Element references are an integer index, a label (``g^2``,
``(123)``) or a matrix written as nested lists.  Subgroups are a list of
element references or one of the names ``derived``, ``det-kernel``, ``center``,
``trivial``, ``whole``.
"""

from __future__ import annotations

import copy
import json
from functools import lru_cache
from pathlib import Path

import numpy as np

from .ffield import FieldSpec, factorize, fq_make
from .grp import (
    FiniteGroup, GroupError, Subgroup, Transversal, closure, cyclic_group, derived_subgroup,
    parse_table, subgroup_generated, symmetric_group, transversal_enumerate, trivial_subgroup, whole,
)
from .induce import Rep
from .matgrp import MatrixGroup, det_kernel, gl2_group, pgl2_group, psl2_group, sl2_group
from .sdp import Factor


LABEL_SCAN_LIMIT = 5000


class SpecError(ValueError):
    pass


def parse_field(spec) -> FieldSpec:
    """``7``, ``"9"``, ``"3^2"`` or ``[3, 2]``."""
    if isinstance(spec, (list, tuple)):
        return fq_make(int(spec[0]), int(spec[1]))
    s = str(spec)
    if "^" in s:
        p, r = s.split("^")
        return fq_make(int(p), int(r))
    q = int(s)
    f = factorize(q)
    if len(f) != 1:
        raise SpecError(f"{q} is not a prime power")
    (p, r), = f.items()
    return fq_make(p, r)


@lru_cache(maxsize=None)
def _parse_group_cached(spec: str) -> FiniteGroup:
    kind, _, arg = spec.partition(":")
    if not arg:
        raise SpecError(f"bad group spec {spec!r}")
    if kind == "table":
        return parse_table(Path(arg).read_text(), name=Path(arg).stem)
    try:
        k = int(arg)
    except ValueError as exc:
        raise SpecError(f"bad group spec {spec!r}") from exc
    if kind == "cyclic":
        return cyclic_group(k)
    if kind == "sym":
        if not 1 <= k <= 7:
            raise SpecError("sym:n needs 1 <= n <= 7")
        return symmetric_group(k)
    makers = {"gl2": gl2_group, "sl2": sl2_group, "pgl2": pgl2_group, "psl2": psl2_group}
    if kind not in makers:
        raise SpecError(f"unknown group kind {kind!r}")
    return makers[kind](parse_field(k))


def parse_group(spec: str) -> FiniteGroup:
    try:
        return _parse_group_cached(spec)
    except (GroupError, ValueError, OSError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"{spec}: {exc}") from exc


def parse_element(G: FiniteGroup, ref) -> int:
    if isinstance(ref, (int, np.integer)):
        return G.check_index(int(ref))
    if isinstance(ref, (list, tuple)):
        if not isinstance(G, MatrixGroup):
            raise SpecError("matrix reference into a non-matrix group")
        return G.index_of(np.asarray(ref, dtype=np.int64))
    s = str(ref).strip()
    if s.startswith("[") and isinstance(G, MatrixGroup):
        return parse_element(G, json.loads(s))
    # labels win over bare integers ("1" is the identity of a cyclic group)
    if G.order <= LABEL_SCAN_LIMIT:
        for i in range(G.order):
            if G.label(i) == s:
                return i
    if s.lstrip("-").isdigit():
        return G.check_index(int(s))
    raise SpecError(f"no element {s!r} in {G.name}")


def parse_subgroup(G: FiniteGroup, spec) -> Subgroup:
    if isinstance(spec, str):
        named = {
            "derived": lambda: derived_subgroup(G),
            "det-kernel": lambda: det_kernel(G),
            "trivial": lambda: trivial_subgroup(G),
            "whole": lambda: whole(G),
            "center": lambda: _center(G),
        }
        if spec in named:
            return named[spec]()
        spec = [s for s in spec.split(";") if s.strip()] if spec.strip() else []
    return subgroup_generated(G, [parse_element(G, r) for r in spec])


def _center(G: FiniteGroup) -> Subgroup:
    gens = G.generators()
    elems = np.arange(G.order)
    ok = np.ones(G.order, dtype=bool)
    for g in gens:
        ok &= G.vmul(elems, g) == G.vmul(g, elems)
    return Subgroup(G, np.flatnonzero(ok))


def parse_rep(G: FiniteGroup, F: FieldSpec, spec, name: str = "rep") -> Rep:
    """``"natural"``, ``"trivial"``/``"trivial:d"`` or {element ref: matrix}."""
    if isinstance(spec, str):
        if spec == "natural":
            if not isinstance(G, MatrixGroup) or G.projective or G.field != F:
                raise SpecError("natural rep needs a linear matrix group over the same field")
            return Rep(G, F, G.mats, name="natural")
        if spec.startswith("trivial"):
            d = int(spec.split(":")[1]) if ":" in spec else 1
            return Rep.trivial(G, F, d)
        spec = json.loads(spec)
    images = {parse_element(G, k): np.asarray(v, dtype=np.int64) % F.q for k, v in spec.items()}
    if closure(G, list(images)).size != G.order:
        raise SpecError("rep generators do not generate the group")
    return Rep.from_generators(G, F, images, name=name)


def closed_transversal(G: FiniteGroup, H: Subgroup, gens) -> Transversal:
    """The complement generated by ``gens``, listed in canonical coset order."""
    T = closure(G, gens)
    canon = transversal_enumerate(G, H)
    if T.size != H.index or int(H.mask[T].sum()) != 1:
        raise GroupError("generators do not give a complement")
    reps = [0] * H.index
    for t in T.tolist():
        reps[int(canon.coset_index[t])] = t
    return Transversal(G, H, tuple(reps))


# -- the default corpus ----------------------------------------------------------------------

S3_STD = {"(12)": [[0, 1], [1, 0]], "(123)": [[0, 6], [1, 6]]}
S3_SIGN = {"(12)": [[6]], "(123)": [[1]]}

DEFAULT_CORPUS: dict = {
    "commutator": [2, 3, 4, 5, 7, 9, 13],
    "uniqueness": [
        {"group": "gl2:5", "n": [1, 2, 4]},
        {"group": "gl2:7", "n": [1, 2, 3, 6]},
        {"group": "cyclic:12", "n": [1, 2, 3, 4, 6, 12]},
        {"group": "sym:3", "n": [1, 2]},
    ],
    "splitcheck": [
        {"q": 5, "n": 2, "expected": False}, {"q": 5, "n": 4, "expected": True},
        {"q": 7, "n": 2, "expected": True}, {"q": 7, "n": 3, "expected": True},
        {"q": 13, "n": 2, "expected": False}, {"q": 13, "n": 3, "expected": True},
        {"q": 13, "n": 4, "expected": True}, {"q": 9, "n": 8, "expected": True},
    ],
    "primes": [
        {"n": 4, "r": 1, "limit": 10**6, "residues": [5], "modulus": 8},
        {"n": 3, "r": 1, "limit": 10**5, "residues": [4, 7], "modulus": 9},
        {"n": 2, "r": 1, "limit": 10**5, "residues": [3], "modulus": 4},
    ],
    "sdp": [
        {"id": "c4-trivial-h", "factors": [{"group": "cyclic:4", "subgroup": "trivial", "complement": ["g"]},
                                           {"group": "cyclic:4", "subgroup": "trivial", "complement": ["g"]}]},
        {"id": "c4-nonclosed", "closed": False,
         "factors": [{"group": "cyclic:4", "subgroup": ["g^2"], "transversal": ["1", "g"]},
                     {"group": "cyclic:4", "subgroup": ["g^2"], "transversal": ["1", "g"]}]},
        {"id": "s3-a3", "factors": [{"group": "sym:3", "subgroup": "derived", "complement": ["(12)"]}] * 2},
        {"id": "s3-a3-l3", "factors": [{"group": "sym:3", "subgroup": "derived", "complement": ["(12)"]}] * 3},
        {"id": "c6-g2", "factors": [{"group": "cyclic:6", "subgroup": ["g^2"], "complement": ["g^3"]}] * 2},
        {"id": "gl2-3", "factors": [{"group": "gl2:3", "subgroup": "det-kernel",
                                     "complement": [[[2, 0], [0, 1]]]}] * 2},
        {"id": "gl2-5", "factors": [{"group": "gl2:5", "subgroup": "det-kernel",
                                     "complement": [[[2, 0], [0, 1]]]}] * 2},
        {"id": "pgl2-5", "factors": [{"group": "pgl2:5", "subgroup": "derived",
                                      "complement": [[[1, 3], [4, 4]]]}] * 2},
    ],
    "semidirect_gl2": [3, 5, 7],
    "psl2_witness": [5, 7, 11, 13],
    "induce": [
        {"id": "s3-a3-trivial", "group": "sym:3", "subgroup": ["(123)"], "field": 7, "pi": "trivial"},
        {"id": "s3-a3-sign", "group": "sym:3", "subgroup": ["(123)"], "field": 7, "pi": S3_SIGN},
        {"id": "s3-a3-standard", "group": "sym:3", "subgroup": ["(123)"], "field": 7, "pi": S3_STD},
        {"id": "c4-g2-faithful", "group": "cyclic:4", "subgroup": ["g^2"], "field": 5, "pi": {"g": [[2]]},
         "expected_split": False},
        {"id": "c4-g2-order2", "group": "cyclic:4", "subgroup": ["g^2"], "field": 5, "pi": {"g": [[4]]},
         "expected_split": True},
        {"id": "c4-g2-trivial", "group": "cyclic:4", "subgroup": ["g^2"], "field": 5, "pi": "trivial"},
        {"id": "c4-1-faithful", "group": "cyclic:4", "subgroup": "trivial", "field": 5, "pi": {"g": [[2]]}},
        {"id": "c6-g2-order3", "group": "cyclic:6", "subgroup": ["g^2"], "field": 7, "pi": {"g": [[4]]}},
        {"id": "c6-g3-faithful", "group": "cyclic:6", "subgroup": ["g^3"], "field": 7, "pi": {"g": [[3]]}},
        {"id": "c8-g4-faithful", "group": "cyclic:8", "subgroup": ["g^4"], "field": 17, "pi": {"g": [[9]]}},
        {"id": "a4-v4-order3", "group": "psl2:3", "subgroup": "derived", "field": 7,
         "pi": {"[[1,1],[0,1]]": [[2]], "[[0,1],[2,0]]": [[1]]}},
        {"id": "sl2-3-q8-natural", "group": "sl2:3", "subgroup": "derived", "field": 3, "pi": "natural"},
        {"id": "gl2-3-sl2-natural", "group": "gl2:3", "subgroup": "det-kernel", "field": 3, "pi": "natural"},
        {"id": "s3-1-standard", "group": "sym:3", "subgroup": "trivial", "field": 7, "pi": S3_STD},
    ],
    "tensor_pairs": [
        {"id": "sl2-3-natural-twice", "group": "sl2:3", "field": 3, "reps": ["natural", "natural"]},
        {"id": "c4-faithful-twice", "group": "cyclic:4", "field": 5, "reps": [{"g": [[2]]}, {"g": [[2]]}]},
        {"id": "s3-trivial-twice", "group": "sym:3", "field": 7, "reps": ["trivial", "trivial"]},
        {"id": "s3-sign-standard", "group": "sym:3", "field": 7, "reps": [S3_SIGN, S3_STD]},
        {"id": "s3-standard-standard", "group": "sym:3", "field": 7, "reps": [S3_STD, S3_STD]},
        {"id": "gl2-5-natural-twice", "group": "gl2:5", "field": 5, "reps": ["natural", "natural"]},
        {"id": "s3-sign-standard-standard", "group": "sym:3", "field": 7, "reps": [S3_SIGN, S3_STD, S3_STD]},
    ],
    # a pair where the direct-sum image is strictly larger than the tensor image
    "tensor_counterexamples": [
        {"id": "c4-trivial-faithful", "group": "cyclic:4", "field": 5, "reps": ["trivial", {"g": [[2]]}]},
    ],
    "scalar_detection": [{"field": 5, "dims": [2, 2]}, {"field": 7, "dims": [2, 3]},
                         {"field": 5, "dims": [1, 3]}, {"field": 7, "dims": [3, 3]}],
    "pgl_psl": [5, 7],
    "model": [5],
}


def default_corpus() -> dict:
    return copy.deepcopy(DEFAULT_CORPUS)


def load_corpus(path: str | None) -> dict:
    """Default corpus, with top-level sections replaced by those in ``path``."""
    corpus = default_corpus()
    if path:
        extra = json.loads(Path(path).read_text())
        if not isinstance(extra, dict):
            raise SpecError("corpus file must hold a JSON object")
        unknown = set(extra) - set(corpus)
        if unknown:
            raise SpecError(f"unknown corpus sections: {sorted(unknown)}")
        corpus.update(extra)
    return corpus


def build_factor(spec: dict):
    """A (G, H, T) triple for the semidirect-product construction."""
    G = parse_group(spec["group"])
    H = parse_subgroup(G, spec["subgroup"])
    if "complement" in spec:
        T = closed_transversal(G, H, [parse_element(G, r) for r in spec["complement"]])
    else:
        T = Transversal(G, H, tuple(parse_element(G, r) for r in spec["transversal"]))
    return Factor(G, H, T)


def build_induce_instance(spec: dict):
    """(G, H, pi, T) with T the canonical transversal (identity first)."""
    G = parse_group(spec["group"])
    H = parse_subgroup(G, spec["subgroup"])
    F = parse_field(spec["field"])
    pi = parse_rep(G, F, spec["pi"], name="pi")
    T = transversal_enumerate(G, H)
    return G, H, pi, T
