from __future__ import annotations

import zlib

import pytest

from splitkit.corpus import (
    SpecError,
    default_corpus,
    load_corpus,
    parse_element,
    parse_field,
    parse_group,
    parse_subgroup,
)
from splitkit.grp import Indeterminate
from splitkit.suites import (
    Case,
    Outcome,
    case_seed,
    run_case,
    run_suite,
    strip_timing,
    suite_cases,
)


def test_case_seed_formula():
    assert case_seed(42, "abc") == (42 + zlib.crc32(b"abc")) % 2**32
    assert case_seed(2**32 - 1, "x") == (2**32 - 1 + zlib.crc32(b"x")) % 2**32


def test_strip_timing_removes_only_timing():
    rep = {"elapsed_ms": 3.0, "cases": [{"id": "a", "elapsed_ms": 1.0, "details": {"n": 1}}]}
    assert strip_timing(rep) == {"cases": [{"id": "a", "details": {"n": 1}}]}


def test_run_case_maps_exceptions():
    def boom(seed, samples):
        raise RuntimeError("bad")

    def undecided(seed, samples):
        raise Indeterminate("too big")

    def fine(seed, samples):
        return Outcome("verified", 7, {"seed": seed})

    res = run_case(Case("x.boom", "anchor", {}, boom), 42, 10)
    assert res["verdict"] == "indeterminate" and res["error"] == "bad"
    res = run_case(Case("x.undecided", "anchor", {}, undecided), 42, 10)
    assert res["verdict"] == "indeterminate" and res["error"] is None
    res = run_case(Case("x.fine", "anchor", {}, fine), 42, 10)
    assert res["verdict"] == "verified" and res["witness"] == 7
    assert res["details"]["seed"] == case_seed(42, "x.fine")


@pytest.mark.parametrize("suite", ["section2", "induce", "repalg", "all"])
def test_case_ids_sorted_and_unique(suite):
    ids = [c.case_id for c in suite_cases(suite, default_corpus())]
    assert ids == sorted(ids) and len(ids) == len(set(ids))


def test_unknown_suite():
    with pytest.raises(ValueError):
        suite_cases("nosuch", default_corpus())


def test_small_suite_is_reproducible():
    corpus = {**default_corpus(), "commutator": [3, 5], "uniqueness": [], "splitcheck": [],
              "primes": [], "sdp": [], "semidirect_gl2": [3], "psl2_witness": [5]}
    a = run_suite("section2", corpus, seed=1)
    b = run_suite("section2", corpus, seed=1)
    assert strip_timing(a) == strip_timing(b)
    assert a["summary"]["verified"] == a["summary"]["total"] == 4


def test_commutator_case_outside_odd_characteristic_is_not_applicable():
    corpus = {**default_corpus(), "commutator": [2, 4], "uniqueness": [], "splitcheck": [],
              "primes": [], "sdp": [], "semidirect_gl2": [], "psl2_witness": []}
    rep = run_suite("section2", corpus)
    verdicts = {c["id"]: (c["verdict"], c["details"]["equal"]) for c in rep["cases"]}
    assert verdicts["s2.commutator.q02"] == ("not-applicable", False)
    assert verdicts["s2.commutator.q04"] == ("not-applicable", True)


def test_parse_field_forms():
    assert parse_field(7).q == 7
    assert parse_field("9").q == 9
    assert parse_field("3^2").q == 9
    assert parse_field([2, 3]).q == 8
    with pytest.raises(SpecError):
        parse_field(6)


def test_parse_element_prefers_labels():
    C4 = parse_group("cyclic:4")
    assert parse_element(C4, "1") == C4.identity
    assert parse_element(C4, "g^3") == 3
    assert parse_element(C4, 2) == 2
    G = parse_group("gl2:3")
    x = parse_element(G, [[2, 0], [0, 1]])
    assert G.mat(x).tolist() == [[2, 0], [0, 1]]


def test_parse_subgroup_names():
    G = parse_group("gl2:5")
    assert parse_subgroup(G, "derived").order == 120
    assert parse_subgroup(G, "det-kernel").order == 120
    assert parse_subgroup(G, "center").order == 4
    assert parse_subgroup(G, "trivial").order == 1
    assert parse_subgroup(G, "whole").order == 480
    S3 = parse_group("sym:3")
    assert parse_subgroup(S3, "(123)").order == 3


def test_load_corpus_replaces_sections(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"commutator": [3]}')
    corpus = load_corpus(str(path))
    assert corpus["commutator"] == [3]
    assert corpus["pgl_psl"] == default_corpus()["pgl_psl"]
