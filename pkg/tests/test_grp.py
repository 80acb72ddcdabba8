from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkit.ffield import fq_make
from splitkit.grp import (
    AbelianizationNotCyclic,
    GroupHom,
    IndexDoesNotDivide,
    IndexOutOfRange,
    NotNormal,
    Subgroup,
    closure,
    cyclic_group,
    derived_subgroup,
    direct_product,
    export_table,
    is_isomorphic,
    is_simple,
    normal_subgroups,
    parse_table,
    quotient,
    subgroup_generated,
    symmetric_group,
    transversal_enumerate,
    trivial_subgroup,
    unique_abelian_index_n,
    whole,
)
from splitkit.matgrp import det_kernel, gl2_group, pgl2_group, psl2_group


def label_index(G, label):
    return [G.label(i) for i in G.elements()].index(label)


def bfs_closure(G, gens):
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def commutator_oracle(G):
    comms = {G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) for a in G.elements() for b in G.elements()}
    return bfs_closure(G, sorted(comms))


def normal_subgroups_oracle(G):
    """Subgroups generated by at most two elements, filtered by conjugation."""
    found = set()
    for a, b in itertools.combinations_with_replacement(G.elements(), 2):
        S = frozenset(bfs_closure(G, [a, b]))
        if S in found:
            continue
        if all(G.mul(G.mul(G.inv(g), x), g) in S for g in G.elements() for x in S):
            found.add(S)
    return found


GROUPS = {
    "C6": lambda: cyclic_group(6),
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
    "C2xC4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
    "GL2(3)": lambda: gl2_group(fq_make(3)),
}


@pytest.mark.parametrize("name", list(GROUPS))
def test_axioms_exhaustive(name):
    G = GROUPS[name]()
    chk = G.verify_axioms()
    assert chk == {"method": "exhaustive", "violations": 0}
    e = G.identity
    for a in G.elements():
        assert G.mul(a, e) == a == G.mul(e, a)
        assert G.mul(a, G.inv(a)) == e


@pytest.mark.parametrize("name", list(GROUPS))
def test_derived_subgroup_matches_commutator_closure(name):
    G = GROUPS[name]()
    assert set(derived_subgroup(G).members.tolist()) == commutator_oracle(G)


@pytest.mark.parametrize("name", ["S3", "S4", "C2xC4", "C6"])
def test_normal_subgroups_match_oracle(name):
    G = GROUPS[name]()
    got = {frozenset(N.members.tolist()) for N in normal_subgroups(G)}
    assert got == normal_subgroups_oracle(G)


def test_s3_labels_and_known_subgroups():
    S3 = symmetric_group(3)
    assert S3.order == 6 and S3.label(S3.identity) == "()"
    A3 = derived_subgroup(S3)
    assert {S3.label(x) for x in A3.members} == {"()", "(123)", "(132)"}
    gens = [label_index(S3, "(12)"), label_index(S3, "(123)")]
    assert subgroup_generated(S3, gens).order == 6
    assert subgroup_generated(S3, []).order == 1


def test_cyclic_examples():
    C6 = cyclic_group(6)
    assert subgroup_generated(C6, [label_index(C6, "g^2")]).order == 3
    assert derived_subgroup(C6).order == 1
    C12 = cyclic_group(12)
    assert unique_abelian_index_n(C12, 4).order == 3
    assert unique_abelian_index_n(C12, 1) == whole(C12)


def test_unique_index_errors():
    with pytest.raises(IndexDoesNotDivide):
        unique_abelian_index_n(cyclic_group(12), 5)
    V = direct_product(cyclic_group(2), cyclic_group(2))
    with pytest.raises(AbelianizationNotCyclic):
        unique_abelian_index_n(V, 2)


def test_quotients():
    S3 = symmetric_group(3)
    Q, proj = quotient(S3, derived_subgroup(S3))
    assert Q.order == 2 and proj.check().ok
    Q1, _ = quotient(S3, whole(S3))
    assert Q1.order == 1
    G = gl2_group(fq_make(5))
    Q, proj = quotient(G, det_kernel(G))
    assert Q.order == 4 and int(Q.element_orders.max()) == 4
    with pytest.raises(NotNormal):
        quotient(S3, subgroup_generated(S3, [label_index(S3, "(12)")]))


def test_transversal_least_representatives():
    C4 = cyclic_group(4)
    H = subgroup_generated(C4, [label_index(C4, "g^2")])
    T = transversal_enumerate(C4, H)
    assert [C4.label(t) for t in T.reps] == ["1", "g"]
    S3 = symmetric_group(3)
    T = transversal_enumerate(S3, derived_subgroup(S3))
    assert [S3.label(t) for t in T.reps] == ["()", "(23)"]
    assert transversal_enumerate(S3, whole(S3)).reps == (S3.identity,)


def test_isomorphism_examples():
    C6 = cyclic_group(6)
    assert is_isomorphic(C6, direct_product(cyclic_group(2), cyclic_group(3))).isomorphic
    assert not is_isomorphic(cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2)))
    r = is_isomorphic(symmetric_group(3), gl2_group(fq_make(2)))
    assert r.isomorphic
    f = r.witness
    assert f.is_bijective() and f.check().ok
    F5 = fq_make(5)
    assert not is_isomorphic(pgl2_group(F5), direct_product(psl2_group(F5), cyclic_group(2)))


def test_simplicity():
    assert is_simple(psl2_group(fq_make(5)))
    assert not is_simple(symmetric_group(4))
    assert not is_simple(psl2_group(fq_make(3)))


def test_table_roundtrip():
    S3 = symmetric_group(3)
    T = parse_table(export_table(S3))
    assert T.order == 6
    assert is_isomorphic(T, S3).isomorphic
    assert not T.is_abelian


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        cyclic_group(4).check_index(4)


def test_hom_kernel_and_image():
    C12 = cyclic_group(12)
    C4 = cyclic_group(4)
    f = GroupHom(C12, C4, np.arange(12) % 4, name="mod4")
    assert f.check().ok
    assert f.kernel().order == 3 and f.is_surjective()
    bad = GroupHom(C12, C4, np.array([0] + [1] * 11), name="bad")
    assert not bad.check().ok


def test_intersect_and_join():
    S4 = symmetric_group(4)
    a = subgroup_generated(S4, [label_index(S4, "(12)")])
    b = subgroup_generated(S4, [label_index(S4, "(34)")])
    assert a.intersect(b) == trivial_subgroup(S4)
    assert a.join(b).order == 4


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(list(GROUPS)), st.data())
def test_group_laws_sampled(name, data):
    G = GROUPS[name]()
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.inv(G.mul(a, b)) == G.mul(G.inv(b), G.inv(a))
    assert G.pow(a, G.element_order(a)) == G.identity
    k = data.draw(st.integers(0, 30))
    expect = G.identity
    for _ in range(k):
        expect = G.mul(expect, a)
    assert G.pow(a, k) == expect
    assert np.array_equal(G.vmul(np.array([a, b]), np.array([b, c])), [G.mul(a, b), G.mul(b, c)])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(GROUPS)), st.lists(st.integers(0, 10**6), max_size=3))
def test_closure_is_a_subgroup(name, raw):
    G = GROUPS[name]()
    gens = [x % G.order for x in raw]
    S = Subgroup(G, closure(G, gens))
    assert set(S.members.tolist()) == bfs_closure(G, gens)
    assert G.order % S.order == 0
    T = transversal_enumerate(G, S)
    assert T.verify() and len(T) == S.index
