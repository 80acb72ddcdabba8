from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkit.ffield import fq_make
from splitkit.grp import (
    NotNormal,
    cyclic_group,
    direct_product,
    normal_subgroups,
    subgroup_generated,
    symmetric_group,
    whole,
)
from splitkit.matgrp import det_kernel, det_power_subgroup, diag, gl2_group
from splitkit.split import (
    NO_SPLIT,
    SPLIT,
    GcdPrecondition,
    IndexMismatch,
    cyclic_transversal_search,
    dirichlet_condition_search,
    is_complement,
    multiplicative_transversal_search,
    prime_sieve,
    transversal_is_quotient_iso,
)


def witnesses_oracle(G, H):
    """x with x^n = 1 and x^k outside H for 0 < k < n, by repeated multiplication."""
    n = H.index
    members = set(H.members.tolist())
    out = []
    for x in G.elements():
        cur = x
        ok = True
        for _ in range(1, n):
            if cur in members:
                ok = False
                break
            cur = G.mul(cur, x)
        if ok and cur == G.identity:
            out.append(x)
    return out


def trial_division_primes(limit):
    return [p for p in range(2, limit + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]


def condition_oracle(n, r, limit):
    out = []
    for p in trial_division_primes(limit):
        v = p**r - 1
        if v % n == 0 and math.gcd(n, v // n) == 1:
            out.append(p)
    return out


@pytest.mark.parametrize("q,n,expect", [(5, 2, False), (5, 4, True), (7, 2, True), (7, 3, True)])
def test_cyclic_witness_verdicts_on_gl2(q, n, expect):
    G = gl2_group(fq_make(q))
    H = det_power_subgroup(G, n)
    rep = cyclic_transversal_search(G, H, n)
    oracle = witnesses_oracle(G, H)
    assert (rep.verdict == SPLIT) == bool(oracle) == expect
    assert rep.gcd_value == math.gcd(n, (q - 1) // n)
    assert (rep.gcd_value == 1) == expect
    assert rep.details["biconditional"]
    if expect:
        assert rep.witness == oracle[0]
        assert len({int(H.right_coset_labels()[x]) for x in rep.powers}) == n


def test_whole_group_is_split_by_identity():
    G = symmetric_group(3)
    rep = cyclic_transversal_search(G, whole(G), 1)
    assert rep.verdict == SPLIT and rep.witness == G.identity


def test_index_mismatch_and_non_normal():
    G = symmetric_group(3)
    with pytest.raises(IndexMismatch):
        cyclic_transversal_search(G, whole(G), 2)
    t = subgroup_generated(G, [1])
    with pytest.raises(NotNormal):
        cyclic_transversal_search(G, t)


def test_complement_examples():
    F = fq_make(5)
    G = gl2_group(F)
    S = det_kernel(G)
    d = G.index_of(diag(F, 2, 1).array())
    assert is_complement(G, S, [d])
    T = multiplicative_transversal_search(G, S)
    assert T is not None and T.is_multiplicatively_closed() and transversal_is_quotient_iso(T)

    V = direct_product(cyclic_group(2), cyclic_group(2))
    A = subgroup_generated(V, [1])
    T = multiplicative_transversal_search(V, A)
    assert T is not None
    assert set(T.reps) & set(A.members.tolist()) == {V.identity}

    C4 = cyclic_group(4)
    assert multiplicative_transversal_search(C4, subgroup_generated(C4, [2])) is None


def test_complement_search_matches_bruteforce_on_small_groups():
    # brute force: some element set closed under product meeting H only in 1 and of size [G:H]
    for G in [cyclic_group(4), cyclic_group(6), symmetric_group(3), cyclic_group(8),
              direct_product(cyclic_group(2), cyclic_group(4))]:
        for H in normal_subgroups(G):
            n = H.index
            brute = False
            for x in G.elements():
                for y in G.elements():
                    S = subgroup_generated(G, [x, y])
                    if S.order == n and S.intersect(H).order == 1:
                        brute = True
                        break
                if brute:
                    break
            assert (multiplicative_transversal_search(G, H) is not None) == brute


def test_prime_sieve_matches_trial_division():
    assert prime_sieve(2000).tolist() == trial_division_primes(2000)
    assert prime_sieve(1).tolist() == []


def test_dirichlet_examples():
    assert dirichlet_condition_search(4, 1, 40) == [5, 13, 29, 37]
    assert dirichlet_condition_search(1, 1, 12) == [2, 3, 5, 7, 11]
    assert dirichlet_condition_search(2, 1, 12) == [3, 7, 11]
    with pytest.raises(GcdPrecondition):
        dirichlet_condition_search(4, 2, 40)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(1, 3), st.integers(2, 600))
def test_dirichlet_matches_definition(n, r, limit):
    if math.gcd(n, r) != 1:
        with pytest.raises(GcdPrecondition):
            dirichlet_condition_search(n, r, limit)
        return
    assert dirichlet_condition_search(n, r, limit) == condition_oracle(n, r, limit)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 24), st.data())
def test_cyclic_group_witness_biconditional(order, data):
    # in C_m every subgroup is the unique index-n one; a witness exists iff gcd(n, m/n) = 1
    G = cyclic_group(order)
    n = data.draw(st.sampled_from([d for d in range(1, order + 1) if order % d == 0]))
    H = subgroup_generated(G, [n % order])
    assert H.index == n
    rep = cyclic_transversal_search(G, H, n)
    assert (rep.verdict == SPLIT) == (math.gcd(n, order // n) == 1) == bool(witnesses_oracle(G, H))
    assert rep.verdict in (SPLIT, NO_SPLIT)
    if rep.witness is not None:
        assert np.unique(H.right_coset_labels()[rep.powers]).size == n
