"""Fiber products of G_1 x ... x G_l and their twisted semidirect models.

Given normal subgroups H_i of G_i with aligned, multiplicatively closed
transversals {x_k} (of H_1), {y_k} (of H_2), ..., the union of the products
x_k H_1 x y_k H_2 x ... is a subgroup of the direct product.  It is isomorphic
to (H_1 x ... x H_l) semidirect G_1/H_1 with

    ((h), t_i) * ((k), t_j) = ((t_j^-1 h t_j k), t_i t_j)

evaluated factor by factor.  The l-factor group is built by iterating the
two-factor construction: the previous group plays G_1, its kernel plays H_1
and the elements ((1), t) play the transversal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grp import (
    DEFAULT_SAMPLES, FiniteGroup, GroupError, GroupHom, HomCheck, NotNormal, Subgroup,
    Transversal, check_hom, closure, cyclic_group, direct_product, quotient, whole,
)

ORDER_CAP = 10**5
PSI_EXHAUSTIVE = 5000


class MisalignedTransversals(GroupError):
    pass


class NotClosed(GroupError):
    pass


class OrderCap(GroupError):
    pass


@dataclass
class Factor:
    group: FiniteGroup
    subgroup: Subgroup
    transversal: Transversal

    @property
    def reps(self) -> np.ndarray:
        return np.array(self.transversal.reps, dtype=np.int64)


class SdpData:
    """Factors (G_i, H_i, T_i) whose transversals are aligned coset-by-coset."""

    def __init__(self, factors: list[Factor]):
        if not factors:
            raise GroupError("need at least one factor")
        self.factors = list(factors)
        n = len(factors[0].transversal)
        for f in self.factors:
            if not f.subgroup.is_normal():
                raise NotNormal(f"subgroup of {f.group.name} is not normal")
            if f.subgroup.index != n or len(f.transversal) != n:
                raise MisalignedTransversals("indices differ between factors")
            if not f.transversal.verify():
                raise GroupError(f"invalid transversal in {f.group.name}")
        self.n = n
        self.thetas = [self._theta(f) for f in self.factors]

    @property
    def l(self) -> int:
        return len(self.factors)

    def _theta(self, f: Factor) -> GroupHom:
        """G_i/H_i -> G_1/H_1 sending y_k H_i to x_k H_1; must be an isomorphism."""
        first = self.factors[0]
        Qi, proj_i = quotient(f.group, f.subgroup, check_normal=False)
        Q1, proj_1 = quotient(first.group, first.subgroup, check_normal=False)
        images = np.full(Qi.order, -1, dtype=np.int64)
        images[proj_i.images[f.reps]] = proj_1.images[first.reps]
        theta = GroupHom(Qi, Q1, images, name="theta")
        if (images < 0).any() or not theta.is_bijective() or not theta.check().ok:
            raise MisalignedTransversals(f"transversal of {f.group.name} is not aligned")
        return theta

    def quotient_group(self) -> FiniteGroup:
        return self.thetas[0].codomain

    def all_closed(self) -> bool:
        return all(f.transversal.is_multiplicatively_closed() for f in self.factors)

    def order(self) -> int:
        out = self.n
        for f in self.factors:
            out *= f.subgroup.order
        return out


def _conj_table(G: FiniteGroup, H: Subgroup, reps: np.ndarray) -> np.ndarray:
    """[j, pos] -> position in H of reps[j]^-1 * H[pos] * reps[j]."""
    pos = H.position
    rows = []
    for t in reps.tolist():
        conj = G.vmul(G.vmul(np.full(H.order, G.inv(t)), H.members), t)
        rows.append(pos[conj])
    out = np.array(rows, dtype=np.int64)
    if (out < 0).any():
        raise NotNormal("conjugation leaves the subgroup")
    return out


class SdpGroup(FiniteGroup):
    """(H_1 x H_2) semidirect Q on mixed-radix indices ((h1, h2), t)."""

    def __init__(self, left: Factor, right: Factor | None, name: str = "SDP"):
        n = len(left.transversal)
        if right is None:
            C1 = cyclic_group(1)
            right = Factor(C1, whole(C1), Transversal(C1, whole(C1), (0,) * n))
            c2 = np.zeros((n, 1), dtype=np.int64)
        else:
            c2 = _conj_table(right.group, right.subgroup, right.reps)
        H1, H2 = left.subgroup, right.subgroup
        V1, V2 = H1.as_group(), H2.as_group()
        c1 = _conj_table(left.group, H1, left.reps)
        G1, reps1 = left.group, left.reps
        tmul = left.transversal.coset_index[G1.vmul(reps1[:, None], reps1[None, :])]
        if G1.identity != reps1[0]:
            raise GroupError("first transversal element must be the identity")
        tinv = np.argmax(tmul == 0, axis=1)
        h1, h2 = H1.order, H2.order
        self.n, self.h1, self.h2 = n, h1, h2
        self.left, self.right = left, right
        self.tmul = tmul

        def decode(A):
            t = A % n
            rest = A // n
            return rest // h2, rest % h2, t

        def vmul(A, B):
            A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
            a1, a2, ta = decode(A)
            b1, b2, tb = decode(B)
            r1 = V1.vmul(c1[tb, a1], b1)
            r2 = V2.vmul(c2[tb, a2], b2)
            return (r1 * h2 + r2) * n + tmul[ta, tb]

        def vinv(A):
            A = np.asarray(A, dtype=np.int64)
            a1, a2, ta = decode(A)
            ti = tinv[ta]
            return (c1[ti, V1.vinv(a1)] * h2 + c2[ti, V2.vinv(a2)]) * n + ti

        e = (V1.identity * h2 + V2.identity) * n
        self.decode = decode
        super().__init__(h1 * h2 * n, vmul=vmul, vinv=vinv, identity=e,
                         label=self._label, name=name,
                         structural="iterated semidirect law over closed transversals")

    def _label(self, i: int) -> str:
        a1, a2, t = (int(v) for v in self.decode(np.int64(i)))
        return f"(({a1},{a2}),t{t})"

    def kernel(self) -> Subgroup:
        """Elements with trivial quotient part, ((h), t_0)."""
        return Subgroup(self, np.arange(self.h1 * self.h2, dtype=np.int64) * self.n)

    def quotient_transversal(self) -> Transversal:
        e_code = self.identity // self.n
        return Transversal(self, self.kernel(), tuple(e_code * self.n + t for t in range(self.n)))

    def generators(self) -> list[int]:
        if self._gens_hint is None:
            n, h2 = self.n, self.h2
            e1 = self.left.subgroup.as_group().identity
            e2 = self.right.subgroup.as_group().identity
            gens = [(g * h2 + e2) * n for g in self.left.subgroup.as_group().generators()]
            gens += [(e1 * h2 + g) * n for g in self.right.subgroup.as_group().generators()]
            gens += [(e1 * h2 + e2) * n + t for t in range(1, n)]
            self._gens_hint = gens
        return list(self._gens_hint)


def sdp_build(data: SdpData, require_closed: bool = True) -> FiniteGroup:
    """The twisted group law on (H_1 x ... x H_l) x Q.

    With ``require_closed=False`` the law is still evaluated (products of
    transversal elements are reduced to their coset), which is how the
    theorem's closure hypothesis can be shown to be necessary.
    """
    if require_closed and not data.all_closed():
        raise NotClosed("transversals must be closed under multiplication")
    if data.order() > ORDER_CAP:
        raise OrderCap(f"order {data.order()} above {ORDER_CAP}")
    f0 = data.factors[0]
    if data.l == 1:
        return f0.group if f0.subgroup.index == 1 else SdpGroup(f0, None, name="SDP1")
    S = SdpGroup(f0, data.factors[1], name="SDP2")
    for k, f in enumerate(data.factors[2:], start=3):
        left = Factor(S, S.kernel(), S.quotient_transversal())
        S = SdpGroup(left, f, name=f"SDP{k}")
    return S


def product_group(data: SdpData) -> FiniteGroup:
    """G_1 x ... x G_l with iterated pair indices."""
    D = data.factors[0].group
    for f in data.factors[1:]:
        D = direct_product(D, f.group)
    return D


def fiber_product(data: SdpData) -> Subgroup:
    """Union over k of x_k H_1 x y_k H_2 x ... inside the direct product."""
    D = product_group(data)
    sizes = [f.group.order for f in data.factors]
    members = []
    for k in range(data.n):
        block = np.zeros(1, dtype=np.int64)
        for f, size in zip(data.factors, sizes):
            coset = f.group.vmul(np.full(f.subgroup.order, f.transversal.reps[k]), f.subgroup.members)
            block = (block[:, None] * size + coset[None, :]).ravel()
        members.append(block)
    members = np.unique(np.concatenate(members))
    gens = _fiber_generators(data, D)
    S = Subgroup(D, members, gens)
    if S.order != data.order():
        raise MisalignedTransversals("fiber product has the wrong order")
    if not np.array_equal(closure(D, gens), S.members):
        raise GroupError("fiber product is not closed")
    return S


def _encode(data: SdpData, comps) -> int:
    code = 0
    for f, c in zip(data.factors, comps):
        code = code * f.group.order + int(c)
    return code


def _fiber_generators(data: SdpData, D: FiniteGroup) -> list[int]:
    ids = [f.group.identity for f in data.factors]
    gens = []
    for i, f in enumerate(data.factors):
        for h in f.subgroup.as_group().generators():
            comps = list(ids)
            comps[i] = int(f.subgroup.members[h])
            gens.append(_encode(data, comps))
    for k in range(1, data.n):
        gens.append(_encode(data, [f.transversal.reps[k] for f in data.factors]))
    return gens


def psi_map(data: SdpData, fp: Subgroup, S: FiniteGroup) -> GroupHom:
    """(x_k h_1, y_k h_2, ...) -> ((h_1, h_2, ...), k) on the fiber product."""
    members = fp.members
    comps = []
    rest = members.copy()
    for f in reversed(data.factors):
        comps.append(rest % f.group.order)
        rest = rest // f.group.order
    comps.reverse()
    first = data.factors[0]
    k = first.transversal.coset_index[comps[0]]
    code = np.zeros(members.size, dtype=np.int64)
    for f, a in zip(data.factors, comps):
        rep_inv = f.group.vinv(f.reps[k])
        h = f.subgroup.position[f.group.vmul(rep_inv, a)]
        if (h < 0).any():
            raise MisalignedTransversals("component outside its aligned coset")
        code = code * f.subgroup.order + h
    images = code * data.n + k
    return GroupHom(fp.as_group(), S, images, name="psi")


def psi_iso_check(data: SdpData, fp: Subgroup | None = None, S: FiniteGroup | None = None,
                  samples: int = DEFAULT_SAMPLES, seed: int = 0,
                  require_closed: bool = True) -> tuple[GroupHom, HomCheck]:
    """Build psi and check it is a bijective homomorphism."""
    fp = fiber_product(data) if fp is None else fp
    S = sdp_build(data, require_closed=require_closed) if S is None else S
    psi = psi_map(data, fp, S)
    check = check_hom(psi, exhaustive_limit=PSI_EXHAUSTIVE, samples=samples, seed=seed)
    if not psi.is_bijective():
        check = HomCheck(check.method, check.violations + 1, check.checked)
    return psi, check


def right_split_sequence_check(G: FiniteGroup, H: Subgroup, T: Transversal) -> bool:
    """iota: G/H -> G, coset -> its T-representative, is a hom with pi o iota = id."""
    if not T.is_multiplicatively_closed():
        raise NotClosed("transversal is not closed under multiplication")
    Q, proj = quotient(G, H)
    reps = np.array(T.reps, dtype=np.int64)
    images = np.full(Q.order, -1, dtype=np.int64)
    images[proj.images[reps]] = reps
    if (images < 0).any():
        return False
    iota = GroupHom(Q, G, images, name="iota")
    section = np.array_equal(proj.images[iota.images], np.arange(Q.order))
    return bool(section and check_hom(iota).ok)


def semidirect(K: FiniteGroup, Q: FiniteGroup, action: np.ndarray, name: str = "K:Q") -> FiniteGroup:
    """K semidirect Q on (k, q) -> k*|Q| + q with (k1,q1)(k2,q2) = (k1 q1(k2), q1 q2).

    ``action[q]`` is the automorphism of K attached to q, as an image array.
    """
    action = np.asarray(action, dtype=np.int64)
    nq = Q.order
    if action.shape != (nq, K.order):
        raise GroupError("action must be a |Q| x |K| array")

    def vmul(A, B):
        A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
        k1, q1 = A // nq, A % nq
        k2, q2 = B // nq, B % nq
        return K.vmul(k1, action[q1, k2]) * nq + Q.vmul(q1, q2)

    def vinv(A):
        A = np.asarray(A, dtype=np.int64)
        k, q = A // nq, A % nq
        qi = Q.vinv(q)
        return action[qi, K.vinv(k)] * nq + qi

    gens = [g * nq + Q.identity for g in K.generators()] + \
           [K.identity * nq + h for h in Q.generators()]
    return FiniteGroup(K.order * nq, vmul=vmul, vinv=vinv, identity=K.identity * nq + Q.identity,
                       label=lambda i: f"({K.label(i // nq)}, {Q.label(i % nq)})", gens=gens,
                       name=name, structural="semidirect law with automorphism action")
