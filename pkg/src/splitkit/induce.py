"""Matrix representations of finite groups and induction from normal subgroups.

For a transversal s_1 = 1, s_2, ..., s_n of right cosets H s_i, the induced
representation rho = Ind_H^G(sigma) acts on functions f with f(hg) = sigma(h) f(g).
In the basis grouped by coset, block (p, q) of rho(g) is sigma(s_p g s_q^-1)
when that element lies in H and zero otherwise.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .ffield import FieldSpec
from .grp import (
    FiniteGroup, GroupError, GroupHom, HomCheck, NotNormal, Subgroup, Transversal,
    _extend_by_words, check_hom, cyclic_generator, quotient, transversal_enumerate,
)
from .matgrp import MatrixGroup, NotInGroup
from .split import NO_SPLIT, SPLIT, SplitReport, multiplicative_transversal_search

DIM_CAP = 64
BRUTE_CAP = 100_000


class DimCap(GroupError):
    pass


class NotRestriction(GroupError):
    pass


class NotHomomorphism(GroupError):
    pass


class DisjointnessFailure(GroupError):
    pass


class GroupMismatch(GroupError):
    pass


class Rep:
    """A homomorphism from ``group`` into invertible dim x dim matrices over ``field``."""

    def __init__(self, group: FiniteGroup, field: FieldSpec, mats, name: str = "rep"):
        self.group = group
        self.field = field
        self.mats = np.ascontiguousarray(np.asarray(mats, dtype=np.int64))
        self.name = name
        if self.mats.ndim != 3 or self.mats.shape[0] != group.order:
            raise GroupError("need one square matrix per group element")
        self.dim = self.mats.shape[1]
        if self.dim > DIM_CAP:
            raise DimCap(f"dimension {self.dim} above {DIM_CAP}")

    def __repr__(self) -> str:
        return f"<Rep {self.name} of {self.group.name} dim={self.dim} over GF({self.field.q})>"

    def __call__(self, g: int) -> np.ndarray:
        return self.mats[g]

    @classmethod
    def from_generators(cls, G: FiniteGroup, F: FieldSpec, images: dict, name: str = "rep",
                        check: bool = True) -> Rep:
        """Extend generator images along the Cayley graph; verify the result."""
        gens = list(images)
        mats_g = {g: np.asarray(images[g], dtype=np.int64) for g in gens}
        d = next(iter(mats_g.values())).shape[0] if gens else 1
        mats = np.zeros((G.order, d, d), dtype=np.int64)
        seen = np.zeros(G.order, dtype=bool)
        mats[G.identity] = np.eye(d, dtype=np.int64)
        seen[G.identity] = True
        frontier = np.array([G.identity], dtype=np.int64)
        while frontier.size:
            nxt = []
            for g in gens:
                y = G.vmul(frontier, g)
                new = ~seen[y]
                if new.any():
                    ys, xs = y[new], frontier[new]
                    ys, first = np.unique(ys, return_index=True)
                    mats[ys] = F.matmul(mats[xs[first]], mats_g[g][None])
                    seen[ys] = True
                    nxt.append(ys)
            frontier = np.concatenate(nxt) if nxt else frontier[:0]
        if not seen.all():
            raise GroupError("generator images do not cover the group")
        rep = cls(G, F, mats, name=name)
        if check and not rep.check().ok:
            raise NotHomomorphism(f"{name} is not a homomorphism")
        return rep

    @classmethod
    def trivial(cls, G: FiniteGroup, F: FieldSpec, dim: int = 1) -> Rep:
        return cls(G, F, np.broadcast_to(np.eye(dim, dtype=np.int64), (G.order, dim, dim)),
                   name="trivial")

    # -- images ------------------------------------------------------------------------

    @cached_property
    def image(self) -> MatrixGroup:
        return MatrixGroup(self.field, self.mats, name=f"{self.name}(G)")

    @cached_property
    def image_index(self) -> np.ndarray:
        return self.image.lookup(self.mats)

    def as_hom(self) -> GroupHom:
        return GroupHom(self.group, self.image, self.image_index, name=self.name)

    def image_of(self, S: Subgroup) -> np.ndarray:
        """Indices in ``image`` of the matrices of a subgroup's members."""
        return np.unique(self.image_index[S.members])

    def image_subgroup(self, S: Subgroup) -> Subgroup:
        return Subgroup(self.image, self.image_of(S))

    def kernel(self) -> Subgroup:
        return Subgroup(self.group, np.flatnonzero(self.image_index == self.image.identity))

    def check(self, samples: int = 10**4, seed: int = 0) -> HomCheck:
        """rep(ab) = rep(a) rep(b): all pairs up to 512 elements, else generators plus samples."""
        try:
            image = self.image
        except NotInGroup:
            return HomCheck("closure", 1, 0)
        if not np.array_equal(self.mats[self.group.identity], np.eye(self.dim, dtype=np.int64)):
            return HomCheck("identity", 1, 1)
        try:
            return check_hom(GroupHom(self.group, image, self.image_index),
                             samples=samples, seed=seed)
        except NotInGroup:
            return HomCheck("closure", 1, 0)

    def restrict(self, H: Subgroup) -> Rep:
        if H.parent is not self.group:
            raise GroupMismatch("subgroup of a different group")
        return Rep(H.as_group(), self.field, self.mats[H.members], name=f"{self.name}|H")

    def projective(self) -> ProjRep:
        return ProjRep(self)


class ProjRep:
    """Scalar classes of a representation's matrices (first nonzero entry 1)."""

    def __init__(self, base: Rep):
        self.base = base
        self.group = base.group
        self.field = base.field
        self.dim = base.dim

    @cached_property
    def image(self) -> MatrixGroup:
        return MatrixGroup(self.field, self.base.mats, projective=True,
                           name=f"P{self.base.name}(G)")

    @cached_property
    def image_index(self) -> np.ndarray:
        return self.image.lookup(self.base.mats)

    @cached_property
    def mats(self) -> np.ndarray:
        return self.field.canonical_scalar_class(self.base.mats)

    def as_hom(self) -> GroupHom:
        return GroupHom(self.group, self.image, self.image_index, name=f"P{self.base.name}")

    def image_of(self, S: Subgroup) -> np.ndarray:
        return np.unique(self.image_index[S.members])

    def kernel(self) -> Subgroup:
        return Subgroup(self.group, np.flatnonzero(self.image_index == self.image.identity))

    def projection(self) -> GroupHom:
        """base image -> projective image."""
        base = self.base.image
        return GroupHom(base, self.image, self.image.lookup(base.mats), name="scalar-quotient")


def _block_nonzero(M: np.ndarray, n: int, m: int) -> np.ndarray:
    """(..., n, n) mask of nonzero m x m blocks."""
    B = M.reshape(M.shape[:-2] + (n, m, n, m))
    return B.any(axis=(-3, -1))


@dataclass
class BlockRep:
    sigma: Rep
    transversal: Transversal
    rho: Rep
    n: int
    m: int
    extra: dict = field(default_factory=dict)

    @property
    def group(self) -> FiniteGroup:
        return self.transversal.parent

    @property
    def subgroup(self) -> Subgroup:
        return self.transversal.subgroup

    def block(self, g: int, p: int, q: int) -> np.ndarray:
        m = self.m
        return self.rho.mats[g, p * m:(p + 1) * m, q * m:(q + 1) * m]

    def block_structure_violations(self) -> int:
        """One nonzero block per block row and column; diagonal form on H."""
        n, m = self.n, self.m
        nz = _block_nonzero(self.rho.mats, n, m)
        bad = int(np.count_nonzero(nz.sum(axis=-1) != 1)) + int(np.count_nonzero(nz.sum(axis=-2) != 1))
        G, H, sigma = self.group, self.subgroup, self.sigma
        reps = np.array(self.transversal.reps, dtype=np.int64)
        for p, s in enumerate(reps.tolist()):
            conj = G.vmul(G.vmul(np.full(H.order, s), H.members), G.inv(s))
            want = sigma.mats[H.position[conj]]
            got = self.rho.mats[H.members, p * m:(p + 1) * m, p * m:(p + 1) * m]
            bad += int(np.count_nonzero((want != got).any(axis=(1, 2))))
        return bad


def induce(sigma: Rep, G: FiniteGroup, T: Transversal) -> BlockRep:
    """Ind_H^G(sigma) as an n x n grid of m x m blocks."""
    H = T.subgroup
    if H.parent is not G or T.parent is not G:
        raise GroupMismatch("transversal does not belong to G")
    if sigma.group.order != H.order:
        raise GroupMismatch("sigma must be a representation of H")
    if not H.is_normal():
        raise NotNormal("H must be normal in G")
    if T.reps[0] != G.identity:
        raise GroupError("the first representative must be the identity")
    n, m = len(T), sigma.dim
    if n * m > DIM_CAP:
        raise DimCap(f"n*m = {n * m} above {DIM_CAP}")
    F = sigma.field
    mats = np.zeros((G.order, n * m, n * m), dtype=np.int64)
    elems = np.arange(G.order, dtype=np.int64)
    reps = np.array(T.reps, dtype=np.int64)
    rep_inv = G.vinv(reps)
    for p in range(n):
        sg = G.vmul(np.full(G.order, reps[p]), elems)
        q = T.coset_index[sg]
        h = G.vmul(sg, rep_inv[q])
        hpos = H.position[h]
        if (hpos < 0).any():
            raise GroupError("coset bookkeeping failed")
        blocks = sigma.mats[hpos]
        for qq in range(n):
            sel = q == qq
            mats[sel, p * m:(p + 1) * m, qq * m:(qq + 1) * m] = blocks[sel]
    rho = Rep(G, F, mats, name="rho")
    return BlockRep(sigma, T, rho, n, m)


def require_restriction(B: BlockRep, pi: Rep) -> None:
    if pi.group is not B.group or not np.array_equal(pi.mats[B.subgroup.members], B.sigma.mats):
        raise NotRestriction("sigma is not the restriction of pi")


# -- Lemma: rho(H) and pi(H) ----------------------------------------------------------------

def rho_H_image_iso(B: BlockRep, pi: Rep) -> tuple[GroupHom, HomCheck]:
    """First-block projection rho(H) -> pi(H); checked to be a bijective hom."""
    require_restriction(B, pi)
    H, m = B.subgroup, B.m
    RH = MatrixGroup(pi.field, B.rho.mats[H.members], name="rho(H)")
    PH = MatrixGroup(pi.field, pi.mats[H.members], name="pi(H)")
    first = RH.mats[:, :m, :m]
    f = GroupHom(RH, PH, PH.lookup(first), name="first-block")
    bad = int(np.count_nonzero((B.rho.mats[H.members, :m, :m] != pi.mats[H.members]).any(axis=(1, 2))))
    chk = f.check()
    if not f.is_bijective():
        bad += 1
    return f, HomCheck(chk.method, chk.violations + bad, chk.checked)


# -- Lemma: exact sequence ----------------------------------------------------------------------

@dataclass
class ExactSequence:
    image: MatrixGroup
    kernel: Subgroup
    quotient: FiniteGroup
    gamma: GroupHom
    violations: int
    index: int


def _gamma(rep: Rep, domain: Subgroup, normal_part: Subgroup, coset_of: np.ndarray,
           Q: FiniteGroup) -> ExactSequence:
    """gamma: rep(domain) -> Q via the coset of any preimage; checks exactness."""
    R = MatrixGroup(rep.field, rep.mats[domain.members], name="rho(.)")
    idx = R.lookup(rep.mats[domain.members])
    cos = coset_of[domain.members]
    images = np.full(R.order, -1, dtype=np.int64)
    images[idx] = cos
    bad = 0
    # well defined: every preimage of an image element lies in one coset
    if not np.array_equal(images[idx], cos):
        bad += int(np.count_nonzero(images[idx] != cos))
    gamma = GroupHom(R, Q, images, name="gamma")
    chk = gamma.check()
    bad += chk.violations
    if not gamma.is_surjective():
        bad += 1
    K = Subgroup(R, R.lookup(rep.mats[normal_part.members]))
    if not np.array_equal(gamma.kernel().members, K.members):
        bad += 1
    index = R.order // max(K.order, 1)
    if index != Q.order:
        bad += 1
    return ExactSequence(R, K, Q, gamma, bad, index)


def exact_sequence_gamma(B: BlockRep) -> ExactSequence:
    G, H = B.group, B.subgroup
    Q, proj = quotient(G, H)
    seq = _gamma(B.rho, Subgroup(G, np.arange(G.order)), H, proj.images, Q)
    # gamma o rho = projection
    if not np.array_equal(seq.gamma.images[seq.image.lookup(B.rho.mats)], proj.images):
        seq.violations += 1
    return seq


def disjoint_coset_images(B: BlockRep) -> bool:
    """The sets rho(H s_i) are pairwise disjoint."""
    idx = B.rho.image_index
    cos = B.transversal.coset_index
    seen: dict[int, int] = {}
    for a, c in zip(idx.tolist(), cos.tolist()):
        if seen.setdefault(a, c) != c:
            return False
    return True


# -- product relation and cyclic displays ---------------------------------------------------

def product_relation_table(B: BlockRep, pi: Rep) -> np.ndarray:
    """[i, j, k] -> whether both sides of the product biconditional agree."""
    require_restriction(B, pi)
    G, T = B.group, B.transversal
    F = pi.field
    reps = np.array(T.reps, dtype=np.int64)
    n = reps.size
    R = B.rho.mats[reps]
    P = pi.mats[reps]
    RR = F.matmul(R[:, None], R[None, :])          # rho(s_i) rho(s_j)
    PP = F.matmul(P[:, None], P[None, :])
    lhs = (RR[:, :, None] == R[None, None, :]).all(axis=(-1, -2))
    pi_eq = (PP[:, :, None] == P[None, None, :]).all(axis=(-1, -2))
    prod_coset = T.coset_index[G.vmul(reps[:, None], reps[None, :])]
    coset_eq = prod_coset[:, :, None] == np.arange(n)[None, None, :]
    return lhs == (pi_eq & coset_eq)


def product_relation_check(B: BlockRep, pi: Rep, i: int, j: int, k: int) -> bool:
    return bool(product_relation_table(B, pi)[i, j, k])


def cyclic_display_matrix(pi: Rep, G: FiniteGroup, s: int, n: int, h: int, i: int) -> np.ndarray:
    """The displayed matrix of rho(h s^i) for the transversal 1, s, ..., s^(n-1).

    Row block p carries its only nonzero block in column (p + i) mod n: pi(s^p h s^-p)
    while p + i < n, and pi(s^p h s^(n-p)) after the wrap.
    """
    m = pi.dim
    out = np.zeros((n * m, n * m), dtype=np.int64)
    for p in range(n):
        sp = G.pow(s, p)
        if p + i < n:
            x = G.mul(G.mul(sp, h), G.pow(s, -p))
        else:
            x = G.mul(G.mul(sp, h), G.pow(s, n - p))
        q = (p + i) % n
        out[p * m:(p + 1) * m, q * m:(q + 1) * m] = pi.mats[x]
    return out


def cyclic_display_violations(B: BlockRep, pi: Rep) -> int:
    """Compare every rho(h s^i) with the displayed matrix (transversal must be cyclic)."""
    G, T = B.group, B.transversal
    s = T.reps[1] if len(T) > 1 else G.identity
    n = len(T)
    if [G.pow(s, k) for k in range(n)] != list(T.reps):
        raise GroupError("transversal is not of the form 1, s, ..., s^(n-1)")
    bad = 0
    for h in B.subgroup.members.tolist():
        for i in range(n):
            g = G.mul(h, G.pow(s, i))
            if not np.array_equal(B.rho.mats[g], cyclic_display_matrix(pi, G, s, n, h, i)):
                bad += 1
    return bad


def transversal_change_violations(sigma: Rep, G: FiniteGroup, T: Transversal, T2: Transversal) -> int:
    """rho_T2 = P rho_T P^-1 where P has block sigma(h_p) at (p, c(p)) for s'_p = h_p s_c(p)."""
    B1 = induce(sigma, G, T)
    B2 = induce(sigma, G, T2)
    n, m = B1.n, B1.m
    F = sigma.field
    H = T.subgroup
    P = np.zeros((n * m, n * m), dtype=np.int64)
    for p, sp in enumerate(T2.reps):
        c = int(T.coset_index[sp])
        hp = G.mul(sp, G.inv(T.reps[c]))
        P[p * m:(p + 1) * m, c * m:(c + 1) * m] = sigma.mats[H.position[hp]]
    Pinv = F.mat_inv(P)
    conj = F.matmul(F.matmul(P[None], B1.rho.mats), Pinv[None])
    return int(np.count_nonzero((conj != B2.rho.mats).any(axis=(1, 2))))


# -- splitting ----------------------------------------------------------------------------------

def section_search(R: FiniteGroup, gamma: GroupHom, Q: FiniteGroup) -> GroupHom | None:
    """A hom iota: Q -> R with gamma o iota = id, by backtracking over generators of Q."""
    gens = Q.generators()
    fibers = [np.flatnonzero(gamma.images == q).tolist() for q in gens]

    def search(level: int, imgs: list[int]):
        if level == len(gens):
            f = _extend_by_words(Q, R, gens, imgs)
            return f
        for c in fibers[level]:
            trial = imgs + [c]
            f = _extend_by_words(Q, R, gens[:level + 1], trial)
            if f is None:
                continue
            out = search(level + 1, trial)
            if out is not None:
                return out
        return None

    f = search(0, [])
    if f is None:
        return None
    images = np.array([f[q] for q in range(Q.order)], dtype=np.int64)
    iota = GroupHom(Q, R, images, name="iota")
    if not np.array_equal(gamma.images[images], np.arange(Q.order)):
        return None
    return iota


def brute_force_closed_transversal(rep: Rep, T: Transversal, cap: int = BRUTE_CAP) -> bool | None:
    """Is there a transversal {s_i} whose images rho(s_i) are closed under products?

    Enumerates image choices coset by coset; None when the search space exceeds ``cap``.
    """
    n = len(T)
    cos = T.coset_index
    idx = rep.image_index
    choices = [np.unique(idx[cos == k]).tolist() for k in range(n)]
    ident = rep.image.identity
    if ident not in choices[0]:
        return False
    total = 1
    for c in choices[1:]:
        total *= len(c)
    if total > cap:
        return None
    table = rep.image
    for combo in itertools.product(*choices[1:]):
        S = [ident, *combo]
        sset = set(S)
        arr = np.array(S, dtype=np.int64)
        prods = table.vmul(arr[:, None], arr[None, :])
        if all(int(x) in sset for x in prods.ravel()):
            return True
    return False


def induced_split_check(B: BlockRep, pi: Rep | None = None) -> SplitReport:
    """Decide whether 1 -> rho(H) -> rho(G) -> G/H -> 1 splits, by three routes."""
    t0 = time.perf_counter()
    seq = exact_sequence_gamma(B)
    R, K = seq.image, seq.kernel
    Tc = multiplicative_transversal_search(R, K)
    iota = section_search(R, seq.gamma, seq.quotient)
    brute = brute_force_closed_transversal(B.rho, B.transversal)
    split = Tc is not None
    details = {
        "complement": split,
        "section": iota is not None,
        "closed_transversal": brute,
        "routes_agree": split == (iota is not None) and (brute is None or brute == split),
        "image_order": R.order,
        "kernel_order": K.order,
    }
    witness = None
    powers = None
    if split:
        reps = _pull_back(B, Tc)
        details["pulled_back"] = list(reps)
        details["pulled_back_ok"] = _closed_images(B, reps)
        witness = reps[1] if len(reps) > 1 else reps[0]
    G = B.group
    Q = seq.quotient
    if cyclic_generator(Q) is not None and Q.order > 1:
        details.update(_cyclic_corollary(B, pi, split))
        if split and details.get("cyclic_witness") is not None:
            s = details["cyclic_witness"]
            powers = [G.pow(s, k) for k in range(B.n)]
    verdict = SPLIT if split else NO_SPLIT
    return SplitReport(None, B.n, None, verdict, witness, powers,
                       (time.perf_counter() - t0) * 1000, details)


def _pull_back(B: BlockRep, Tc: Transversal) -> list[int]:
    """Preimages s_i in G of the complement elements, ordered by coset."""
    idx = B.rho.image_index
    reps = []
    for t in Tc.reps:
        pre = np.flatnonzero(idx == t)
        reps.append(int(pre[0]))
    order = np.argsort(B.transversal.coset_index[reps])
    return [reps[i] for i in order]


def _closed_images(B: BlockRep, reps: list[int]) -> bool:
    T = Transversal(B.group, B.subgroup, tuple(reps))
    if not T.verify():
        return False
    R = B.rho.image
    imgs = B.rho.image_index[np.array(reps)]
    prods = R.vmul(imgs[:, None], imgs[None, :])
    return bool(np.isin(prods, imgs).all())


def _cyclic_corollary(B: BlockRep, pi: Rep | None, split: bool) -> dict:
    """Cyclic quotient: split iff some s generating G/H has rho(s)^n = 1."""
    G, H, n = B.group, B.subgroup, B.n
    R = B.rho.image
    elems = np.arange(G.order, dtype=np.int64)
    Q, proj = quotient(G, H)
    gens_q = Q.element_orders[proj.images] == n
    cand = elems[gens_q]
    sn = G.vpow(cand, n)
    rho_sn_id = B.rho.image_index[sn] == R.identity
    out: dict = {}
    hits = cand[rho_sn_id]
    out["cyclic_witness"] = int(hits[0]) if hits.size else None
    out["cyclic_corollary"] = bool(hits.size) == split
    if hits.size:
        s = int(hits[0])
        out["cyclic_order_ok"] = bool(R.element_orders[B.rho.image_index[s]] == n and G.pow(s, n) in H)
    if pi is not None:
        pi_id = pi.image.identity
        pi_sn_id = pi.image_index[sn] == pi_id
        out["rho_pi_power_agree"] = bool(np.array_equal(rho_sn_id, pi_sn_id))
    return out


def general_subgroup_sequence(B: BlockRep, pi: Rep, Hp: Subgroup, g_split: bool | None = None) -> dict:
    """The sequence 1 -> rho(H' n H) -> rho(H') -> H'/(H' n H) -> 1 and its four claims."""
    require_restriction(B, pi)
    G, H = B.group, B.subgroup
    inter = Hp.intersect(H)
    # H'/(H' n H) is realised inside G/H
    Qg, proj = quotient(G, H)
    qimg = np.unique(proj.images[Hp.members])
    Qsub = Subgroup(Qg, qimg)
    Qp = Qsub.as_group()
    coset_of = Qsub.position[proj.images]
    seq = _gamma(B.rho, Hp, inter, np.where(coset_of >= 0, coset_of, 0), Qp)
    report: dict = {"order_H'": Hp.order, "order_cap": inter.order,
                    "part1": seq.violations == 0 and Qp.order == Hp.order // inter.order}
    R, K = seq.image, seq.kernel
    Tc = multiplicative_transversal_search(R, K)
    iota = section_search(R, seq.gamma, Qp)
    split = Tc is not None
    report["split"] = split
    # the (H' n H)-transversal route: preimages of a complement are a closed-image transversal
    report["part2"] = split == (iota is not None)
    h_in = H.issubset(Hp)
    rho_H = set(B.rho.image_index[H.members].tolist())
    rho_Hp = set(B.rho.image_index[Hp.members].tolist())
    kerpi = pi.kernel()
    ker_cap_H = kerpi.intersect(H)
    rhs = rho_H <= rho_Hp and ker_cap_H.issubset(Hp)
    report["H_in_H'"] = h_in
    report["part3"] = h_in == rhs
    if g_split is None:
        g_split = multiplicative_transversal_search(B.rho.image, B.rho.image_subgroup(H)) is not None
    report["part4"] = (not (h_in and g_split)) or split
    report["ok"] = all(report[k] for k in ("part1", "part2", "part3", "part4"))
    return report


def canonical_transversal(G: FiniteGroup, H: Subgroup) -> Transversal:
    return transversal_enumerate(G, H)

