"""Direct sums, tensor products, projective images and graph groups of reps.

A graph group collects the tuples (A_1(g), ..., A_k(g)) of image elements as g
ranges over a group (or a subgroup H'); the pair groups L and N are the
two-component case with coordinate projections.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .ffield import FieldSpec, ZeroInverse, fq_make
from .grp import (
    FiniteGroup, GroupError, GroupHom, HomCheck, Subgroup, Transversal, check_hom, closure,
    cyclic_generator, cyclic_group, direct_product, is_isomorphic, is_simple, quotient, whole,
)
from .induce import (
    BlockRep, GroupMismatch, ProjRep, Rep, induce, induced_split_check,
)
from .matgrp import (
    pgl2_group, psl2_group, psl2_order2_witness, sl2_group,
)
from .sdp import semidirect
from .split import NO_SPLIT, NOT_APPLICABLE, SPLIT, SplitReport, multiplicative_transversal_search

RepLike = Rep | ProjRep


class PreconditionFailed(GroupError):
    def __init__(self, clause: str):
        super().__init__(clause)
        self.clause = clause


class NotInducedPair(GroupError):
    pass


class BudgetExceeded(GroupError):
    pass


# -- direct sums and tensor products ----------------------------------------------------

def _common(reps) -> tuple[FiniteGroup, FieldSpec]:
    reps = list(reps)
    if not reps:
        raise GroupMismatch("need at least one rep")
    G, F = reps[0].group, reps[0].field
    for r in reps[1:]:
        if r.group is not G:
            raise GroupMismatch("reps live on different groups")
        if r.field != F:
            raise GroupMismatch("reps use different coefficient fields")
    return G, F


def direct_sum(reps) -> Rep:
    """Block-diagonal sum diag(pi_1(g), ..., pi_k(g))."""
    reps = list(reps)
    G, F = _common(reps)
    d = sum(r.dim for r in reps)
    mats = np.zeros((G.order, d, d), dtype=np.int64)
    off = 0
    for r in reps:
        mats[:, off:off + r.dim, off:off + r.dim] = r.mats
        off += r.dim
    return Rep(G, F, mats, name="(+)".join(r.name for r in reps))


def kron(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product, batched over a leading axis; block (i, j) is a_ij * B."""
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if A.ndim == 2 and B.ndim == 2:
        return kron(F, A[None], B[None])[0]
    n, m1, _ = A.shape
    m2 = B.shape[1]
    prod = F.vmul(A[:, :, None, :, None], B[:, None, :, None, :])
    return prod.reshape(n, m1 * m2, m1 * m2)


def tensor(reps) -> Rep:
    reps = list(reps)
    G, F = _common(reps)
    mats = reps[0].mats
    for r in reps[1:]:
        mats = kron(F, mats, r.mats)
    return Rep(G, F, mats, name="(x)".join(r.name for r in reps))


def is_scalar_batch(A: np.ndarray) -> np.ndarray:
    d = A.shape[-1]
    eye = np.eye(d, dtype=bool)
    diag = np.diagonal(A, axis1=-2, axis2=-1)
    off_zero = np.where(eye, 0, A).reshape(A.shape[:-2] + (-1,)).any(axis=-1) == 0
    return off_zero & (diag == diag[..., :1]).all(axis=-1)


def scalar_detection_property(F: FieldSpec, m1: int, m2: int, samples: int = 10**4,
                              seed: int = 0) -> dict:
    """A1 (x) A2 scalar iff A1 and A2 are both scalar, over random invertible pairs.

    Half the draws are scalar matrices so both branches of the implication occur.
    """
    rng = np.random.default_rng(seed)

    def draw(m: int) -> np.ndarray:
        out = np.empty((samples, m, m), dtype=np.int64)
        scalar = rng.random(samples) < 0.5
        lam = rng.integers(1, F.q, samples)
        out[scalar] = lam[scalar, None, None] * np.eye(m, dtype=np.int64)
        k = int((~scalar).sum())
        cand = rng.integers(0, F.q, (k * 4, m, m))
        keep = [x for x in cand if _det_nonzero(F, x)][:k]
        while len(keep) < k:
            x = rng.integers(0, F.q, (m, m))
            if _det_nonzero(F, x):
                keep.append(x)
        out[~scalar] = np.array(keep, dtype=np.int64).reshape(k, m, m)
        return out

    A1, A2 = draw(m1), draw(m2)
    T = kron(F, A1, A2)
    lhs = is_scalar_batch(T)
    rhs = is_scalar_batch(A1) & is_scalar_batch(A2)
    return {"samples": samples, "violations": int(np.count_nonzero(lhs != rhs)),
            "scalar_pairs": int(rhs.sum())}


def _det_nonzero(F: FieldSpec, A: np.ndarray) -> bool:
    try:
        F.mat_inv(A)
        return True
    except ZeroInverse:
        return False


# -- graph groups -----------------------------------------------------------------------

class GraphGroup(FiniteGroup):
    """Distinct tuples (A_1(g), ..., A_k(g)) under componentwise multiplication."""

    def __init__(self, comps: list[FiniteGroup], rows: np.ndarray, name: str = "L"):
        rows = np.asarray(rows, dtype=np.int64)
        self.comps = comps
        self.radix = [c.order for c in comps]
        if math.prod(self.radix) >= 2**62:
            raise GroupError("graph group codes overflow")
        codes = self._encode(rows)
        self.codes = np.unique(codes)
        self.rows = self._decode(self.codes)

        def vmul(A, B):
            A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
            ra, rb = self.rows[A.ravel()], self.rows[B.ravel()]
            out = np.stack([c.vmul(ra[:, i], rb[:, i]) for i, c in enumerate(comps)], axis=-1)
            return self.lookup(out).reshape(A.shape)

        def vinv(A):
            A = np.asarray(A, dtype=np.int64)
            ra = self.rows[A.ravel()]
            out = np.stack([c.vinv(ra[:, i]) for i, c in enumerate(comps)], axis=-1)
            return self.lookup(out).reshape(A.shape)

        ident = np.array([[c.identity for c in comps]], dtype=np.int64)
        super().__init__(self.codes.size, vmul=vmul, vinv=vinv,
                         identity=int(self.lookup(ident)[0]),
                         label=lambda i: "(" + ", ".join(
                             c.label(int(x)) for c, x in zip(comps, self.rows[i])) + ")",
                         name=name, structural="componentwise")

    def _encode(self, rows: np.ndarray) -> np.ndarray:
        code = np.zeros(rows.shape[0], dtype=np.int64)
        for i, r in enumerate(self.radix):
            code = code * r + rows[:, i]
        return code

    def _decode(self, codes: np.ndarray) -> np.ndarray:
        cols = []
        rest = codes.copy()
        for r in reversed(self.radix):
            cols.append(rest % r)
            rest = rest // r
        return np.stack(cols[::-1], axis=-1)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        k = self._encode(np.asarray(rows, dtype=np.int64).reshape(-1, len(self.comps)))
        idx = np.searchsorted(self.codes, k)
        idx[idx >= self.codes.size] = 0
        if not np.array_equal(self.codes[idx], k):
            raise GroupError("tuple outside the graph group")
        return idx

    def projection(self, i: int) -> GroupHom:
        return GroupHom(self, self.comps[i], self.rows[:, i], name=f"proj{i}")


def graph_group(reps: list[RepLike], domain: Subgroup | None = None, name: str = "L") -> tuple[GraphGroup, np.ndarray]:
    """Graph group over ``domain`` (default: whole group) and the element -> tuple map."""
    G = reps[0].group
    for r in reps:
        if r.group is not G:
            raise GroupMismatch("reps live on different groups")
    members = np.arange(G.order) if domain is None else domain.members
    rows = np.stack([r.image_index[members] for r in reps], axis=-1)
    L = GraphGroup([r.image for r in reps], rows, name=name)
    return L, L.lookup(rows)


@dataclass
class PairGroup:
    group: GraphGroup
    element_map: np.ndarray          # domain member position -> L index
    domain: Subgroup
    phi: GroupHom
    psi: GroupHom


def pair_group(A: RepLike, B: RepLike, Hp: Subgroup | None = None) -> PairGroup:
    """{(A(h), B(h)) : h in H'} with projections Phi (first) and Psi (second)."""
    if A.group is not B.group:
        raise GroupMismatch("reps live on different groups")
    G = A.group
    dom = whole(G) if Hp is None else Hp
    L, emap = graph_group([A, B], dom, name="L" if Hp is None else "N")
    return PairGroup(L, emap, dom, L.projection(0), L.projection(1))


# -- direct sum / tensor comparison ------------------------------------------------------------

def scalar_coherent(reps: list[Rep]) -> bool:
    """Whenever every component of g is scalar, the scalars agree."""
    scal = np.stack([is_scalar_batch(r.mats) for r in reps], axis=-1).all(axis=-1)
    if not scal.any():
        return True
    lam = np.stack([r.mats[scal, 0, 0] for r in reps], axis=-1)
    return bool((lam == lam[:, :1]).all())


def _image_map(src: RepLike, dst: RepLike, name: str) -> tuple[GroupHom | None, int]:
    """The map src-image -> dst-image induced by g; None when ill defined."""
    images = np.full(src.image.order, -1, dtype=np.int64)
    images[src.image_index] = dst.image_index
    bad = int(np.count_nonzero(images[src.image_index] != dst.image_index))
    if bad:
        return None, bad
    return GroupHom(src.image, dst.image, images, name=name), 0


def tensor_directsum_image_iso(reps: list[Rep], samples: int = 10**4, seed: int = 0) -> dict:
    """Compare the projective images of the direct sum, the tuple group, and the tensor.

    tau: tuple of classes -> class of the Kronecker product is injective (the
    scalar-detection hinge), so the tuple group and the tensor image always
    match.  The direct-sum image maps onto the tuple group, bijectively exactly
    when the reps are scalar-coherent.
    """
    D = direct_sum(reps).projective()
    T = tensor(reps).projective()
    P = [r.projective() for r in reps]
    tup, tup_idx = graph_group(P, name="tuple")
    out: dict = {"order_directsum": D.image.order, "order_tensor": T.image.order,
                 "order_tuple": tup.order, "scalar_coherent": scalar_coherent(reps)}
    # tuple group -> tensor image
    t_images = np.full(tup.order, -1, dtype=np.int64)
    t_images[tup_idx] = T.image_index
    tau_ok = bool(np.array_equal(t_images[tup_idx], T.image_index))
    tau = GroupHom(tup, T.image, t_images, name="tau")
    tau_chk = check_hom(tau, samples=samples, seed=seed) if tau_ok else HomCheck("ill-defined", 1, 0)
    out["tuple_tensor_iso"] = tau_ok and tau_chk.ok and tau.is_bijective()
    # direct-sum image -> tuple group
    d_images = np.full(D.image.order, -1, dtype=np.int64)
    d_images[D.image_index] = tup_idx
    ds_ok = bool(np.array_equal(d_images[D.image_index], tup_idx))
    f = GroupHom(D.image, tup, d_images, name="split-blocks")
    f_chk = check_hom(f, samples=samples, seed=seed) if ds_ok else HomCheck("ill-defined", 1, 0)
    out["directsum_tuple_hom"] = ds_ok and f_chk.ok and f.is_surjective()
    out["directsum_tuple_iso"] = out["directsum_tuple_hom"] and f.is_injective()
    # direct-sum image -> tensor image: the statement under test
    g, bad = _image_map(D, T, "tau~")
    iso = g is not None and check_hom(g, samples=samples, seed=seed).ok and g.is_bijective()
    out["directsum_tensor_iso"] = bool(iso)
    out["witness"] = g
    out["coherence_predicts"] = out["scalar_coherent"] == out["directsum_tensor_iso"]
    return out


# -- projection kernels, largest subgroups, splitting -----------------------------------------

def largest_equal_image_subgroup(pi: RepLike, H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """{g in within : pi(g) in pi(H)}: the full preimage of pi(H)."""
    G = pi.group
    dom = whole(G) if within is None else within
    target = np.unique(pi.image_index[H.members])
    keep = np.isin(pi.image_index[dom.members], target)
    return Subgroup(G, dom.members[keep])


def _intermediate_subgroups(G: FiniteGroup, low: Subgroup, high: Subgroup) -> list[Subgroup]:
    """Subgroups between low and high (unions of low-cosets that close up)."""
    Qh, proj = quotient(G, low, check_normal=False)
    labels = np.unique(proj.images[high.members])
    ident = int(proj.images[G.identity])
    others = [int(x) for x in labels if x != ident]
    if len(others) > 12:
        raise BudgetExceeded("too many cosets for intermediate-subgroup enumeration")
    out = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            cos = [ident, *combo]
            members = high.members[np.isin(proj.images[high.members], cos)]
            if closure(G, members).size == members.size:
                out.append(Subgroup(G, members))
    return out


def _section(A: RepLike, B: RepLike, N: PairGroup, source: Subgroup) -> tuple[GroupHom | None, int]:
    """iota: A(source) -> N, x -> (A(h), B(h)) for h in source with A(h) = x."""
    img = A.image
    a = A.image_index[source.members]
    b = B.image_index[source.members]
    pick = {}
    bad = 0
    for x, y in zip(a.tolist(), b.tolist()):
        if pick.setdefault(x, y) != y:
            bad += 1
    if bad:
        return None, bad
    sub = Subgroup(img, np.array(sorted(pick), dtype=np.int64))
    V = sub.as_group()
    rows = np.array([[x, pick[x]] for x in sub.members.tolist()], dtype=np.int64)
    images = N.group.lookup(rows)
    iota = GroupHom(V, N.group, images, name="iota")
    return iota, 0


def pair_analysis(A: RepLike, B: RepLike, BR: BlockRep, Hp: Subgroup | None = None,
                  samples: int = 10**4, seed: int = 0) -> dict:
    """Kernel, largest-subgroup and splitting claims for N = {(A(h'), B(h'))}.

    With H' = G this is the L-group analysis; ``A`` and ``B`` are pi and the
    induced rho, or their projective versions.
    """
    G, H, T = BR.group, BR.subgroup, BR.transversal
    dom = whole(G) if Hp is None else Hp
    P = pair_group(A, B, None if Hp is None else Hp)
    N, phi, psi = P.group, P.phi, P.psi
    cap = dom.intersect(H)
    rep: dict = {"order_N": N.order, "order_H'": dom.order}
    # (1) Psi onto B(H') is an isomorphism
    b_img = np.unique(B.image_index[dom.members])
    psi_chk = check_hom(psi, samples=samples, seed=seed)
    rep["psi_iso"] = bool(psi.is_injective() and np.array_equal(np.unique(psi.images), b_img)
                          and psi_chk.ok)
    # (2) kernel of Phi embeds in H'/(H' n H), with the kernel formula
    phi_chk = check_hom(phi, samples=samples, seed=seed)
    kphi = phi.kernel()
    Qg, proj = quotient(G, H, check_normal=False)
    gam = np.full(N.order, -1, dtype=np.int64)
    gam[P.element_map] = proj.images[dom.members]
    gamma_ok = bool(np.array_equal(gam[P.element_map], proj.images[dom.members]))
    omega_img = gam[kphi.members]
    kerA = A.kernel().intersect(dom)
    kerA_cap = kerA.intersect(H)
    rep["order_ker_phi"] = kphi.order
    rep["kernel_formula"] = kphi.order * kerA_cap.order == kerA.order
    omega_inj = np.unique(omega_img).size == kphi.order
    omega = GroupHom(kphi.as_group(), Qg, omega_img, name="omega") if gamma_ok else None
    omega_hom = omega is not None and check_hom(omega).ok
    rep["omega_embedding"] = bool(gamma_ok and omega_inj and omega_hom and phi_chk.ok
                                  and set(omega_img.tolist()) == set(proj.images[kerA.members].tolist()))
    J = sorted({int(T.coset_index[g]) for g in kerA.members.tolist()})
    rep["J"] = J
    # (3) N ~ A(H') iff ker A n H' inside H
    a_img = np.unique(A.image_index[dom.members])
    lhs = N.order == a_img.size
    rhs = kerA.issubset(H)
    rep["iff"] = lhs == rhs
    # (4) ker Phi = G'/(H' n H) iff G' is the largest subgroup with A(G') = A(H' n H)
    largest = largest_equal_image_subgroup(A, cap, dom)
    checks = []
    for Gp in _intermediate_subgroups(G, cap, dom):
        left = set(omega_img.tolist()) == set(proj.images[Gp.members].tolist())
        right = Gp == largest
        checks.append(left == right)
    rep["largest_subgroup"] = all(checks)
    rep["intermediate_count"] = len(checks)
    full = set(omega_img.tolist()) == set(proj.images[dom.members].tolist())
    equal_images = np.array_equal(a_img, np.unique(A.image_index[cap.members]))
    rep["in_particular"] = full == bool(equal_images)
    # (5) split when A(H') = A(H' n H)
    rep["hypothesis_equal_images"] = bool(equal_images)
    if equal_images:
        iota, bad = _section(A, B, P, cap)
        ok = iota is not None and check_hom(iota).ok
        if ok:
            back = phi.images[iota.images]
            ok = bool(np.array_equal(back, iota.domain.embedding))
        rep["split_witness"] = ok
        comp = _complement_route(N, kphi)
        rep["split_complement"] = comp
        rep["split"] = ok and comp is not False
    else:
        rep["split_witness"] = None
        rep["split"] = None
    # (6) H inside H' and A(G) = A(H) forces the split
    h_in = H.issubset(dom)
    a_eq = np.array_equal(np.unique(A.image_index), np.unique(A.image_index[H.members]))
    rep["part6"] = (not (h_in and a_eq)) or bool(rep["split"])
    rep["ok"] = all(bool(rep[k]) for k in ("psi_iso", "kernel_formula", "omega_embedding",
                                            "iff", "largest_subgroup", "in_particular", "part6")) \
        and rep["split"] is not False
    return rep


def _complement_route(N: FiniteGroup, K: Subgroup) -> bool | None:
    try:
        return multiplicative_transversal_search(N, K) is not None
    except GroupError:
        return None


def kernel_phi_analysis(pi: Rep, BR: BlockRep, projective: bool = False, **kw) -> dict:
    """Kernels of both projections of L = {(pi(g), rho(g))}, plus the cyclic display."""
    if pi.group is not BR.group or not np.array_equal(pi.mats[BR.subgroup.members], BR.sigma.mats):
        raise NotInducedPair("rho is not induced from the restriction of pi")
    A, B = (pi.projective(), BR.rho.projective()) if projective else (pi, BR.rho)
    rep = pair_analysis(A, B, BR, None, **kw)
    if not projective:
        rep["theta_display"] = theta_display_violations(pi, BR)
    return rep


def theta_display_matrix(pi: Rep, G: FiniteGroup, s: int, n: int, i: int) -> np.ndarray:
    """Displayed rho(h s^i) when pi(h s^i) = 1: pi(s^-i) blocks, then pi(s^(n-i)) after the wrap."""
    m = pi.dim
    out = np.zeros((n * m, n * m), dtype=np.int64)
    for p in range(n):
        q = (p + i) % n
        x = G.pow(s, -i) if p + i < n else G.pow(s, n - i)
        out[p * m:(p + 1) * m, q * m:(q + 1) * m] = pi.mats[x]
    return out


def theta_display_violations(pi: Rep, BR: BlockRep) -> int | None:
    """Check kernel elements of Phi against the displayed theta^i (cyclic transversals only)."""
    G, T, n = BR.group, BR.transversal, BR.n
    if n < 2:
        return 0
    s = T.reps[1]
    if [G.pow(s, k) for k in range(n)] != list(T.reps):
        return None
    ker = pi.kernel().members
    bad = 0
    theta1 = None
    for i in range(n):
        hits = ker[T.coset_index[ker] == i]
        if not hits.size:
            continue
        want = theta_display_matrix(pi, G, s, n, i)
        bad += int(np.count_nonzero((BR.rho.mats[hits] != want).any(axis=(1, 2))))
        if i == 1:
            theta1 = want
    if theta1 is not None:
        F = pi.field
        power = np.eye(theta1.shape[0], dtype=np.int64)
        for i in range(n):
            hits = ker[T.coset_index[ker] == i]
            if hits.size and not np.array_equal(BR.rho.mats[hits[0]], power):
                bad += 1
            power = F.matmul(power, theta1)
    return bad


def L_split_check(pi: RepLike, BR: BlockRep, rho: RepLike | None = None) -> SplitReport:
    """Split of 1 -> ker Phi -> L -> pi(G) -> 1 through iota(pi(h)) = (pi(h), rho(h))."""
    H = BR.subgroup
    rho = BR.rho if rho is None else rho
    a_all = np.unique(pi.image_index)
    a_H = np.unique(pi.image_index[H.members])
    if not np.array_equal(a_all, a_H):
        return SplitReport(None, BR.n, None, NOT_APPLICABLE, details={"reason": "pi(G) != pi(H)"})
    P = pair_group(pi, rho)
    iota, bad = _section(pi, rho, P, H)
    ok = iota is not None and check_hom(iota).ok and \
        np.array_equal(P.phi.images[iota.images], iota.domain.embedding)
    verdict = SPLIT if ok else NO_SPLIT
    return SplitReport(None, BR.n, None, verdict, details={
        "well_defined": bad == 0, "order_L": P.group.order,
        "complement": _complement_route(P.group, P.phi.kernel())})


def L_corollaries(pi: Rep, BR: BlockRep, closed_transversal: bool | None = None) -> dict:
    """The cyclic and the coprime corollaries: hypothesis implies pi(G) = pi(H) and a split."""
    G, H, T, n = BR.group, BR.subgroup, BR.transversal, BR.n
    Q, proj = quotient(G, H)
    split = L_split_check(pi, BR).verdict == SPLIT
    out = {}
    if cyclic_generator(Q) is not None and n > 1:
        # every generating coset sH: ker(pi) n Hs nonempty implies split
        gens = [k for k in range(n) if Q.element_orders[proj.images[T.reps[k]]] == n]
        ker_cos = set(T.coset_index[pi.kernel().members].tolist())
        res = []
        for k in gens:
            hyp = k in ker_cos
            res.append((not hyp) or split)
        out["cyclic"] = all(res)
    if closed_transversal is None:
        closed_transversal = induced_split_check(BR, pi).verdict == SPLIT
    hyp = closed_transversal and math.gcd(n, pi.image.order) == 1
    out["coprime_hypothesis"] = bool(hyp)
    out["coprime"] = (not hyp) or split
    return out


def simple_image_propagation(f: GroupHom | RepLike, H: Subgroup, check_simple: bool = True) -> bool:
    """H normal of index below |S| and f onto a simple S forces f(H) = S."""
    if not isinstance(f, GroupHom):
        f = f.as_hom()
    G, S = f.domain, f.codomain
    if H.parent is not G:
        raise PreconditionFailed("H is not a subgroup of the domain")
    if not H.is_normal():
        raise PreconditionFailed("H is not normal")
    if H.index >= S.order:
        raise PreconditionFailed("[G:H] is not below |S|")
    if not f.is_surjective():
        raise PreconditionFailed("the image is not all of S")
    if check_simple and not is_simple(S):
        raise PreconditionFailed("S is not simple")
    return np.unique(f.images[H.members]).size == S.order


# -- PGL2 versus PSL2 x C2 ------------------------------------------------------------------------

def _conj_positions(G: FiniteGroup, K: Subgroup, x: int) -> np.ndarray:
    """Positions in K of x k x^-1."""
    return K.position[G.vmul(G.vmul(np.full(K.order, x), K.members), G.inv(x))]


def inner_automorphism_match(G: FiniteGroup, K: Subgroup, x: int) -> int | None:
    """Some k in K with k y k^-1 = x y x^-1 for all y in K, or None (exhaustive)."""
    target = _conj_positions(G, K, x)
    for k in K.members.tolist():
        if np.array_equal(_conj_positions(G, K, k), target):
            return k
    return None


def pgl_psl_analysis(p: int, samples: int = 10**4, seed: int = 0) -> dict:
    """Complement, non-isomorphism, outer action and the inner-twist model at p."""
    if p not in (5, 7, 11, 13):
        raise BudgetExceeded("p must be one of 5, 7, 11, 13")
    F = fq_make(p)
    P = pgl2_group(F)
    S = psl2_group(F)
    K = Subgroup(P, P.lookup(S.mats))
    x = P.index_of(psl2_order2_witness(p).array())
    out: dict = {"p": p, "order_pgl2": P.order, "order_psl2": K.order,
                 "witness": P.label(x)}
    # (a) {1, x~} is a complement and PGL2 = PSL2 semidirect C2 explicitly
    T = Transversal(P, K, (P.identity, x))
    out["complement"] = bool(P.mul(x, x) == P.identity and x not in K and T.verify()
                             and T.is_multiplicatively_closed())
    Kg = K.as_group()
    C2 = cyclic_group(2)
    conj = _conj_positions(P, K, x)
    action = np.stack([np.arange(K.order), conj])
    model = semidirect(Kg, C2, action, name="PSL2:C2")
    images = np.array([P.mul(int(K.members[k]), x if c else P.identity)
                       for k in range(K.order) for c in range(2)], dtype=np.int64)
    iso = GroupHom(model, P, images)
    chk = check_hom(iso, samples=samples, seed=seed)
    out["semidirect_iso"] = bool(chk.ok and iso.is_bijective())
    # (b) PGL2 is not PSL2 x C2
    prod = direct_product(S, C2)
    res = is_isomorphic(P, prod)
    out["not_direct"] = not res.isomorphic
    out["not_direct_method"] = res.method
    hp, hq = P.order_histogram(), prod.order_histogram()
    out["histogram_witness"] = sorted(set(hp) - set(hq))
    # (c) conjugation by x~ is not inner
    out["outer"] = inner_automorphism_match(P, K, x) is None
    if p in (5, 7):
        # no involution outside PSL2 centralizes it, so no complement gives a direct product
        invol = np.flatnonzero((P.element_orders == 2) & ~K.mask)
        out["centralizer_criterion"] = all(
            not np.array_equal(_conj_positions(P, K, int(c)), np.arange(K.order))
            for c in invol.tolist())
    # (d) inner-twist models K semidirect C2 with conjugation by k, k an involution or 1
    twist = []
    invol_K = [int(k) for k in np.flatnonzero(Kg.element_orders == 2)[:1].tolist()]
    for k in [Kg.identity] + invol_K:
        act = np.stack([np.arange(K.order), Kg.vmul(Kg.vmul(k, np.arange(K.order)), Kg.inv(k))])
        M = semidirect(Kg, C2, act, name="twist")
        cand = np.array([pp * 2 + c for pp in range(K.order) for c in range(2)], dtype=np.int64)
        # (x, c^i) -> (x k^i, c^i) into S x C2 (S positions coincide with K positions)
        kk = np.array([Kg.mul(pp, k) if c else pp for pp in range(K.order) for c in range(2)])
        cand = kk * 2 + np.tile([0, 1], K.order)
        pos_to_S = S.lookup(P.mats[K.members])
        cand = pos_to_S[cand // 2] * 2 + cand % 2
        direct = is_isomorphic(M, prod, candidate=cand)
        not_pgl = not is_isomorphic(M, P).isomorphic
        centralizes = k == Kg.identity
        twist.append({"k": Kg.label(k), "iso_direct": bool(direct.isomorphic),
                      "not_pgl2": not_pgl, "trivial_action": centralizes})
    out["twist"] = twist
    out["ok"] = bool(out["complement"] and out["semidirect_iso"] and out["not_direct"]
                     and out["outer"] and out.get("centralizer_criterion", True)
                     and all(t["iso_direct"] and t["not_pgl2"] for t in twist))
    return out


# -- finite model of the PSL2 x C2 realisation -----------------------------------------------------

def zywina_model(p: int = 5) -> dict:
    """G = SL2(F_p) x C2 with the natural rep on the first factor, H = SL2 x 1.

    For each transversal {1, s}, s = (a, c) with a^2 = +-I, checks: the
    projective image of the induced rep has order |PSL2| * 2 and splits over
    rho~(H); the action is direct exactly when pi~(s) = 1; conjugation by
    rho~(s) agrees with conjugation by rho~(h') for h' = (a, 1); and the
    result is never PGL2.
    """
    F = fq_make(p)
    SL = sl2_group(F)
    C2 = cyclic_group(2)
    G = direct_product(SL, C2)
    H = Subgroup(G, np.arange(SL.order) * 2)
    pi = Rep(G, F, SL.mats[np.arange(G.order) // 2], name="nat")
    pit = pi.projective()
    M = pit.image
    PGL = pgl2_group(F)
    out: dict = {"p": p, "order_M": M.order,
                 "pi_G_eq_pi_H": bool(np.array_equal(np.unique(pit.image_index),
                                                     np.unique(pit.image_index[H.members])))}
    f = GroupHom(G, M, pit.image_index)
    out["simple_propagation"] = simple_image_propagation(f, H)
    minus = SL.index_of(np.array([[p - 1, 0], [0, p - 1]]))
    a_sq = SL.vmul(np.arange(SL.order), np.arange(SL.order))
    order4 = np.flatnonzero(a_sq == minus)
    cases = []
    for a in [SL.identity, minus] + order4[:2].tolist():
        s = a * 2 + 1
        T = Transversal(G, H, (G.identity, s))
        BR = induce(pi.restrict(H), G, T)
        rt = BR.rho.projective()
        R = rt.image
        RH = Subgroup(R, np.unique(rt.image_index[H.members]))
        rs = int(rt.image_index[s])
        closed = R.mul(rs, rs) == R.identity
        comp = multiplicative_transversal_search(R, RH) is not None
        conj_s = R.vmul(R.vmul(rs, RH.members), R.inv(rs))
        hprime = a * 2
        rh = int(rt.image_index[hprime])
        conj_h = R.vmul(R.vmul(rh, RH.members), R.inv(rh))
        direct = bool(np.array_equal(conj_s, RH.members))
        pis_trivial = int(pit.image_index[s]) == M.identity
        cases.append({
            "a": SL.label(a),
            "order_image": R.order,
            "thm_M": R.order == M.order * 2 and RH.order == M.order and closed and comp,
            "direct_iff_trivial": direct == pis_trivial,
            "inner": bool(np.array_equal(conj_s, conj_h)),
            "not_pgl2": not is_isomorphic(R, PGL).isomorphic if R.order == PGL.order else True,
        })
    out["cases"] = cases
    out["ok"] = bool(out["pi_G_eq_pi_H"] and out["simple_propagation"] and all(
        c["thm_M"] and c["direct_iff_trivial"] and c["inner"] and c["not_pgl2"] for c in cases))
    return out


__all__ = [
    "direct_sum", "tensor", "kron", "scalar_detection_property", "GraphGroup", "graph_group",
    "PairGroup", "pair_group", "scalar_coherent", "tensor_directsum_image_iso",
    "largest_equal_image_subgroup", "pair_analysis", "kernel_phi_analysis",
    "theta_display_matrix", "theta_display_violations", "L_split_check", "L_corollaries",
    "simple_image_propagation", "inner_automorphism_match", "pgl_psl_analysis", "zywina_model",
    "PreconditionFailed", "NotInducedPair", "BudgetExceeded", "ProjRep",
]
