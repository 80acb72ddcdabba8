"""Finite groups on dense indices 0..order-1 with a multiplication oracle.

Groups up to ``TABLE_LIMIT`` elements may carry a full multiplication table
(built lazily, eagerly below ``EAGER_TABLE``); larger ones are oracle-only.
Every group exposes a vectorized ``vmul`` so that closures, coset scans and
homomorphism sweeps run over numpy arrays instead of Python loops.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

TABLE_LIMIT = 5000
EAGER_TABLE = 512
EXHAUSTIVE_LIMIT = 512
DEFAULT_SAMPLES = 10**5
ISO_SEARCH_LIMIT = 512
COMMUTATOR_LIMIT = 10**5


class GroupError(ValueError):
    pass


class IndexOutOfRange(GroupError, IndexError):
    pass


class NotNormal(GroupError):
    pass


class CommutatorTooLarge(GroupError):
    pass


class AbelianizationNotCyclic(GroupError):
    pass


class IndexDoesNotDivide(GroupError):
    pass


class Indeterminate(GroupError):
    pass


class NotSubgroup(GroupError):
    pass


def _as_index_array(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


class FiniteGroup:
    """A finite group whose elements are the integers ``0..order-1``."""

    def __init__(
        self,
        order: int,
        mul: Callable[[int, int], int] | None = None,
        inv: Callable[[int], int] | None = None,
        identity: int = 0,
        label: Callable[[int], str] | None = None,
        *,
        vmul: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
        vinv: Callable[[np.ndarray], np.ndarray] | None = None,
        table: np.ndarray | None = None,
        gens: Sequence[int] | None = None,
        name: str = "G",
        structural: str | None = None,
    ):
        if order < 1:
            raise GroupError("order must be positive")
        if mul is None and vmul is None and table is None:
            raise GroupError("need a multiplication oracle or table")
        self.order = int(order)
        self.identity = int(identity)
        self.name = name
        # Structural associativity argument (recorded in reports for oracle groups).
        self.structural = structural
        self._mul = mul
        self._inv = inv
        self._vmul = vmul
        self._vinv = vinv
        self._label = label
        self._table = None if table is None else np.ascontiguousarray(table, dtype=np.int64)
        self._gens_hint = None if gens is None else [int(g) for g in gens]
        if self._table is None and self.order <= EAGER_TABLE:
            self._table = self._build_table()

    def __repr__(self) -> str:
        return f"<{self.name} order={self.order} backing={self.backing}>"

    def __len__(self) -> int:
        return self.order

    # -- basic oracles ----------------------------------------------------------

    @property
    def backing(self) -> str:
        return "table" if self.order <= TABLE_LIMIT else "oracle"

    @property
    def table(self) -> np.ndarray | None:
        if self._table is None and self.order <= TABLE_LIMIT:
            self._table = self._build_table()
        return self._table

    def _build_table(self) -> np.ndarray:
        n = self.order
        T = np.empty((n, n), dtype=np.int64)
        cols = np.arange(n, dtype=np.int64)
        for a in range(n):
            T[a] = self._raw_vmul(np.full(n, a, dtype=np.int64), cols)
        return T

    def _raw_vmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self._vmul is not None:
            return _as_index_array(self._vmul(A, B))
        A, B = np.broadcast_arrays(_as_index_array(A), _as_index_array(B))
        return np.fromiter((self._mul(int(a), int(b)) for a, b in zip(A.ravel(), B.ravel())),
                           dtype=np.int64, count=A.size).reshape(A.shape)

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        if self._mul is not None:
            return int(self._mul(a, b))
        return int(self._vmul(np.array([a]), np.array([b]))[0])

    def vmul(self, A, B) -> np.ndarray:
        A = _as_index_array(A)
        B = _as_index_array(B)
        if self._table is not None:
            return self._table[A, B]
        return self._raw_vmul(A, B)

    @cached_property
    def _inverse_array(self) -> np.ndarray | None:
        if self.order > TABLE_LIMIT:
            return None
        if self._vinv is not None:
            return _as_index_array(self._vinv(np.arange(self.order)))
        T = self.table
        return np.argmax(T == self.identity, axis=1).astype(np.int64)

    def inv(self, a: int) -> int:
        arr = self._inverse_array
        if arr is not None:
            return int(arr[a])
        if self._inv is not None:
            return int(self._inv(a))
        return int(self._vinv(np.array([a]))[0])

    def vinv(self, A) -> np.ndarray:
        A = _as_index_array(A)
        arr = self._inverse_array
        if arr is not None:
            return arr[A]
        if self._vinv is not None:
            return _as_index_array(self._vinv(A))
        return np.fromiter((self._inv(int(a)) for a in A.ravel()), dtype=np.int64,
                           count=A.size).reshape(A.shape)

    def label(self, a: int) -> str:
        return self._label(int(a)) if self._label else str(int(a))

    def elements(self) -> range:
        return range(self.order)

    def check_index(self, a: int) -> int:
        if not 0 <= int(a) < self.order:
            raise IndexOutOfRange(f"{a} not in [0, {self.order})")
        return int(a)

    # -- derived quantities -------------------------------------------------------

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def vpow(self, A, k: int) -> np.ndarray:
        A = _as_index_array(A)
        result = np.full(A.shape, self.identity, dtype=np.int64)
        base = A
        while k:
            if k & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            k >>= 1
        return result

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def conj(self, a: int, g: int) -> int:
        """g^-1 a g."""
        return self.mul(self.mul(self.inv(g), a), g)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        elems = np.arange(n, dtype=np.int64)
        cur = elems.copy()
        active = np.arange(n, dtype=np.int64)
        k = 1
        while active.size:
            done = cur == self.identity
            orders[active[done]] = k
            active, cur = active[~done], cur[~done]
            cur = self.vmul(cur, active)
            k += 1
        return orders

    def order_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_orders.tolist()).items()))

    def generators(self) -> list[int]:
        """A small generating set (hint from the constructor, else greedy)."""
        if self._gens_hint is not None:
            return list(self._gens_hint)
        return list(self._greedy_generators)

    @cached_property
    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        # larger element orders first keeps the set small
        order_key = np.argsort(-self.element_orders, kind="stable") if self.order <= 10**5 \
            else np.arange(self.order)
        for g in order_key:
            g = int(g)
            if not mask[g]:
                gens.append(g)
                mask[:] = False
                mask[closure(self, gens)] = True
                if mask.all():
                    break
        return gens

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators()
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def verify_axioms(self, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> dict:
        """Identity, inverses, associativity (exhaustive when small, sampled otherwise)."""
        n = self.order
        elems = np.arange(n, dtype=np.int64)
        bad = 0
        bad += int(np.count_nonzero(self.vmul(np.full(n, self.identity), elems) != elems))
        bad += int(np.count_nonzero(self.vmul(elems, np.full(n, self.identity)) != elems))
        bad += int(np.count_nonzero(self.vmul(elems, self.vinv(elems)) != self.identity))
        if n <= exhaustive_limit:
            T = self.table
            for a in range(n):
                left = T[T[a]]              # (a*b)*c over all b, c
                right = T[a][T]             # a*(b*c)
                bad += int(np.count_nonzero(left != right))
            method = "exhaustive"
        else:
            rng = np.random.default_rng(seed)
            A, B, C = (rng.integers(0, n, samples) for _ in range(3))
            left = self.vmul(self.vmul(A, B), C)
            right = self.vmul(A, self.vmul(B, C))
            bad += int(np.count_nonzero(left != right))
            method = "sampled"
            if self.structural:
                method += " + structural"
        return {"method": method, "violations": bad}

    # -- conjugacy ----------------------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> list[np.ndarray]:
        gens = self.generators()
        ginv = [self.inv(g) for g in gens]
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for x in range(self.order):
            if seen[x]:
                continue
            seen[x] = True
            cls = [x]
            frontier = np.array([x], dtype=np.int64)
            while frontier.size:
                new = []
                for g, gi in zip(gens, ginv):
                    y = self.vmul(self.vmul(np.full(frontier.size, gi), frontier), g)
                    y = np.unique(y[~seen[y]])
                    seen[y] = True
                    new.append(y)
                frontier = np.unique(np.concatenate(new)) if new else frontier[:0]
                cls.extend(frontier.tolist())
            classes.append(np.array(sorted(cls), dtype=np.int64))
        return classes


# -- closures and subgroups -------------------------------------------------------

def closure(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Sorted members of the subgroup generated by ``gens`` (breadth-first)."""
    gens = np.unique(_as_index_array(list(gens))) if not isinstance(gens, np.ndarray) \
        else np.unique(gens.astype(np.int64))
    visited = np.zeros(G.order, dtype=bool)
    visited[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    gens = gens[gens != G.identity]
    k = gens.size
    while frontier.size and k:
        prods = G.vmul(np.repeat(frontier, k), np.tile(gens, frontier.size))
        new = np.unique(prods[~visited[prods]])
        visited[new] = True
        frontier = new
    return np.flatnonzero(visited).astype(np.int64)


class Subgroup:
    """A subgroup of ``parent`` given by its sorted member indices."""

    def __init__(self, parent: FiniteGroup, members, gens: Sequence[int] | None = None,
                 *, check: bool = False):
        self.parent = parent
        self.members = np.unique(_as_index_array(members))
        self._gens_hint = None if gens is None else [int(g) for g in gens]
        if check:
            self.verify()

    def __repr__(self) -> str:
        return f"<Subgroup of {self.parent.name} order={self.order}>"

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    def __contains__(self, a) -> bool:
        return bool(self.mask[int(a)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(other.members, self.members))

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members.tobytes()))

    def issubset(self, other: Subgroup) -> bool:
        return bool(other.mask[self.members].all())

    def generators(self) -> list[int]:
        if self._gens_hint is not None:
            return list(self._gens_hint)
        return [int(self.members[i]) for i in self.as_group().generators()]

    def verify(self) -> None:
        """Closed under products and inverses, contains the identity."""
        G = self.parent
        if not self.mask[G.identity]:
            raise NotSubgroup("identity missing")
        if not self.mask[G.vinv(self.members)].all():
            raise NotSubgroup("not closed under inverses")
        gens = self._gens_hint or self.members.tolist()
        if not np.array_equal(closure(G, gens), self.members):
            raise NotSubgroup("not closed under multiplication")

    def is_normal(self) -> bool:
        G = self.parent
        hg = np.array(self.generators(), dtype=np.int64)
        if hg.size == 0:
            return True
        for g in G.generators():
            conj = G.vmul(G.vmul(np.full(hg.size, G.inv(g)), hg), g)
            if not self.mask[conj].all():
                return False
        return True

    def intersect(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, np.intersect1d(self.members, other.members))

    def join(self, other: Subgroup) -> Subgroup:
        gens = self.generators() + other.generators()
        return Subgroup(self.parent, closure(self.parent, gens), gens)

    def as_group(self) -> FiniteGroup:
        return self._view

    @cached_property
    def position(self) -> np.ndarray:
        """Parent index -> position in ``members`` (-1 outside)."""
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[self.members] = np.arange(self.order, dtype=np.int64)
        return pos

    @cached_property
    def _view(self) -> FiniteGroup:
        G, mem, pos = self.parent, self.members, self.position
        gens_pos = None if self._gens_hint is None else [int(pos[g]) for g in self._gens_hint]

        def vmul(A, B):
            return pos[G.vmul(mem[A], mem[B])]

        def vinv(A):
            return pos[G.vinv(mem[_as_index_array(A)])]

        view = FiniteGroup(self.order, vmul=vmul, vinv=vinv, identity=int(pos[G.identity]),
                           label=lambda i: G.label(int(mem[i])), gens=gens_pos,
                           name=f"sub({G.name},{self.order})", structural="restriction")
        view.embedding = mem
        view.subgroup = self
        return view

    def right_coset_labels(self) -> np.ndarray:
        """For each g, the least element of Hg."""
        return _coset_labels(self, right=True)

    def left_coset_labels(self) -> np.ndarray:
        return _coset_labels(self, right=False)


def _coset_labels(H: Subgroup, right: bool) -> np.ndarray:
    G = H.parent
    labels = np.full(G.order, -1, dtype=np.int64)
    for g in range(G.order):
        if labels[g] >= 0:
            continue
        cos = G.vmul(H.members, g) if right else G.vmul(g, H.members)
        labels[cos] = cos.min()
    return labels


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, np.arange(G.order), G.generators())


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity], [])


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [G.check_index(g) for g in gens]
    return Subgroup(G, closure(G, gens), gens)


def normal_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup containing ``gens``."""
    ngens = [int(g) for g in gens]
    members = closure(G, ngens)
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    Ggens = G.generators()
    changed = True
    while changed:
        changed = False
        for g in Ggens:
            gi = G.inv(g)
            for x in list(ngens):
                y = G.mul(G.mul(gi, x), g)
                if not mask[y]:
                    ngens.append(y)
                    members = closure(G, ngens)
                    mask[:] = False
                    mask[members] = True
                    changed = True
    return Subgroup(G, members, ngens)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    """[G, G] as the normal closure of commutators of a generating set.

    For finite G the normal closure of {[a, b] : a, b generators} equals the
    subgroup generated by all commutators.
    """
    if G.order > COMMUTATOR_LIMIT:
        raise CommutatorTooLarge(f"order {G.order} above {COMMUTATOR_LIMIT}")
    gens = G.generators()
    comms = {G.commutator(a, b) for a in gens for b in gens}
    comms.discard(G.identity)
    return normal_closure(G, sorted(comms))


def derived_subgroup_bruteforce(G: FiniteGroup) -> Subgroup:
    """Subgroup generated by every commutator (small groups only)."""
    n = G.order
    elems = np.arange(n, dtype=np.int64)
    comms = set()
    inv = G.vinv(elems)
    for a in range(n):
        ab = G.vmul(np.full(n, a), elems)
        comms.update(G.vmul(ab, G.vmul(np.full(n, inv[a]), inv)).tolist())
    return subgroup_generated(G, sorted(comms))


# -- homomorphisms ----------------------------------------------------------------

@dataclass
class HomCheck:
    method: str
    violations: int
    checked: int

    @property
    def ok(self) -> bool:
        return self.violations == 0


class GroupHom:
    """A map between finite groups stored as an image array."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images, name: str = "f"):
        self.domain = domain
        self.codomain = codomain
        self.images = _as_index_array(images)
        self.name = name
        if self.images.shape != (domain.order,):
            raise GroupError("image array must cover the domain")

    def __call__(self, a):
        if isinstance(a, (int, np.integer)):
            return int(self.images[a])
        return self.images[_as_index_array(a)]

    def image(self) -> np.ndarray:
        return np.unique(self.images)

    def is_injective(self) -> bool:
        return np.unique(self.images).size == self.domain.order

    def is_surjective(self) -> bool:
        return np.unique(self.images).size == self.codomain.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, np.flatnonzero(self.images == self.codomain.identity))

    def compose(self, other: GroupHom) -> GroupHom:
        """self after other."""
        return GroupHom(other.domain, self.codomain, self.images[other.images])

    def check(self, exhaustive_limit: int = EXHAUSTIVE_LIMIT, samples: int = DEFAULT_SAMPLES,
              seed: int = 0) -> HomCheck:
        return check_hom(self, exhaustive_limit, samples, seed)

    def pairs(self) -> list[list[int]]:
        return [[i, int(x)] for i, x in enumerate(self.images)]

    def to_json(self) -> str:
        return json.dumps(self.pairs())


def check_hom(f: GroupHom, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
              samples: int = DEFAULT_SAMPLES, seed: int = 0) -> HomCheck:
    """f(ab) = f(a)f(b): all pairs when small; else a generator sweep plus samples.

    The generator sweep (f(gx) = f(g)f(x) for every generator g and every x) is
    by itself a complete proof; random pairs are an extra independent probe.
    """
    D, C, im = f.domain, f.codomain, f.images
    n = D.order
    elems = np.arange(n, dtype=np.int64)
    bad = int(im[D.identity] != C.identity)
    if n <= exhaustive_limit:
        for a in range(n):
            lhs = im[D.vmul(np.full(n, a), elems)]
            rhs = C.vmul(np.full(n, im[a]), im)
            bad += int(np.count_nonzero(lhs != rhs))
        return HomCheck("exhaustive", bad, n * n)
    checked = 0
    for g in D.generators():
        lhs = im[D.vmul(np.full(n, g), elems)]
        rhs = C.vmul(np.full(n, im[g]), im)
        bad += int(np.count_nonzero(lhs != rhs))
        checked += n
    if samples:
        rng = np.random.default_rng(seed)
        A = rng.integers(0, n, samples)
        B = rng.integers(0, n, samples)
        bad += int(np.count_nonzero(im[D.vmul(A, B)] != C.vmul(im[A], im[B])))
        checked += samples
    return HomCheck("generators+sampled", bad, checked)


# -- quotients and transversals -----------------------------------------------------

def quotient(G: FiniteGroup, N: Subgroup, *, check_normal: bool = True) -> tuple[FiniteGroup, GroupHom]:
    """G/N on canonical coset labels (least member) plus the projection."""
    if check_normal and not N.is_normal():
        raise NotNormal(f"{N} is not normal in {G.name}")
    labels = N.left_coset_labels()
    reps = np.unique(labels)
    qidx = np.searchsorted(reps, labels).astype(np.int64)

    def vmul(A, B):
        return qidx[G.vmul(reps[A], reps[B])]

    def vinv(A):
        return qidx[G.vinv(reps[_as_index_array(A)])]

    Q = FiniteGroup(reps.size, vmul=vmul, vinv=vinv, identity=int(qidx[G.identity]),
                    label=lambda i: f"{G.label(int(reps[i]))}N",
                    gens=sorted({int(qidx[g]) for g in G.generators()} - {int(qidx[G.identity])}),
                    name=f"{G.name}/N", structural="quotient")
    Q.coset_reps = reps
    return Q, GroupHom(G, Q, qidx, name="proj")


@dataclass
class Transversal:
    """Ordered right-coset representatives of ``subgroup`` with reps[0] in it."""

    parent: FiniteGroup
    subgroup: Subgroup
    reps: tuple[int, ...]

    def __post_init__(self) -> None:
        self.reps = tuple(int(r) for r in self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    @cached_property
    def coset_index(self) -> np.ndarray:
        """k such that g lies in H * reps[k], for every g."""
        G, H = self.parent, self.subgroup
        idx = np.full(G.order, -1, dtype=np.int64)
        for k, s in enumerate(self.reps):
            cos = G.vmul(H.members, s)
            if (idx[cos] >= 0).any():
                raise GroupError("representatives share a coset")
            idx[cos] = k
        return idx

    def verify(self) -> bool:
        if len(self.reps) != self.subgroup.index or self.reps[0] not in self.subgroup:
            return False
        try:
            return bool((self.coset_index >= 0).all())
        except GroupError:
            return False

    def is_multiplicatively_closed(self) -> bool:
        s = set(self.reps)
        G = self.parent
        return all(G.mul(a, b) in s for a in self.reps for b in self.reps)


def transversal_enumerate(G: FiniteGroup, H: Subgroup) -> Transversal:
    """Least element of each right coset; the subgroup's coset is represented by 1."""
    labels = H.right_coset_labels()
    reps = sorted(set(np.unique(labels).tolist()) - {int(labels[G.identity])})
    return Transversal(G, H, (G.identity, *reps))


# -- abelianization -------------------------------------------------------------------

def cyclic_generator(Q: FiniteGroup) -> int | None:
    hits = np.flatnonzero(Q.element_orders == Q.order)
    return int(hits[0]) if hits.size else None


def unique_abelian_index_n(G: FiniteGroup, n: int, D: Subgroup | None = None) -> Subgroup:
    """{x : image of x in G/[G,G] is an n-th power}, for cyclic abelianization."""
    D = derived_subgroup(G) if D is None else D
    Q, proj = quotient(G, D, check_normal=False)
    m = Q.order
    if cyclic_generator(Q) is None:
        raise AbelianizationNotCyclic(f"G/[G,G] of order {m} is not cyclic")
    if m % n:
        raise IndexDoesNotDivide(f"{n} does not divide {m}")
    powers = np.unique(Q.vpow(np.arange(m), n))
    members = np.flatnonzero(np.isin(proj.images, powers))
    H = Subgroup(G, members)
    if H.index != n or not H.is_normal():
        raise GroupError("postcondition failed for the abelian index-n subgroup")
    Qh, _ = quotient(G, H, check_normal=False)
    if cyclic_generator(Qh) is None:
        raise GroupError("quotient by the index-n subgroup is not cyclic")
    return H


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups: joins of normal closures of conjugacy classes."""
    atoms: dict[bytes, Subgroup] = {}
    for cls in G.conjugacy_classes:
        N = normal_closure(G, [int(cls[0])])
        atoms.setdefault(N.members.tobytes(), N)
    found = dict(atoms)
    found.setdefault(trivial_subgroup(G).members.tobytes(), trivial_subgroup(G))
    frontier = list(found.values())
    atom_list = list(atoms.values())
    while frontier:
        new = []
        for N in frontier:
            for A in atom_list:
                if A.issubset(N):
                    continue
                J = N.join(A)
                key = J.members.tobytes()
                if key not in found:
                    found[key] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda S: (S.order, S.members.tolist()))


def has_abelian_quotient(G: FiniteGroup, N: Subgroup) -> bool:
    gens = G.generators()
    return all(G.commutator(a, b) in N for a in gens for b in gens)


def is_simple(G: FiniteGroup) -> bool:
    """No proper nontrivial normal subgroup (union-of-classes subset test)."""
    if G.order == 1:
        return False
    classes = [c for c in G.conjugacy_classes if G.identity not in c.tolist()]
    sizes = [c.size for c in classes]
    for r in range(1, len(classes)):
        for combo in itertools.combinations(range(len(classes)), r):
            total = 1 + sum(sizes[i] for i in combo)
            if total == G.order or G.order % total:
                continue
            members = np.concatenate([[G.identity]] + [classes[i] for i in combo])
            if closure(G, members).size == total:
                return False
    return True


# -- isomorphism ------------------------------------------------------------------------

@dataclass
class IsoResult:
    isomorphic: bool
    method: str
    witness: GroupHom | None = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _small_generating_set(G: FiniteGroup) -> list[int]:
    orders = G.element_orders
    by_order = np.argsort(-orders, kind="stable")
    cand = [int(x) for x in by_order[:64]]
    for g in cand:
        if orders[g] == G.order:
            return [g]
    for a, b in itertools.combinations(cand, 2):
        if closure(G, [a, b]).size == G.order:
            return [a, b]
    return G.generators()


def _extend_by_words(G1: FiniteGroup, G2: FiniteGroup, gens: list[int], imgs: list[int]):
    """Extend gens -> imgs along the Cayley graph; None if inconsistent."""
    f = {G1.identity: G2.identity}
    queue = deque([G1.identity])
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, h in zip(gens, imgs):
            y = G1.mul(x, g)
            fy = G2.mul(fx, h)
            if y in f:
                if f[y] != fy:
                    return None
            else:
                f[y] = fy
                queue.append(y)
    return f


def is_isomorphic(G1: FiniteGroup, G2: FiniteGroup, candidate=None,
                  search_limit: int = ISO_SEARCH_LIMIT) -> IsoResult:
    """Order filter, order-histogram filter, then generator-image backtracking."""
    if G1.order != G2.order:
        return IsoResult(False, "order")
    if candidate is not None:
        f = candidate if isinstance(candidate, GroupHom) else GroupHom(G1, G2, candidate)
        ok = f.is_bijective() and f.check().ok
        if ok:
            return IsoResult(True, "candidate", f)
    if G1.order_histogram() != G2.order_histogram():
        return IsoResult(False, "histogram")
    if G1.order > search_limit:
        raise Indeterminate(f"order {G1.order} above the search cap and no candidate map")
    gens = _small_generating_set(G1)
    o1 = G1.element_orders
    o2 = G2.element_orders
    reps2 = {int(c[0]) for c in G2.conjugacy_classes}
    options = []
    for i, g in enumerate(gens):
        cands = np.flatnonzero(o2 == o1[g]).tolist()
        if i == 0:
            cands = [c for c in cands if c in reps2]
        options.append(cands)

    def search(level: int, imgs: list[int]):
        if level == len(gens):
            f = _extend_by_words(G1, G2, gens, imgs)
            if f is not None and len(set(f.values())) == G1.order:
                return f
            return None
        for c in options[level]:
            trial = imgs + [c]
            if _extend_by_words(G1, G2, gens[:level + 1], trial) is None:
                continue
            out = search(level + 1, trial)
            if out is not None:
                return out
        return None

    f = search(0, [])
    if f is None:
        return IsoResult(False, "backtracking")
    images = np.array([f[i] for i in range(G1.order)], dtype=np.int64)
    return IsoResult(True, "backtracking", GroupHom(G1, G2, images, name="iso"))


# -- standard constructions ---------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    """C_n on exponents: element k is g^k."""
    def vmul(A, B):
        return (A + B) % n

    def vinv(A):
        return (-A) % n

    return FiniteGroup(n, vmul=vmul, vinv=vinv, identity=0,
                       label=lambda k: "1" if k == 0 else ("g" if k == 1 else f"g^{k}"),
                       gens=[1] if n > 1 else [], name=f"C{n}", structural="modular addition")


def _cycle_notation(perm: tuple[int, ...]) -> str:
    seen, parts = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        parts.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on lexicographically ordered permutations; (a*b)(i) = a(b(i))."""
    perms = list(itertools.permutations(range(n)))
    arr = np.array(perms, dtype=np.int64).reshape(len(perms), n)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = arr @ weights
    order = np.argsort(codes)
    codes = codes[order]

    def vmul(A, B):
        A, B = np.broadcast_arrays(_as_index_array(A), _as_index_array(B))
        comp = np.take_along_axis(arr[A.ravel()], arr[B.ravel()], axis=1)
        return np.searchsorted(codes, comp @ weights).reshape(A.shape)

    def vinv(A):
        A = _as_index_array(A)
        inv = np.argsort(arr[A.ravel()], axis=1)
        return np.searchsorted(codes, inv @ weights).reshape(A.shape)

    gens = []
    if n >= 2:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        cyc = list(range(1, n)) + [0]
        gens = sorted({perms.index(tuple(swap)), perms.index(tuple(cyc))})
    G = FiniteGroup(len(perms), vmul=vmul, vinv=vinv, identity=0,
                    label=lambda i: _cycle_notation(perms[i]), gens=gens, name=f"S{n}",
                    structural="permutation composition")
    G.perms = perms
    return G


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    """G1 x G2 with element (a, b) stored as a*|G2| + b."""
    n2 = G2.order

    def vmul(A, B):
        return G1.vmul(A // n2, B // n2) * n2 + G2.vmul(A % n2, B % n2)

    def vinv(A):
        return G1.vinv(A // n2) * n2 + G2.vinv(A % n2)

    e = G1.identity * n2 + G2.identity
    gens = [g * n2 + G2.identity for g in G1.generators()] + \
           [G1.identity * n2 + h for h in G2.generators()]
    D = FiniteGroup(G1.order * n2, vmul=vmul, vinv=vinv, identity=e,
                    label=lambda i: f"({G1.label(i // n2)}, {G2.label(i % n2)})",
                    gens=gens, name=f"({G1.name} x {G2.name})", structural="componentwise")
    D.factors = (G1, G2)
    return D


def pair_index(D: FiniteGroup, a: int, b: int) -> int:
    return a * D.factors[1].order + b


def group_from_table(table, identity: int | None = None, name: str = "T") -> FiniteGroup:
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    if T.shape != (n, n) or T.min() < 0 or T.max() >= n:
        raise GroupError("table must be square with entries in range")
    if identity is None:
        rows = [i for i in range(n) if np.array_equal(T[i], np.arange(n))]
        if not rows:
            raise GroupError("no identity row")
        identity = rows[0]
    return FiniteGroup(n, table=T, identity=identity, name=name, vmul=lambda A, B: T[A, B])


def export_table(G: FiniteGroup) -> str:
    T = G.table
    if T is None:
        raise GroupError(f"order {G.order} above the table cap")
    lines = [f"order={G.order}"] + [" ".join(map(str, row)) for row in T.tolist()]
    return "\n".join(lines) + "\n"


def parse_table(text: str, name: str = "T") -> FiniteGroup:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("order="):
        raise GroupError("table text must start with order=N")
    n = int(lines[0].split("=", 1)[1])
    rows = [list(map(int, ln.split())) for ln in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise GroupError("table shape does not match order")
    return group_from_table(rows, name=name)


def coset_count_check(G: FiniteGroup, N: Subgroup) -> bool:
    Q, proj = quotient(G, N)
    return Q.order * N.order == G.order and proj.check().ok

