"""Matrix groups over GF(q): GL2, SL2, PGL2, PSL2 and generated matrix groups.

``MatrixGroup`` stores its elements as a sorted stack of code matrices.  The
order is lexicographic on the row-major entries, so for GL2 it is the
entry-lex order on (a, b, c, d).  A projective matrix group stores one
normalized matrix per scalar class (first nonzero entry equal to 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import FieldSpec, FqElem, fq_make, is_prime, least_nonsquare, nth_powers
from .grp import FiniteGroup, GroupError, GroupHom, Subgroup, is_simple

MAX_Q = 31


class FieldTooLarge(GroupError):
    pass


class CongruenceFailed(GroupError):
    pass


class NoWitness(GroupError):
    pass


class NotInGroup(GroupError):
    pass


# -- single 2x2 matrices -------------------------------------------------------------

@dataclass(frozen=True)
class Mat2:
    """An invertible 2x2 matrix [[a, b], [c, d]] of field codes."""

    field: FieldSpec
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.det() == 0:
            raise GroupError("singular matrix")

    @classmethod
    def from_array(cls, F: FieldSpec, A) -> Mat2:
        A = np.asarray(A).reshape(2, 2)
        return cls(F, int(A[0, 0]), int(A[0, 1]), int(A[1, 0]), int(A[1, 1]))

    @property
    def entries(self) -> tuple[FqElem, FqElem, FqElem, FqElem]:
        F = self.field
        return F(self.a), F(self.b), F(self.c), F(self.d)

    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    def det(self) -> int:
        F = self.field
        return F.sub(F.mul(self.a, self.d), F.mul(self.b, self.c))

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2.from_array(self.field, self.field.matmul(self.array(), other.array()))

    __mul__ = __matmul__

    def __pow__(self, k: int) -> Mat2:
        M = self if k >= 0 else self.inverse()
        out = Mat2(self.field, 1, 0, 0, 1)
        for _ in range(abs(k)):
            out = out @ M
        return out

    def inverse(self) -> Mat2:
        F = self.field
        di = F.inv(self.det())
        return Mat2(F, F.mul(self.d, di), F.mul(F.neg(self.b), di),
                    F.mul(F.neg(self.c), di), F.mul(self.a, di))

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def render(self) -> str:
        return render_matrix(self.field, self.array())

    __str__ = render


@dataclass(frozen=True)
class ProjClass:
    """Scalar class of a Mat2, stored via its normalized representative."""

    rep: Mat2

    @classmethod
    def of(cls, M: Mat2) -> ProjClass:
        F = M.field
        return cls(Mat2.from_array(F, F.canonical_scalar_class(M.array())))

    def __mul__(self, other: ProjClass) -> ProjClass:
        return ProjClass.of(self.rep @ other.rep)

    def is_identity(self) -> bool:
        return self.rep.is_scalar()

    def render(self) -> str:
        return self.rep.render()


def render_matrix(F: FieldSpec, A) -> str:
    rows = ",".join("[" + ",".join(F.render(int(x)) for x in row) + "]" for row in np.asarray(A))
    return f"[{rows}] over GF({F.q})"


# -- matrix groups --------------------------------------------------------------------

class _KeyCodec:
    """Maps stacks of m x m code matrices to sortable keys."""

    def __init__(self, q: int, m: int):
        self.m = m
        self.use_int = q ** (m * m) < 2**62
        if self.use_int:
            self.weights = np.array([q ** (m * m - 1 - i) for i in range(m * m)], dtype=np.int64)

    def keys(self, mats: np.ndarray):
        flat = mats.reshape(-1, self.m * self.m)
        if self.use_int:
            return flat @ self.weights
        return [row.tobytes() for row in flat.astype(np.int32)]


class MatrixGroup(FiniteGroup):
    """A finite group of m x m matrices (or scalar classes) over a field."""

    def __init__(self, field: FieldSpec, mats, *, projective: bool = False, name: str = "M",
                 gens=None):
        mats = np.asarray(mats, dtype=np.int64)
        if projective:
            mats = field.canonical_scalar_class(mats)
        self.field = field
        self.dim = mats.shape[-1]
        self.projective = projective
        self.codec = _KeyCodec(field.q, self.dim)
        if self.codec.use_int:
            keys = self.codec.keys(mats)
            keys, first = np.unique(keys, return_index=True)
            self.mats = np.ascontiguousarray(mats[first])
            self.keys = keys
            self._dict = None
        else:
            flat = mats.reshape(mats.shape[0], -1)
            uniq = np.unique(flat, axis=0)          # lexicographic rows
            self.mats = np.ascontiguousarray(uniq.reshape(-1, self.dim, self.dim))
            self.keys = None
            self._dict = {k: i for i, k in enumerate(self.codec.keys(self.mats))}
        ident = np.eye(self.dim, dtype=np.int64)
        F = field
        super().__init__(
            self.mats.shape[0], vmul=self._vmul, vinv=self._vinv,
            identity=int(self.lookup(ident[None])[0]),
            label=lambda i: render_matrix(F, self.mats[i]),
            gens=gens, name=name, structural="matrix multiplication",
        )

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        """Indices of the given matrices (normalized first when projective)."""
        mats = np.asarray(mats, dtype=np.int64)
        shape = mats.shape[:-2]
        mats = mats.reshape(-1, self.dim, self.dim)
        if self.projective:
            mats = self.field.canonical_scalar_class(mats)
        if self.keys is not None:
            k = self.codec.keys(mats)
            idx = np.searchsorted(self.keys, k)
            idx[idx >= self.keys.size] = 0
            if not np.array_equal(self.keys[idx], k):
                raise NotInGroup("matrix outside the group")
        else:
            try:
                idx = np.array([self._dict[k] for k in self.codec.keys(mats)], dtype=np.int64)
            except KeyError as exc:
                raise NotInGroup("matrix outside the group") from exc
        return idx.reshape(shape)

    def index_of(self, M) -> int:
        if isinstance(M, Mat2):
            M = M.array()
        return int(self.lookup(np.asarray(M)[None])[0])

    def _vmul(self, A, B):
        A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
        prod = self.field.matmul(self.mats[A.ravel()], self.mats[B.ravel()])
        return self.lookup(prod).reshape(A.shape)

    def _vinv(self, A):
        A = np.asarray(A, dtype=np.int64)
        M = self.mats[A.ravel()]
        F = self.field
        if self.dim == 2:
            a, b, c, d = M[:, 0, 0], M[:, 0, 1], M[:, 1, 0], M[:, 1, 1]
            det = F.vadd(F.vmul(a, d), F.vneg(F.vmul(b, c)))
            di = F.vinv(det)
            inv = np.stack([F.vmul(d, di), F.vmul(F.vneg(b), di),
                            F.vmul(F.vneg(c), di), F.vmul(a, di)], axis=-1).reshape(-1, 2, 2)
        else:
            inv = np.array([F.mat_inv(x) for x in M], dtype=np.int64).reshape(-1, self.dim, self.dim)
        return self.lookup(inv).reshape(A.shape)

    def mat(self, i: int) -> np.ndarray:
        return self.mats[i]

    def mat2(self, i: int) -> Mat2:
        return Mat2.from_array(self.field, self.mats[i])


def matrix_closure(field: FieldSpec, gens, *, projective: bool = False, name: str = "M",
                   limit: int = 10**6) -> MatrixGroup:
    """The matrix group generated by ``gens`` (breadth-first over products)."""
    gens = np.asarray(gens, dtype=np.int64)
    m = gens.shape[-1] if gens.size else 1
    gens = gens.reshape(-1, m, m)
    if projective:
        gens = field.canonical_scalar_class(gens)
    codec = _KeyCodec(field.q, m)
    ident = np.eye(m, dtype=np.int64)[None]
    seen = set(np.asarray(codec.keys(ident)).tolist() if codec.use_int else codec.keys(ident))
    found = [ident]
    frontier = ident
    while frontier.shape[0] and gens.shape[0]:
        prods = field.matmul(frontier[:, None], gens[None]).reshape(-1, m, m)
        if projective:
            prods = field.canonical_scalar_class(prods)
        keys = codec.keys(prods)
        keys = keys.tolist() if codec.use_int else keys
        new_rows = []
        for i, k in enumerate(keys):
            if k not in seen:
                seen.add(k)
                new_rows.append(i)
        frontier = prods[new_rows]
        found.append(frontier)
        if len(seen) > limit:
            raise GroupError(f"generated matrix group exceeds {limit} elements")
    G = MatrixGroup(field, np.concatenate(found), projective=projective, name=name)
    G._gens_hint = [int(x) for x in G.lookup(gens)] if gens.shape[0] else []
    return G


# -- GL2 and relatives -----------------------------------------------------------------

def _check_q(F: FieldSpec) -> None:
    if F.q > MAX_Q:
        raise FieldTooLarge(f"q = {F.q} above the enumeration cap {MAX_Q}")


def _all_gl2(F: FieldSpec) -> np.ndarray:
    q = F.q
    a, b, c, d = (x.ravel() for x in np.indices((q, q, q, q), dtype=np.int64))
    det = F.vadd(F.vmul(a, d), F.vneg(F.vmul(b, c)))
    keep = det != 0
    return np.stack([a[keep], b[keep], c[keep], d[keep]], axis=-1).reshape(-1, 2, 2)


@lru_cache(maxsize=None)
def gl2_group(F: FieldSpec) -> MatrixGroup:
    """GL2(F) with elements in entry-lex order; order (q^2-1)(q^2-q)."""
    _check_q(F)
    return MatrixGroup(F, _all_gl2(F), name=f"GL2(F{F.q})")


def det_codes(G: MatrixGroup) -> np.ndarray:
    F, M = G.field, G.mats
    return F.vadd(F.vmul(M[:, 0, 0], M[:, 1, 1]), F.vneg(F.vmul(M[:, 0, 1], M[:, 1, 0])))


def det_kernel(G: MatrixGroup) -> Subgroup:
    return Subgroup(G, np.flatnonzero(det_codes(G) == 1))


def det_power_subgroup(G: MatrixGroup, n: int) -> Subgroup:
    """{x : det(x) is an n-th power in F^x}."""
    F = G.field
    if (F.q - 1) % n:
        raise CongruenceFailed(f"q = {F.q} is not 1 mod {n}")
    powers = np.array(sorted(nth_powers(F, n)), dtype=np.int64)
    return Subgroup(G, np.flatnonzero(np.isin(det_codes(G), powers)))


def scalar_subgroup(G: MatrixGroup) -> Subgroup:
    M = G.mats
    mask = (M[:, 0, 1] == 0) & (M[:, 1, 0] == 0) & (M[:, 0, 0] == M[:, 1, 1])
    return Subgroup(G, np.flatnonzero(mask))


@lru_cache(maxsize=None)
def sl2_group(F: FieldSpec) -> MatrixGroup:
    _check_q(F)
    G = gl2_group(F)
    return MatrixGroup(F, G.mats[det_kernel(G).members], name=f"SL2(F{F.q})")


def submatrix_group(G: MatrixGroup, H: Subgroup, name: str | None = None) -> MatrixGroup:
    """A subgroup of a matrix group as a matrix group in its own right."""
    return MatrixGroup(G.field, G.mats[H.members], projective=G.projective,
                       name=name or f"sub({G.name})")


def projective_group(G: MatrixGroup | Subgroup) -> tuple[MatrixGroup, GroupHom]:
    """Scalar classes of a matrix group plus the projection."""
    if isinstance(G, Subgroup):
        G = submatrix_group(G.parent, G)
    P = MatrixGroup(G.field, G.mats, projective=True, name=f"P{G.name}")
    return P, GroupHom(G, P, P.lookup(G.mats), name="proj")


@lru_cache(maxsize=None)
def pgl2_group(F: FieldSpec) -> MatrixGroup:
    P, _ = projective_group(gl2_group(F))
    P.name = f"PGL2(F{F.q})"
    return P


@lru_cache(maxsize=None)
def psl2_group(F: FieldSpec) -> MatrixGroup:
    P, _ = projective_group(sl2_group(F))
    P.name = f"PSL2(F{F.q})"
    return P


def psl2_order2_witness(p: int) -> Mat2:
    """x = [[1, r+1], [-1, -1]] with r the least non-square other than -1.

    det(x) = r and x^2 = -r * I, so the class of x has order 2 in PGL2 and
    lies outside the image of Z * SL2.
    """
    if not is_prime(p) or p < 5:
        raise NoWitness(f"need a prime p >= 5, got {p}")
    F = fq_make(p)
    r = least_nonsquare(F, exclude=(p - 1,))
    x = Mat2(F, 1, (r + 1) % p, p - 1, p - 1)
    if x.det() != r or not (x @ x).is_scalar():
        raise NoWitness("witness postcondition failed")
    return x


def is_simple_group(G: FiniteGroup) -> bool:
    return is_simple(G)


def diag(F: FieldSpec, a: int, d: int) -> Mat2:
    return Mat2(F, a, 0, 0, d)
