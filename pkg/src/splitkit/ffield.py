"""Exact arithmetic in GF(p^r).

Elements are stored as integer codes ``c0 + c1*p + ... + c_{r-1}*p^(r-1)``
where ``c_i`` are the little-endian coefficients of the residue class in
``GF(p)[t] / (modulus)``.  The canonical order on elements is the order on
codes.  Small fields (q <= TABLE_LIMIT) carry numpy add/mul/inv tables that
the matrix code uses for vectorized products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

MAX_ORDER = 10**6
MAX_DEGREE = 6
TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class DegreeTooLarge(FieldError):
    pass


class NoIrreducibleFound(FieldError):
    pass


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


class ZeroElement(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomials over GF(p): little-endian coefficient lists -----------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials in increasing code order of the low coefficients."""
    for code in range(p**d):
        low = [(code // p**i) % p for i in range(d)]
        yield low + [1]


def is_irreducible(m: list[int], p: int) -> bool:
    """Trial factorization: no monic factor of degree 1..deg//2."""
    d = len(m) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for f in _monic_polys(p, k):
            if not _poly_mod(m, f, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^r) presented as GF(p)[t]/(modulus)."""

    p: int
    r: int
    modulus: tuple[int, ...]
    q: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", self.p**self.r)
        if len(self.modulus) != self.r + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree r")

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # -- code <-> coefficients ------------------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        p = self.p
        return tuple((code // p**i) % p for i in range(self.r))

    def code(self, coeffs) -> int:
        if len(coeffs) != self.r:
            raise FieldError(f"expected {self.r} coefficients")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> FqElem:
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldMismatch(f"{value.field} vs {self}")
            return value
        if isinstance(value, int):
            if self.r == 1:
                return FqElem(self, (value % self.p,))
            if not 0 <= value < self.q:
                raise FieldError(f"code {value} out of range for {self}")
            return FqElem(self, self.coeffs(value))
        return FqElem(self, tuple(int(c) % self.p for c in value))

    def elements(self) -> list[FqElem]:
        return [self(c) for c in range(self.q)]

    # -- scalar arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if self._tables is not None:
            return int(self._tables[0][a, b])
        p = self.p
        out, w = 0, 1
        for _ in range(self.r):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        p = self.p
        out, w = 0, 1
        for _ in range(self.r):
            out += (-(a % p) % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if self._tables is not None:
            return int(self._tables[1][a, b])
        return self._poly_mul(a, b)

    def _poly_mul(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _poly_mod(prod, list(self.modulus), p)
        return self.code(red + [0] * (self.r - len(red)))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in {self}")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        if self._tables is not None:
            return int(self._tables[2][a])
        return self.pow(a, self.q - 2)

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroElement("0 has no multiplicative order")
        n = self.q - 1
        order = n
        for prime in factorize(n) if n > 1 else {}:
            while order % prime == 0 and self.pow(a, order // prime) == 1:
                order //= prime
        return order

    def render(self, code: int) -> str:
        if self.r == 1:
            return str(code)
        terms = []
        for i, c in enumerate(self.coeffs(code)):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        return "+".join(terms) if terms else "0"

    # -- tables for vectorized work -------------------------------------------

    @cached_property
    def _tables(self):
        if self.r == 1 or self.q > TABLE_LIMIT:
            return None
        q = self.q
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        p = self.p
        digits = np.array([self.coeffs(c) for c in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.r, dtype=np.int64)
        for a in range(q):
            add[a] = ((digits[a] + digits) % p) @ weights
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self._poly_mul(a, b)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return add, mul, inv

    @cached_property
    def inv_table(self) -> np.ndarray:
        if self.r == 1:
            p = self.p
            return np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
        return self.np_tables[3]

    @cached_property
    def np_tables(self):
        """(add, mul, neg, inv) numpy tables indexed by code; q <= TABLE_LIMIT."""
        if self.q > TABLE_LIMIT:
            raise FieldError(f"{self} too large for table arithmetic")
        q, p = self.q, self.p
        if self.r == 1:
            a = np.arange(q, dtype=np.int64)
            add = (a[:, None] + a[None, :]) % p
            mul = (a[:, None] * a[None, :]) % p
            inv = np.array([0] + [pow(int(x), p - 2, p) for x in range(1, q)], dtype=np.int64)
        else:
            add, mul, inv = self._tables
        neg = np.array([self.neg(c) for c in range(q)], dtype=np.int64)
        return add, mul, neg, inv

    # -- elementwise numpy arithmetic on code arrays ----------------------------

    def vadd(self, A, B) -> np.ndarray:
        if self.r == 1:
            return (np.asarray(A) + np.asarray(B)) % self.p
        return self.np_tables[0][A, B]

    def vmul(self, A, B) -> np.ndarray:
        if self.r == 1:
            return (np.asarray(A) * np.asarray(B)) % self.p
        return self.np_tables[1][A, B]

    def vneg(self, A) -> np.ndarray:
        if self.r == 1:
            return (-np.asarray(A)) % self.p
        return self.np_tables[2][A]

    def vinv(self, A) -> np.ndarray:
        return self.inv_table[A]

    # -- matrices of codes (numpy int arrays, batched over leading axes) ------

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return np.matmul(A, B) % self.p
        add, mul, _, _ = self.np_tables
        k = A.shape[-1]
        out = mul[A[..., :, 0:1], B[..., 0:1, :]]
        for i in range(1, k):
            out = add[out, mul[A[..., :, i:i + 1], B[..., i:i + 1, :]]]
        return out

    def scale(self, c, A: np.ndarray) -> np.ndarray:
        """Multiply matrices A by scalars c (broadcast over leading axes)."""
        c = np.asarray(c, dtype=np.int64)
        if self.r == 1:
            return (A * c[..., None, None]) % self.p
        return self.np_tables[1][A, c[..., None, None]]

    def identity_matrix(self, m: int) -> np.ndarray:
        return np.eye(m, dtype=np.int64)

    def mat_inv(self, A: np.ndarray) -> np.ndarray:
        """Gauss-Jordan inverse of a single square matrix of codes."""
        m = A.shape[0]
        M = [[int(x) for x in row] + [1 if i == j else 0 for j in range(m)]
             for i, row in enumerate(A)]
        for col in range(m):
            piv = next((r for r in range(col, m) if M[r][col]), None)
            if piv is None:
                raise ZeroInverse("singular matrix")
            M[col], M[piv] = M[piv], M[col]
            s = self.inv(M[col][col])
            M[col] = [self.mul(s, x) for x in M[col]]
            for r in range(m):
                if r != col and M[r][col]:
                    f = M[r][col]
                    M[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(M[r], M[col])]
        return np.array([row[m:] for row in M], dtype=np.int64)

    def canonical_scalar_class(self, A: np.ndarray) -> np.ndarray:
        """Scale each matrix so its first nonzero entry (row-major) is 1."""
        if A.size == 0:
            return A.copy()
        flat = A.reshape(A.shape[:-2] + (-1,))
        first = np.argmax(flat != 0, axis=-1)
        lead = np.take_along_axis(flat, first[..., None], axis=-1)[..., 0]
        return self.scale(self.inv_table[lead], A)

    def is_scalar_matrix(self, A: np.ndarray) -> bool:
        d = A[0, 0]
        return bool(d != 0 and np.array_equal(A, d * np.eye(A.shape[0], dtype=np.int64)))


@dataclass(frozen=True)
class FqElem:
    """A field element with operator overloads; coefficients little-endian in t."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.r or any(not 0 <= c < self.field.p for c in self.coeffs):
            raise FieldError(f"bad coefficients {self.coeffs} for {self.field}")

    @property
    def code(self) -> int:
        return self.field.code(self.coeffs)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.code
        return self.field(other).code

    def __add__(self, other):
        return self.field(self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self.field(self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return self.field(self.field.sub(self._other(other), self.code))

    def __neg__(self):
        return self.field(self.field.neg(self.code))

    def __mul__(self, other):
        return self.field(self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field(self._other(other)).inverse()

    def __pow__(self, k: int):
        if self.code == 0 and k < 0:
            raise ZeroInverse("0 has no inverse")
        return self.field(self.field.pow(self.code, k))

    def inverse(self) -> FqElem:
        return self.field(self.field.inv(self.code))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        return self.field.render(self.code)


@lru_cache(maxsize=None)
def fq_make(p: int, r: int = 1) -> FieldSpec:
    """GF(p^r) with the least monic irreducible modulus in code order."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if r < 1 or r > MAX_DEGREE or p**r > MAX_ORDER:
        raise DegreeTooLarge(f"p^r = {p}^{r} outside supported range")
    if r == 1:
        return FieldSpec(p, 1, (0, 1))
    for m in _monic_polys(p, r):
        if is_irreducible(m, p):
            return FieldSpec(p, r, tuple(m))
    raise NoIrreducibleFound(f"no irreducible of degree {r} mod {p}")


def fq_arith(a: FqElem, b: FqElem | None, op: str, k: int | None = None) -> FqElem:
    """Dispatch one of add, mul, inv, pow (``k`` is the exponent for pow)."""
    if b is not None and b.field != a.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** k
    raise ValueError(f"unknown op {op!r}")


def unit_generator(F: FieldSpec) -> FqElem:
    """Least (code order) generator of the cyclic group GF(q)^x."""
    for c in range(1, F.q):
        if F.order_of(c) == F.q - 1:
            return F(c)
    raise FieldError("unit group has no generator")  # unreachable for a field


def is_nth_power(x: FqElem, n: int) -> bool:
    if x.is_zero():
        raise ZeroElement("0 is excluded from the unit group")
    F = x.field
    g = math.gcd(n, F.q - 1)
    return F.pow(x.code, (F.q - 1) // g) == 1


def nth_powers(F: FieldSpec, n: int) -> set[int]:
    """Codes of the image of y -> y^n on the unit group."""
    return {F.pow(y, n) for y in range(1, F.q)}


def least_nonsquare(F: FieldSpec, exclude: tuple[int, ...] = ()) -> int:
    squares = nth_powers(F, 2)
    for c in range(1, F.q):
        if c not in squares and c not in exclude:
            return c
    raise FieldError(f"{F} has no admissible non-square")


def all_fields_upto(qmax: int):
    """Every supported field of order at most qmax, by increasing order."""
    for q in range(2, min(qmax, MAX_ORDER) + 1):
        f = factorize(q)
        if len(f) == 1:
            (p, r), = f.items()
            if r <= MAX_DEGREE:
                yield fq_make(p, r)


__all__ = [
    "FieldSpec", "FqElem", "fq_make", "fq_arith", "unit_generator", "is_nth_power",
    "nth_powers", "least_nonsquare", "is_prime", "factorize", "is_irreducible",
    "NotPrime", "DegreeTooLarge", "NoIrreducibleFound", "ZeroInverse", "ZeroElement",
    "FieldMismatch", "FieldError", "all_fields_upto",
]

