"""Finite fields GF(p^m) and classical linear codes over them.

Field elements are plain integers ``0 <= a < q``.  The integer encodes the
coefficient vector of the residue polynomial in base ``p`` (coefficient of
``x^i`` is digit ``i``), so the canonical element order is ``0, 1, ..., q-1``.
:class:`FieldElem` wraps an integer when operator syntax is wanted; the code
routines work on integer arrays for speed.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    EnumerationBudgetExceeded,
    FieldTooLarge,
    InconsistentReceived,
    LengthExceedsField,
    NonPrimeCharacteristic,
    TooManyErasures,
)

MAX_FIELD_ORDER = 2**16
MAX_ENUMERATION = 2**20


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**m``; raise NonPrimeCharacteristic if impossible."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return p, m


# --- polynomials over GF(p), coefficient tuples low degree first -------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[tuple[int, ...]]:
    for low in range(p**degree):
        coeffs = [(low // p**i) % p for i in range(degree)]
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


def canonical_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree m."""
    for poly in _monic_polys(p, m):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial exists for every degree")


# --- the field ----------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """GF(p^m) defined by a monic irreducible polynomial (low degree first)."""

    p: int
    m: int
    poly: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.m

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def digits(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.m))

    def from_digits(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    @functools.cached_property
    def _digit_table(self) -> np.ndarray:
        a = np.arange(self.order)
        return np.stack([(a // self.p**i) % self.p for i in range(self.m)], axis=1)

    @functools.cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.m)

    def _mul_slow(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_poly_mod(prod, self.poly, self.p))

    @functools.cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.order
        if q == 2:
            return np.array([1, 1]), np.array([0, 0])
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_slow(x, g) if self.m > 1 else x * g % self.p
            if len(exp) == q - 1:
                break
        exp_arr = np.array(exp + exp, dtype=np.int64)
        log_arr = np.zeros(q, dtype=np.int64)
        log_arr[np.array(exp)] = np.arange(q - 1)
        return exp_arr, log_arr

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        exp, log = self._exp_log
        return int(exp[log[a] + log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._exp_log
        return int(exp[(self.order - 1 - log[a]) % (self.order - 1)])

    def pow(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul(result, a)
        return result

    # vectorised arithmetic on integer arrays
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        digits = (self._digit_table[a] + self._digit_table[b]) % self.p
        return digits @ self._weights

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if self.m == 1:
            return a * b % self.p
        exp, log = self._exp_log
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def element(self, value: int) -> FieldElem:
        return FieldElem(self, value % self.order if self.m == 1 else value)

    def elements(self) -> list[FieldElem]:
        return [FieldElem(self, a) for a in range(self.order)]


@dataclass(frozen=True)
class FieldElem:
    field: Field
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise ValueError(f"{self.value} is not an element of {self.field!r}")

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.field.digits(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.element(other).value

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._coerce(other)))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._coerce(other)))

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self.field.inv(self._coerce(other))))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> Field:
    """Construct GF(p^m) with its canonical irreducible polynomial.

    For m = 1 the defining polynomial is ``x``.
    """
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p**m > MAX_FIELD_ORDER:
        raise FieldTooLarge(f"{p}^{m} exceeds {MAX_FIELD_ORDER}")
    return Field(p, m, canonical_irreducible(p, m))


def field_of_order(q: int) -> Field:
    p, m = prime_power(q)
    return make_field(p, m)


# --- linear algebra -----------------------------------------------------------

def row_reduce(field: Field, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    if not mat:
        return mat, pivots
    r = 0
    for col in range(len(mat[0])):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.inv(mat[r][col])
        mat[r] = [field.mul(inv, v) for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(field: Field, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(field, rows)[1])


# --- linear codes -------------------------------------------------------------

@dataclass(frozen=True)
class LinearCode:
    field: Field
    n: int
    k: int
    generator: tuple[tuple[int, ...], ...]
    mds: bool = False

    def __post_init__(self):
        if len(self.generator) != self.k or any(len(r) != self.n for r in self.generator):
            raise ValueError("generator matrix must be k x n")
        if rank(self.field, self.generator) != self.k:
            raise ValueError("generator matrix is rank deficient")

    def encode(self, message: Sequence[int]) -> tuple[int, ...]:
        if len(message) != self.k:
            raise ValueError(f"message must have {self.k} symbols")
        word = [0] * self.n
        for m, row in zip(message, self.generator):
            if m:
                word = [self.field.add(w, self.field.mul(m, g)) for w, g in zip(word, row)]
        return tuple(word)

    def messages(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(range(self.field.order), repeat=self.k)


def reed_solomon(field: Field, n: int, k: int) -> LinearCode:
    """[n, k] evaluation code on the field elements 0, 1, ..., n-1."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n > field.order:
        raise LengthExceedsField(f"n={n} exceeds field size {field.order}")
    rows = tuple(tuple(field.pow(a, i) for a in range(n)) for i in range(k))
    return LinearCode(field, n, k, rows, mds=True)


def repetition_code(field: Field, n: int) -> LinearCode:
    return LinearCode(field, n, 1, ((1,) * n,))


def all_codewords(code: LinearCode) -> np.ndarray:
    """Every codeword as a (q^k, n) integer array, messages in product order."""
    if code.k == 0:
        raise ValueError("zero-dimensional code has no nonzero codewords")
    q = code.field.order
    if q**code.k > MAX_ENUMERATION:
        raise EnumerationBudgetExceeded(f"{q}^{code.k} codewords exceed {MAX_ENUMERATION}")
    msgs = np.array(list(code.messages()), dtype=np.int64)
    gen = np.array(code.generator, dtype=np.int64)
    words = np.zeros((len(msgs), code.n), dtype=np.int64)
    for i in range(code.k):
        words = code.field.vadd(words, code.field.vmul(msgs[:, i : i + 1], gen[i][None, :]))
    return words


def min_distance(code: LinearCode) -> int:
    """Minimum Hamming weight over all nonzero codewords (exhaustive)."""
    words = all_codewords(code)
    weights = np.count_nonzero(words, axis=1)
    return int(weights[1:].min())


def min_distance_by_rank(code: LinearCode) -> int:
    """Minimum distance from column ranks: a nonzero codeword vanishes on Z iff rank(G_Z) < k.

    Enumerates coordinate subsets, so it stays cheap when q^k is large but n is small.
    """
    if code.k == 0:
        raise ValueError("zero-dimensional code has no nonzero codewords")
    cols = list(zip(*code.generator))
    for size in range(code.n, -1, -1):
        for zeros in itertools.combinations(range(code.n), size):
            sub = [cols[j] for j in zeros]
            if rank(code.field, sub) < code.k:
                return code.n - size
    raise AssertionError("unreachable")


@functools.lru_cache(maxsize=4096)
def _erasure_solver(code: LinearCode, erased: frozenset[int]):
    """Pick k independent surviving positions and invert G restricted to them."""
    survivors = [j for j in range(code.n) if j not in erased]
    cols = [[code.generator[i][j] for i in range(code.k)] for j in survivors]
    # rows of cols are surviving columns of G; pivots of its transpose select independent ones
    _, pivots = row_reduce(code.field, [list(r) for r in zip(*cols)] if cols else [])
    if len(pivots) < code.k:
        raise TooManyErasures(
            f"{len(erased)} erasures leave rank {len(pivots)} < k={code.k}"
        )
    chosen = [survivors[j] for j in pivots]
    f = code.field
    # invert the k x k matrix A = G[:, chosen] via [A | I] row reduction
    a = [[code.generator[i][j] for j in chosen] + [int(i == r) for r in range(code.k)] for i in range(code.k)]
    red, _ = row_reduce(f, a)
    inverse = [row[code.k :] for row in red]
    return tuple(chosen), tuple(map(tuple, inverse))


def erasure_decode(
    code: LinearCode, received: Sequence[int | None], erased: Iterable[int] = ()
) -> tuple[int, ...]:
    """Recover the message from the unerased coordinates of a codeword.

    Positions in ``erased`` (or holding ``None``) are ignored.  Raises
    TooManyErasures when the survivors do not determine the message and
    InconsistentReceived when they are not a restricted codeword.
    """
    if len(received) != code.n:
        raise ValueError(f"received word must have length {code.n}")
    erased = frozenset(erased) | {j for j, v in enumerate(received) if v is None}
    if code.k == 0:
        message: tuple[int, ...] = ()
    else:
        chosen, inverse = _erasure_solver(code, erased)
        f = code.field
        y = [received[j] for j in chosen]
        # message = y A^{-1}, with A = G[:, chosen]
        message = tuple(
            functools.reduce(f.add, (f.mul(y[r], inverse[r][i]) for r in range(code.k)), 0)
            for i in range(code.k)
        )
    word = code.encode(message) if code.k else (0,) * code.n
    for j in range(code.n):
        if j not in erased and word[j] != received[j]:
            raise InconsistentReceived(f"coordinate {j} disagrees with every codeword")
    return message
