"""Exact arithmetic in F_q = F_{p^m}.

Elements are stored as integers in ``[0, q)``: the base-p evaluation of the
polynomial-basis coordinate vector, constant term least significant.  All hot
paths (polynomials, matrices) work on these integers through the lookup tables
held by :class:`FieldSpec`; :class:`FieldElement` is the user-facing wrapper.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cache

import numpy as np

DEFAULT_MAX_ORDER = int(os.environ.get("RMQUOT_MAX_Q", "256"))


class FieldSizeError(ValueError):
    """Raised when p**m exceeds the configured bound."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# -- polynomials over F_p, coefficient lists with constant term first --------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p) if p > 2 else 1
    while len(a) >= len(b):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for k, bk in enumerate(b):
            a[shift + k] = (a[shift + k] - c * bk) % p
        _poly_trim(a)
    return a


def _monic_polys(degree: int, p: int):
    """Monic polynomials of the given degree, lexicographic from the constant term."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(_poly_trim(list(poly))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(d, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for cand in _monic_polys(m, p):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^m} in a fixed polynomial basis.

    Two specs are equal when ``p``, ``m`` and ``modulus`` agree.  The lookup
    tables (``add_table``, ``mul_table``, ...) are numpy arrays indexed by
    serialized elements.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    gamma: int = field(default=0, compare=False)
    add_table: np.ndarray = field(default=None, compare=False, repr=False)
    mul_table: np.ndarray = field(default=None, compare=False, repr=False)
    neg_table: np.ndarray = field(default=None, compare=False, repr=False)
    inv_table: np.ndarray = field(default=None, compare=False, repr=False)
    pow_table: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.q)]

    def coords(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.m or any(not 0 <= c < self.p for c in coords):
            raise ValueError(f"bad coordinates {coords!r} for F_{self.q}")
        return sum(c * self.p**k for k, c in enumerate(coords))

    # integer-level arithmetic, used throughout the package
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return int(self.inv_table[a])

    def pow(self, a: int, k: int) -> int:
        """a**k with 0**0 = 1; negative k requires a != 0."""
        if k < 0:
            return self.pow(self.inv(a), -k)
        if k < self.q:
            return int(self.pow_table[a, k])
        if a == 0:
            return 0
        return int(self.pow_table[a, (k - 1) % (self.q - 1) + 1])

    def embed(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def minus_one_pow(self, n: int) -> int:
        return 1 if n % 2 == 0 else self.neg(1)

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        x, k = a, 1
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}


def _build_tables(p: int, m: int, modulus: tuple[int, ...]):
    q = p**m
    digits = np.array([[(a // p**k) % p for k in range(m)] for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(m, dtype=np.int64)

    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    neg = ((-digits) % p) @ weights

    # xkb[b, k] = coordinates of X^k * b reduced mod the modulus
    xkb = np.zeros((q, m, m), dtype=np.int64)
    low = np.array(modulus[:m], dtype=np.int64)
    cur = digits.copy()
    for k in range(m):
        xkb[:, k, :] = cur
        top = cur[:, m - 1].copy()
        shifted = np.zeros_like(cur)
        shifted[:, 1:] = cur[:, :-1]
        cur = (shifted - top[:, None] * low[None, :]) % p
    prod = np.einsum("ak,bkj->abj", digits, xkb) % p
    mul = prod @ weights

    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])

    pw = np.zeros((q, q), dtype=np.int64)
    pw[:, 0] = 1
    for k in range(1, q):
        pw[:, k] = mul[pw[:, k - 1], np.arange(q)]
    return add, mul, neg, inv, pw


@cache
def make_field(p: int, m: int = 1, max_order: int | None = None) -> FieldSpec:
    """Build F_{p^m} over the lexicographically smallest monic irreducible modulus.

    The primitive element ``gamma`` is the first element, in serialization
    order, of multiplicative order ``q - 1``.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1:
        raise ValueError(f"m={m} must be >= 1")
    bound = DEFAULT_MAX_ORDER if max_order is None else max_order
    if p**m > bound:
        raise FieldSizeError(f"q={p}^{m}={p**m} exceeds the size limit {bound}")
    modulus = smallest_irreducible(p, m)
    add, mul, neg, inv, pw = _build_tables(p, m, modulus)
    for tab in (add, mul, neg, inv, pw):
        tab.setflags(write=False)
    spec = FieldSpec(p, m, modulus, 0, add, mul, neg, inv, pw)
    q = p**m
    gamma = next(a for a in range(1, q) if q == 2 or spec.order(a) == q - 1)
    object.__setattr__(spec, "gamma", gamma)
    return spec


def field_of_order(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        if q % p == 0:
            m = round(math.log(q, p))
            if is_prime(p) and p**m == q:
                return make_field(p, m)
            break
    raise ValueError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise ValueError(f"{self.value} is not an element of F_{self.spec.q}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements belong to different fields")
            return other.value
        if isinstance(other, int):
            return self.spec.embed(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.value, self.spec.inv(b)))

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.pow(self.value, k))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.spec.q}({self.value})"


def embed_integer(spec: FieldSpec, k: int) -> FieldElement:
    return FieldElement(spec, spec.embed(k))


def factorial_image(spec: FieldSpec, k: int) -> FieldElement:
    """k! in F_q, as a running product of embedded integers."""
    if k < 0:
        raise ValueError("factorial of a negative integer")
    acc = 1
    for j in range(2, k + 1):
        acc = spec.mul(acc, spec.embed(j))
        if acc == 0:
            break
    return FieldElement(spec, acc)


def _check_parts(total: int, parts: Sequence[int]) -> None:
    if any(k < 0 for k in parts):
        raise ValueError(f"negative part in {parts!r}")
    if sum(parts) != total:
        raise ValueError(f"parts {parts!r} do not sum to {total}")


def multinomial_mod(total: int, parts: Sequence[int], p: int) -> int:
    """total! / prod(parts!) mod p via exact integer binomials."""
    _check_parts(total, parts)
    acc, left = 1, total
    for k in parts:
        acc = acc * math.comb(left, k) % p
        left -= k
        if acc == 0:
            return 0
    return acc


def lucas_multinomial_mod(total: int, parts: Sequence[int], p: int) -> int:
    """Same value through base-p digits (Lucas): zero iff the parts carry."""
    _check_parts(total, parts)
    acc = 1
    total_left, parts_left = total, list(parts)
    while total_left or any(parts_left):
        digits = [k % p for k in parts_left]
        top = total_left % p
        if sum(digits) != top:
            return 0
        num = math.factorial(top)
        den = math.prod(math.factorial(d) for d in digits)
        acc = acc * (num % p) * pow(den % p, p - 2, p) % p
        total_left //= p
        parts_left = [k // p for k in parts_left]
    return acc


def multinomial_image(spec: FieldSpec, total: int, parts: Sequence[int]) -> FieldElement:
    return FieldElement(spec, multinomial_mod(total, parts, spec.p))
