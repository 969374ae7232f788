"""Reduced polynomials as functions F_q^n -> F_q.

Exponent tuples are plain tuples of ints.  A :class:`ReducedPolynomial` keeps
a sparse ``{exponent: coefficient}`` dict with coefficients serialized as ints
(see :mod:`rmquot.gf`) and never stores zeros, so structural equality is
functional equality.
"""

from __future__ import annotations

import itertools
import math
import re
from collections.abc import Iterable, Mapping, Sequence
from functools import cache

import numpy as np

from .gf import FieldElement, FieldSpec, factorial_image, field_of_order

Exponent = tuple[int, ...]


# -- exponent tuples -----------------------------------------------------------

def weight(i: Sequence[int]) -> int:
    return sum(i)


def complement(i: Sequence[int], q: int) -> Exponent:
    return tuple(q - 1 - e for e in i)


def tuple_factorial(F: FieldSpec, i: Sequence[int]) -> int:
    """i! = i_1! ... i_n! in F_q (serialized)."""
    acc = 1
    for e in i:
        acc = F.mul(acc, factorial_image(F, e).value)
    return acc


def digit_matrix(i: Sequence[int], p: int, m: int) -> tuple[tuple[int, ...], ...]:
    """n x m matrix of base-p digits, column k holding the p**k digits."""
    rows = []
    for e in i:
        row = []
        for _ in range(m):
            e, d = divmod(e, p)
            row.append(d)
        if e:
            raise ValueError(f"exponent exceeds p**m - 1 in {tuple(i)}")
        rows.append(tuple(row))
    return tuple(rows)


def from_digit_matrix(D: Sequence[Sequence[int]], p: int) -> Exponent:
    return tuple(sum(d * p**k for k, d in enumerate(row)) for row in D)


@cache
def enumerate_omega(q: int, n: int, r: int) -> tuple[Exponent, ...]:
    """All i in {0..q-1}^n with |i| = r, lexicographically ordered."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= r <= n * (q - 1):
        raise ValueError(f"r={r} outside [0, {n * (q - 1)}]")
    out: list[Exponent] = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 0:
            if left == 0:
                out.append(tuple(prefix))
            return
        lo = max(0, left - (slots - 1) * (q - 1))
        for e in range(lo, min(q - 1, left) + 1):
            prefix.append(e)
            rec(prefix, left - e, slots - 1)
            prefix.pop()

    rec([], r, n)
    return tuple(out)


def omega_index(q: int, n: int, r: int) -> dict[Exponent, int]:
    return {i: k for k, i in enumerate(enumerate_omega(q, n, r))}


def reduce_exponent(e: int, q: int) -> int:
    return 0 if e == 0 else (e - 1) % (q - 1) + 1


# -- polynomials -----------------------------------------------------------------

def _coeff(F: FieldSpec, c) -> int:
    if isinstance(c, FieldElement):
        if c.spec != F:
            raise ValueError("coefficient from a different field")
        return c.value
    if not 0 <= c < F.q:
        raise ValueError(f"coefficient {c} is not a serialized element of F_{F.q}")
    return int(c)


class ReducedPolynomial:
    __slots__ = ("field", "n", "terms")

    def __init__(self, field: FieldSpec, n: int, terms: Mapping[Exponent, int] | None = None):
        self.field = field
        self.n = n
        clean: dict[Exponent, int] = {}
        q = field.q
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong length for n={n}")
            if any(not 0 <= e <= q - 1 for e in exp):
                raise ValueError(f"exponent {exp} is not reduced for q={q}")
            c = _coeff(field, c)
            if c:
                clean[exp] = c
        self.terms = clean

    @classmethod
    def monomial(cls, field: FieldSpec, exp: Sequence[int], coeff=1) -> ReducedPolynomial:
        return cls(field, len(exp), {tuple(exp): coeff})

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> ReducedPolynomial:
        return cls(field, n)

    @classmethod
    def constant(cls, field: FieldSpec, n: int, c=1) -> ReducedPolynomial:
        return cls(field, n, {(0,) * n: c})

    # structural helpers
    def _same(self, other: ReducedPolynomial) -> None:
        if not isinstance(other, ReducedPolynomial):
            raise TypeError(f"expected a polynomial, got {type(other).__name__}")
        if other.field != self.field or other.n != self.n:
            raise ValueError("polynomials over different (q, n)")

    def _new(self, terms: dict) -> ReducedPolynomial:
        return ReducedPolynomial(self.field, self.n, terms)

    def __eq__(self, other):
        if not isinstance(other, ReducedPolynomial):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.field.q, self.n, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, r: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if r is None:
            return len(degs) <= 1
        return degs <= {r}

    def homogeneous_part(self, r: int) -> ReducedPolynomial:
        return self._new({e: c for e, c in self.terms.items() if sum(e) == r})

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items())

    # arithmetic
    def __add__(self, other):
        self._same(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return self._new(out)

    def __neg__(self):
        F = self.field
        return self._new({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> ReducedPolynomial:
        F = self.field
        c = _coeff(F, c)
        return self._new({e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        self._same(other)
        return self._new(multiply_terms(self.field, self.terms, other.terms))

    __rmul__ = __mul__

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.field.q,
            "terms": [{"exp": list(e), "coeff": c} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping, field: FieldSpec | None = None) -> ReducedPolynomial:
        F = field or field_of_order(data["q"])
        if F.q != data["q"]:
            raise ValueError("field order does not match the JSON payload")
        terms: dict[Exponent, int] = {}
        for t in data["terms"]:
            terms[tuple(t["exp"])] = t["coeff"]
        return cls(F, data["n"], terms)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<{type(self).__name__} over F_{self.field.q}: {format_polynomial(self)}>"


class HElement(ReducedPolynomial):
    """A homogeneous degree-r reduced polynomial standing for its class in H_q(r, n)."""

    __slots__ = ("r",)

    def __init__(self, field: FieldSpec, n: int, r: int, terms: Mapping[Exponent, int] | None = None):
        super().__init__(field, n, terms)
        if not 0 <= r <= n * (field.q - 1):
            raise ValueError(f"r={r} outside [0, {n * (field.q - 1)}]")
        bad = [e for e in self.terms if sum(e) != r]
        if bad:
            raise ValueError(f"terms {bad} do not have degree {r}")
        self.r = r

    @classmethod
    def from_poly(cls, poly: ReducedPolynomial, r: int) -> HElement:
        """Class of a polynomial of degree <= r: keep its degree-r part."""
        if poly.degree > r:
            raise ValueError(f"polynomial of degree {poly.degree} is not in R_q({r}, n)")
        return cls(poly.field, poly.n, r, poly.homogeneous_part(r).terms)

    @classmethod
    def from_vector(cls, field: FieldSpec, n: int, r: int, vec) -> HElement:
        basis = enumerate_omega(field.q, n, r)
        return cls(field, n, r, {i: int(c) for i, c in zip(basis, vec) if c})

    def to_vector(self) -> np.ndarray:
        idx = omega_index(self.field.q, self.n, self.r)
        v = np.zeros(len(idx), dtype=np.int64)
        for e, c in self.terms.items():
            v[idx[e]] = c
        return v

    def _new(self, terms: dict) -> HElement:
        return HElement(self.field, self.n, self.r, terms)

    def __eq__(self, other):
        if isinstance(other, HElement) and other.r != self.r:
            return False
        return super().__eq__(other)

    def __hash__(self):
        return hash((self.field.q, self.n, self.r, tuple(sorted(self.terms.items()))))

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def to_json(self) -> dict:
        data = super().to_json()
        data["r"] = self.r
        return data


# -- core operations -------------------------------------------------------------

def multiply_terms(F: FieldSpec, a: Mapping[Exponent, int], b: Mapping[Exponent, int],
                   max_exponent: int | None = None) -> dict[Exponent, int]:
    """Product of two sparse polynomials followed by reduction.

    With ``max_exponent`` set, products having an exponent above it are
    dropped instead of reduced (used for degree truncation in H_q(r, n)).
    """
    q = F.q
    out: dict[Exponent, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            raw = tuple(x + y for x, y in zip(ea, eb))
            if max_exponent is not None:
                if any(e > max_exponent for e in raw):
                    continue
                e = raw
            else:
                e = tuple(reduce_exponent(x, q) for x in raw)
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def reduce(F: FieldSpec, n: int, terms: Mapping[Sequence[int], object]) -> ReducedPolynomial:
    """Reduce an arbitrary polynomial modulo (X_i^q - X_i)."""
    q = F.q
    out: dict[Exponent, int] = {}
    for exp, c in terms.items():
        if len(exp) != n:
            raise ValueError(f"exponent {tuple(exp)} has wrong length for n={n}")
        if any(e < 0 for e in exp):
            raise ValueError("negative exponent")
        e = tuple(reduce_exponent(x, q) for x in exp)
        out[e] = F.add(out.get(e, 0), _coeff(F, c))
    return ReducedPolynomial(F, n, out)


@cache
def points(F: FieldSpec, n: int) -> np.ndarray:
    """All of F_q^n as rows, lexicographic with the last coordinate fastest."""
    pts = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64)
    pts.setflags(write=False)
    return pts


def evaluate(f: ReducedPolynomial, x: Sequence[int]) -> int:
    F = f.field
    if len(x) != f.n:
        raise ValueError(f"point of length {len(x)} for n={f.n}")
    x = [int(v.value if isinstance(v, FieldElement) else v) for v in x]
    total = 0
    for exp, c in f.terms.items():
        term = c
        for xi, e in zip(x, exp):
            term = F.mul(term, F.pow(xi, e))
            if not term:
                break
        total = F.add(total, term)
    return total


def value_table(f: ReducedPolynomial) -> np.ndarray:
    """Values of f at every point of F_q^n in :func:`points` order."""
    F = f.field
    pts = points(F, f.n)
    out = np.zeros(len(pts), dtype=np.int64)
    for exp, c in f.terms.items():
        col = np.full(len(pts), c, dtype=np.int64)
        for j, e in enumerate(exp):
            if e:
                col = F.mul_table[col, F.pow_table[pts[:, j], e]]
        out = F.add_table[out, col]
    return out


@cache
def _indicator_coeffs(F: FieldSpec) -> np.ndarray:
    """Row a: coefficients of 1 - (X - a)^(q-1) in X^0 .. X^(q-1)."""
    q = F.q
    delta = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        minus_a = F.neg(a)
        for k in range(q):
            # binomial(q-1, k) X^k (-a)^(q-1-k)
            binom = F.embed(math.comb(q - 1, k))
            c = F.mul(binom, F.pow(minus_a, q - 1 - k))
            delta[a, k] = F.neg(c)
        delta[a, 0] = F.add(int(delta[a, 0]), 1)
    return delta


def interpolate(F: FieldSpec, n: int, values: Sequence[int]) -> ReducedPolynomial:
    """The unique reduced polynomial with the given value table.

    Sums f(a) * prod_j (1 - (X_j - a_j)^(q-1)) over all points a, carried out
    one coordinate at a time.
    """
    q = F.q
    vals = np.asarray([int(v) for v in values], dtype=np.int64)
    if vals.shape != (q**n,):
        raise ValueError(f"expected {q**n} values, got {vals.size}")
    if np.any((vals < 0) | (vals >= q)):
        raise ValueError("values must be serialized field elements")
    delta = _indicator_coeffs(F)
    tensor = vals.reshape((q,) * n)
    for axis in range(n):
        moved = np.moveaxis(tensor, axis, -1)
        acc = np.zeros_like(moved)
        for a in range(q):
            acc = F.add_table[acc, F.mul_table[moved[..., a][..., None], delta[a]]]
        tensor = np.moveaxis(acc, -1, axis)
    terms = {tuple(int(e) for e in idx): int(tensor[idx]) for idx in zip(*np.nonzero(tensor))}
    return ReducedPolynomial(F, n, terms)


def inner_product(f: ReducedPolynomial, g: ReducedPolynomial) -> int:
    """Sum over x in F_q^n of f(x) g(x)."""
    f._same(g)
    F = f.field
    prod = F.mul_table[value_table(f), value_table(g)]
    total = 0
    for v in prod:
        total = F.add(total, int(v))
    return total


def pairing(h: ReducedPolynomial, h2: ReducedPolynomial, r: int | None = None,
            r2: int | None = None) -> int:
    """Pairing H_q(r, n) x H_q(r', n) -> F_q for r + r' = n(q - 1).

    Any representatives of degree <= r and <= r' may be passed; the degrees
    default to the ``r`` attribute of :class:`HElement` arguments.
    """
    r = getattr(h, "r", None) if r is None else r
    r2 = getattr(h2, "r", None) if r2 is None else r2
    if r is None or r2 is None:
        raise ValueError("degrees of both arguments are required")
    q, n = h.field.q, h.n
    if r + r2 != n * (q - 1):
        raise ValueError(f"r + r' = {r + r2} differs from n(q-1) = {n * (q - 1)}")
    if h.degree > r or h2.degree > r2:
        raise ValueError("representative degree exceeds its module degree")
    return inner_product(h, h2)


def dual_basis_element(F: FieldSpec, i: Sequence[int]) -> HElement:
    """(-1)^n X^(complement of i)."""
    n = len(i)
    comp = complement(i, F.q)
    return HElement(F, n, sum(comp), {comp: F.minus_one_pow(n)})


# -- text form ---------------------------------------------------------------------

def format_polynomial(f: ReducedPolynomial) -> str:
    if not f.terms:
        return "0"
    parts = []
    for exp, c in sorted(f.terms.items(), reverse=True):
        factors = [f"X{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exp) if e]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


_FACTOR = re.compile(r"^(?:X(\d+)(?:\^(\d+))?|(\d+))$")


def parse_polynomial(F: FieldSpec, n: int, text: str) -> ReducedPolynomial:
    """Parse e.g. ``"X1^3*X2 + 2*X1*X2^2"``; integer coefficients are serialized elements."""
    terms: dict[Exponent, int] = {}
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ReducedPolynomial(F, n)
    for chunk in text.split("+"):
        exp = [0] * n
        coeff = 1
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            if m.group(3) is not None:
                coeff = F.mul(coeff, _coeff(F, int(m.group(3))))
                continue
            var = int(m.group(1))
            if not 1 <= var <= n:
                raise ValueError(f"variable X{var} outside X1..X{n}")
            exp[var - 1] += int(m.group(2) or 1)
        key = tuple(exp)
        terms[key] = F.add(terms.get(key, 0), coeff)
    return reduce(F, n, terms)


def iter_monomials(F: FieldSpec, n: int, r: int) -> Iterable[HElement]:
    for i in enumerate_omega(F.q, n, r):
        yield HElement(F, n, r, {i: 1})
