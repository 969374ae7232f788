"""GL(n, F_q) and AGL(n, F_q) acting on reduced polynomials by substitution.

Convention: ``sigma = (A, a)`` acts by ``sigma(f) = f((X_1, ..., X_n) A + a)``,
so ``apply(sigma, f)(x) == f(x A + a)``.  For linear elements this is a left
action: ``apply(A, apply(B, f)) == apply(A @ B, f)``.

The action matrix follows the coefficient convention
``action[i, j] = coefficient of X^j in A(X^i)`` (row i is the image of X^i),
which makes it an anti-homomorphism: ``M(A @ B) == M(B) @ M(A)``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cache

import numpy as np

from . import linalg
from .gf import FieldSpec, multinomial_mod
from .polyfun import (
    Exponent,
    HElement,
    ReducedPolynomial,
    enumerate_omega,
    multiply_terms,
    omega_index,
    tuple_factorial,
)


@dataclass(frozen=True)
class GroupElement:
    field: FieldSpec
    A: tuple[tuple[int, ...], ...]
    a: tuple[int, ...]

    def __post_init__(self):
        n = len(self.A)
        if n < 1 or any(len(row) != n for row in self.A):
            raise ValueError("A must be a nonempty square matrix")
        if len(self.a) != n:
            raise ValueError("translation vector has the wrong length")
        q = self.field.q
        if any(not 0 <= v < q for row in self.A for v in row) or any(not 0 <= v < q for v in self.a):
            raise ValueError("entries must be serialized field elements")
        if linalg.determinant(self.field, self.matrix) == 0:
            raise ValueError("matrix is not invertible")

    @classmethod
    def linear(cls, field: FieldSpec, A) -> GroupElement:
        A = tuple(tuple(int(v) for v in row) for row in np.asarray(A).tolist())
        return cls(field, A, (0,) * len(A))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> GroupElement:
        return cls.linear(field, np.eye(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64)

    @property
    def is_linear(self) -> bool:
        return not any(self.a)

    def transpose(self) -> GroupElement:
        self._require_linear()
        return GroupElement.linear(self.field, self.matrix.T)

    def inverse(self) -> GroupElement:
        F = self.field
        Ainv = linalg.inverse(F, self.matrix)
        # x -> xA + a  inverts to  y -> (y - a) A^-1
        shift = linalg.matvec(F, F.neg_table[np.array(self.a, dtype=np.int64)], Ainv)
        return GroupElement(F, _tup(Ainv), tuple(int(v) for v in shift))

    def then(self, other: GroupElement) -> GroupElement:
        """The point map x -> other(self(x))."""
        F = self.field
        A = linalg.matmul(F, self.matrix, other.matrix)
        a = linalg.add(F, linalg.matvec(F, np.array(self.a), other.matrix), np.array(other.a))
        return GroupElement(F, _tup(A), tuple(int(v) for v in a))

    def __matmul__(self, other: GroupElement) -> GroupElement:
        """Matrix product for linear elements, so that apply(A @ B) = apply(A) o apply(B)."""
        self._require_linear()
        other._require_linear()
        return GroupElement.linear(self.field, linalg.matmul(self.field, self.matrix, other.matrix))

    def map_point(self, x: Sequence[int]) -> tuple[int, ...]:
        F = self.field
        y = linalg.add(F, linalg.matvec(F, np.array(x, dtype=np.int64), self.matrix), np.array(self.a))
        return tuple(int(v) for v in y)

    def _require_linear(self) -> None:
        if not self.is_linear:
            raise ValueError("operation needs a linear (GL) element, got a translation part")

    def to_json(self) -> dict:
        return {"A": [list(row) for row in self.A], "a": list(self.a)}

    @classmethod
    def from_json(cls, field: FieldSpec, data) -> GroupElement:
        A = tuple(tuple(row) for row in data["A"])
        return cls(field, A, tuple(data.get("a", (0,) * len(A))))


def _tup(M) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in np.asarray(M))


# -- group generation ----------------------------------------------------------------

def generators(n: int, field: FieldSpec, affine: bool = False) -> list[GroupElement]:
    """Generators of GL(n, F_q), plus a translation when ``affine``.

    diag(gamma, 1, ..., 1), the swap of X_1 and X_2, the cyclic shift of
    coordinates, and the transvection X_1 -> X_1 + X_2.  Identity and duplicate
    elements are dropped.
    """
    if n < 1:
        raise ValueError("n must be positive")
    F = field
    gens = []
    d = np.eye(n, dtype=np.int64)
    d[0, 0] = F.gamma
    gens.append(d)
    if n >= 2:
        swap = np.eye(n, dtype=np.int64)[:, [1, 0] + list(range(2, n))]
        gens.append(swap)
        cycle = np.roll(np.eye(n, dtype=np.int64), 1, axis=1)
        gens.append(cycle)
        tv = np.eye(n, dtype=np.int64)
        tv[1, 0] = 1
        gens.append(tv)
    out: list[GroupElement] = []
    for g in gens:
        el = GroupElement.linear(F, g)
        if el not in out and el != GroupElement.identity(F, n):
            out.append(el)
    if not out:
        out.append(GroupElement.identity(F, n))
    if affine:
        e1 = [0] * n
        e1[0] = 1
        out.append(GroupElement(F, GroupElement.identity(F, n).A, tuple(e1)))
    return out


def group_closure(gens: Sequence[GroupElement], limit: int = 10**6) -> list[GroupElement]:
    """BFS closure of a generating set under composition."""
    if not gens:
        raise ValueError("empty generating set")
    start = GroupElement(gens[0].field, GroupElement.identity(gens[0].field, gens[0].n).A,
                         (0,) * gens[0].n)
    seen = {start}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g.then(h)
                if gh not in seen:
                    seen.add(gh)
                    order.append(gh)
                    nxt.append(gh)
                    if len(seen) > limit:
                        raise RuntimeError("group closure exceeded the limit")
        frontier = nxt
    return order


def gl_order(n: int, q: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out


@cache
def all_gl(n: int, field: FieldSpec) -> tuple[GroupElement, ...]:
    """Every element of GL(n, F_q), by filtering all n x n matrices."""
    q = field.q
    out = []
    for entries in itertools.product(range(q), repeat=n * n):
        M = np.array(entries, dtype=np.int64).reshape(n, n)
        if linalg.determinant(field, M):
            out.append(GroupElement.linear(field, M))
    return tuple(out)


def random_gl(n: int, field: FieldSpec, seed: int, k: int) -> GroupElement:
    """Trial ``k`` of a seeded stream; depends only on (seed, k)."""
    rng = np.random.default_rng([seed, k])
    while True:
        M = rng.integers(0, field.q, size=(n, n))
        if linalg.determinant(field, M):
            return GroupElement.linear(field, M)


def sample_gl(n: int, field: FieldSpec, seed: int, count: int) -> list[GroupElement]:
    return [random_gl(n, field, seed, k) for k in range(count)]


# -- substitution ---------------------------------------------------------------------

def _image_forms(sigma: GroupElement) -> list[dict[Exponent, int]]:
    """The polynomial X_s maps to: sum_t a_{ts} X_t + a_s."""
    n = sigma.n
    forms = []
    for s in range(n):
        form: dict[Exponent, int] = {}
        for t in range(n):
            c = sigma.A[t][s]
            if c:
                e = [0] * n
                e[t] = 1
                form[tuple(e)] = c
        if sigma.a[s]:
            form[(0,) * n] = sigma.a[s]
        forms.append(form)
    return forms


def _substitute(sigma: GroupElement, terms, max_exponent: int | None) -> dict[Exponent, int]:
    F = sigma.field
    n = sigma.n
    forms = _image_forms(sigma)
    powers: dict[tuple[int, int], dict[Exponent, int]] = {}

    def power(s: int, k: int) -> dict[Exponent, int]:
        key = (s, k)
        if key not in powers:
            if k == 0:
                powers[key] = {(0,) * n: 1}
            else:
                powers[key] = multiply_terms(F, power(s, k - 1), forms[s], max_exponent)
        return powers[key]

    out: dict[Exponent, int] = {}
    for exp, c in terms.items():
        acc = {(0,) * n: c}
        for s, e in enumerate(exp):
            if e:
                acc = multiply_terms(F, acc, power(s, e), max_exponent)
                if not acc:
                    break
        for e, v in acc.items():
            out[e] = F.add(out.get(e, 0), v)
    return {e: v for e, v in out.items() if v}


def apply(sigma: GroupElement, f: ReducedPolynomial) -> ReducedPolynomial:
    """sigma(f) = f((X_1, ..., X_n) A + a), reduced."""
    if sigma.field != f.field or sigma.n != f.n:
        raise ValueError("group element and polynomial disagree on (q, n)")
    return ReducedPolynomial(f.field, f.n, _substitute(sigma, f.terms, None))


def apply_h(sigma: GroupElement, h: HElement) -> HElement:
    """Action on H_q(r, n): substitute and keep the degree-r part.

    Translations act trivially here, so only the linear part is used.
    Products with an exponent >= q reduce to lower degree, so they are
    dropped during expansion.
    """
    if sigma.field != h.field or sigma.n != h.n:
        raise ValueError("group element and polynomial disagree on (q, n)")
    lin = sigma if sigma.is_linear else GroupElement.linear(sigma.field, sigma.A)
    q = h.field.q
    terms = _substitute(lin, h.terms, q - 1)
    return HElement(h.field, h.n, h.r, terms)


def action_matrix_direct(A: GroupElement, r: int) -> np.ndarray:
    """action[i, j] = coefficient of X^j in the degree-r part of A(X^i)."""
    if not A.is_linear:
        raise ValueError("action matrices are defined for linear elements only")
    F = A.field
    basis = enumerate_omega(F.q, A.n, r)
    idx = omega_index(F.q, A.n, r)
    M = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for row, i in enumerate(basis):
        img = _substitute(A, {i: 1}, F.q - 1)
        for j, c in img.items():
            M[row, idx[j]] = c
    return M


# -- combinatorial route --------------------------------------------------------------

def contingency_tables(i: Sequence[int], j: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """All nonnegative integer matrices with row sums i and column sums j.

    Row-major depth-first search, cells filled left to right, largest
    feasible value first.
    """
    if len(i) != len(j):
        raise ValueError("row and column sum vectors differ in length")
    if sum(i) != sum(j):
        raise ValueError(f"|i| = {sum(i)} differs from |j| = {sum(j)}")
    n_rows, n_cols = len(i), len(j)
    out: list[tuple[tuple[int, ...], ...]] = []
    table = [[0] * n_cols for _ in range(n_rows)]
    col_left = list(j)

    def rec(s: int, t: int, row_left: int):
        if s == n_rows:
            if not any(col_left):
                out.append(tuple(tuple(r) for r in table))
            return
        if t == n_cols - 1:
            if row_left > col_left[t]:
                return
            vals = [row_left]
        else:
            # what the rest of this row can still absorb
            room = sum(col_left[t + 1:])
            lo = max(0, row_left - room)
            hi = min(row_left, col_left[t])
            vals = range(hi, lo - 1, -1)
        for v in vals:
            table[s][t] = v
            col_left[t] -= v
            if t == n_cols - 1:
                rec(s + 1, 0, i[s + 1] if s + 1 < n_rows else 0)
            else:
                rec(s, t + 1, row_left - v)
            col_left[t] += v
        table[s][t] = 0

    rec(0, 0, i[0] if n_rows else 0)
    return out


def sigma_entry(A: GroupElement, i: Sequence[int], j: Sequence[int]) -> int:
    """sum over M(i, j) of prod_s multinomial(i_s; row s) * prod_{s,t} a_{ts}^{i_st}."""
    if not A.is_linear:
        raise ValueError("sigma entries are defined for linear elements only")
    if sum(i) != sum(j):
        raise ValueError("weights of i and j differ")
    F = A.field
    p = F.p
    total = 0
    for tab in contingency_tables(i, j):
        coeff = 1
        for s, row in enumerate(tab):
            coeff = coeff * multinomial_mod(i[s], row, p) % p
            if not coeff:
                break
        if not coeff:
            continue
        term = F.embed(coeff)
        for s, row in enumerate(tab):
            for t, e in enumerate(row):
                term = F.mul(term, F.pow(A.A[t][s], e))
        total = F.add(total, term)
    return total


def action_matrix_combinatorial(A: GroupElement, r: int) -> np.ndarray:
    F = A.field
    basis = enumerate_omega(F.q, A.n, r)
    M = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for a, i in enumerate(basis):
        for b, j in enumerate(basis):
            M[a, b] = sigma_entry(A, i, j)
    return M


def action_matrix(A: GroupElement, r: int, method: str = "direct") -> np.ndarray:
    if method == "direct":
        return action_matrix_direct(A, r)
    if method == "combinatorial":
        return action_matrix_combinatorial(A, r)
    raise ValueError(f"unknown method {method!r}")


def diagonal_factorial(field: FieldSpec, n: int, r: int) -> np.ndarray:
    """D_r: the diagonal matrix with entry i! at position i."""
    basis = enumerate_omega(field.q, n, r)
    return np.diag([tuple_factorial(field, i) for i in basis]).astype(np.int64)


def check_lemma21(A: GroupElement, r: int, method: str = "direct") -> bool:
    """Whether M(A^T) D_r == D_r M(A)^T holds over F_q."""
    F = A.field
    D = diagonal_factorial(F, A.n, r)
    lhs = linalg.matmul(F, action_matrix(A.transpose(), r, method), D)
    rhs = linalg.matmul(F, D, action_matrix(A, r, method).T)
    return bool(np.array_equal(lhs, rhs))


def iter_elements(n: int, field: FieldSpec, seed: int, trials: int,
                  exhaustive_limit: int = 10**4) -> Iterator[GroupElement]:
    """The whole group when it is small enough, otherwise ``trials`` seeded samples."""
    if gl_order(n, field.q) <= exhaustive_limit:
        yield from all_gl(n, field)
    else:
        for k in range(trials):
            yield random_gl(n, field, seed, k)


def elements_json(elements: Iterable[GroupElement]) -> list[dict]:
    return [g.to_json() for g in elements]
