"""Signature poset, its ideals, and the monomial submodules of H_q(r, n) they span.

A signature is a plain tuple ``(t_0, ..., t_{m-1})``: the partial weighted
column sums of the base-p digit matrix of an exponent tuple.  The
GL-submodules of H_q(r, n) are exactly the spans of monomials whose
signatures form a down-set; :func:`closure_oracle` recomputes submodules by
brute force so that correspondence can be checked independently.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cache, cached_property

import numpy as np

from . import linalg
from .gf import FieldSpec, field_of_order
from .glaction import GroupElement, action_matrix_direct, generators
from .linalg import Subspace
from .polyfun import (
    Exponent,
    HElement,
    digit_matrix,
    enumerate_omega,
    from_digit_matrix,
    omega_index,
)

Signature = tuple[int, ...]


class SignatureMismatch(RuntimeError):
    """The two routes to T(Omega_{q,n,r}) disagree."""


def _pm(q: int) -> tuple[int, int]:
    F = field_of_order(q)
    return F.p, F.m


def t_signature(i: Sequence[int], p: int, m: int) -> Signature:
    D = digit_matrix(i, p, m)
    out, acc = [], 0
    for k in range(m):
        acc += sum(row[k] for row in D) * p**k
        out.append(acc)
    return tuple(out)


def column_sums(t: Sequence[int], p: int) -> tuple[int, ...]:
    """(t_0, (t_1 - t_0)/p, ..., (t_{m-1} - t_{m-2})/p^{m-1})."""
    s, prev = [], 0
    for k, tk in enumerate(t):
        diff = tk - prev
        if diff % p**k:
            raise ValueError(f"{tuple(t)} is not a signature for p={p}")
        s.append(diff // p**k)
        prev = tk
    return tuple(s)


def signatures_by_conditions(q: int, n: int, r: int) -> list[Signature]:
    """Tuples with t_{m-1} = r, t_k = r mod p^(k+1), and column sums in [0, n(p-1)]."""
    p, m = _pm(q)
    cap = n * (p - 1)
    out: list[Signature] = []

    def rec(prefix: list[int]):
        k = len(prefix)
        prev = prefix[-1] if prefix else 0
        if k == m - 1:
            if 0 <= (r - prev) and (r - prev) % p**k == 0 and (r - prev) // p**k <= cap:
                out.append(tuple(prefix + [r]))
            return
        mod = p ** (k + 1)
        start = prev + ((r - prev) % mod)
        for tk in range(start, r + 1, mod):
            if (tk - prev) % p**k or (tk - prev) // p**k > cap:
                continue
            rec(prefix + [tk])

    if m == 1:
        return [(r,)] if r <= cap else []
    rec([])
    return sorted(out)


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class PosetIdeal:
    members: frozenset[Signature]

    @cached_property
    def boundary(self) -> tuple[Signature, ...]:
        return tuple(sorted(t for t in self.members
                            if not any(u != t and leq(t, u) for u in self.members)))

    def __len__(self):
        return len(self.members)

    def __contains__(self, t):
        return tuple(t) in self.members

    def sort_key(self):
        return (len(self.members), self.boundary)

    def to_json(self) -> dict:
        return {"boundary": [list(t) for t in self.boundary],
                "members": [list(t) for t in sorted(self.members)]}


@dataclass(frozen=True)
class TPoset:
    q: int
    n: int
    r: int
    nodes: tuple[Signature, ...]
    fibers: dict = field(compare=False, repr=False)

    @property
    def p(self) -> int:
        return _pm(self.q)[0]

    @property
    def m(self) -> int:
        return _pm(self.q)[1]

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def preimage(self, ts: Iterable[Signature]) -> list[Exponent]:
        """T^-1 of a set of signatures, lexicographically ordered."""
        return sorted(i for t in ts for i in self.fibers[tuple(t)])

    def down_set(self, ts: Iterable[Signature]) -> PosetIdeal:
        ts = [tuple(t) for t in ts]
        for t in ts:
            if t not in self.fibers:
                raise ValueError(f"{t} is not in the poset")
        return PosetIdeal(frozenset(u for u in self.nodes if any(leq(u, t) for t in ts)))

    def principal(self, t: Signature) -> PosetIdeal:
        return self.down_set([t])

    def maximal(self, subset: Iterable[Signature]) -> list[Signature]:
        subset = set(subset)
        return sorted(t for t in subset if not any(u != t and leq(t, u) for u in subset))

    def is_ideal(self, subset: Iterable[Signature]) -> bool:
        subset = {tuple(t) for t in subset}
        if not subset <= set(self.nodes):
            return False
        return all(u in subset for t in subset for u in self.nodes if leq(u, t))

    def full(self) -> PosetIdeal:
        return PosetIdeal(frozenset(self.nodes))

    def check_order(self) -> bool:
        """Reflexive, antisymmetric, transitive on the node set."""
        N = self.nodes
        refl = all(leq(a, a) for a in N)
        anti = all(a == b for a in N for b in N if leq(a, b) and leq(b, a))
        trans = all(leq(a, c) for a in N for b in N for c in N if leq(a, b) and leq(b, c))
        return refl and anti and trans

    def to_json(self) -> list:
        return [list(t) for t in self.nodes]


@cache
def enumerate_signatures(q: int, n: int, r: int) -> TPoset:
    """T(Omega_{q,n,r}), computed as an image and from the defining conditions."""
    p, m = _pm(q)
    fibers: dict[Signature, list[Exponent]] = {}
    for i in enumerate_omega(q, n, r):
        fibers.setdefault(t_signature(i, p, m), []).append(i)
    image = sorted(fibers)
    direct = signatures_by_conditions(q, n, r)
    if image != direct:
        raise SignatureMismatch(f"image {image} != conditions {direct} for (q,n,r)=({q},{n},{r})")
    poset = TPoset(q, n, r, tuple(image), {t: tuple(v) for t, v in fibers.items()})
    if not poset.check_order():
        raise SignatureMismatch("componentwise order failed the partial-order axioms")
    return poset


def antichains(poset: TPoset) -> list[tuple[Signature, ...]]:
    nodes = poset.nodes
    out: list[tuple[Signature, ...]] = []

    def rec(start: int, chosen: list[Signature]):
        out.append(tuple(chosen))
        for k in range(start, len(nodes)):
            t = nodes[k]
            if all(not leq(t, c) and not leq(c, t) for c in chosen):
                chosen.append(t)
                rec(k + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


def ideals_enumerate(poset: TPoset) -> list[PosetIdeal]:
    """All ideals, one per antichain boundary, ordered by size then boundary."""
    ideals = [poset.down_set(b) for b in antichains(poset)]
    return sorted(ideals, key=PosetIdeal.sort_key)


# -- submodules -----------------------------------------------------------------------

@cache
def generator_matrices(field: FieldSpec, n: int, r: int) -> tuple[np.ndarray, ...]:
    mats = tuple(action_matrix_direct(g, r) for g in generators(n, field))
    for M in mats:
        M.setflags(write=False)
    return mats


def _successors(field: FieldSpec, n: int, r: int) -> list[set[int]]:
    """succ[a] = indices j with X^j in the support of some generator image of X^a."""
    mats = generator_matrices(field, n, r)
    size = len(enumerate_omega(field.q, n, r))
    succ = [set() for _ in range(size)]
    for M in mats:
        for a, b in zip(*np.nonzero(M)):
            succ[int(a)].add(int(b))
    return succ


@dataclass(frozen=True)
class MonomialSubmodule:
    field: FieldSpec
    n: int
    r: int
    monomials: tuple[Exponent, ...]

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @cached_property
    def subspace(self) -> Subspace:
        idx = omega_index(self.field.q, self.n, self.r)
        rows = np.zeros((len(self.monomials), len(idx)), dtype=np.int64)
        for k, i in enumerate(self.monomials):
            rows[k, idx[i]] = 1
        return Subspace(self.field, len(idx), rows)

    def is_invariant(self) -> bool:
        """Closed under every generator's action matrix."""
        idx = omega_index(self.field.q, self.n, self.r)
        inside = {idx[i] for i in self.monomials}
        succ = _successors(self.field, self.n, self.r)
        return all(succ[a] <= inside for a in inside)

    def to_json(self) -> dict:
        return {"monomials": [list(i) for i in self.monomials], "dim": self.dim}


def module_of_ideal(poset: TPoset, ideal: PosetIdeal | Iterable[Signature],
                    check: bool = True) -> MonomialSubmodule:
    members = ideal.members if isinstance(ideal, PosetIdeal) else {tuple(t) for t in ideal}
    if not poset.is_ideal(members):
        raise ValueError("signature set is not an ideal of the poset")
    F = field_of_order(poset.q)
    mod = MonomialSubmodule(F, poset.n, poset.r, tuple(poset.preimage(members)))
    if check and not mod.is_invariant():
        raise AssertionError(f"M(I) for I={sorted(members)} is not GL-invariant")
    return mod


def _as_rows(field: FieldSpec, n: int, r: int, vectors) -> np.ndarray:
    size = len(enumerate_omega(field.q, n, r))
    rows = []
    for v in vectors:
        if isinstance(v, HElement):
            if (v.field, v.n, v.r) != (field, n, r):
                raise ValueError("vector from a different module")
            rows.append(v.to_vector())
        else:
            rows.append(np.asarray(v, dtype=np.int64))
    return np.array(rows, dtype=np.int64).reshape(len(rows), size)


def closure_oracle(vectors, field: FieldSpec | None = None, n: int | None = None,
                   r: int | None = None, gens: Sequence[GroupElement] | None = None) -> Subspace:
    """Smallest generator-invariant subspace containing ``vectors``.

    Fixpoint of span-and-apply over the action matrices of ``gens``
    (default: the GL generators).  ``field``, ``n``, ``r`` may be omitted when
    the vectors are :class:`HElement` instances.
    """
    vectors = list(vectors)
    if field is None:
        if not vectors or not isinstance(vectors[0], HElement):
            raise ValueError("pass field, n and r for raw coordinate vectors")
        field, n, r = vectors[0].field, vectors[0].n, vectors[0].r
    mats = (generator_matrices(field, n, r) if gens is None
            else tuple(action_matrix_direct(g, r) for g in gens))
    return invariant_span(field, mats, _as_rows(field, n, r, vectors))


def invariant_span(field: FieldSpec, mats: Sequence[np.ndarray], rows: np.ndarray) -> Subspace:
    """Smallest subspace containing ``rows`` and closed under v -> v M for M in ``mats``."""
    rows = np.asarray(rows, dtype=np.int64)
    size = rows.shape[1]
    coos = [linalg.to_coo(M) for M in mats]
    space = Subspace(field, size, rows)
    pending = space.basis
    # only vectors that enlarged the span need expanding again
    while pending.shape[0] and space.dim < size:
        images = np.vstack([linalg.sparse_product(field, pending, c, size) for c in coos])
        residue = _residue(field, space, images)
        fresh = Subspace(field, size, residue[residue.any(axis=1)])
        if fresh.dim == 0:
            break
        space = space + fresh
        pending = fresh.basis
    return space


def _residue(F: FieldSpec, space: Subspace, V: np.ndarray) -> np.ndarray:
    """V minus its components along the pivots of an RREF basis."""
    if space.dim == 0:
        return V
    coeffs = V[:, space.pivots]
    return linalg.add(F, V, F.neg_table[linalg.matmul(F, coeffs, space.basis)])


def invariant_monomial_sets_bruteforce(field: FieldSpec, n: int, r: int) -> list[frozenset[Exponent]]:
    """Every monomial subset whose span is generator-invariant (2^|Omega| scan)."""
    basis = enumerate_omega(field.q, n, r)
    succ = _successors(field, n, r)
    succ_mask = [sum(1 << b for b in s) for s in succ]
    found = []
    for mask in range(1 << len(basis)):
        ok = True
        m = mask
        while m:
            low = m & -m
            a = low.bit_length() - 1
            if succ_mask[a] & ~mask:
                ok = False
                break
            m ^= low
        if ok:
            found.append(frozenset(basis[a] for a in range(len(basis)) if mask >> a & 1))
    return found


def invariant_monomial_sets_graph(field: FieldSpec, n: int, r: int) -> list[frozenset[Exponent]]:
    """Same family via the support graph: closed sets are unions of reachability classes."""
    basis = enumerate_omega(field.q, n, r)
    succ = _successors(field, n, r)
    reach = []
    for a in range(len(basis)):
        seen, stack = {a}, [a]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach.append(frozenset(seen))
    # strongly connected classes, ordered so that reachable classes come first
    classes = sorted({frozenset(b for b in reach[a] if a in reach[b]) for a in range(len(basis))},
                     key=lambda c: len(reach[next(iter(c))]))
    below = {c: frozenset().union(*(reach[a] for a in c)) - c for c in classes}
    found: list[frozenset[int]] = []

    def rec(k: int, chosen: frozenset[int]):
        if k == len(classes):
            found.append(chosen)
            return
        rec(k + 1, chosen)
        c = classes[k]
        if below[c] <= chosen:
            rec(k + 1, chosen | c)

    rec(0, frozenset())
    return [frozenset(basis[a] for a in s) for s in found]


def digit_transfer(D: Sequence[Sequence[int]], source: int, target: int, column: int,
                   p: int) -> tuple[tuple[int, ...], ...]:
    """Move one unit from D[source][column] to D[target][column]."""
    if source == target:
        raise ValueError("source and target rows coincide")
    if D[source][column] <= 0:
        raise ValueError("source digit is already zero")
    if D[target][column] >= p - 1:
        raise ValueError("target digit is already p - 1")
    rows = [list(row) for row in D]
    rows[source][column] -= 1
    rows[target][column] += 1
    return tuple(tuple(row) for row in rows)


def transfer_neighbours(i: Sequence[int], p: int, m: int) -> list[Exponent]:
    """Exponent tuples one digit transfer away from i."""
    D = digit_matrix(i, p, m)
    out = set()
    n = len(i)
    for col in range(m):
        for s, t in itertools.permutations(range(n), 2):
            if D[s][col] > 0 and D[t][col] < p - 1:
                out.add(from_digit_matrix(digit_transfer(D, s, t, col, p), p))
    return sorted(out)


def support_respects_order(poset: TPoset, A: GroupElement) -> bool:
    """Every X^j in the degree-r part of A(X^i) has T(j) <= T(i)."""
    p, m = poset.p, poset.m
    M = action_matrix_direct(A, poset.r)
    basis = enumerate_omega(poset.q, poset.n, poset.r)
    for a, b in zip(*np.nonzero(M)):
        if not leq(t_signature(basis[b], p, m), t_signature(basis[a], p, m)):
            return False
    return True


# -- ideal correspondence checks ------------------------------------------------------

@dataclass
class LatticeReport:
    q: int
    n: int
    r: int
    checks: dict[str, str] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v != "fail" for v in self.checks.values())

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "r": self.r, "ok": self.ok,
                "checks": dict(self.checks), "details": self.details}


def _status(flag: bool) -> str:
    return "pass" if flag else "fail"


def verify_theorem38(q: int, n: int, r: int, exhaustive_budget: int = 16,
                     samples: int = 10, seed: int = 0) -> LatticeReport:
    """Cross-check the ideal -> submodule correspondence against brute force.

    principal: closure(X^i) equals M(down-set of T(i)) for every monomial.
    invariant: every M(I) is generator-invariant.
    injective: distinct ideals give distinct subspaces.
    exhaustive: all monomial subsets with invariant span are T^-1(I) for an
        ideal I; skipped when |Omega| exceeds ``exhaustive_budget``.
    graph: the same statement via the support graph (no size limit).
    monomial_closure: closures of random non-monomial vectors are spanned by
        the monomials they contain.
    """
    F = field_of_order(q)
    poset = enumerate_signatures(q, n, r)
    basis = enumerate_omega(q, n, r)
    report = LatticeReport(q, n, r)
    ideals = ideals_enumerate(poset)
    modules = [module_of_ideal(poset, I, check=False) for I in ideals]
    report.details["signatures"] = len(poset)
    report.details["ideals"] = len(ideals)

    bad = []
    for i in basis:
        t = t_signature(i, poset.p, poset.m)
        expected = module_of_ideal(poset, poset.principal(t), check=False).subspace
        if closure_oracle([HElement(F, n, r, {i: 1})]) != expected:
            bad.append(list(i))
    report.checks["principal"] = _status(not bad)
    if bad:
        report.details["principal_failures"] = bad

    report.checks["invariant"] = _status(all(M.is_invariant() for M in modules))
    report.checks["injective"] = _status(len({M.subspace for M in modules}) == len(modules))

    expected_sets = {frozenset(M.monomials) for M in modules}
    if len(basis) <= exhaustive_budget:
        found = set(invariant_monomial_sets_bruteforce(F, n, r))
        report.checks["exhaustive"] = _status(found == expected_sets)
        report.details["invariant_subsets"] = len(found)
    else:
        report.checks["exhaustive"] = "skipped"
    found_graph = set(invariant_monomial_sets_graph(F, n, r))
    report.checks["graph"] = _status(found_graph == expected_sets)

    rng = np.random.default_rng([seed, q, n, r])
    bad_samples = 0
    if len(basis) >= 2:
        for _ in range(samples):
            v = np.zeros(len(basis), dtype=np.int64)
            support = rng.choice(len(basis), size=min(len(basis), int(rng.integers(2, 5))),
                                 replace=False)
            v[support] = rng.integers(1, q, size=len(support))
            W = closure_oracle([v], F, n, r)
            inside = [k for k in range(len(basis)) if W.contains(np.eye(len(basis), dtype=np.int64)[k])]
            if Subspace(F, len(basis), np.eye(len(basis), dtype=np.int64)[inside]) != W:
                bad_samples += 1
        report.checks["monomial_closure"] = _status(bad_samples == 0)
    else:
        report.checks["monomial_closure"] = "skipped"
    return report
