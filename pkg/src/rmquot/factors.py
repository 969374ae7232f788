"""Composition series of H_q(r, n) and its factors M(t).

Peeling one maximal signature at a time from the full poset gives a chain of
ideals whose successive quotients are spanned by single fibres T^-1(t).  The
action on such a quotient keeps only the same-signature terms, so it is a
principal submatrix of the full action matrix.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gf import FieldSpec, field_of_order
from .glaction import (
    GroupElement,
    action_matrix_direct,
    all_gl,
    generators,
    gl_order,
    random_gl,
)
from .lattice import (
    PosetIdeal,
    Signature,
    column_sums,
    enumerate_signatures,
    invariant_span,
    t_signature,
)
from .polyfun import Exponent, omega_index

FINGERPRINT_EXHAUSTIVE_LIMIT = 10**4
FINGERPRINT_SAMPLES = 512
FINGERPRINT_SEED = 20240611


def _check_params(q: int, n: int) -> FieldSpec:
    if n < 1:
        raise ValueError("n must be positive")
    return field_of_order(q)


def validate_signature(t: Sequence[int], q: int, n: int) -> Signature:
    """Return t as a tuple if it satisfies the signature conditions for (q, n)."""
    F = _check_params(q, n)
    p, m = F.p, F.m
    t = tuple(int(x) for x in t)
    if len(t) != m:
        raise ValueError(f"signature {t} must have {m} entries for q={q}")
    r = t[-1]
    if not 0 <= r <= n * (q - 1):
        raise ValueError(f"degree {r} out of range for q={q}, n={n}")
    s = column_sums(t, p)
    if any(not 0 <= sk <= n * (p - 1) for sk in s):
        raise ValueError(f"{t}: column sums {s} outside [0, {n * (p - 1)}]")
    if any((r - tk) % p ** (k + 1) for k, tk in enumerate(t)):
        raise ValueError(f"{t}: partial sums are not congruent to r = {r}")
    return t


# -- composition chain -----------------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    removed: Signature
    factor_basis: tuple[Exponent, ...]

    @property
    def factor_dim(self) -> int:
        return len(self.factor_basis)

    def to_json(self) -> dict:
        return {"removed": list(self.removed), "factor_dim": self.factor_dim,
                "factor_basis": [list(i) for i in self.factor_basis]}


@dataclass(frozen=True)
class CompositionChain:
    q: int
    n: int
    r: int
    ideals: tuple[PosetIdeal, ...]  # I_0 = {} up to I_N = everything
    steps: tuple[ChainStep, ...]  # in removal order, top of the chain first

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "r": self.r,
                "steps": [s.to_json() for s in self.steps]}


def composition_chain(q: int, n: int, r: int) -> CompositionChain:
    """Peel the lexicographically largest maximal signature until nothing is left."""
    _check_params(q, n)
    poset = enumerate_signatures(q, n, r)
    current = set(poset.nodes)
    ideals = [PosetIdeal(frozenset(current))]
    steps = []
    while current:
        t = max(poset.maximal(current))
        current.remove(t)
        ideals.append(PosetIdeal(frozenset(current)))
        steps.append(ChainStep(t, tuple(poset.preimage([t]))))
    return CompositionChain(q, n, r, tuple(reversed(ideals)), tuple(steps))


# -- factor modules --------------------------------------------------------------------

@dataclass(frozen=True)
class FactorModule:
    q: int
    n: int
    t: Signature

    @property
    def r(self) -> int:
        return self.t[-1]

    @cached_property
    def field(self) -> FieldSpec:
        return field_of_order(self.q)

    @cached_property
    def basis(self) -> tuple[Exponent, ...]:
        poset = enumerate_signatures(self.q, self.n, self.r)
        if self.t not in poset.fibers:
            raise ValueError(f"{self.t} is not a signature of Omega_{{{self.q},{self.n},{self.r}}}")
        return tuple(poset.preimage([self.t]))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _positions(self) -> np.ndarray:
        idx = omega_index(self.q, self.n, self.r)
        return np.array([idx[i] for i in self.basis], dtype=np.int64)

    def action(self, A: GroupElement) -> np.ndarray:
        """Row k is the image of the k-th basis monomial, truncated to the fibre."""
        if A.field.q != self.q or A.n != self.n:
            raise ValueError("group element acts on a different module")
        pos = self._positions
        return action_matrix_direct(A, self.r)[np.ix_(pos, pos)]

    def trace(self, A: GroupElement) -> int:
        M = self.action(A)
        F = self.field
        acc = 0
        for k in range(M.shape[0]):
            acc = F.add(acc, int(M[k, k]))
        return acc


def factor_module(t: Sequence[int], q: int, n: int) -> FactorModule:
    t = validate_signature(t, q, n)
    mod = FactorModule(q, n, t)
    _ = mod.basis  # raises when t is not attained
    return mod


def factor_action(A: GroupElement, t: Sequence[int]) -> np.ndarray:
    return factor_module(t, A.field.q, A.n).action(A)


# -- counting ----------------------------------------------------------------------------

def dim_formula(t: Sequence[int], q: int, n: int) -> int:
    """Product over digit columns of the number of n-tuples of digits summing to s_j."""
    F = _check_params(q, n)
    t = validate_signature(t, q, n)
    p = F.p
    dim = 1
    for s in column_sums(t, p):
        dim *= sum((-1) ** k * math.comb(n, k) * math.comb(n - 1 + s - k * p, n - 1)
                   for k in range(n + 1) if s - k * p >= 0)
    return dim


def counting_series(q: int, n: int) -> list[int]:
    """Coefficients of sum_r |T(Omega_{q,n,r})| X^r, for r = 0 .. n(q-1)."""
    F = _check_params(q, n)
    p, m = F.p, F.m
    coeffs = [1]
    for k in range(m):
        step = p**k
        factor = [0] * (n * (p - 1) * step + 1)
        for j in range(n * (p - 1) + 1):
            factor[j * step] = 1
        out = [0] * (len(coeffs) + len(factor) - 1)
        for a, ca in enumerate(coeffs):
            if ca:
                for b, cb in enumerate(factor):
                    if cb:
                        out[a + b] += ca * cb
        coeffs = out
    return coeffs


def total_length(q: int, n: int) -> int:
    F = _check_params(q, n)
    return (n * (F.p - 1) + 1) ** F.m


# -- non-isomorphism evidence ------------------------------------------------------------

@dataclass
class EvidenceReport:
    q: int
    n: int
    t1: Signature
    t2: Signature
    dims: tuple[int, int]
    verdict: str  # "isomorphic", "distinguished" or "inconclusive"
    reason: str
    elements_checked: int = 0
    exhaustive: bool = False
    witness_element: GroupElement | None = None
    witness_traces: tuple[int, int] | None = None

    def to_json(self) -> dict:
        out = {"q": self.q, "n": self.n, "t1": list(self.t1), "t2": list(self.t2),
               "dims": list(self.dims), "verdict": self.verdict, "reason": self.reason,
               "elements_checked": self.elements_checked, "exhaustive": self.exhaustive}
        if self.witness_element is not None:
            out["witness_element"] = self.witness_element.to_json()
            out["witness_traces"] = list(self.witness_traces)
        return out


def fingerprint_elements(n: int, F: FieldSpec, mode: str = "auto",
                         seed: int = FINGERPRINT_SEED,
                         samples: int = FINGERPRINT_SAMPLES) -> tuple[list[GroupElement], bool]:
    """Elements used for trace fingerprints, and whether they are the whole group."""
    if mode not in ("auto", "exhaustive", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    small = gl_order(n, F.q) <= FINGERPRINT_EXHAUSTIVE_LIMIT
    if mode == "exhaustive" or (mode == "auto" and small):
        return list(all_gl(n, F)), True
    return [random_gl(n, F, seed, k) for k in range(samples)], False


def nonisomorphism_evidence(t1: Sequence[int], t2: Sequence[int], q: int, n: int,
                            mode: str = "auto", seed: int = FINGERPRINT_SEED,
                            samples: int = FINGERPRINT_SAMPLES) -> EvidenceReport:
    """One-directional evidence that M(t1) and M(t2) are not isomorphic.

    Differing dimensions or differing traces at a common group element prove
    non-isomorphism.  Agreement proves nothing and is reported as
    "inconclusive", except for the degree-0 / top-degree pair whose actions
    are both trivial.
    """
    M1, M2 = factor_module(t1, q, n), factor_module(t2, q, n)
    dims = (M1.dim, M2.dim)
    report = EvidenceReport(q, n, M1.t, M2.t, dims, "inconclusive", "")
    if dims[0] != dims[1]:
        report.verdict, report.reason = "distinguished", "dimension"
        return report
    F = M1.field
    elements, exhaustive = fingerprint_elements(n, F, mode, seed, samples)
    report.exhaustive = exhaustive
    trivial = True
    for A in elements:
        report.elements_checked += 1
        a1, a2 = M1.action(A), M2.action(A)
        tr1, tr2 = M1.trace(A), M2.trace(A)
        if tr1 != tr2:
            report.verdict, report.reason = "distinguished", "trace"
            report.witness_element, report.witness_traces = A, (tr1, tr2)
            return report
        if trivial and not (a1.shape == (1, 1) and a1[0, 0] == 1 and np.array_equal(a1, a2)):
            trivial = False
    top = n * (q - 1)
    if {M1.r, M2.r} == {0, top} and M1.r != M2.r and trivial:
        report.verdict, report.reason = "isomorphic", "both actions trivial"
    else:
        report.reason = "dimensions and traces agree"
    return report


# -- irreducibility ----------------------------------------------------------------------

@dataclass
class IrreducibilityReport:
    t: Signature
    dim: int
    trials: int
    counterexamples: list[list[int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"t": list(self.t), "dim": self.dim, "trials": self.trials, "ok": self.ok,
                "counterexamples": self.counterexamples}


def irreducibility_sample_check(t: Sequence[int], q: int, n: int, trials: int = 50,
                                seed: int = 0) -> IrreducibilityReport:
    """Closure of random nonzero factor vectors under the generators must be everything."""
    mod = factor_module(t, q, n)
    F = mod.field
    report = IrreducibilityReport(mod.t, mod.dim, trials)
    mats = [mod.action(g) for g in generators(n, F)]
    rng = np.random.default_rng([seed, q, n, *mod.t])
    for _ in range(trials):
        v = np.zeros(mod.dim, dtype=np.int64)
        while not v.any():
            v = rng.integers(0, q, size=mod.dim)
        if invariant_span(F, mats, v[None, :]).dim != mod.dim:
            report.counterexamples.append([int(x) for x in v])
    return report


def signature_of(i: Sequence[int], q: int) -> Signature:
    F = field_of_order(q)
    return t_signature(i, F.p, F.m)


def factor_multiset(q: int, n: int, r: int) -> Counter:
    """Signature -> multiplicity along the chain (each should be 1)."""
    return Counter(step.removed for step in composition_chain(q, n, r).steps)
