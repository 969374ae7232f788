"""The maps theta and ( )^c between H_q(r, n) and H_q(r', n), and GL-orbits."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gf import make_field
from .glaction import (
    GroupElement,
    action_matrix,
    apply_h,
    diagonal_factorial,
    generators,
)
from .polyfun import HElement, complement, enumerate_omega, tuple_factorial

DEFAULT_ORBIT_BUDGET = 10**6


def dual_degree(h: HElement) -> int:
    return h.n * (h.field.q - 1) - h.r


def theta(h: HElement) -> HElement:
    """X^i -> i! (-1)^n X^(complement of i), extended linearly."""
    F, n = h.field, h.n
    sign = F.minus_one_pow(n)
    out: dict = {}
    for i, c in h.terms.items():
        coeff = F.mul(F.mul(c, tuple_factorial(F, i)), sign)
        if coeff:
            out[complement(i, F.q)] = coeff
    return HElement(F, n, dual_degree(h), out)


def c_map(h: HElement) -> HElement:
    """X^i -> (-1)^n X^(complement of i), extended linearly."""
    F, n = h.field, h.n
    sign = F.minus_one_pow(n)
    out = {complement(i, F.q): F.mul(c, sign) for i, c in h.terms.items()}
    return HElement(F, n, dual_degree(h), out)


def theta_is_injective(q: int, n: int, r: int, p: int) -> bool:
    """theta is injective iff no i in Omega_{q,n,r} has an entry >= p."""
    return all(max(i) < p for i in enumerate_omega(q, n, r))


@dataclass
class DualityFailure:
    element: GroupElement
    witness: tuple[int, ...]
    lhs: HElement | None
    rhs: HElement | None
    path: str = "polynomial"

    def to_json(self) -> dict:
        return {
            "A": self.element.to_json()["A"],
            "witness": list(self.witness),
            "lhs": None if self.lhs is None else self.lhs.to_json(),
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "path": self.path,
        }


@dataclass
class DualityReport:
    q: int
    n: int
    r: int
    r_dual: int
    trials: int = 0
    failures: list[DualityFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "q": self.q, "n": self.n, "r": self.r, "r_dual": self.r_dual,
            "trials": self.trials, "ok": self.ok,
            "failures": [f.to_json() for f in self.failures],
        }


def verify_theorem22(A: GroupElement, r: int) -> list[DualityFailure]:
    """Check theta(A(X^i)) == B(theta(X^i)) for B = (A^-1)^T and every basis monomial.

    A second, matrix-level path checks M(A) D_r == D_r M(A^T)^T, i.e. the
    same square through the factorial intertwining identity with B^-1 = A^T.
    """
    if not A.is_linear:
        raise ValueError("duality is stated for linear elements")
    F, n = A.field, A.n
    B = A.inverse().transpose()
    failures: list[DualityFailure] = []
    for i in enumerate_omega(F.q, n, r):
        x = HElement(F, n, r, {i: 1})
        lhs = theta(apply_h(A, x))
        rhs = apply_h(B, theta(x))
        if lhs != rhs:
            failures.append(DualityFailure(A, i, lhs, rhs))
    D = diagonal_factorial(F, n, r)
    left = linalg.matmul(F, action_matrix(A, r), D)
    right = linalg.matmul(F, D, action_matrix(A.transpose(), r).T)
    if not np.array_equal(left, right):
        failures.append(DualityFailure(A, (), None, None, path="matrix"))
    return failures


def verify_duality(elements: Iterable[GroupElement], r: int) -> DualityReport:
    report = None
    for A in elements:
        if report is None:
            q, n = A.field.q, A.n
            report = DualityReport(q, n, r, n * (q - 1) - r)
        report.trials += 1
        report.failures.extend(verify_theorem22(A, r))
    if report is None:
        raise ValueError("no group elements supplied")
    return report


# -- orbits -----------------------------------------------------------------------------

class Equivalence(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class Orbit:
    elements: set[HElement]
    closed: bool

    def __len__(self):
        return len(self.elements)

    def __contains__(self, h):
        return h in self.elements


def orbit(h: HElement, budget: int = DEFAULT_ORBIT_BUDGET,
          gens: Sequence[GroupElement] | None = None) -> Orbit:
    """BFS closure of {h} under the GL generators acting on H_q(r, n)."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    gens = list(gens) if gens is not None else generators(h.n, h.field)
    seen = {h}
    frontier = [h]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = apply_h(g, x)
                if y not in seen:
                    if len(seen) >= budget:
                        return Orbit(seen, closed=False)
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Orbit(seen, closed=True)


def gl_equivalent(f: HElement, g: HElement, budget: int = DEFAULT_ORBIT_BUDGET) -> Equivalence:
    if (f.field, f.n, f.r) != (g.field, g.n, g.r):
        raise ValueError("elements live in different modules")
    if f == g:
        return Equivalence.YES
    orb = orbit(f, budget)
    if g in orb:
        return Equivalence.YES
    return Equivalence.NO if orb.closed else Equivalence.BUDGET_EXCEEDED


def reproduce_example24(budget: int = DEFAULT_ORBIT_BUDGET) -> dict:
    """q = 4, n = 2, r = 4: f = X1^3 X2 and g = X1^3 X2 + X1^2 X2^2 + X1 X2^3."""
    F = make_field(2, 2)
    f = HElement(F, 2, 4, {(3, 1): 1})
    g = HElement(F, 2, 4, {(3, 1): 1, (2, 2): 1, (1, 3): 1})
    fc, gc = c_map(f), c_map(g)
    orb_f = orbit(f, budget)
    orb_fc = orbit(fc, budget)
    expected_fc = HElement(F, 2, 2, {(0, 2): 1})
    expected_gc = HElement(F, 2, 2, {(0, 2): 1, (1, 1): 1, (2, 0): 1})
    claims = {
        "f ~ g": orb_f.closed and g in orb_f,
        "f^c = X2^2": fc == expected_fc,
        "g^c = X2^2 + X1*X2 + X1^2": gc == expected_gc,
        "f^c !~ g^c": orb_fc.closed and gc not in orb_fc,
        "theta(f) = theta(g) = 0": not theta(f) and not theta(g),
    }
    return {
        "claims": claims,
        "ok": all(claims.values()),
        "orbit_sizes": {"f": len(orb_f), "f^c": len(orb_fc)},
        "f": str(f), "g": str(g), "f^c": str(fc), "g^c": str(gc),
    }
