"""Signatures, ideals and submodules of H_8(8,4)."""
from __future__ import annotations

from rmquot.gf import field_of_order
from rmquot.lattice import (
    closure_oracle,
    enumerate_signatures,
    ideals_enumerate,
    module_of_ideal,
    t_signature,
)
from rmquot.polyfun import HElement

q, n, r = 8, 4, 8
F = field_of_order(q)
poset = enumerate_signatures(q, n, r)
print(f"{len(poset)} signatures:", list(poset.nodes))

for I in ideals_enumerate(poset):
    M = module_of_ideal(poset, I)
    print(f"  boundary {list(I.boundary)!s:28} dim {M.dim:3d}")

# the closure of a monomial is the module of the down-set of its signature
i = (2, 2, 2, 2)
t = t_signature(i, F.p, F.m)
W = closure_oracle([HElement(F, n, r, {i: 1})])
expected = module_of_ideal(poset, poset.principal(t)).subspace
print(f"closure of X^{i}: dim {W.dim}, signature {t}, matches ideal module: {W == expected}")
