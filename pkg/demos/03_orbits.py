"""Two polynomials that are equivalent while their complements are not."""
from __future__ import annotations

from rmquot.duality import c_map, gl_equivalent, orbit
from rmquot.gf import field_of_order
from rmquot.polyfun import HElement

F = field_of_order(4)
f = HElement(F, 2, 4, {(3, 1): 1})
g = HElement(F, 2, 4, {(3, 1): 1, (2, 2): 1, (1, 3): 1})
print(f"f = {f}\ng = {g}")
print("f ~ g:", gl_equivalent(f, g).value)

fc, gc = c_map(f), c_map(g)
print(f"f^c = {fc}\ng^c = {gc}")
print("f^c ~ g^c:", gl_equivalent(fc, gc).value)

o = orbit(fc)
print(f"orbit of f^c has {len(o)} elements (closed: {o.closed})")
