"""The GL action on the degree-r quotient and the theta duality."""
from __future__ import annotations

from rmquot.duality import theta, verify_duality
from rmquot.gf import field_of_order
from rmquot.glaction import GroupElement, action_matrix, all_gl, apply_h, sample_gl
from rmquot.polyfun import HElement

F = field_of_order(4)
A = GroupElement.linear(F, [[1, 0], [1, 1]])  # X1 -> X1 + X2
x = HElement(F, 2, 4, {(3, 1): 1})
print(f"A sends {x} to {apply_h(A, x)} (lower-degree terms dropped)")

# rows of the action matrix are images of basis monomials
print("action matrix on H_4(4,2):")
print(action_matrix(A, 4))

y = HElement(F, 2, 2, {(1, 1): 1})
print(f"theta({y}) = {theta(y)}")

rep = verify_duality(all_gl(2, F), 4)
print(f"duality square over all of GL(2,F_4) at r=4: {rep.trials} elements, ok={rep.ok}")
rep = verify_duality(sample_gl(2, field_of_order(9), 1, 50), 3)
print(f"50 random elements of GL(2,F_9) at r=3: ok={rep.ok}")
