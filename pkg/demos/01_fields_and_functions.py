"""Finite fields, reduced polynomials and the function they define."""
from __future__ import annotations

from rmquot.gf import FieldElement, field_of_order
from rmquot.polyfun import enumerate_omega, interpolate, parse_polynomial, value_table

F = field_of_order(8)
print(f"F_8 is built modulo {F.modulus} with primitive element {F.gamma}")
g = FieldElement(F, F.gamma)
print("powers of gamma:", [int(g**k) for k in range(8)])

# x^q = x as functions, so exponents reduce to at most q - 1
F4 = field_of_order(4)
f = parse_polynomial(F4, 2, "X1^5*X2 + X1*X2^4")
print("X1^5*X2 + X1*X2^4 reduces to", f)

# a function F_q^n -> F_q has exactly one reduced representative
table = value_table(f)
print("interpolating its value table gives back", interpolate(F4, 2, table))

print("degree-4 exponents for q=4, n=2:", enumerate_omega(4, 2, 4))
