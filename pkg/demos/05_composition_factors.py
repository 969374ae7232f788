"""Composition factors: a chain, their dimensions, and telling factors apart."""
from __future__ import annotations

from rmquot.factors import (
    composition_chain,
    counting_series,
    dim_formula,
    irreducibility_sample_check,
    nonisomorphism_evidence,
    total_length,
)

chain = composition_chain(8, 4, 8)
for step in chain.steps:
    print(f"remove {step.removed}: factor of dimension {step.factor_dim}"
          f" (formula {dim_formula(step.removed, 8, 4)})")

print("factors per degree, q=8, n=4:", counting_series(8, 4))
print("total composition length:", total_length(8, 4))

# the natural module and its Frobenius twist have equal dimension but different traces
rep = nonisomorphism_evidence((1, 1), (0, 2), 4, 2)
print(f"(1,1) vs (0,2) over F_4: {rep.verdict} by {rep.reason}, traces {rep.witness_traces}")
rep = nonisomorphism_evidence((0, 0), (2, 6), 4, 2)
print(f"(0,0) vs (2,6): {rep.verdict}")

print("sampled irreducibility of (1,3):", irreducibility_sample_check((1, 3), 4, 2).ok)
