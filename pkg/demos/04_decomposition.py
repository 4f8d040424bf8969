"""Splitting a formally real algebra into local pieces.

A finite algebra whose only idempotents are hidden by a change of basis can
still be split: the minimal idempotents are recovered numerically and each
cut-out summand is a Weil algebra.  Complex numbers are rejected because
1 + i^2 is not invertible.
"""

import numpy as np

from weilfunctor import NotFormallyRealError, direct_sum, dual, jet, loads_algebra, minimal_idempotents, real_line, rebase
from weilfunctor.sampling import random_change_of_basis

rng = np.random.default_rng(7)
blocks = [real_line(), dual(), jet(2)]
hidden = rebase(direct_sum(*blocks), random_change_of_basis(rng, 6))
print("structure constants of the rotated algebra are dense:", np.count_nonzero(hidden.structure_constants), "nonzeros")

dec = minimal_idempotents(hidden, seed=0)
print("minimal idempotents found:", len(dec.idempotents))
for e, s in zip(dec.idempotents, dec.summands):
    print(f"  dim {s.dim} height {s.height}   e = {np.round(e.element.coeffs, 6)}")

total = sum(e.element.coeffs for e in dec.idempotents)
print("sum of idempotents minus 1:", np.max(np.abs(total - hidden.unit)))

complex_numbers = loads_algebra("dim 2\nunit 1 0\nsc 0 0 -> 0:1\nsc 0 1 -> 1:1\nsc 1 1 -> 0:-1\n")
try:
    minimal_idempotents(complex_numbers)
except NotFormallyRealError as exc:
    print("\nC is refused:", exc)
