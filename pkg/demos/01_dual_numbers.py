"""Dual numbers as forward-mode differentiation.

Over D = R[x]/(x^2) an element a + b*x carries a value and a derivative.
Pushing a + x through a smooth function f gives f(a) + f'(a)*x, so the
x-slot of the result is the derivative with no step size involved.
"""

import math

from weilfunctor import AlgebraElement, dual, validate
from weilfunctor.lift import exp, sin

D = dual()
print("algebra:", D.name, "dim", D.dim, "labels", D.labels())
print("validate:", validate(D).summary())

x = AlgebraElement(D, [0.5, 1.0])  # 0.5 + x
print("\nseeded point:", x)

# plain arithmetic already differentiates
y = x**3 - 2 * x
print("x^3 - 2x    ->", y, " expected derivative", 3 * 0.5**2 - 2)

# inverses use the geometric series in the nilpotent part
print("1/(2 + 4x)  ->", 1 / AlgebraElement(D, [2.0, 4.0]))

# transcendental primitives come from closed-form Taylor tables
z = sin(exp(x))
want = math.cos(math.exp(0.5)) * math.exp(0.5)
print("sin(exp(x)) ->", z)
print(f"analytic derivative {want:.12g}, error {abs(z.coeffs[1] - want):.1e}")
