"""Higher-order Taylor coefficients from a single evaluation.

Truncated polynomial algebras R[x]/(x^(r+1)) carry r Taylor coefficients,
and multivariate jets carry every mixed partial up to a total degree.
Functions are recorded once as expression graphs, then evaluated over
whatever algebra is needed.
"""

import numpy as np

from weilfunctor import LiftedVector, eval_lift, jet, parse_expressions, preset, taylor_formula_oracle, trace
from weilfunctor.lift import cos, exp

# a graph from text and one from tracing a Python function
g = parse_expressions("exp(x1) * cos(x1)")
h = trace(1, lambda t: exp(t) * cos(t))

J4 = jet(4)
point = LiftedVector.seed(J4, [0.0])
for name, graph in (("parsed", g), ("traced", h)):
    print(f"{name:7s}", np.round(eval_lift(graph, point).coeffs()[0], 12))
print("Maclaurin of e^t cos t: 1, 1, 0, -1/3, -1/6")

# mixed partials of a two-variable function over jet:2:2
f = parse_expressions("x1^2 * x2 + x2^3")
J22 = preset("jet:2:2")
out = eval_lift(f, LiftedVector.seed(J22, [1.0, 2.0]))[0]
print("\nbasis of", J22.name, J22.labels())
print("coefficients    ", out.coeffs)
print("f, f_x, f_y, f_xx/2, f_xy, f_yy/2 at (1,2) are 10, 4, 13, 2, 2, 6")

# the same numbers from the explicit multivariate Taylor formula
oracle = taylor_formula_oracle(f, LiftedVector.seed(J22, [1.0, 2.0]))[0]
print("Taylor formula  ", oracle.coeffs)
