"""Tensor products: lifting twice equals lifting once over A (x) B.

A lift over D, then another over D, agrees with a single lift over the
four-dimensional D (x) D.  The exchange isomorphism swaps the two factors;
at the level of derivatives it swaps the two first-order slots.
"""

from weilfunctor import LiftedVector, dual, eval_lift, exchange_iso, parse_expressions, push_hom, tensor_product
from weilfunctor.lift import flatten, lift_graph, nest, relative_residual

D = dual()
DD = tensor_product(D, D)
print(DD.name, "labels", DD.labels(), "height", DD.height)

f = parse_expressions("sin(x1 * x2) + x1^3")
v = LiftedVector.seed(DD, [0.7, 1.3])
flat = eval_lift(f, v)
print("\nflat over D*D:   ", flat[0].coeffs)

# nested: lift the graph to D first, then evaluate that graph over D
nested = flatten(eval_lift(lift_graph(f, D), nest(v, D, D)), D, D)
print("nested D then D: ", nested[0].coeffs)
print("residual", relative_residual(flat, nested))

swap = exchange_iso(D, D)
print("\nexchanged:       ", push_hom(swap, flat)[0].coeffs)
print("the x|1 and 1|x slots trade places; the rest is untouched")
