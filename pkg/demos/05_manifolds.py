"""Lifting maps between manifolds given by charts.

Points of T_A M are chart coordinates with entries in A.  Changing charts
applies the lifted transition, and maps are lifted chart by chart.  Over D
the sphere's transitions act linearly on the fibres (the tangent bundle);
over 2-jets the second-order terms mix in and linearity fails.
"""

import math

from weilfunctor import LiftedVector, dual, jet
from weilfunctor.manifold import circle_antipodal, circle_atlas, is_vector_bundle, lift_map, sphere_atlas, sphere_height, to_chart

S1 = circle_atlas()
p = S1.point(0, LiftedVector.from_coeffs(dual(), [[1.0, 0.25]]))
q = lift_map(circle_antipodal(S1), p)
print("antipodal map on the circle over D:")
print(f"  angle {p.coords.shadow()[0]} -> {q.coords.shadow()[0]:.6f} (expected {1 + math.pi:.6f} up to 2pi)")
print("  tangent slot", q.coords.coeffs()[0, 1])

S2 = sphere_atlas()
p = S2.point(0, LiftedVector.from_coeffs(dual(), [[1.0, 1.0], [0.0, 0.0]]))
print("\nnorth chart (1, 0) with tangent (1, 0) seen from the south chart:")
print(" ", to_chart(p, 1).coords.coeffs().tolist())

h = lift_map(sphere_height(S2), S2.point(0, LiftedVector.from_coeffs(jet(2), [[0.5, 1.0, 0.0], [0.2, 0.0, 0.0]])))
print("\nheight function along a curve, over jet:2:", h.coords.coeffs()[0])

for alg in (dual(), jet(2)):
    verdict = is_vector_bundle(S2, alg)
    print(f"\n{alg.name} on S2: vector bundle = {verdict.is_vector_bundle}")
    if verdict.witness is not None:
        w = verdict.witness
        print(f"  witness: transition {w.transition} at {w.base_point.round(3)}, defect {w.defect:.3g}")
