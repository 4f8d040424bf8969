"""Matrix groups over a Weil algebra.

T_A G is again a group: matrices with entries in A whose real part lies in
G.  Its exponential is the ordinary power series, its bracket the
commutator, and every element factors as a fibre element times the zero
section of its real part.
"""

import math

import numpy as np
from scipy.linalg import expm

from weilfunctor import AlgebraElement, dual, tensor_product
from weilfunctor.liegroup import LiftedLieAlgebraElement, lifted_bracket, lifted_exp, pure_tensor, random_group, semidirect_check

D = dual()
gen = np.array([[0.0, -1.0], [1.0, 0.0]])
theta, delta = 0.8, 0.3
x = LiftedLieAlgebraElement(D, np.stack([theta * gen, delta * gen], axis=-1), "antisymmetric")
m = lifted_exp(x)
print("exp over D of (theta + delta*x) * J:")
print("  real part matches expm:", np.allclose(m.shadow(), expm(theta * gen)))
print("  x part / delta =", np.round(m.entries[..., 1] / delta, 6).tolist())
print("  dR/dtheta       =", np.round(np.array([[-math.sin(theta), -math.cos(theta)], [math.cos(theta), -math.sin(theta)]]), 6).tolist())

# [X (x) a, Y (x) b] = [X, Y] (x) ab; with a = b = a first-order generator, ab = 0
DD = tensor_product(D, D)
a = AlgebraElement(DD, [0, 1, 0, 0])
b = AlgebraElement(DD, [0, 0, 1, 0])
X, Y = np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])
print("\n[X a, Y a] vanishes:", not np.any(lifted_bracket(pure_tensor(X, a), pure_tensor(Y, a)).entries))
print("[X a, Y b] lives in the x|x slot:", lifted_bracket(pure_tensor(X, a), pure_tensor(Y, b)).entries[..., 3].tolist())

g = random_group(DD, 3, "GL", np.random.default_rng(0))
rep = semidirect_check(g)
print(f"\nGL(3) over D*D: M = U * 0(g) reassembles to {rep.residual:.1e}, U projects to I within {rep.fiber_residual:.1e}")
