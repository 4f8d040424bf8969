"""Matrix Lie groups lifted through a Weil functor.

A lifted matrix is an ``n x n`` array of algebra elements, stored as a real
array of shape ``(n, n, dim A)``.  Multiplication and inversion are the
lifts of the group operations, i.e. plain matrix algebra with entries in
``A``.  The Lie algebra of ``T_A G`` is stored directly as ``g (x) A``
(matrices with entries in ``A``), so no flip map between ``T_A(T_e G)``
and ``T_e(T_A G)`` appears anywhere.

Supported groups: ``"GL"``, ``"SO"`` and ``"unipotent"`` (upper triangular
with unit diagonal).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, AlgebraHom, WeilAlgebra, elem_invert, real_line
from .errors import AlgebraError, NotInvertibleError

GROUPS = ("GL", "SO", "unipotent")
LIE_TAGS = {"GL": "none", "SO": "antisymmetric", "unipotent": "strictly_upper"}
GROUP_OF_TAG = {v: k for k, v in LIE_TAGS.items()}
GROUP_TOL = 1e-9
LIE_TOL = 1e-12
EXP_TAIL = 1e-14


def _matmul(alg: WeilAlgebra, m: np.ndarray, n: np.ndarray) -> np.ndarray:
    return np.einsum("ija,jkb,abc->ikc", m, n, alg.structure_constants, optimize=True)


def _det(alg: WeilAlgebra, m: np.ndarray) -> np.ndarray:
    """Determinant over ``A`` by the Leibniz formula (small ``n`` only)."""
    n = m.shape[0]
    total = np.zeros(alg.dim)
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = alg.unit
        for i, j in enumerate(perm):
            term = alg.multiply(term, m[i, j])
        total = total + (-1.0) ** inversions * term
    return total


def _identity(alg: WeilAlgebra, n: int) -> np.ndarray:
    return np.einsum("ij,a->ija", np.eye(n), alg.unit)


class LiftedMatrix:
    """An element of ``T_A G`` for a matrix group ``G``."""

    __slots__ = ("algebra", "entries", "group")

    def __init__(self, algebra: WeilAlgebra, entries, group: str = "GL", check: bool = True):
        e = np.array(entries, dtype=float)
        if e.ndim != 3 or e.shape[0] != e.shape[1] or e.shape[2] != algebra.dim:
            raise AlgebraError(f"lifted matrix needs shape (n, n, {algebra.dim}), got {e.shape}")
        if group not in GROUPS:
            raise AlgebraError(f"unknown group {group!r}; expected one of {GROUPS}")
        self.algebra = algebra
        self.entries = e
        self.group = group
        if check:
            check_group(self)

    def __repr__(self):
        return f"<LiftedMatrix {self.group}({self.n}) over {self.algebra.name}>"

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij) -> AlgebraElement:
        i, j = ij
        return AlgebraElement(self.algebra, self.entries[i, j])

    def __matmul__(self, other: LiftedMatrix) -> LiftedMatrix:
        return group_mul(self, other)

    def shadow(self) -> np.ndarray:
        """``pi_A``: the underlying real matrix."""
        return self.entries @ self.algebra.aug

    def det(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, _det(self.algebra, self.entries))

    def to_rows(self) -> list:
        """Row-major nested lists of coefficient vectors."""
        return self.entries.tolist()

    @classmethod
    def from_rows(cls, algebra: WeilAlgebra, rows, group: str = "GL") -> LiftedMatrix:
        return cls(algebra, rows, group)


def check_group(m: LiftedMatrix, tol: float = GROUP_TOL) -> None:
    alg, e, n = m.algebra, m.entries, m.n
    if m.group == "unipotent":
        for i in range(n):
            if not np.array_equal(e[i, i], alg.unit):
                raise AlgebraError(f"not unipotent: diagonal entry ({i}, {i}) is not 1")
            for j in range(i):
                if np.any(e[i, j] != 0.0):
                    raise AlgebraError(f"not unipotent: entry ({i}, {j}) below the diagonal is nonzero")
    elif m.group == "SO":
        mtm = _matmul(alg, e.transpose(1, 0, 2), e)
        res = float(np.max(np.abs(mtm - _identity(alg, n))))
        if res > tol:
            raise AlgebraError(f"not in T_A SO({n}): |M^T M - 1| = {res:.3g}")
        dres = float(np.max(np.abs(_det(alg, e) - alg.unit)))
        if dres > tol:
            raise AlgebraError(f"not in T_A SO({n}): |det - 1| = {dres:.3g}")
    else:
        d = np.linalg.det(m.shadow())
        if d == 0.0 or not np.isfinite(d):
            raise NotInvertibleError(f"not in T_A GL({n}): augmentation of the determinant is zero")


def group_identity(algebra: WeilAlgebra, n: int, group: str = "GL") -> LiftedMatrix:
    return LiftedMatrix(algebra, _identity(algebra, n), group)


def group_mul(m: LiftedMatrix, n: LiftedMatrix) -> LiftedMatrix:
    """``T_A(mu)``: matrix product with entries multiplied in ``A``."""
    if not m.algebra.same_as(n.algebra):
        raise AlgebraError(f"matrices live over {m.algebra.name} and {n.algebra.name}")
    if m.group != n.group or m.n != n.n:
        raise AlgebraError(f"cannot multiply {m.group}({m.n}) by {n.group}({n.n})")
    return LiftedMatrix(m.algebra, _matmul(m.algebra, m.entries, n.entries), m.group, check=False)


def group_inv(m: LiftedMatrix) -> LiftedMatrix:
    """``T_A(nu)``.

    Adjugate over the inverted determinant for ``n <= 3``; otherwise the
    Neumann series ``sum_j (-M0^-1 K)^j M0^-1`` around the real part ``M0``,
    which terminates because ``K`` has nilpotent entries.
    """
    alg, e, n = m.algebra, m.entries, m.n
    base = m.shadow()
    if np.linalg.det(base) == 0.0:
        raise NotInvertibleError(f"not in T_A GL({n}): augmentation of the determinant is zero")
    if n <= 3:
        det_inv = elem_invert(AlgebraElement(alg, _det(alg, e))).coeffs
        out = np.zeros_like(e)
        for i in range(n):
            for j in range(n):
                minor = np.delete(np.delete(e, j, axis=0), i, axis=1)
                cof = _det(alg, minor) if n > 1 else alg.unit
                out[i, j] = (-1) ** (i + j) * alg.multiply(cof, det_inv)
    else:
        base_inv = np.linalg.inv(base)
        lifted_base_inv = np.einsum("ij,a->ija", base_inv, alg.unit)
        k = e - np.einsum("ij,a->ija", base, alg.unit)
        step = -np.einsum("ij,jka->ika", base_inv, k)
        term = lifted_base_inv
        out = term
        for _ in range(alg.height):
            term = _matmul(alg, step, term)
            out = out + term
    return LiftedMatrix(alg, out, m.group, check=False)


class LiftedLieAlgebraElement:
    """An element of ``g (x) A``: an ``n x n`` matrix with entries in ``A``.

    ``tag`` is ``"none"`` (gl), ``"antisymmetric"`` (so) or
    ``"strictly_upper"`` (Lie algebra of the unipotent group).
    """

    __slots__ = ("algebra", "entries", "tag")

    def __init__(self, algebra: WeilAlgebra, entries, tag: str = "none"):
        e = np.array(entries, dtype=float)
        if e.ndim != 3 or e.shape[0] != e.shape[1] or e.shape[2] != algebra.dim:
            raise AlgebraError(f"Lie algebra element needs shape (n, n, {algebra.dim}), got {e.shape}")
        if tag == "antisymmetric":
            res = float(np.max(np.abs(e + e.transpose(1, 0, 2))))
            if res > LIE_TOL:
                raise AlgebraError(f"not antisymmetric (residual {res:.3g})")
        elif tag == "strictly_upper":
            if np.max(np.abs(np.tril(np.ones(e.shape[:2])).astype(bool)[..., None] * e), initial=0.0) > LIE_TOL:
                raise AlgebraError("not strictly upper triangular")
        elif tag != "none":
            raise AlgebraError(f"unknown Lie algebra tag {tag!r}")
        self.algebra = algebra
        self.entries = e
        self.tag = tag

    def __repr__(self):
        return f"<LiftedLieAlgebraElement {self.tag} n={self.entries.shape[0]} over {self.algebra.name}>"

    def __add__(self, other):
        _same_lie(self, other)
        return LiftedLieAlgebraElement(self.algebra, self.entries + other.entries, self.tag)

    def __mul__(self, t: float):
        return LiftedLieAlgebraElement(self.algebra, float(t) * self.entries, self.tag)

    __rmul__ = __mul__

    def shadow(self) -> np.ndarray:
        return self.entries @ self.algebra.aug


def pure_tensor(x: np.ndarray, a: AlgebraElement, tag: str = "none") -> LiftedLieAlgebraElement:
    """``X (x) a`` for a real matrix ``X``."""
    return LiftedLieAlgebraElement(a.algebra, np.einsum("ij,a->ija", np.asarray(x, dtype=float), a.coeffs), tag)


def _same_lie(x: LiftedLieAlgebraElement, y: LiftedLieAlgebraElement) -> None:
    if not x.algebra.same_as(y.algebra):
        raise AlgebraError(f"elements live over {x.algebra.name} and {y.algebra.name}")
    if x.tag != y.tag:
        raise AlgebraError(f"Lie algebra tags differ: {x.tag} vs {y.tag}")


def lifted_bracket(x: LiftedLieAlgebraElement, y: LiftedLieAlgebraElement) -> LiftedLieAlgebraElement:
    """``T_A([ , ])``: the commutator ``XY - YX`` with entries in ``A``."""
    _same_lie(x, y)
    alg = x.algebra
    xy = _matmul(alg, x.entries, y.entries)
    yx = _matmul(alg, y.entries, x.entries)
    return LiftedLieAlgebraElement(alg, xy - yx, x.tag)


def exp_terms(x0_norm: float, height: int) -> int:
    """Number of series terms used by :func:`lifted_exp`.

    ``J0`` is the first index with ``|X0|^(J0+1)/(J0+1)! < 1e-14``; the
    nilpotent corrections need ``(height+1)(J0+1)`` terms.
    """
    j0 = 0
    while x0_norm ** (j0 + 1) / math.factorial(j0 + 1) >= EXP_TAIL:
        j0 += 1
    return max(j0, (height + 1) * (j0 + 1))


def lifted_exp(x: LiftedLieAlgebraElement) -> LiftedMatrix:
    """``exp`` of ``T_A G`` as the power series of the lifted matrix.

    Stops early once a term vanishes exactly (nilpotent ``X``).
    """
    alg, n = x.algebra, x.entries.shape[0]
    terms = exp_terms(float(np.linalg.norm(x.shadow())), alg.height)
    term = _identity(alg, n)
    total = term.copy()
    for j in range(1, terms + 1):
        term = _matmul(alg, term, x.entries) / j
        if not np.any(term):
            break
        total = total + term
    return LiftedMatrix(alg, total, GROUP_OF_TAG[x.tag])


def zero_section(g, group: str, algebra: WeilAlgebra) -> LiftedMatrix:
    """``0_G``: embed a real group element with vanishing nilpotent parts."""
    g = np.asarray(g, dtype=float)
    LiftedMatrix(real_line(), g[..., None], group)  # raises unless g is in G
    return LiftedMatrix(algebra, np.einsum("ij,a->ija", g, algebra.unit), group)


def project(m: LiftedMatrix) -> np.ndarray:
    """``pi_A: T_A G -> G``."""
    return m.shadow()


def push_hom_matrix(phi: AlgebraHom, m) -> LiftedMatrix | LiftedLieAlgebraElement:
    """Apply an algebra homomorphism entrywise to a group or Lie algebra element."""
    if not m.algebra.same_as(phi.source):
        raise AlgebraError(f"element lives over {m.algebra.name}, hom starts at {phi.source.name}")
    entries = m.entries @ phi.matrix.T
    if isinstance(m, LiftedMatrix):
        return LiftedMatrix(phi.target, entries, m.group, check=False)
    return LiftedLieAlgebraElement(phi.target, entries, m.tag)


@dataclass
class SemidirectReport:
    """``M = U * 0_G(g)`` with ``g = pi_A(M)`` and ``U`` in the fiber over the identity."""

    base: np.ndarray
    fiber: LiftedMatrix
    residual: float
    fiber_residual: float

    @property
    def ok(self) -> bool:
        return self.residual < GROUP_TOL and self.fiber_residual < GROUP_TOL


def semidirect_check(m: LiftedMatrix) -> SemidirectReport:
    g = project(m)
    section = zero_section(g, m.group, m.algebra)
    u = group_mul(m, group_inv(section))
    back = group_mul(u, section)
    residual = float(np.max(np.abs(back.entries - m.entries)))
    fiber_residual = float(np.max(np.abs(project(u) - np.eye(m.n))))
    return SemidirectReport(g, u, residual, fiber_residual)


def fiber_action(g, u: LiftedMatrix) -> LiftedMatrix:
    """``0_G(g) U 0_G(g)^-1``: the conjugation action of ``G`` on the fiber over ``e``."""
    s = zero_section(g, u.group, u.algebra)
    return group_mul(group_mul(s, u), group_inv(s))


# -- random elements ----------------------------------------------------------


def random_lie(algebra: WeilAlgebra, n: int, tag: str, rng: np.random.Generator, scale: float = 1.0) -> LiftedLieAlgebraElement:
    """Random element of ``g (x) A`` with real part of size ``scale``."""
    e = rng.standard_normal((n, n, algebra.dim))
    real = np.einsum("ija,a->ij", e, algebra.aug)
    e = e - np.einsum("ij,a->ija", real, algebra.unit)  # nilpotent part only
    e = 0.5 * e + np.einsum("ij,a->ija", scale * rng.standard_normal((n, n)), algebra.unit)
    if tag == "antisymmetric":
        e = 0.5 * (e - e.transpose(1, 0, 2))
    elif tag == "strictly_upper":
        e = e * np.triu(np.ones((n, n)), 1)[..., None]
    return LiftedLieAlgebraElement(algebra, e, tag)


def random_group(algebra: WeilAlgebra, n: int, group: str, rng: np.random.Generator) -> LiftedMatrix:
    if group == "SO":
        return lifted_exp(random_lie(algebra, n, "antisymmetric", rng))
    if group == "unipotent":
        x = random_lie(algebra, n, "strictly_upper", rng).entries
        for i in range(n):
            x[i, i] = algebra.unit
        return LiftedMatrix(algebra, x, "unipotent")
    x = random_lie(algebra, n, "none", rng, scale=0.4).entries
    return LiftedMatrix(algebra, x + _identity(algebra, n), "GL")
