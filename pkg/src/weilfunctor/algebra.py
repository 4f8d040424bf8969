"""Weil algebras stored as structure constants over an explicit basis.

A Weil algebra is a finite-dimensional commutative real algebra
``A = R*1 + N`` whose augmentation ideal ``N`` is nilpotent.  Elements are
coefficient vectors; the product of basis vectors is

    b_i * b_j = sum_k c[i, j, k] b_k

Monomial quotients ``R[x_1..x_w]/I`` are the canonical constructor, see
:func:`make_monomial_quotient`, with :func:`dual` and :func:`jet` as presets.
Basis ordering of a tensor product ``A (x) B`` lets the first factor vary
fastest, so ``dual() (x) dual()`` has the basis ``1, x|1, 1|x, x|x``, which
coincides with the monomial basis ``1, x1, x2, x1*x2`` of
``R[x1, x2]/(x1^2, x2^2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from numbers import Real
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import (
    AlgebraError,
    AlgebraMismatchError,
    DecompositionError,
    NotFormallyRealError,
    NotInvertibleError,
)

# Identity checks on structure constants are scaled by the size of the table.
DEFAULT_TOL = 1e-9
NEWTON_TOL = 1e-10
NEWTON_MAXITER = 100
REAL_SPECTRUM_TOL = 1e-8


def _rank(vectors: np.ndarray, tol: float) -> int:
    if vectors.size == 0:
        return 0
    s = np.linalg.svd(vectors, compute_uv=False)
    return int(np.sum(s > tol))


def _span(vectors: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span of ``vectors``."""
    if vectors.size == 0:
        return np.zeros((vectors.shape[0], 0))
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    return u[:, s > tol]


class FiniteAlgebra:
    """Commutative unital algebra given by a basis and structure constants.

    Not assumed local; this is the input type of :func:`minimal_idempotents`.
    Arrays are stored read-only.
    """

    def __init__(self, structure_constants, unit, labels=None, name=None):
        sc = np.array(structure_constants, dtype=float)
        if sc.ndim != 3 or sc.shape[0] == 0 or len(set(sc.shape)) != 1:
            raise AlgebraError(
                f"structure constants must have shape (d, d, d) with d >= 1, got {sc.shape}"
            )
        dim = sc.shape[0]
        unit = np.array(unit, dtype=float).reshape(-1)
        if unit.shape != (dim,):
            raise AlgebraError(f"unit must have length {dim}")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != dim:
                raise AlgebraError(f"expected {dim} basis labels, got {len(labels)}")
        sc.setflags(write=False)
        unit.setflags(write=False)
        self.dim = dim
        self.structure_constants = sc
        self.unit = unit
        self.basis_labels = labels
        self.name = name or f"algebra[{dim}]"
        self._flat = sc.reshape(dim, dim * dim)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} dim={self.dim}>"

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.structure_constants))))

    def labels(self) -> tuple[str, ...]:
        if self.basis_labels is not None:
            return self.basis_labels
        return tuple(f"b{i}" for i in range(self.dim))

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of two coefficient vectors."""
        return b @ (a @ self._flat).reshape(self.dim, self.dim)

    def mult_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> a*y`` acting on coefficient columns."""
        return np.einsum("i,ijk->kj", a, self.structure_constants)

    def element(self, coeffs) -> AlgebraElement:
        return AlgebraElement(self, coeffs)

    def basis_element(self, i: int) -> AlgebraElement:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return AlgebraElement(self, e)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, np.zeros(self.dim))

    def same_as(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, FiniteAlgebra)
            and type(other) is type(self)
            and other.dim == self.dim
            and np.array_equal(other.structure_constants, self.structure_constants)
            and np.array_equal(other.unit, self.unit)
            and np.array_equal(getattr(other, "aug", None), getattr(self, "aug", None))
        )


class WeilAlgebra(FiniteAlgebra):
    """Finite-dimensional commutative algebra ``R*1 + N`` with ``N`` nilpotent.

    ``aug`` is the coefficient row of the augmentation ``A -> R``.  By default
    the constructor runs :func:`validate` and raises :class:`AlgebraError`
    listing the violations.  Pass ``check=False`` to build a table for
    diagnosis only; ``height`` is then ``None`` if nilpotency fails.

    ``exponents`` optionally records the monomial of each basis vector; it is
    kept by monomial quotients and tensor products and enables
    :func:`scaling_hom` and :func:`projection_hom`.
    """

    def __init__(
        self,
        structure_constants,
        unit,
        aug,
        labels=None,
        name=None,
        exponents=None,
        check=True,
    ):
        super().__init__(structure_constants, unit, labels=labels, name=name)
        aug = np.array(aug, dtype=float).reshape(-1)
        if aug.shape != (self.dim,):
            raise AlgebraError(f"aug must have length {self.dim}")
        aug.setflags(write=False)
        self.aug = aug
        self.exponents = None if exponents is None else tuple(tuple(int(v) for v in e) for e in exponents)
        report = validate(self)
        if check and not report.ok:
            raise AlgebraError(f"not a Weil algebra: {report.summary()}")
        self.height = report.height
        self._nil_basis = None

    def nilpotent_basis(self) -> np.ndarray:
        """Rows spanning ``N = ker(aug)``, orthonormal in coefficient space."""
        if self._nil_basis is None:
            nb = null_space(self.aug[None, :]).T
            nb.setflags(write=False)
            self._nil_basis = nb
        return self._nil_basis

    @property
    def generators(self) -> list[int]:
        """Basis indices lying in ``N`` but not in ``N^2``, in index order.

        For monomial bases these are the degree-one monomials.
        """
        tol = DEFAULT_TOL * self.scale
        nb = self.nilpotent_basis()
        sq = _products_span(self, nb, nb, tol)
        out = []
        for i in range(self.dim):
            if abs(self.aug[i]) > tol:
                continue
            e = np.zeros(self.dim)
            e[i] = 1.0
            if sq.shape[1] == 0 or np.linalg.norm(e - sq @ (sq.T @ e)) > tol:
                out.append(i)
        return out

    def scalar_part(self, coeffs: np.ndarray) -> float:
        return float(self.aug @ coeffs)


class AlgebraElement:
    """An element of a finite algebra, stored as a coefficient vector.

    Supports ``+ - * / **`` with other elements of the same algebra and with
    real scalars.
    """

    __slots__ = ("algebra", "coeffs")
    __array_priority__ = 1000

    def __init__(self, algebra: FiniteAlgebra, coeffs):
        c = np.array(coeffs, dtype=float).reshape(-1)
        if c.shape != (algebra.dim,):
            raise AlgebraError(f"{algebra.name} needs {algebra.dim} coefficients, got {c.shape[0]}")
        self.algebra = algebra
        self.coeffs = c

    def __repr__(self):
        terms = []
        for lab, v in zip(self.algebra.labels(), self.coeffs):
            if v != 0.0:
                terms.append(f"{v:.12g}" if lab == "1" else f"{v:.12g}*{lab}")
        return f"AlgebraElement({' + '.join(terms) or '0'} in {self.algebra.name})"

    @property
    def scalar(self) -> float:
        """Augmentation value (the real part)."""
        return self.algebra.scalar_part(self.coeffs)

    def nilpotent_part(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.coeffs - self.scalar * self.algebra.unit)

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            _check_same(self.algebra, other.algebra)
            return other.coeffs
        if isinstance(other, Real):
            return float(other) * self.algebra.unit
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return AlgebraElement(self.algebra, self.coeffs + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return AlgebraElement(self.algebra, self.coeffs - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return AlgebraElement(self.algebra, c - self.coeffs)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Real):
            return AlgebraElement(self.algebra, float(other) * self.coeffs)
        if isinstance(other, AlgebraElement):
            return elem_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return AlgebraElement(self.algebra, self.coeffs / float(other))
        if isinstance(other, AlgebraElement):
            return elem_mul(self, elem_invert(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return float(other) * elem_invert(self)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        if k < 0:
            return elem_invert(self) ** (-k)
        result = self.algebra.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def allclose(self, other: AlgebraElement, atol: float = 1e-12) -> bool:
        _check_same(self.algebra, other.algebra)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= atol)


def _check_same(a: FiniteAlgebra, b: FiniteAlgebra) -> None:
    if not a.same_as(b):
        raise AlgebraMismatchError(f"operands live in different algebras: {a.name} and {b.name}")


def elem_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a.algebra, b.algebra)
    return AlgebraElement(a.algebra, a.coeffs + b.coeffs)


def elem_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a.algebra, b.algebra)
    return AlgebraElement(a.algebra, a.algebra.multiply(a.coeffs, b.coeffs))


def elem_scale(a: AlgebraElement, t: float) -> AlgebraElement:
    return AlgebraElement(a.algebra, float(t) * a.coeffs)


def elem_invert(a: AlgebraElement) -> AlgebraElement:
    """Inverse of ``a = lam*1 + n`` as ``lam^-1 * sum_j (-n/lam)^j``.

    The series stops at the nilpotency height, so it is a finite sum.
    """
    alg = a.algebra
    if not isinstance(alg, WeilAlgebra):
        raise AlgebraError("inversion needs a Weil algebra (augmentation and height)")
    lam = a.scalar
    if lam == 0.0:
        raise NotInvertibleError("not invertible: augmentation is zero")
    q = -(a.coeffs - lam * alg.unit) / lam
    term = alg.unit.copy()
    total = alg.unit.copy()
    for _ in range(alg.height):
        term = alg.multiply(term, q)
        total = total + term
    return AlgebraElement(alg, total / lam)


# -- validation ---------------------------------------------------------------


@dataclass
class Violation:
    identity: str
    indices: tuple
    residual: float
    detail: str = ""

    def __str__(self):
        where = f" at {self.indices}" if self.indices else ""
        if self.detail:
            return f"{self.identity}{where}: {self.detail}"
        return f"{self.identity}{where} (residual {self.residual:.3g})"


@dataclass
class ValidationReport:
    ok: bool
    height: int | None
    violations: list[Violation] = field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"pass, height {self.height}"
        return "; ".join(str(v) for v in self.violations)


def _products_span(alg: FiniteAlgebra, left: np.ndarray, right: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal columns spanning ``{l*r}`` for rows ``l`` of left, ``r`` of right."""
    if left.shape[0] == 0 or right.shape[0] == 0:
        return np.zeros((alg.dim, 0))
    prods = np.einsum("ai,bj,ijk->abk", left, right, alg.structure_constants)
    return _span(prods.reshape(-1, alg.dim).T, tol)


def nilpotency_height(alg: FiniteAlgebra, nil_basis: np.ndarray, tol: float) -> int | None:
    """Smallest ``h`` with ``N^(h+1) = 0`` for ``N`` spanned by rows of ``nil_basis``.

    Returns 0 when ``N = 0`` and ``None`` when the power chain stalls above zero.
    """
    power = _span(nil_basis.T, tol)
    h = 0
    while power.shape[1] > 0:
        nxt = _products_span(alg, power.T, nil_basis, tol)
        h += 1
        if nxt.shape[1] >= power.shape[1]:
            return None
        power = nxt
    return h


def ring_violations(alg: FiniteAlgebra, tol: float = DEFAULT_TOL) -> list[Violation]:
    """Commutativity, associativity and unit-law failures on basis vectors."""
    viol: list[Violation] = []
    c = alg.structure_constants
    t = tol * alg.scale**2

    comm = np.abs(c - c.transpose(1, 0, 2)).max(axis=2)
    for i, j in zip(*np.nonzero(comm > t)):
        if i < j:
            viol.append(Violation("commutativity", (int(i), int(j)), float(comm[i, j])))

    # (b_i b_j) b_k vs b_i (b_j b_k)
    left = np.einsum("ijm,mkn->ijkn", c, c)
    right = np.einsum("jkm,imn->ijkn", c, c)
    assoc = np.abs(left - right).max(axis=3)
    for i, j, k in zip(*np.nonzero(assoc > t)):
        viol.append(Violation("associativity", (int(i), int(j), int(k)), float(assoc[i, j, k])))

    unit_prod = np.einsum("i,ijk->jk", alg.unit, c)
    unit_res = np.abs(unit_prod - np.eye(alg.dim)).max(axis=1)
    for i in np.nonzero(unit_res > t)[0]:
        viol.append(Violation("unit law", (int(i),), float(unit_res[i])))
    return viol


def validate(alg: WeilAlgebra, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every Weil-algebra identity; report each failure with its witness."""
    viol = ring_violations(alg, tol)
    c = alg.structure_constants
    t = tol * alg.scale**2
    aug = alg.aug
    if not np.any(aug != 0.0):
        viol.append(Violation("augmentation nonzero", (), 0.0))
    if abs(aug @ alg.unit - 1.0) > tol:
        viol.append(Violation("augmentation of unit", (), float(abs(aug @ alg.unit - 1.0))))
    aug_prod = np.abs(np.einsum("ijk,k->ij", c, aug) - np.outer(aug, aug))
    for i, j in zip(*np.nonzero(aug_prod > t)):
        if i <= j:
            viol.append(Violation("augmentation multiplicative", (int(i), int(j)), float(aug_prod[i, j])))

    height = None
    if np.any(aug != 0.0):
        nb = null_space(aug[None, :]).T
        height = nilpotency_height(alg, nb, t)
        if height is None:
            viol.append(Violation("nilpotency of ker(aug)", (), float("nan"), "its powers stop shrinking before reaching 0"))
    return ValidationReport(ok=not viol, height=height, violations=viol)


# -- constructors ------------------------------------------------------------


def _monomial_label(exps: Sequence[int], single: bool) -> str:
    if not any(exps):
        return "1"
    parts = []
    for v, e in enumerate(exps):
        if e == 0:
            continue
        name = "x" if single else f"x{v + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def make_monomial_quotient(num_vars: int, excluded_monomials, name=None) -> WeilAlgebra:
    """``R[x_1..x_w]/I`` for the monomial ideal ``I`` generated by ``excluded_monomials``.

    The basis is the monomials outside ``I``, sorted by total degree with
    ``x1`` ahead of ``x2``.  Every variable needs a pure power in the
    exclusions, otherwise the quotient is infinite-dimensional.
    """
    excluded = [tuple(int(v) for v in e) for e in excluded_monomials]
    if num_vars < 0:
        raise AlgebraError("num_vars must be nonnegative")
    if num_vars == 0 and excluded:
        raise AlgebraError("no variables but a nonempty exclusion set")
    for e in excluded:
        if len(e) != num_vars or min(e, default=0) < 0:
            raise AlgebraError(f"exponent vector {e} is not over {num_vars} variables")
        if not any(e):
            raise AlgebraError("the constant monomial is excluded: this is the zero algebra")
    bounds = []
    for v in range(num_vars):
        pure = [e[v] for e in excluded if all(e[u] == 0 for u in range(num_vars) if u != v)]
        if not pure:
            raise AlgebraError(f"ideal is not cofinite: no pure power of variable x{v + 1} is excluded")
        bounds.append(min(pure))

    def surviving(m):
        return not any(all(m[v] >= e[v] for v in range(num_vars)) for e in excluded)

    monos = [m for m in itertools.product(*(range(b) for b in bounds)) if surviving(m)]
    monos.sort(key=lambda m: (sum(m), tuple(-v for v in m)))
    index = {m: i for i, m in enumerate(monos)}
    d = len(monos)
    c = np.zeros((d, d, d))
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            k = index.get(tuple(x + y for x, y in zip(a, b)))
            if k is not None:
                c[i, j, k] = 1.0
    unit = np.zeros(d)
    unit[0] = 1.0
    labels = [_monomial_label(m, num_vars == 1) for m in monos]
    return WeilAlgebra(c, unit, unit.copy(), labels=labels, name=name, exponents=monos)


def real_line() -> WeilAlgebra:
    """The trivial Weil algebra ``R`` (``N = 0``, height 0)."""
    return make_monomial_quotient(0, [], name="R")


def dual() -> WeilAlgebra:
    """Dual numbers ``R[x]/(x^2)``."""
    return make_monomial_quotient(1, [(2,)], name="dual")


def jet(order: int, num_vars: int = 1) -> WeilAlgebra:
    """Truncated polynomials in ``num_vars`` variables up to total degree ``order``."""
    if order < 0 or num_vars < 1:
        raise AlgebraError("jet algebra needs order >= 0 and at least one variable")
    excl = [m for m in itertools.product(range(order + 2), repeat=num_vars) if sum(m) == order + 1]
    name = f"jet:{order}" if num_vars == 1 else f"jet:{order}:{num_vars}"
    return make_monomial_quotient(num_vars, excl, name=name)


def _tensor_label(a: str, b: str) -> str:
    return f"{a}|{b}"


def tensor_product(a: WeilAlgebra, b: WeilAlgebra) -> WeilAlgebra:
    """``A (x) B`` with basis index ``i + dim(A)*j`` for the pair ``(b_i, b_j)``."""
    da, db = a.dim, b.dim
    c = np.einsum("ikm,jln->jilknm", a.structure_constants, b.structure_constants)
    c = c.reshape(da * db, da * db, da * db)
    unit = np.kron(b.unit, a.unit)
    aug = np.kron(b.aug, a.aug)
    la, lb = a.labels(), b.labels()
    labels = [_tensor_label(la[i], lb[j]) for j in range(db) for i in range(da)]
    exps = None
    if a.exponents is not None and b.exponents is not None:
        exps = [a.exponents[i] + b.exponents[j] for j in range(db) for i in range(da)]
    return WeilAlgebra(c, unit, aug, labels=labels, name=f"{a.name}*{b.name}", exponents=exps)


def direct_sum(*algebras: FiniteAlgebra) -> FiniteAlgebra:
    """Block-diagonal product algebra ``A_1 x ... x A_k`` (not local for k > 1)."""
    d = sum(alg.dim for alg in algebras)
    c = np.zeros((d, d, d))
    unit = np.zeros(d)
    off = 0
    for alg in algebras:
        s = slice(off, off + alg.dim)
        c[s, s, s] = alg.structure_constants
        unit[s] = alg.unit
        off += alg.dim
    return FiniteAlgebra(c, unit, name="+".join(alg.name for alg in algebras))


def rebase(alg: FiniteAlgebra, basis: np.ndarray) -> FiniteAlgebra:
    """Same algebra in the basis given by the columns of ``basis`` (old coordinates)."""
    p = np.asarray(basis, dtype=float)
    pinv = np.linalg.inv(p)
    c = np.einsum("ai,bj,abl,kl->ijk", p, p, alg.structure_constants, pinv)
    unit = pinv @ alg.unit
    name = f"{alg.name}@rebased"
    if isinstance(alg, WeilAlgebra):
        return WeilAlgebra(c, unit, alg.aug @ p, name=name, check=False)
    return FiniteAlgebra(c, unit, name=name)


# -- homomorphisms -----------------------------------------------------------


class AlgebraHom:
    """A verified algebra homomorphism; build with :func:`make_hom`."""

    def __init__(self, matrix: np.ndarray, source: WeilAlgebra, target: WeilAlgebra, injective: bool, surjective: bool):
        self.matrix = matrix
        self.source = source
        self.target = target
        self.injective = injective
        self.surjective = surjective

    def __repr__(self):
        kind = [k for k, v in (("injective", self.injective), ("surjective", self.surjective)) if v]
        return f"<AlgebraHom {self.source.name} -> {self.target.name} {' '.join(kind)}>"

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        _check_same(x.algebra, self.source)
        return AlgebraElement(self.target, self.matrix @ x.coeffs)

    def __matmul__(self, other: AlgebraHom) -> AlgebraHom:
        """Composition ``self o other``."""
        _check_same(other.target, self.source)
        return make_hom(self.matrix @ other.matrix, other.source, self.target)


def make_hom(matrix, source: WeilAlgebra, target: WeilAlgebra, tol: float = DEFAULT_TOL) -> AlgebraHom:
    """Verify unit, multiplicativity and augmentation compatibility, then wrap."""
    m = np.array(matrix, dtype=float)
    if m.shape != (target.dim, source.dim):
        raise AlgebraError(f"hom matrix must be {target.dim}x{source.dim}, got {m.shape}")
    t = tol * max(source.scale, target.scale) * max(1.0, float(np.max(np.abs(m)))) ** 2
    if np.max(np.abs(m @ source.unit - target.unit)) > t:
        raise AlgebraError("not a homomorphism: unit is not mapped to unit")
    for i in range(source.dim):
        for j in range(i, source.dim):
            lhs = m @ source.structure_constants[i, j]
            rhs = target.multiply(m[:, i], m[:, j])
            if np.max(np.abs(lhs - rhs)) > t:
                raise AlgebraError(f"not a homomorphism: multiplicativity fails on basis pair ({i}, {j})")
    if np.max(np.abs(target.aug @ m - source.aug)) > t:
        raise AlgebraError("not a homomorphism: augmentation is not preserved")
    m.setflags(write=False)
    r = _rank(m, tol * max(1.0, float(np.max(np.abs(m)))))
    return AlgebraHom(m, source, target, injective=r == source.dim, surjective=r == target.dim)


def augmentation_hom(alg: WeilAlgebra) -> AlgebraHom:
    return make_hom(alg.aug[None, :], alg, real_line())


def inclusion_hom(alg: WeilAlgebra) -> AlgebraHom:
    return make_hom(alg.unit[:, None], real_line(), alg)


def identity_hom(alg: WeilAlgebra) -> AlgebraHom:
    return make_hom(np.eye(alg.dim), alg, alg)


def scaling_hom(alg: WeilAlgebra, factors: Sequence[float]) -> AlgebraHom:
    """Monomial algebra endomorphism ``x_v -> t_v x_v``."""
    if alg.exponents is None:
        raise AlgebraError(f"{alg.name} has no monomial basis to scale")
    f = np.asarray(factors, dtype=float)
    if f.shape != (len(alg.exponents[0]),):
        raise AlgebraError(f"need one factor per variable ({len(alg.exponents[0])})")
    diag = [float(np.prod(f ** np.array(e))) for e in alg.exponents]
    return make_hom(np.diag(diag), alg, alg)


def projection_hom(source: WeilAlgebra, target: WeilAlgebra) -> AlgebraHom:
    """Monomial map sending ``x^e`` to ``x^e`` when it survives in ``target``, else 0.

    A homomorphism exactly when the target ideal contains the source ideal,
    e.g. jet truncation ``jet:3 -> jet:2`` or ``jet:2 -> dual``.
    """
    if source.exponents is None or target.exponents is None:
        raise AlgebraError("projection needs monomial bases on both sides")
    index = {e: i for i, e in enumerate(target.exponents)}
    m = np.zeros((target.dim, source.dim))
    for j, e in enumerate(source.exponents):
        if e in index:
            m[index[e], j] = 1.0
    return make_hom(m, source, target)


def exchange_iso(a: WeilAlgebra, b: WeilAlgebra) -> AlgebraHom:
    """Factor swap ``A (x) B -> B (x) A``."""
    da, db = a.dim, b.dim
    m = np.zeros((da * db, da * db))
    for i in range(da):
        for j in range(db):
            m[i * db + j, j * da + i] = 1.0
    return make_hom(m, tensor_product(a, b), tensor_product(b, a))


# -- decomposition into local summands ---------------------------------------


@dataclass(frozen=True)
class Idempotent:
    element: AlgebraElement

    def __post_init__(self):
        e = self.element
        tol = 1e-8 * e.algebra.scale
        if np.max(np.abs(e.coeffs)) <= tol:
            raise AlgebraError("idempotent must be nonzero")
        if np.max(np.abs((e * e).coeffs - e.coeffs)) > tol:
            raise AlgebraError("element is not idempotent")


class Decomposition(NamedTuple):
    idempotents: list[Idempotent]
    summands: list[WeilAlgebra]


def radical_basis(alg: FiniteAlgebra, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows spanning the nilradical: the kernel of ``(x, y) -> trace(L_xy)``."""
    d = alg.dim
    traces = np.array([np.trace(alg.mult_matrix(alg.structure_constants[i, j])) for i in range(d) for j in range(d)])
    form = traces.reshape(d, d)
    return null_space(form, rcond=tol).T


def minimal_idempotents(alg: FiniteAlgebra, tol: float = DEFAULT_TOL, seed: int = 0) -> Decomposition:
    """Split ``1 = e_1 + ... + e_k`` into minimal idempotents and ``A`` into local summands.

    The radical is the kernel of the trace form.  On the semisimple quotient
    a generic multiplication operator is diagonalised; its normalised
    eigenvectors are the quotient's primitive idempotents.  Each is lifted to
    ``A`` by iterating ``e <- 3e^2 - 2e^3``.  Each summand ``e_i A`` is
    returned as a :class:`WeilAlgebra` in the basis ``e_i, n_1, ...``.

    Formal reality is tested through the spectra of the quotient's
    multiplication operators: complex eigenvalues mean a factor of ``C``.
    This finite check stands in for the definition "1 + sum a_i^2 is always
    invertible", which quantifies over all tuples and cannot be run directly.
    """
    bad = ring_violations(alg, tol)
    if bad:
        raise AlgebraError(f"not a commutative associative unital algebra: {bad[0]}")
    d = alg.dim
    scale = alg.scale
    rad = radical_basis(alg, tol)
    comp = null_space(rad) if rad.shape[0] else np.eye(d)
    q = comp.shape[1]

    def qmul(x, y):
        return comp.T @ alg.multiply(comp @ x, comp @ y)

    q_ops = [np.column_stack([qmul(np.eye(q)[a], np.eye(q)[b]) for b in range(q)]) for a in range(q)]
    for a, op in enumerate(q_ops):
        ev = np.linalg.eigvals(op)
        if np.max(np.abs(ev.imag), initial=0.0) > REAL_SPECTRUM_TOL * max(1.0, np.max(np.abs(ev))):
            raise NotFormallyRealError(
                f"not formally real: multiplication by quotient basis element {a} has complex eigenvalues"
            )

    rng = np.random.default_rng(seed)
    for _ in range(20):
        z = rng.standard_normal(q)
        op = sum(zi * o for zi, o in zip(z, q_ops))
        ev, vecs = np.linalg.eig(op)
        ev, vecs = ev.real, vecs.real
        gaps = np.abs(ev[:, None] - ev[None, :])
        np.fill_diagonal(gaps, np.inf)
        if q == 1 or np.min(gaps) > 1e-6 * max(1.0, np.max(np.abs(ev))):
            break
    else:
        raise DecompositionError("could not separate the semisimple quotient's idempotents")

    idems = []
    for col in range(q):
        w = vecs[:, col]
        w2 = qmul(w, w)
        w = w * (w @ w) / (w2 @ w)
        e = comp @ w
        for _ in range(NEWTON_MAXITER):
            e2 = alg.multiply(e, e)
            res = np.max(np.abs(e2 - e))
            if res < NEWTON_TOL:
                break
            e = 3.0 * e2 - 2.0 * alg.multiply(e2, e)
        else:
            raise DecompositionError(f"idempotent lifting did not converge (residual {res:.3g})")
        idems.append(e)
    idems.sort(key=lambda e: tuple(-np.round(e, 8)))

    summands = []
    for e in idems:
        if rad.shape[0]:
            nil = _span(np.array([alg.multiply(e, r) for r in rad]).T, tol * scale)
        else:
            nil = np.zeros((d, 0))
        basis = np.column_stack([e, nil])
        sub_d = basis.shape[1]
        coords = np.linalg.pinv(basis)
        c = np.zeros((sub_d, sub_d, sub_d))
        for i in range(sub_d):
            for j in range(sub_d):
                c[i, j] = coords @ alg.multiply(basis[:, i], basis[:, j])
        unit = np.zeros(sub_d)
        unit[0] = 1.0
        summands.append(WeilAlgebra(c, unit, unit.copy(), name=f"e{len(summands) + 1}A"))
    return Decomposition([Idempotent(AlgebraElement(alg, e)) for e in idems], summands)
