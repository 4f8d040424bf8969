"""Seeded random inputs for the property suites: graphs, points, algebras, homs.

Random graphs are grown as trees from the root down.  Points are accepted
only when every intermediate value stays well inside the primitives'
domains (``margin``) and below ``bound`` in magnitude, so finite-difference
comparisons remain meaningful.
"""

from __future__ import annotations

import math

import numpy as np

from . import lift
from .algebra import (
    AlgebraHom,
    WeilAlgebra,
    augmentation_hom,
    dual,
    exchange_iso,
    inclusion_hom,
    jet,
    rebase,
    real_line,
    scaling_hom,
    tensor_product,
)
from .lift import ExprGraph, GraphBuilder, LiftedVector

PRESET_NAMES = ("dual", "jet:2", "jet:3", "dual*dual", "jet:2:2", "jet:2*dual")

_UNARY_TRANSCENDENTAL = ("exp", "log", "sin", "cos", "sqrt", "inv")

# Conditioning limits for accepted points (see point_ok).
DOMAIN_MARGIN = 0.1
VALUE_BOUND = 100.0
TRIG_ARG_BOUND = 5.0


def preset(name: str) -> WeilAlgebra:
    """Resolve ``dual``, ``jet:r``, ``jet:r:k`` and ``*``-products of those."""
    parts = [p.strip() for p in name.split("*")]
    if len(parts) > 1:
        out = preset(parts[0])
        for p in parts[1:]:
            out = tensor_product(out, preset(p))
        return out
    if name == "dual":
        return dual()
    if name == "R":
        return real_line()
    fields = name.split(":")
    if fields[0] == "jet" and len(fields) in (2, 3):
        try:
            nums = [int(f) for f in fields[1:]]
        except ValueError:
            nums = None
        if nums and all(v >= 1 for v in nums):
            return jet(*nums)
    raise ValueError(f"unknown algebra preset {name!r}")


def random_graph(
    rng: np.random.Generator,
    arity: int,
    n_outputs: int = 1,
    depth: int = 6,
    polynomial: bool = False,
    max_degree: int = 6,
) -> ExprGraph:
    """A random expression tree per output, depth at most ``depth``.

    Polynomial graphs use ``+ - *``, negation and small powers with total
    degree capped at ``max_degree``; otherwise every primitive may appear.
    """
    b = GraphBuilder(arity)

    def leaf():
        if rng.random() < 0.75:
            return b.inputs[int(rng.integers(arity))], 1
        return b.const(float(np.round(rng.uniform(-2.0, 2.0), 3))), 0

    def grow(d):
        if d == 0 or rng.random() < 0.3:
            return leaf()
        r = rng.random()
        if r < 0.5:
            (x, dx), (y, dy) = grow(d - 1), grow(d - 1)
            op = rng.choice(("add", "sub", "mul"))
            if op == "mul" and (not polynomial or dx + dy <= max_degree):
                return x * y, dx + dy
            return (x + y, max(dx, dy)) if op == "add" else (x - y, max(dx, dy))
        x, dx = grow(d - 1)
        if polynomial or r < 0.65:
            k = int(rng.choice((-1, 2, 3)))
            if k == -1:
                return -x, dx
            if polynomial and k * dx > max_degree:
                return -x, dx
            return x**k, k * dx
        name = _UNARY_TRANSCENDENTAL[int(rng.integers(len(_UNARY_TRANSCENDENTAL)))]
        return getattr(lift, name)(x), math.inf

    return b.finish([grow(depth)[0] for _ in range(n_outputs)])


def point_ok(g: ExprGraph, x, margin: float = DOMAIN_MARGIN, bound: float = VALUE_BOUND) -> bool:
    """True if ``g`` evaluates at ``x`` with every intermediate safely in domain.

    Besides the domain margin, intermediates are capped at ``bound`` and
    trigonometric arguments at ``TRIG_ARG_BOUND``; this keeps higher
    derivatives moderate so that finite differences can serve as an oracle.
    """
    vals: list[float] = []
    for nd in g.nodes:
        a = vals[nd.args[0]] if nd.args else None
        op = nd.op
        if op == "input":
            v = float(x[nd.param])
        elif op == "const":
            v = float(nd.param)
        elif op == "add":
            v = a + vals[nd.args[1]]
        elif op == "mul":
            v = a * vals[nd.args[1]]
        elif op == "neg":
            v = -a
        elif op in ("log", "sqrt"):
            if a < margin:
                return False
            v = math.log(a) if op == "log" else math.sqrt(a)
        elif op == "inv" or (op == "pow" and nd.param < 0):
            if abs(a) < margin:
                return False
            v = a ** (nd.param if op == "pow" else -1)
        elif op == "pow":
            v = a**nd.param
        elif op == "exp":
            if a > math.log(bound):
                return False
            v = math.exp(a)
        else:
            if abs(a) > TRIG_ARG_BOUND:
                return False
            v = math.sin(a) if op == "sin" else math.cos(a)
        if not abs(v) <= bound:
            return False
        vals.append(v)
    return True


def random_point(rng, n: int, radius: float = 2.0) -> np.ndarray:
    return rng.uniform(-radius, radius, size=n)


def sample_point(g: ExprGraph, rng, radius: float = 2.0, margin: float = DOMAIN_MARGIN, bound: float = VALUE_BOUND, tries: int = 200):
    """A random point where :func:`point_ok` holds, or ``None``."""
    for _ in range(tries):
        x = random_point(rng, g.arity, radius)
        if point_ok(g, x, margin, bound):
            return x
    return None


def sample_graph_and_point(
    rng, arity: int, n_outputs: int = 1, depth: int = 6, polynomial: bool = False, **kw
) -> tuple[ExprGraph, np.ndarray]:
    """Draw graphs until one has an admissible point."""
    while True:
        g = random_graph(rng, arity, n_outputs, depth, polynomial)
        x = sample_point(g, rng, **kw)
        if x is not None:
            return g, x


def random_lifted(rng, algebra: WeilAlgebra, shadow, scale: float = 0.5) -> LiftedVector:
    """Random point of ``A^n`` over ``shadow`` with nilpotent parts of size ``scale``."""
    shadow = np.atleast_1d(np.asarray(shadow, dtype=float))
    r = scale * rng.standard_normal((len(shadow), algebra.dim))
    r = r - np.outer(r @ algebra.aug, algebra.unit)
    return LiftedVector.from_coeffs(algebra, np.outer(shadow, algebra.unit) + r)


def random_element(rng, algebra) -> np.ndarray:
    return rng.standard_normal(algebra.dim)


def random_change_of_basis(rng, d: int) -> np.ndarray:
    """Well-conditioned invertible matrix: orthogonal times a diagonal in [0.5, 2]."""
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q @ np.diag(rng.uniform(0.5, 2.0, size=d))


def random_rebased(rng, algebra: WeilAlgebra) -> WeilAlgebra:
    return rebase(algebra, random_change_of_basis(rng, algebra.dim))


HOM_KINDS = ("aug", "inclusion", "scaling", "exchange")


def random_hom(rng, kind: str | None = None) -> AlgebraHom:
    """A random hom of the given kind (default: drawn from :data:`HOM_KINDS`)."""
    kind = kind or HOM_KINDS[int(rng.integers(len(HOM_KINDS)))]
    if kind == "aug":
        return augmentation_hom(preset(PRESET_NAMES[int(rng.integers(len(PRESET_NAMES)))]))
    if kind == "inclusion":
        return inclusion_hom(preset(PRESET_NAMES[int(rng.integers(len(PRESET_NAMES)))]))
    if kind == "scaling":
        alg = preset(PRESET_NAMES[int(rng.integers(len(PRESET_NAMES)))])
        nvars = len(alg.exponents[0])
        return scaling_hom(alg, rng.uniform(-2.0, 2.0, size=nvars))
    if kind == "exchange":
        small = ("dual", "jet:2", "jet:3")
        a = preset(small[int(rng.integers(len(small)))])
        b = preset(small[int(rng.integers(len(small)))])
        return exchange_iso(a, b)
    raise ValueError(f"unknown hom kind {kind!r}")
