"""The Weil functor on smooth maps ``R^n -> R^m``.

Smooth maps are finite expression graphs over a fixed set of primitives.
Lifting a graph through ``T_A`` replaces every real operation by algebra
arithmetic, and every unary primitive ``f`` by its Taylor lift

    T_A(f)(lam*1 + n) = sum_{j=0..h} f^(j)(lam)/j! * n^j

where ``h`` is the nilpotency height of ``A``.  Because lifting commutes
with composition, correctness of :func:`eval_lift` reduces to the primitive
tables in :data:`TABLES`.

Graphs can be written as ordinary Python functions and traced::

    >>> g = trace(2, lambda t, u: exp(t) * u - t ** 2)

The same generic functions (:func:`exp`, :func:`log`, ...) work on floats,
on :class:`~weilfunctor.algebra.AlgebraElement` values and on traced symbols.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import binom

from .algebra import AlgebraElement, AlgebraHom, WeilAlgebra, elem_invert
from .errors import AlgebraError, DomainError, NotPolynomialError

UNARY_OPS = ("neg", "inv", "exp", "log", "sin", "cos", "sqrt", "pow")
BINARY_OPS = ("add", "mul")


# -- expression graphs -------------------------------------------------------


class Node(NamedTuple):
    op: str
    args: tuple = ()
    param: float | int | None = None


class ExprGraph:
    """Topologically ordered DAG of primitive operations.

    ``input`` nodes carry the variable index in ``param``, ``const`` nodes
    the value, ``pow`` nodes the integer exponent.
    """

    def __init__(self, arity: int, nodes: Sequence[Node], outputs: Sequence[int]):
        nodes = tuple(Node(*nd) for nd in nodes)
        for i, nd in enumerate(nodes):
            if nd.op == "input":
                if not 0 <= int(nd.param) < arity:
                    raise ValueError(f"node {i}: input index {nd.param} outside arity {arity}")
            elif nd.op == "const":
                float(nd.param)
            elif nd.op in UNARY_OPS:
                if len(nd.args) != 1:
                    raise ValueError(f"node {i}: {nd.op} takes one operand")
                if nd.op == "pow" and int(nd.param) != nd.param:
                    raise ValueError(f"node {i}: pow needs an integer exponent")
            elif nd.op in BINARY_OPS:
                if len(nd.args) != 2:
                    raise ValueError(f"node {i}: {nd.op} takes two operands")
            else:
                raise ValueError(f"node {i}: unknown primitive {nd.op!r}")
            if any(not 0 <= a < i for a in nd.args):
                raise ValueError(f"node {i}: operands must precede the node")
        outputs = tuple(int(o) for o in outputs)
        if not outputs or any(not 0 <= o < len(nodes) for o in outputs):
            raise ValueError("outputs must be a nonempty list of node indices")
        self.arity = arity
        self.nodes = nodes
        self.outputs = outputs

    def __repr__(self):
        return f"<ExprGraph {self.arity} -> {len(self.outputs)}, {len(self.nodes)} nodes>"

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def is_polynomial(self) -> bool:
        return all(
            nd.op in ("input", "const", "add", "mul", "neg") or (nd.op == "pow" and nd.param >= 0)
            for nd in self.nodes
        )

    def __call__(self, *x: float) -> np.ndarray:
        return evaluate(self, x)


class Sym:
    """A traced value; arithmetic on it appends nodes to its builder."""

    __slots__ = ("builder", "index")

    def __init__(self, builder: GraphBuilder, index: int):
        self.builder = builder
        self.index = index

    def _wrap(self, other):
        if isinstance(other, Sym):
            return other
        return self.builder.const(float(other))

    def __add__(self, other):
        return self.builder.push("add", self, self._wrap(other))

    __radd__ = __add__

    def __mul__(self, other):
        return self.builder.push("mul", self, self._wrap(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.builder.push("neg", self)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __truediv__(self, other):
        return self * inv(self._wrap(other))

    def __rtruediv__(self, other):
        return self._wrap(other) * inv(self)

    def __pow__(self, k):
        if int(k) != k:
            raise ValueError("only integer exponents are supported")
        return self.builder.push("pow", self, param=int(k))


class GraphBuilder:
    def __init__(self, arity: int):
        self.arity = arity
        self.nodes: list[Node] = []
        self._consts: dict[tuple, Sym] = {}
        self.inputs = [self._append(Node("input", (), k)) for k in range(arity)]

    def _append(self, node: Node) -> Sym:
        self.nodes.append(node)
        return Sym(self, len(self.nodes) - 1)

    def const(self, value: float) -> Sym:
        value = float(value)
        key = (value, math.copysign(1.0, value))  # keep -0.0 apart from 0.0
        if key not in self._consts:
            self._consts[key] = self._append(Node("const", (), value))
        return self._consts[key]

    def push(self, op: str, *args: Sym, param=None) -> Sym:
        for a in args:
            if a.builder is not self:
                raise ValueError("cannot mix symbols from different traces")
        return self._append(Node(op, tuple(a.index for a in args), param))

    def finish(self, outputs) -> ExprGraph:
        if isinstance(outputs, (Sym, int, float)):
            outputs = [outputs]
        idx = [(o if isinstance(o, Sym) else self.const(o)).index for o in outputs]
        return ExprGraph(self.arity, self.nodes, idx)


def trace(arity: int, fn: Callable) -> ExprGraph:
    """Build a graph by calling ``fn`` on ``arity`` symbolic inputs."""
    b = GraphBuilder(arity)
    return b.finish(fn(*b.inputs))


def identity_graph(n: int) -> ExprGraph:
    return trace(n, lambda *x: list(x))


def constant_graph(arity: int, values: Sequence[float]) -> ExprGraph:
    return trace(arity, lambda *x: [float(v) for v in values])


def product_graph() -> ExprGraph:
    return trace(2, lambda t, u: t * u)


def compose(g: ExprGraph, h: ExprGraph) -> ExprGraph:
    """The graph of ``g o h``."""
    if g.arity != h.n_outputs:
        raise ValueError(f"cannot compose: g takes {g.arity} inputs, h gives {h.n_outputs}")
    b = GraphBuilder(h.arity)
    mid = replay(h, b.inputs)
    return b.finish(replay(g, mid))


def pair(f: ExprGraph, g: ExprGraph) -> ExprGraph:
    """``x -> (f(x), g(x))``."""
    if f.arity != g.arity:
        raise ValueError("paired maps must share their source")
    b = GraphBuilder(f.arity)
    return b.finish(replay(f, b.inputs) + replay(g, b.inputs))


# -- generic primitive functions ----------------------------------------------

_REAL = {
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
    "inv": lambda x: 1.0 / x,
}


def _generic(name: str):
    def f(x):
        if isinstance(x, Sym):
            return x.builder.push(name, x)
        if isinstance(x, AlgebraElement):
            return lift_primitive(TABLES[name], x)
        if isinstance(x, _CoeffElement):
            return x.lift(TABLES[name])
        return _REAL[name](float(x))

    f.__name__ = name
    f.__doc__ = f"{name} on floats, algebra elements or traced symbols."
    return f


exp = _generic("exp")
log = _generic("log")
sin = _generic("sin")
cos = _generic("cos")
sqrt = _generic("sqrt")
inv = _generic("inv")


# -- Taylor tables -----------------------------------------------------------


@dataclass(frozen=True)
class TaylorTable:
    """Closed-form Taylor coefficients ``f^(j)(lam)/j!`` of a primitive.

    ``coefficient`` is written with the generic functions above, so it also
    works when ``lam`` is a traced symbol (used by :func:`lift_graph`).
    """

    name: str
    coefficient: Callable
    in_domain: Callable[[float], bool]
    domain: str

    def __call__(self, lam, j: int):
        return self.coefficient(lam, j)


def _sin_coeff(lam, j):
    f = (sin, cos, lambda t: -sin(t), lambda t: -cos(t))[j % 4]
    return f(lam) * (1.0 / math.factorial(j))


def _cos_coeff(lam, j):
    f = (cos, lambda t: -sin(t), lambda t: -cos(t), sin)[j % 4]
    return f(lam) * (1.0 / math.factorial(j))


def _log_coeff(lam, j):
    if j == 0:
        return log(lam)
    return inv(lam) ** j * ((-1.0) ** (j + 1) / j)


def _pow_coeff(p: int):
    def coeff(lam, j):
        if j > p:
            return 0.0
        return lam ** (p - j) * float(math.comb(p, j))

    return coeff


TABLES: dict[str, TaylorTable] = {
    "exp": TaylorTable("exp", lambda lam, j: exp(lam) * (1.0 / math.factorial(j)), lambda v: True, "all reals"),
    "sin": TaylorTable("sin", _sin_coeff, lambda v: True, "all reals"),
    "cos": TaylorTable("cos", _cos_coeff, lambda v: True, "all reals"),
    "log": TaylorTable("log", _log_coeff, lambda v: v > 0.0, "augmentation > 0"),
    "inv": TaylorTable("inv", lambda lam, j: inv(lam) ** (j + 1) * (-1.0) ** j, lambda v: v != 0.0, "augmentation != 0"),
    "sqrt": TaylorTable(
        "sqrt", lambda lam, j: sqrt(lam) * inv(lam) ** j * float(binom(0.5, j)), lambda v: v > 0.0, "augmentation > 0"
    ),
}


def pow_table(p: int) -> TaylorTable:
    """Table of ``t -> t^p`` for an integer ``p >= 0``."""
    if p < 0:
        raise ValueError("negative powers are lifted through inv")
    return TaylorTable(f"pow{p}", _pow_coeff(p), lambda v: True, "all reals")


def lift_primitive(table: TaylorTable, a: AlgebraElement) -> AlgebraElement:
    """``T_A(f)(lam + n) = sum_j f^(j)(lam)/j! n^j``, truncated at the height of ``A``."""
    alg = a.algebra
    lam = a.scalar
    if not table.in_domain(lam):
        raise DomainError(
            f"{table.name} needs {table.domain}, got augmentation {lam!r}", primitive=table.name, value=lam
        )
    n = a.coeffs - lam * alg.unit
    out = float(table(lam, 0)) * alg.unit
    npow = alg.unit
    for j in range(1, alg.height + 1):
        npow = alg.multiply(npow, n)
        out = out + float(table(lam, j)) * npow
    return AlgebraElement(alg, out)


# -- lifted vectors ----------------------------------------------------------


class LiftedVector:
    """A point of ``T_A R^n = A^n``: ``n`` elements of one algebra."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[AlgebraElement]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("a lifted vector needs at least one entry")
        alg = entries[0].algebra
        for e in entries[1:]:
            if not e.algebra.same_as(alg):
                raise AlgebraError("entries of a lifted vector must share one algebra")
        self.entries = entries

    def __repr__(self):
        return f"LiftedVector({list(self.entries)!r})"

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def algebra(self) -> WeilAlgebra:
        return self.entries[0].algebra

    def shadow(self) -> np.ndarray:
        """Componentwise augmentation: the underlying point of ``R^n``."""
        return np.array([e.scalar for e in self.entries])

    def coeffs(self) -> np.ndarray:
        """Coefficient array of shape ``(n, dim)``."""
        return np.array([e.coeffs for e in self.entries])

    @classmethod
    def from_coeffs(cls, algebra: WeilAlgebra, coeffs) -> LiftedVector:
        arr = np.atleast_2d(np.asarray(coeffs, dtype=float))
        return cls([AlgebraElement(algebra, row) for row in arr])

    @classmethod
    def constant(cls, algebra: WeilAlgebra, point) -> LiftedVector:
        """The zero-section lift ``x -> x*1``."""
        return cls([AlgebraElement(algebra, float(x) * algebra.unit) for x in np.atleast_1d(point)])

    @classmethod
    def seed(cls, algebra: WeilAlgebra, point, slots=None) -> LiftedVector:
        """``x_j*1 + b_{s_j}`` for each variable ``j``.

        With ``slots=None`` variable ``j`` gets the ``j``-th nilpotent
        generator; having more variables than generators is an error.  An
        explicit ``slots`` entry of ``None`` leaves that variable unseeded.
        """
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if slots is None:
            gens = algebra.generators
            if len(point) > len(gens):
                raise ValueError(
                    f"{len(point)} variables but {algebra.name} has {len(gens)} nilpotent generators; "
                    "give explicit seed slots"
                )
            slots = gens[: len(point)]
        if len(slots) != len(point):
            raise ValueError("need one seed slot per variable")
        rows = []
        for x, s in zip(point, slots):
            c = x * algebra.unit
            if s is not None:
                c = c.copy()
                c[int(s)] += 1.0
            rows.append(c)
        return cls.from_coeffs(algebra, rows)


def relative_residual(a, b) -> float:
    """``|a-b|_inf / max(1, |a|_inf, |b|_inf)`` on coefficient arrays."""

    def arr(x):
        if isinstance(x, LiftedVector):
            return x.coeffs()
        if isinstance(x, AlgebraElement):
            return x.coeffs
        return np.asarray(x, dtype=float)

    x, y = arr(a), arr(b)
    scale = max(1.0, float(np.max(np.abs(x), initial=0.0)), float(np.max(np.abs(y), initial=0.0)))
    return float(np.max(np.abs(x - y), initial=0.0)) / scale


# -- evaluation --------------------------------------------------------------


def _run(g: ExprGraph, inputs: Sequence, const: Callable, unary: Callable) -> list:
    vals: list = []
    for idx, nd in enumerate(g.nodes):
        op = nd.op
        if op == "input":
            vals.append(inputs[nd.param])
        elif op == "const":
            vals.append(const(nd.param))
        elif op == "add":
            vals.append(vals[nd.args[0]] + vals[nd.args[1]])
        elif op == "mul":
            vals.append(vals[nd.args[0]] * vals[nd.args[1]])
        elif op == "neg":
            vals.append(-vals[nd.args[0]])
        else:
            vals.append(unary(idx, op, vals[nd.args[0]], nd.param))
    return [vals[i] for i in g.outputs]


def _domain_check(idx: int, op: str, value: float, param) -> None:
    if op == "pow":
        ok, need = (param >= 0 or value != 0.0), "nonzero base for a negative power"
    elif op in ("log", "sqrt"):
        ok, need = value > 0.0, "a positive argument"
    elif op == "inv":
        ok, need = value != 0.0, "a nonzero argument"
    else:
        return
    if not ok:
        raise DomainError(f"node {idx}: {op} needs {need}, got {value!r}", node=idx, primitive=op, value=value)


def evaluate(g: ExprGraph, x) -> np.ndarray:
    """Classical evaluation at a real point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(x) != g.arity:
        raise ValueError(f"graph takes {g.arity} inputs, got {len(x)}")

    def unary(idx, op, v, param):
        _domain_check(idx, op, v, param)
        if op == "pow":
            return v**param
        return _REAL[op](v)

    return np.array(_run(g, [float(t) for t in x], float, unary))


def eval_lift(g: ExprGraph, v) -> LiftedVector:
    """``T_A(g)`` at a point of ``A^n``."""
    v = v if isinstance(v, LiftedVector) else LiftedVector(v)
    if len(v) != g.arity:
        raise ValueError(f"graph takes {g.arity} inputs, got {len(v)}")
    alg = v.algebra

    def const(c):
        return AlgebraElement(alg, c * alg.unit)

    def unary(idx, op, a, param):
        _domain_check(idx, op, a.scalar, param)
        if op == "pow":
            if param < 0:
                return lift_primitive(pow_table(-param), elem_invert(a))
            return lift_primitive(pow_table(param), a)
        return lift_primitive(TABLES[op], a)

    return LiftedVector(_run(g, list(v), const, unary))


def replay(g: ExprGraph, inputs: Sequence[Sym]) -> list[Sym]:
    """Re-trace ``g`` on existing symbols (used for composition)."""
    b = inputs[0].builder if inputs else None

    def unary(idx, op, s, param):
        if op == "pow":
            return s**param
        return s.builder.push(op, s)

    return _run(g, inputs, lambda c: b.const(c), unary)


def push_hom(phi: AlgebraHom, v: LiftedVector) -> LiftedVector:
    """``(phi (x) R^n)(v)``: apply ``phi`` entrywise."""
    if not v.algebra.same_as(phi.source):
        raise AlgebraError(f"point lives in {v.algebra.name}, hom starts at {phi.source.name}")
    return LiftedVector([phi(e) for e in v])


def recover_algebra(alg: WeilAlgebra) -> WeilAlgebra:
    """Rebuild ``A`` from its functor: the product is ``T_A`` of ``(t, u) -> t*u``.

    The unit is the lift of the constant map 1; the augmentation is the
    bundle projection and is taken from ``alg``.
    """
    prod = product_graph()
    d = alg.dim
    c = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            out = eval_lift(prod, [alg.basis_element(i), alg.basis_element(j)])
            c[i, j] = out[0].coeffs
    unit = eval_lift(constant_graph(1, [1.0]), [alg.zero()])[0].coeffs
    return WeilAlgebra(c, unit, alg.aug, labels=alg.basis_labels, name=f"recovered({alg.name})", exponents=alg.exponents)


# -- the functor applied to graphs ---------------------------------------------


def _sadd(a, b):
    if isinstance(a, float) and a == 0.0:
        return b
    if isinstance(b, float) and b == 0.0:
        return a
    return a + b


def _smul(a, b):
    if isinstance(a, float):
        if a == 0.0:
            return 0.0
        if a == 1.0:
            return b
    if isinstance(b, float):
        if b == 0.0:
            return 0.0
        if b == 1.0:
            return a
    return a * b


class _CoeffElement:
    """Element of ``B`` whose coefficients are traced symbols or floats."""

    def __init__(self, alg: WeilAlgebra, coeffs: list):
        self.alg = alg
        self.c = coeffs

    def __add__(self, other):
        return _CoeffElement(self.alg, [_sadd(a, b) for a, b in zip(self.c, other.c)])

    def __neg__(self):
        return _CoeffElement(self.alg, [-a for a in self.c])

    def __mul__(self, other):
        sc = self.alg.structure_constants
        out = [0.0] * self.alg.dim
        for i, j, k in zip(*np.nonzero(sc)):
            term = _smul(_smul(float(sc[i, j, k]), self.c[i]), other.c[j])
            out[k] = _sadd(out[k], term)
        return _CoeffElement(self.alg, out)

    def scalar(self):
        lam = 0.0
        for w, a in zip(self.alg.aug, self.c):
            lam = _sadd(lam, _smul(float(w), a))
        return lam

    def lift(self, table: TaylorTable):
        alg = self.alg
        lam = self.scalar()
        n = _CoeffElement(alg, [_sadd(a, _smul(-float(u), lam)) for a, u in zip(self.c, alg.unit)])
        coeff0 = table(lam, 0)
        out = _CoeffElement(alg, [_smul(float(u), coeff0) for u in alg.unit])
        npow = None
        for j in range(1, alg.height + 1):
            npow = n if npow is None else npow * n
            cj = table(lam, j)
            out = out + _CoeffElement(alg, [_smul(cj, a) for a in npow.c])
        return out


def lift_graph(g: ExprGraph, alg: WeilAlgebra) -> ExprGraph:
    """The graph of ``T_B(g)`` viewed as a smooth map ``R^(n*d) -> R^(m*d)``.

    Input ``i*d + k`` is coefficient ``k`` of entry ``i`` (``d = dim B``);
    outputs follow the same layout.  Applying :func:`eval_lift` over ``A`` to
    this graph realises ``T_A(T_B(g))``.
    """
    d = alg.dim
    b = GraphBuilder(g.arity * d)
    ins = [_CoeffElement(alg, b.inputs[i * d : (i + 1) * d]) for i in range(g.arity)]

    def const(c):
        return _CoeffElement(alg, [_smul(float(u), float(c)) for u in alg.unit])

    def unary(idx, op, x, param):
        if op == "pow":
            if param < 0:
                return x.lift(TABLES["inv"]).lift(pow_table(-param))
            return x.lift(pow_table(param))
        return x.lift(TABLES[op])

    outs = _run(g, ins, const, unary)
    return b.finish([c for o in outs for c in o.c])


def nest(v: LiftedVector, a: WeilAlgebra, b: WeilAlgebra) -> LiftedVector:
    """Rewrite a point of ``(A (x) B)^n`` as a point of ``A^(n*dim B)``."""
    da, db = a.dim, b.dim
    rows = []
    for e in v:
        c = e.coeffs.reshape(db, da)
        rows.extend(c[k] for k in range(db))
    return LiftedVector.from_coeffs(a, rows)


def flatten(w: LiftedVector, a: WeilAlgebra, b: WeilAlgebra) -> LiftedVector:
    """Inverse of :func:`nest`, landing in ``(A (x) B)^m`` for ``ab = A (x) B``."""
    from .algebra import tensor_product

    ab = tensor_product(a, b)
    db = b.dim
    arr = w.coeffs()
    m = len(w) // db
    return LiftedVector.from_coeffs(ab, [arr[i * db : (i + 1) * db].reshape(-1) for i in range(m)])


# -- explicit Taylor formula -------------------------------------------------

Poly = dict  # exponent tuple -> coefficient


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0.0) + c1 * c2
    return out


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0.0) + c
    return out


def to_polynomial(g: ExprGraph) -> list[Poly]:
    """Expand each output of a polynomial graph into ``{exponents: coefficient}``."""
    n = g.arity
    zero = (0,) * n
    vals: list[Poly] = []
    for idx, nd in enumerate(g.nodes):
        op = nd.op
        if op == "input":
            e = [0] * n
            e[nd.param] = 1
            vals.append({tuple(e): 1.0})
        elif op == "const":
            vals.append({zero: float(nd.param)})
        elif op == "add":
            vals.append(_padd(vals[nd.args[0]], vals[nd.args[1]]))
        elif op == "mul":
            vals.append(_pmul(vals[nd.args[0]], vals[nd.args[1]]))
        elif op == "neg":
            vals.append({e: -c for e, c in vals[nd.args[0]].items()})
        elif op == "pow" and nd.param >= 0:
            out = {zero: 1.0}
            for _ in range(nd.param):
                out = _pmul(out, vals[nd.args[0]])
            vals.append(out)
        else:
            raise NotPolynomialError(f"node {idx} ({op}) is not polynomial")
    return [vals[o] for o in g.outputs]


def _pdiff(p: Poly, i: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = out.get(tuple(f), 0.0) + c * e[i]
    return out


def _peval(p: Poly, x: np.ndarray) -> float:
    return float(sum(c * np.prod(x ** np.array(e)) for e, c in p.items()))


def taylor_formula_oracle(g: ExprGraph, v: LiftedVector, nil_basis=None) -> LiftedVector:
    """Evaluate ``T_A(g)`` by the explicit multivariate Taylor formula.

    ``v`` is decomposed as ``1 (x) x_0 + sum_j n_j (x) x_j`` against the basis
    ``{1, n_j}`` (rows of ``nil_basis``, default an orthonormal basis of
    ``N``), and the result is

        1 (x) g(x_0) + sum_k 1/k! sum_{j_1..j_k} n_{j_1}...n_{j_k} (x) d^k g(x_0)(x_{j_1},...,x_{j_k})

    with the derivatives taken symbolically.  Independent of
    :func:`eval_lift`, which it is meant to cross-check.
    """
    polys = to_polynomial(g)
    alg = v.algebra
    nb = alg.nilpotent_basis() if nil_basis is None else np.asarray(nil_basis, dtype=float)
    basis = np.column_stack([alg.unit, *nb]) if len(nb) else alg.unit[:, None]
    if basis.shape != (alg.dim, alg.dim):
        raise ValueError(f"need {alg.dim - 1} nilpotent basis vectors, got {len(nb)}")
    coords = np.linalg.solve(basis, v.coeffs().T)
    base, dirs = coords[0], coords[1:]
    r, n = dirs.shape[0], g.arity

    products: dict[tuple, np.ndarray] = {(): alg.unit}

    def nprod(js):
        if js not in products:
            products[js] = alg.multiply(nprod(js[:-1]), nb[js[-1]])
        return products[js]

    out = []
    for p in polys:
        total = _peval(p, base) * alg.unit
        derivs = {(): p}
        for k in range(1, alg.height + 1):
            tensor = np.zeros((n,) * k)
            for ids in itertools.product(range(n), repeat=k):
                if ids not in derivs:
                    derivs[ids] = _pdiff(derivs[ids[:-1]], ids[-1])
                tensor[ids] = _peval(derivs[ids], base)
            if not np.any(tensor):
                continue
            for js in itertools.product(range(r), repeat=k):
                t = tensor
                for j in js:
                    t = np.tensordot(dirs[j], t, axes=(0, 0))
                if t != 0.0:
                    total = total + (float(t) / math.factorial(k)) * nprod(js)
        out.append(AlgebraElement(alg, total))
    return LiftedVector(out)
