"""Chart-glued finite-dimensional manifolds and their lifts ``T_A M``.

A point of ``T_A M`` is stored as a chart index plus a lifted coordinate
vector whose shadow lies in that chart.  Chart changes and maps are applied
with :func:`~weilfunctor.lift.eval_lift` on their local representatives.

Open sets are conjunctions of strict inequalities.  A transition between two
charts may consist of several pieces with disjoint domains; the two angle
charts of the circle need this, since their overlap has two components.

Atlas text format, one declaration per line (``#`` starts a comment)::

    chart <id> dim <m> domain <ineq>, <ineq>, ...
    trans <a> <b> domain <ineq>, ... map <expr>, <expr>, ...

``trans a b`` is the chart change from chart ``b`` coordinates to chart ``a``
coordinates; its domain is written in chart ``b`` coordinates.  Inequalities
are ``lhs < rhs`` or ``lhs > rhs`` in the expression syntax of
:mod:`weilfunctor.parse`; an empty list means all of ``R^m``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import WeilAlgebra
from .errors import ChartError, DomainError, ParseError
from .lift import ExprGraph, LiftedVector, compose, eval_lift, evaluate, identity_graph, relative_residual
from .parse import parse_expressions

FIBER_LINEARITY_TOL = 1e-7


@dataclass(frozen=True)
class Domain:
    """``{x : g(x) > 0 for every output g of every part}``.

    Parts are checked in order, so a later part may assume the earlier ones
    (this is how composite representatives restrict their domains).
    """

    parts: tuple = ()
    text: str = ""

    def contains(self, x) -> bool:
        for g in self.parts:
            try:
                if not np.all(evaluate(g, x) > 0.0):
                    return False
            except (DomainError, ValueError, OverflowError, ZeroDivisionError):
                return False
        return True

    def __and__(self, other: Domain) -> Domain:
        text = ", ".join(t for t in (self.text, other.text) if t)
        return Domain(self.parts + other.parts, text)

    def pullback(self, f: ExprGraph) -> Domain:
        """``{x : f(x) in self}``."""
        return Domain(tuple(compose(g, f) for g in self.parts), f"pullback({self.text})")


def parse_domain(text: str, dim: int) -> Domain:
    """Parse ``"x1 > 0, x1^2 + x2^2 < 4"`` into a :class:`Domain` on ``R^dim``."""
    text = text.strip()
    if not text:
        return Domain((), "")
    diffs = []
    for item in text.split(","):
        m = re.fullmatch(r"([^<>]+)([<>])([^<>]+)", item.strip())
        if not m:
            raise ParseError(f"expected one strict inequality, got {item.strip()!r}")
        lhs, op, rhs = m.groups()
        diffs.append(f"({rhs}) - ({lhs})" if op == "<" else f"({lhs}) - ({rhs})")
    return Domain((parse_expressions(", ".join(diffs), arity=dim),), text)


@dataclass(frozen=True)
class Chart:
    id: int
    dim: int
    domain: Domain

    def contains(self, x) -> bool:
        return self.domain.contains(x)


@dataclass(frozen=True)
class Piece:
    """A local representative: ``graph`` on ``domain``."""

    domain: Domain
    graph: ExprGraph
    text: str = ""


class Atlas:
    """Charts plus declared chart changes ``transitions[(a, b)]`` (b-coords -> a-coords)."""

    def __init__(self, charts, transitions=None, name="M"):
        self.charts = {c.id: c for c in charts}
        self.transitions: dict[tuple[int, int], list[Piece]] = {}
        for key, pieces in (transitions or {}).items():
            a, b = key
            if a not in self.charts or b not in self.charts:
                raise ChartError(f"transition {key} refers to an unknown chart")
            for p in pieces:
                if p.graph.arity != self.charts[b].dim or p.graph.n_outputs != self.charts[a].dim:
                    raise ChartError(f"transition {key} has the wrong shape")
            self.transitions[(a, b)] = list(pieces)
        for a, b in self.transitions:
            if (b, a) not in self.transitions:
                raise ChartError(f"overlap declarations must be symmetric: ({a}, {b}) without ({b}, {a})")
        self.name = name

    def __repr__(self):
        return f"<Atlas {self.name}: {len(self.charts)} charts>"

    @property
    def dim(self) -> int:
        return next(iter(self.charts.values())).dim

    def charts_containing(self, x) -> list[int]:
        return [cid for cid, c in self.charts.items() if c.contains(x)]

    def piece(self, target: int, source: int, x) -> Piece:
        """The piece of ``u_{target,source}`` whose domain contains ``x``."""
        if target == source:
            return Piece(self.charts[source].domain, identity_graph(self.charts[source].dim), "id")
        pieces = self.transitions.get((target, source))
        if pieces is None:
            raise ChartError(f"no transition declared from chart {source} to chart {target}")
        for p in pieces:
            if p.domain.contains(x):
                return p
        raise ChartError(f"point {np.round(x, 12).tolist()} of chart {source} is outside its overlap with chart {target}")

    def point(self, chart: int, coords) -> WeilPoint:
        return WeilPoint(self, chart, coords if isinstance(coords, LiftedVector) else LiftedVector(coords))

    def base_point(self, chart: int, x, algebra: WeilAlgebra) -> WeilPoint:
        """Zero-section lift of a chart point."""
        return self.point(chart, LiftedVector.constant(algebra, x))

    def sample(self, chart: int, rng: np.random.Generator, radius: float = 8.0, tries: int = 10000) -> np.ndarray:
        """A uniform point of the chart's domain inside the cube ``[-radius, radius]^m``."""
        c = self.charts[chart]
        for _ in range(tries):
            x = rng.uniform(-radius, radius, size=c.dim)
            if c.contains(x):
                return x
        raise ChartError(f"could not sample chart {chart}")

    def to_text(self) -> str:
        lines = [f"# atlas {self.name}"]
        for cid, c in self.charts.items():
            lines.append(f"chart {cid} dim {c.dim} domain {c.domain.text}".rstrip())
        for (a, b), pieces in self.transitions.items():
            for p in pieces:
                lines.append(f"trans {a} {b} domain {p.domain.text} map {p.text}".replace("  ", " "))
        return "\n".join(lines) + "\n"


_CHART_RE = re.compile(r"chart\s+(-?\d+)\s+dim\s+(\d+)\s+domain\b(.*)")
_TRANS_RE = re.compile(r"trans\s+(-?\d+)\s+(-?\d+)\s+domain\b(.*?)\bmap\b(.*)")


def parse_atlas(text: str, name: str = "M") -> Atlas:
    charts: list[Chart] = []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _CHART_RE.fullmatch(line):
            cid, dim = int(m.group(1)), int(m.group(2))
            charts.append(Chart(cid, dim, parse_domain(m.group(3), dim)))
        elif m := _TRANS_RE.fullmatch(line):
            pending.append((lineno, int(m.group(1)), int(m.group(2)), m.group(3), m.group(4).strip()))
        else:
            raise ParseError(f"line {lineno}: expected a 'chart' or 'trans' declaration")
    dims = {c.id: c.dim for c in charts}
    transitions: dict[tuple[int, int], list[Piece]] = {}
    for lineno, a, b, dom, expr in pending:
        if a not in dims or b not in dims:
            raise ParseError(f"line {lineno}: transition between undeclared charts {a}, {b}")
        g = parse_expressions(expr, arity=dims[b])
        if g.n_outputs != dims[a]:
            raise ParseError(f"line {lineno}: map has {g.n_outputs} components, chart {a} has dim {dims[a]}")
        transitions.setdefault((a, b), []).append(Piece(parse_domain(dom, dims[b]), g, expr))
    return Atlas(charts, transitions, name=name)


@dataclass(frozen=True)
class WeilPoint:
    """A point of ``T_A M``: chart index and lifted coordinates over ``A``."""

    atlas: Atlas = field(repr=False)
    chart: int
    coords: LiftedVector

    def __post_init__(self):
        c = self.atlas.charts.get(self.chart)
        if c is None:
            raise ChartError(f"unknown chart {self.chart}")
        if len(self.coords) != c.dim:
            raise ChartError(f"chart {self.chart} has dimension {c.dim}, got {len(self.coords)} coordinates")
        if not c.contains(self.coords.shadow()):
            raise ChartError(f"shadow {self.coords.shadow().tolist()} is outside chart {self.chart}")

    @property
    def algebra(self) -> WeilAlgebra:
        return self.coords.algebra


def to_chart(p: WeilPoint, chart: int) -> WeilPoint:
    """Re-express ``p`` in another chart through the lifted chart change."""
    if chart == p.chart:
        return p
    piece = p.atlas.piece(chart, p.chart, p.coords.shadow())
    return WeilPoint(p.atlas, chart, eval_lift(piece.graph, p.coords))


def bundle_project(p: WeilPoint) -> tuple[int, np.ndarray]:
    """``pi_{A,M}``: the base point, in the same chart."""
    return p.chart, p.coords.shadow()


# -- maps between manifolds ----------------------------------------------------


@dataclass
class ManifoldMap:
    """Smooth map given by local representatives ``reps[(a, b)]``.

    Each piece maps chart ``a`` of ``source`` (on its domain) into chart
    ``b`` of ``target``.
    """

    source: Atlas
    target: Atlas
    reps: dict
    name: str = "f"

    def admissible(self, p: WeilPoint) -> list[tuple[int, int, Piece]]:
        """All ``(source chart, target chart, piece)`` usable at ``p``'s base point."""
        out = []
        for (a, b), pieces in self.reps.items():
            try:
                q = to_chart(p, a)
            except ChartError:
                continue
            x = q.coords.shadow()
            for piece in pieces:
                if piece.domain.contains(x):
                    out.append((a, b, piece))
        return out


def lift_map(f: ManifoldMap, p: WeilPoint, source_chart=None, target_chart=None) -> WeilPoint:
    """``T_A f`` at ``p`` using the first admissible representative.

    Representatives on ``p``'s own chart are tried first.
    ``source_chart``/``target_chart`` restrict which representative is used.
    """
    for a, b, piece in sorted(f.admissible(p), key=lambda r: r[0] != p.chart):
        if source_chart is not None and a != source_chart:
            continue
        if target_chart is not None and b != target_chart:
            continue
        q = to_chart(p, a)
        return WeilPoint(f.target, b, eval_lift(piece.graph, q.coords))
    raise ChartError(f"{f.name} has no admissible representative at chart {p.chart}, {p.coords.shadow().tolist()}")


def lift_map_all(f: ManifoldMap, p: WeilPoint) -> list[WeilPoint]:
    """``T_A f(p)`` computed through every admissible representative."""
    out = []
    for a, b, piece in f.admissible(p):
        q = to_chart(p, a)
        out.append(WeilPoint(f.target, b, eval_lift(piece.graph, q.coords)))
    return out


def compose_maps(g: ManifoldMap, f: ManifoldMap) -> ManifoldMap:
    """Representatives of ``g o f`` from composable representative pairs."""
    reps: dict = {}
    for (a, b), fpieces in f.reps.items():
        for (b2, c), gpieces in g.reps.items():
            if b2 != b:
                continue
            for fp in fpieces:
                for gp in gpieces:
                    dom = fp.domain & gp.domain.pullback(fp.graph)
                    reps.setdefault((a, c), []).append(Piece(dom, compose(gp.graph, fp.graph)))
    return ManifoldMap(f.source, g.target, reps, name=f"{g.name}o{f.name}")


def identity_map(atlas: Atlas) -> ManifoldMap:
    reps = {(cid, cid): [Piece(c.domain, identity_graph(c.dim), "id")] for cid, c in atlas.charts.items()}
    return ManifoldMap(atlas, atlas, reps, name="id")


# -- vector bundle criterion ---------------------------------------------------


@dataclass
class LinearityWitness:
    transition: tuple[int, int]
    base_point: np.ndarray
    v: np.ndarray
    w: np.ndarray
    defect: float


@dataclass
class BundleVerdict:
    """Outcome of :func:`is_vector_bundle`.

    ``is_vector_bundle`` follows the height criterion (``N^2 = 0``);
    ``transitions_linear`` reports what the atlas's own transitions show.
    """

    is_vector_bundle: bool
    height: int
    transitions_linear: bool
    max_defect: float
    witness: LinearityWitness | None = None

    def __bool__(self):
        return self.is_vector_bundle


def _fiber_part(alg: WeilAlgebra, coords: np.ndarray) -> np.ndarray:
    lam = coords @ alg.aug
    return coords - np.outer(lam, alg.unit)


def is_vector_bundle(atlas: Atlas, algebra: WeilAlgebra, samples: int = 20, seed: int = 0) -> BundleVerdict:
    """Decide whether ``T_A M -> M`` is a vector bundle and look for a witness.

    The fiber map of a lifted transition at base point ``x`` sends a fiber
    vector ``v`` (an element of ``N (x) R^m``) to the fiber part of
    ``T_A(u)(x*1 + v)``.  The defect ``|F(v+w) - F(v) - F(w)|`` is measured
    over sampled base points and fiber vectors; the largest one is the witness.
    """
    rng = np.random.default_rng(seed)
    nb = algebra.nilpotent_basis()
    best: LinearityWitness | None = None
    for (a, b), pieces in atlas.transitions.items():
        for piece in pieces:
            dim = atlas.charts[b].dim
            found = 0
            for _ in range(50 * samples):
                if found >= samples:
                    break
                x = atlas.sample(b, rng)
                if not piece.domain.contains(x):
                    continue
                found += 1
                for _ in range(3):
                    v = rng.standard_normal((dim, len(nb))) @ nb if len(nb) else np.zeros((dim, algebra.dim))
                    w = rng.standard_normal((dim, len(nb))) @ nb if len(nb) else np.zeros((dim, algebra.dim))

                    def fib(u):
                        pt = LiftedVector.from_coeffs(algebra, np.outer(x, algebra.unit) + u)
                        return _fiber_part(algebra, eval_lift(piece.graph, pt).coeffs())

                    defect = float(np.max(np.abs(fib(v + w) - fib(v) - fib(w))))
                    if best is None or defect > best.defect:
                        best = LinearityWitness((a, b), x, v, w, defect)
    max_defect = best.defect if best else 0.0
    linear = max_defect <= FIBER_LINEARITY_TOL
    return BundleVerdict(
        is_vector_bundle=algebra.height <= 1,
        height=algebra.height,
        transitions_linear=linear,
        max_defect=max_defect,
        witness=None if linear else best,
    )


def check_atlas(atlas: Atlas, samples: int = 50, seed: int = 0) -> float:
    """Sample every transition piece and check it against the atlas's declarations.

    Each sampled image must lie in the target chart, and going back through the
    reverse transition must return the sample.  Returns the largest round-trip
    residual; raises :class:`ChartError` when an image leaves its target chart.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for (a, b), pieces in atlas.transitions.items():
        for piece in pieces:
            found = 0
            for _ in range(200 * samples):
                if found >= samples:
                    break
                x = atlas.sample(b, rng)
                if not piece.domain.contains(x):
                    continue
                found += 1
                y = evaluate(piece.graph, x)
                if not atlas.charts[a].contains(y):
                    raise ChartError(f"transition ({a}, {b}) maps {x.tolist()} outside chart {a}")
                back = evaluate(atlas.piece(b, a, y).graph, y)
                worst = max(worst, relative_residual(back, x))
    return worst


# -- standard examples ---------------------------------------------------------

TWO_PI = 2.0 * math.pi

CIRCLE_TEXT = f"""\
# the circle with two angle charts
chart 0 dim 1 domain x1 > 0, x1 < {TWO_PI!r}
chart 1 dim 1 domain x1 > {-math.pi!r}, x1 < {math.pi!r}
trans 1 0 domain x1 > 0, x1 < {math.pi!r} map x1
trans 1 0 domain x1 > {math.pi!r}, x1 < {TWO_PI!r} map x1 - {TWO_PI!r}
trans 0 1 domain x1 > 0, x1 < {math.pi!r} map x1
trans 0 1 domain x1 > {-math.pi!r}, x1 < 0 map x1 + {TWO_PI!r}
"""

SPHERE_TEXT = """\
# the 2-sphere with stereographic charts from the north (0) and south (1) poles
chart 0 dim 2 domain
chart 1 dim 2 domain
trans 1 0 domain x1^2 + x2^2 > 0 map x1/(x1^2 + x2^2), x2/(x1^2 + x2^2)
trans 0 1 domain x1^2 + x2^2 > 0 map x1/(x1^2 + x2^2), x2/(x1^2 + x2^2)
"""

_CHART_INTERVALS = {0: (0.0, TWO_PI), 1: (-math.pi, math.pi)}


def circle_atlas() -> Atlas:
    return parse_atlas(CIRCLE_TEXT, name="S1")


def sphere_atlas() -> Atlas:
    return parse_atlas(SPHERE_TEXT, name="S2")


def euclidean_atlas(m: int) -> Atlas:
    """``R^m`` with its single identity chart."""
    return parse_atlas(f"chart 0 dim {m} domain\n", name=f"R{m}")


def sphere_from_chart(chart: int, uv) -> np.ndarray:
    u, v = uv
    s = u * u + v * v
    z = (s - 1.0) / (s + 1.0)
    return np.array([2 * u / (s + 1.0), 2 * v / (s + 1.0), z if chart == 0 else -z])


def sphere_to_chart(chart: int, xyz) -> np.ndarray:
    x, y, z = xyz
    d = 1.0 - z if chart == 0 else 1.0 + z
    return np.array([x / d, y / d])


def circle_rotation(angle: float, atlas: Atlas | None = None) -> ManifoldMap:
    """``theta -> theta + angle`` with representatives between every chart pair."""
    atlas = atlas or circle_atlas()
    reps: dict = {}
    for a, (alo, ahi) in _CHART_INTERVALS.items():
        for b, (blo, bhi) in _CHART_INTERVALS.items():
            for k in range(-2, 3):
                shift = angle + TWO_PI * k
                lo, hi = max(alo, blo - shift), min(ahi, bhi - shift)
                if lo >= hi:
                    continue
                dom = parse_domain(f"x1 > {lo!r}, x1 < {hi!r}", 1)
                expr = f"x1 + {shift!r}" if shift >= 0 else f"x1 - {-shift!r}"
                reps.setdefault((a, b), []).append(Piece(dom, parse_expressions(expr, arity=1), expr))
    return ManifoldMap(atlas, atlas, reps, name=f"rot({angle:g})")


def circle_antipodal(atlas: Atlas | None = None) -> ManifoldMap:
    f = circle_rotation(math.pi, atlas)
    f.name = "antipodal"
    return f


def _rep(text_dom: str, expr: str, dim: int = 2) -> Piece:
    return Piece(parse_domain(text_dom, dim), parse_expressions(expr, arity=dim), expr)


def sphere_rotation(angle: float, atlas: Atlas | None = None) -> ManifoldMap:
    """Rotation about the polar axis; it rotates both stereographic planes."""
    atlas = atlas or sphere_atlas()
    c, s = repr(math.cos(angle)), repr(math.sin(angle))
    rot = f"{c}*x1 - {s}*x2, {s}*x1 + {c}*x2"
    inv_rot = f"({c}*x1 - {s}*x2)/(x1^2 + x2^2), ({s}*x1 + {c}*x2)/(x1^2 + x2^2)"
    reps = {
        (0, 0): [_rep("", rot)],
        (1, 1): [_rep("", rot)],
        (0, 1): [_rep("x1^2 + x2^2 > 0", inv_rot)],
        (1, 0): [_rep("x1^2 + x2^2 > 0", inv_rot)],
    }
    return ManifoldMap(atlas, atlas, reps, name=f"rotz({angle:g})")


def sphere_antipodal(atlas: Atlas | None = None) -> ManifoldMap:
    """``p -> -p``: negation between opposite charts, negated inversion within one."""
    atlas = atlas or sphere_atlas()
    neg = "-x1, -x2"
    neg_inv = "-x1/(x1^2 + x2^2), -x2/(x1^2 + x2^2)"
    reps = {
        (0, 1): [_rep("", neg)],
        (1, 0): [_rep("", neg)],
        (0, 0): [_rep("x1^2 + x2^2 > 0", neg_inv)],
        (1, 1): [_rep("x1^2 + x2^2 > 0", neg_inv)],
    }
    return ManifoldMap(atlas, atlas, reps, name="antipodal")


def sphere_height(atlas: Atlas | None = None) -> ManifoldMap:
    """The height function ``(x, y, z) -> z`` into ``R``."""
    atlas = atlas or sphere_atlas()
    reps = {
        (0, 0): [_rep("", "(x1^2 + x2^2 - 1)/(x1^2 + x2^2 + 1)")],
        (1, 0): [_rep("", "(1 - x1^2 - x2^2)/(x1^2 + x2^2 + 1)")],
    }
    return ManifoldMap(atlas, euclidean_atlas(1), reps, name="height")
