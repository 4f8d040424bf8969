"""Seeded property suites over algebras, lifts, manifolds and Lie groups.

Each property is a function ``trial(rng) -> (residual, context)`` run a
number of times; a property passes when every residual is at most its
tolerance.  Every property draws from its own generator seeded by
``(seed, crc32(name))``, so reports are reproducible and adding a property
does not perturb the others.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from . import liegroup as lg
from . import manifold as mf
from .algebra import (
    AlgebraElement,
    direct_sum,
    dual,
    elem_invert,
    exchange_iso,
    jet,
    minimal_idempotents,
    real_line,
    rebase,
    tensor_product,
    validate,
)
from .errors import WeilError
from .lift import (
    LiftedVector,
    compose,
    eval_lift,
    evaluate,
    flatten,
    lift_graph,
    nest,
    pair,
    push_hom,
    relative_residual,
    taylor_formula_oracle,
)
from .sampling import (
    PRESET_NAMES,
    preset,
    random_change_of_basis,
    random_graph,
    random_hom,
    random_lifted,
    sample_graph_and_point,
    sample_point,
)
from .serialize import dumps_algebra, loads_algebra

SUITE_NAMES = ("algebra", "lift", "manifold", "liegroup")

Trial = Callable[[np.random.Generator], "tuple[float, Callable[[], str]]"]


@dataclass(frozen=True)
class Property:
    suite: str
    name: str
    tol: float
    trial: Trial
    trials: int | None = None  # fixed count overriding the requested one


@dataclass
class PropertyResult:
    suite: str
    name: str
    trials: int
    max_residual: float
    tol: float
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.suite}.{self.name:<28} trials={self.trials:<5d} "
            f"max_residual={self.max_residual:.3e}  tol={self.tol:.0e}"
        )


def property_rng(seed: int, key: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(key.encode())])


def run_property(prop: Property, seed: int, trials: int) -> PropertyResult:
    n = prop.trials or trials
    rng = property_rng(seed, f"{prop.suite}.{prop.name}")
    worst = 0.0
    counter = None
    for t in range(n):
        try:
            res, ctx = prop.trial(rng)
        except (WeilError, ArithmeticError) as exc:
            res, ctx = math.inf, (lambda exc=exc: f"{type(exc).__name__}: {exc}")
        res = float(res)
        if math.isnan(res):
            res = math.inf
        worst = max(worst, res)
        if res > prop.tol and counter is None:
            counter = f"trial {t}: residual {res:.3e}; {ctx()}"
    return PropertyResult(prop.suite, prop.name, n, worst, prop.tol, counter)


@dataclass
class Report:
    suite: str
    seed: int
    trials: int
    results: list[PropertyResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def text(self) -> str:
        lines = [f"verify {self.suite}  seed={self.seed}  trials={self.trials}"]
        for r in self.results:
            lines.append(r.line())
            if r.counterexample:
                lines.append(f"      counterexample: {r.counterexample}")
        ok = sum(r.passed for r in self.results)
        lines.append(f"{ok}/{len(self.results)} properties passed")
        return "\n".join(lines) + "\n"


def run_suite(name: str, seed: int = 0, trials: int = 20) -> Report:
    if name == "all":
        props = [p for s in SUITE_NAMES for p in SUITES[s]()]
    elif name in SUITES:
        props = SUITES[name]()
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES + ('all',))}")
    return Report(name, seed, trials, [run_property(p, seed, trials) for p in props])


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _ctx(**kw) -> Callable[[], str]:
    def render():
        parts = []
        for k, v in kw.items():
            if isinstance(v, np.ndarray):
                v = np.array2string(v, precision=6)
            parts.append(f"{k}={v}")
        return ", ".join(parts)

    return render


# -- algebra -------------------------------------------------------------------

ALGEBRA_PRESETS = PRESET_NAMES


def ring_axioms_trial(rng):
    alg = preset(_pick(rng, ALGEBRA_PRESETS))
    a, b, c = (rng.standard_normal(alg.dim) for _ in range(3))
    m = alg.multiply
    res = max(
        np.max(np.abs(m(m(a, b), c) - m(a, m(b, c)))),
        np.max(np.abs(m(a, b) - m(b, a))),
        np.max(np.abs(m(alg.unit, a) - a)),
    )
    return res, _ctx(algebra=alg.name, a=a, b=b, c=c)


def aug_multiplicative_trial(rng):
    alg = preset(_pick(rng, ALGEBRA_PRESETS))
    a, b = rng.standard_normal(alg.dim), rng.standard_normal(alg.dim)
    res = abs(alg.aug @ alg.multiply(a, b) - (alg.aug @ a) * (alg.aug @ b))
    return res, _ctx(algebra=alg.name, a=a, b=b)


def inverse_trial(rng):
    alg = preset(_pick(rng, ALGEBRA_PRESETS))
    c = rng.standard_normal(alg.dim)
    c += (rng.choice((-1, 1)) * rng.uniform(0.5, 2.0) - alg.aug @ c) * alg.unit
    a = AlgebraElement(alg, c)
    res = np.max(np.abs((a * elem_invert(a)).coeffs - alg.unit))
    return res, _ctx(algebra=alg.name, a=c)


BLOCKS = {"R": real_line, "D": dual, "jet:2": lambda: jet(2)}


def random_block_sum(rng, max_dim: int = 9) -> list[str]:
    """Names of 1..4 blocks from ``BLOCKS`` with total dimension at most ``max_dim``."""
    dims = {"R": 1, "D": 2, "jet:2": 3}
    while True:
        names = [_pick(rng, tuple(BLOCKS)) for _ in range(int(rng.integers(1, 5)))]
        if sum(dims[n] for n in names) <= max_dim:
            return names


def decomposition_trial(rng):
    """Rotated direct sum: recover k, dims and heights exactly, idempotent identities to tol."""
    names = random_block_sum(rng)
    blocks = [BLOCKS[n]() for n in names]
    alg = rebase(direct_sum(*blocks), random_change_of_basis(rng, sum(b.dim for b in blocks)))
    dec = minimal_idempotents(alg, seed=int(rng.integers(2**31)))
    want = sorted((b.dim, b.height) for b in blocks)
    got = sorted((s.dim, s.height) for s in dec.summands)
    ctx = _ctx(blocks="+".join(names), expected=want, recovered=got)
    if got != want:
        return math.inf, ctx
    es = [i.element.coeffs for i in dec.idempotents]
    res = np.max(np.abs(sum(es) - alg.unit))
    for i, e in enumerate(es):
        for j, f in enumerate(es):
            if i != j:
                res = max(res, np.max(np.abs(alg.multiply(e, f))))
    return res, ctx


def tensor_trial(rng):
    small = ("dual", "jet:2", "jet:3", "jet:2:2")
    na, nb = _pick(rng, small), _pick(rng, small)
    a, b = preset(na), preset(nb)
    ab = tensor_product(a, b)
    rep = validate(ab)
    exchange_iso(a, b)  # raises unless it is a hom
    ok = rep.ok and ab.height == a.height + b.height and ab.dim == a.dim * b.dim
    return (0.0 if ok else math.inf), _ctx(a=na, b=nb, height=ab.height)


def rebasing_trial(rng):
    alg = preset(_pick(rng, ALGEBRA_PRESETS))
    re = rebase(alg, random_change_of_basis(rng, alg.dim))
    rep = validate(re)
    ok = rep.ok and re.dim == alg.dim and rep.height == alg.height
    return (0.0 if ok else math.inf), _ctx(algebra=alg.name, height=rep.height)


def serialization_trial(rng):
    alg = preset(_pick(rng, ALGEBRA_PRESETS))
    alg = rebase(alg, random_change_of_basis(rng, alg.dim))
    back = loads_algebra(dumps_algebra(alg))
    res = max(
        np.max(np.abs(back.structure_constants - alg.structure_constants)),
        np.max(np.abs(back.unit - alg.unit)),
        np.max(np.abs(back.aug - alg.aug)),
    )
    return res, _ctx(algebra=alg.name)


def algebra_suite() -> list[Property]:
    s = "algebra"
    return [
        Property(s, "ring_axioms", 1e-12, ring_axioms_trial),
        Property(s, "aug_multiplicative", 1e-12, aug_multiplicative_trial),
        Property(s, "inverse", 1e-9, inverse_trial),
        Property(s, "decomposition", 1e-9, decomposition_trial),
        Property(s, "tensor_validates", 0.0, tensor_trial),
        Property(s, "rebasing_invariance", 0.0, rebasing_trial),
        Property(s, "serialization_roundtrip", 1e-12, serialization_trial),
    ]


# -- lift ----------------------------------------------------------------------

LIFT_PRESETS = ("dual", "jet:3", "dual*dual", "jet:2:2")


def functoriality_trial(algebras: Sequence[str] = LIFT_PRESETS, depth: int = 4) -> Trial:
    def trial(rng):
        alg = preset(_pick(rng, algebras))
        n, m, p = (int(v) for v in rng.integers(1, 4, size=3))
        while True:
            h = random_graph(rng, n, m, depth)
            g = random_graph(rng, m, p, depth)
            gh = compose(g, h)
            x = sample_point(gh, rng)
            if x is not None:
                break
        v = random_lifted(rng, alg, x)
        res = relative_residual(eval_lift(gh, v), eval_lift(g, eval_lift(h, v)))
        return res, _ctx(algebra=alg.name, x=x)

    return trial


def shadow_trial(rng):
    alg = preset(_pick(rng, LIFT_PRESETS))
    n = int(rng.integers(1, 4))
    g, x = sample_graph_and_point(rng, n, int(rng.integers(1, 3)))
    v = random_lifted(rng, alg, x)
    return relative_residual(eval_lift(g, v).shadow(), evaluate(g, x)), _ctx(algebra=alg.name, x=x)


def product_trial(rng):
    alg = preset(_pick(rng, LIFT_PRESETS))
    n = int(rng.integers(1, 4))
    while True:
        f = random_graph(rng, n, int(rng.integers(1, 3)), 4)
        g = random_graph(rng, n, int(rng.integers(1, 3)), 4)
        fg = pair(f, g)
        x = sample_point(fg, rng)
        if x is not None:
            break
    v = random_lifted(rng, alg, x)
    both = np.vstack([eval_lift(f, v).coeffs(), eval_lift(g, v).coeffs()])
    return float(np.max(np.abs(eval_lift(fg, v).coeffs() - both))), _ctx(algebra=alg.name, x=x)


def naturality_trial(kinds: Sequence[str] | None = None, inputs: int = 1) -> Trial:
    """One random hom, ``inputs`` random (graph, point) pairs through its square."""

    def trial(rng):
        phi = random_hom(rng, _pick(rng, kinds) if kinds else None)
        worst = 0.0
        for _ in range(inputs):
            n = int(rng.integers(1, 3))
            g, x = sample_graph_and_point(rng, n, int(rng.integers(1, 3)), depth=4)
            v = random_lifted(rng, phi.source, x)
            worst = max(worst, relative_residual(push_hom(phi, eval_lift(g, v)), eval_lift(g, push_hom(phi, v))))
        return worst, _ctx(hom=repr(phi))

    return trial


def _polynomial_case(rng, algebras):
    alg = preset(_pick(rng, algebras))
    n = int(rng.integers(1, 3))
    g = random_graph(rng, n, int(rng.integers(1, 3)), depth=5, polynomial=True)
    x = rng.uniform(-1.5, 1.5, size=n)
    return alg, g, random_lifted(rng, alg, x), x


def basis_independence_trial(rng):
    alg, g, v, x = _polynomial_case(rng, ("dual*dual", "jet:2:2", "jet:3", "jet:2*dual"))
    nb = alg.nilpotent_basis()
    other = random_change_of_basis(rng, len(nb)) @ nb
    res = relative_residual(taylor_formula_oracle(g, v), taylor_formula_oracle(g, v, other))
    return res, _ctx(algebra=alg.name, x=x)


def oracle_trial(algebras: Sequence[str] = ("dual*dual", "jet:2:2")) -> Trial:
    def trial(rng):
        alg, g, v, x = _polynomial_case(rng, algebras)
        return relative_residual(taylor_formula_oracle(g, v), eval_lift(g, v)), _ctx(algebra=alg.name, x=x)

    return trial


def dual_fd_trial(points: int = 1, h: float = 1e-5) -> Trial:
    """Dual-number slot against central differences, ``points`` base points per graph."""
    alg = dual()

    def trial(rng):
        g, x = sample_graph_and_point(rng, 1)
        worst = 0.0
        for k in range(points):
            if k:
                x = sample_point(g, rng)
                if x is None:
                    continue
            slot = eval_lift(g, LiftedVector.seed(alg, x)).coeffs()[0, 1]
            fd = (evaluate(g, x + h)[0] - evaluate(g, x - h)[0]) / (2 * h)
            worst = max(worst, abs(slot - fd) / max(1.0, abs(slot), abs(fd)))
        return worst, _ctx(x=x)

    return trial


# Central stencils for derivatives 1..3, all with O(h^2) error.
_STENCILS = {
    1: ({1: 0.5, -1: -0.5}, 1),
    2: ({1: 1.0, 0: -2.0, -1: 1.0}, 2),
    3: ({2: 0.5, 1: -1.0, -1: 1.0, -2: -0.5}, 3),
}


def fd_derivative(f: Callable[[float], float], x: float, k: int, h: float = 1e-2, levels: int = 3) -> float:
    """``f^(k)(x)`` from a central stencil at steps ``h, h/2, ...``, Richardson-extrapolated."""
    weights, p = _STENCILS[k]

    def est(step):
        return sum(w * f(x + s * step) for s, w in weights.items()) / step**p

    table = [est(h / 2**i) for i in range(levels)]
    for m in range(1, levels):
        factor = 4.0**m
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return table[0]


def jet_fd_trial(rng):
    r = int(rng.integers(1, 4))
    alg = jet(r)
    g, x = sample_graph_and_point(rng, 1, depth=5, margin=0.3)
    slots = eval_lift(g, LiftedVector.seed(alg, x)).coeffs()[0]
    f = lambda t: float(evaluate(g, [t])[0])  # noqa: E731
    want = [f(x[0])] + [fd_derivative(f, x[0], k) / math.factorial(k) for k in range(1, r + 1)]
    return relative_residual(slots, want), _ctx(order=r, x=x)


def nesting_trial(pairs: Sequence[tuple[str, str]] | None = None) -> Trial:
    choices = pairs or [(a, b) for a in ("dual", "jet:2") for b in ("dual", "jet:2")]

    def trial(rng):
        na, nb = _pick(rng, choices)
        a, b = preset(na), preset(nb)
        ab = tensor_product(a, b)
        n = int(rng.integers(1, 3))
        g, x = sample_graph_and_point(rng, n, int(rng.integers(1, 3)), depth=5)
        v = random_lifted(rng, ab, x)
        flat = eval_lift(g, v)
        nested = flatten(eval_lift(lift_graph(g, b), nest(v, a, b)), a, b)
        return relative_residual(flat, nested), _ctx(a=na, b=nb, x=x)

    return trial


def lift_suite() -> list[Property]:
    s = "lift"
    return [
        Property(s, "functoriality", 1e-9, functoriality_trial()),
        Property(s, "shadow_commutation", 1e-12, shadow_trial),
        Property(s, "product_preservation", 0.0, product_trial),
        Property(s, "naturality", 1e-9, naturality_trial()),
        Property(s, "basis_independence", 1e-9, basis_independence_trial),
        Property(s, "taylor_formula", 1e-9, oracle_trial()),
        Property(s, "dual_vs_finite_difference", 1e-6, dual_fd_trial()),
        Property(s, "jet_vs_finite_difference", 1e-4, jet_fd_trial),
        Property(s, "nested_flattening", 1e-9, nesting_trial()),
    ]


# -- manifold ------------------------------------------------------------------

MANIFOLD_ALGEBRAS = ("dual", "jet:2", "dual*dual")


def random_manifold_point(rng, atlas: mf.Atlas, algebra, scale: float = 0.5) -> mf.WeilPoint:
    """Random lifted point; on the sphere the base point is uniform and kept away from the chart's pole."""
    if atlas.dim == 2:
        while True:
            p = rng.standard_normal(3)
            p /= np.linalg.norm(p)
            chart = int(rng.integers(2))
            uv = mf.sphere_to_chart(chart, p)
            if np.linalg.norm(uv) < 4.0:
                break
    else:
        chart = int(rng.integers(2))
        lo, hi = (0.0, 2 * math.pi) if chart == 0 else (-math.pi, math.pi)
        uv = rng.uniform(lo + 1e-3, hi - 1e-3, size=1)
    return atlas.point(chart, random_lifted(rng, algebra, uv, scale))


def _same_chart_residual(p: mf.WeilPoint, q: mf.WeilPoint) -> float:
    if q.chart != p.chart:
        q = mf.to_chart(q, p.chart)
    return relative_residual(p.coords, q.coords)


ATLAS_NAMES = ("S1", "S2")


def _manifold_setup(rng, atlases=ATLAS_NAMES):
    name = _pick(rng, atlases)
    atlas = mf.circle_atlas() if name == "S1" else mf.sphere_atlas()
    alg = preset(_pick(rng, MANIFOLD_ALGEBRAS))
    return atlas, alg, random_manifold_point(rng, atlas, alg)


def _random_self_map(rng, atlas):
    angle = float(rng.uniform(-math.pi, math.pi))
    if atlas.dim == 1:
        return _pick(rng, (mf.circle_rotation(angle, atlas), mf.circle_antipodal(atlas)))
    return _pick(rng, (mf.sphere_rotation(angle, atlas), mf.sphere_antipodal(atlas)))


def open_cover_trial(rng, atlases=ATLAS_NAMES):
    atlas, alg, p = _manifold_setup(rng, atlases)
    x = p.coords.shadow()
    charts = atlas.charts_containing(x)
    ok = p.chart in charts
    for c in atlas.charts:
        try:
            q = mf.to_chart(p, c)
        except WeilError:
            continue
        ok = ok and q.chart in atlas.charts_containing(q.coords.shadow())
    return (0.0 if ok else math.inf), _ctx(atlas=atlas.name, chart=p.chart, x=x)


def cocycle_trial(rng, atlases=ATLAS_NAMES):
    """``u_ca o u_ab o u_bc = id`` on every chart triple whose overlap contains the point."""
    atlas, alg, p = _manifold_setup(rng, atlases)
    worst = 0.0
    for b in atlas.charts:
        for c in atlas.charts:
            try:
                q = mf.to_chart(mf.to_chart(p, b), c)
            except WeilError:
                continue
            worst = max(worst, relative_residual(mf.to_chart(q, p.chart).coords, p.coords))
            worst = max(worst, relative_residual(q.coords, mf.to_chart(p, c).coords))
    return worst, _ctx(atlas=atlas.name, chart=p.chart, x=p.coords.shadow())


def chart_independence_trial(rng, atlases=ATLAS_NAMES):
    atlas, alg, p = _manifold_setup(rng, atlases)
    f = _random_self_map(rng, atlas)
    worst = 0.0
    for start in atlas.charts:
        try:
            q = mf.to_chart(p, start)
        except WeilError:
            continue
        images = mf.lift_map_all(f, q)
        for im in images[1:]:
            worst = max(worst, _same_chart_residual(images[0], im))
    return worst, _ctx(atlas=atlas.name, map=f.name, x=p.coords.shadow())


def projection_trial(rng, atlases=ATLAS_NAMES):
    atlas, alg, p = _manifold_setup(rng, atlases)
    f = _random_self_map(rng, atlas) if rng.random() < 0.7 or atlas.dim == 1 else mf.sphere_height(atlas)
    image = mf.lift_map(f, p)
    chart, x = mf.bundle_project(p)
    base = mf.lift_map(f, atlas.base_point(chart, x, real_line()))
    projected = f.target.point(image.chart, LiftedVector.constant(real_line(), image.coords.shadow()))
    return _same_chart_residual(base, projected), _ctx(atlas=atlas.name, map=f.name, x=x)


def manifold_functoriality_trial(rng, atlases=ATLAS_NAMES):
    atlas, alg, p = _manifold_setup(rng, atlases)
    f, g = _random_self_map(rng, atlas), _random_self_map(rng, atlas)
    if atlas.dim == 2 and rng.random() < 0.3:
        g = mf.sphere_height(atlas)
    gf = mf.compose_maps(g, f)
    res = _same_chart_residual(mf.lift_map(gf, p), mf.lift_map(g, mf.lift_map(f, p)))
    return res, _ctx(atlas=atlas.name, f=f.name, g=g.name, x=p.coords.shadow())


def bundle_trial(rng):
    s2 = mf.sphere_atlas()
    d = mf.is_vector_bundle(s2, dual(), seed=int(rng.integers(2**31)))
    j = mf.is_vector_bundle(s2, jet(2), seed=int(rng.integers(2**31)))
    ok = d.is_vector_bundle and d.transitions_linear and not j.is_vector_bundle and j.witness is not None
    ok = ok and j.witness.defect > 1e-3
    return (0.0 if ok else math.inf), _ctx(dual=d, jet2=j)


def transitions_trial(rng):
    atlas = _pick(rng, (mf.circle_atlas(), mf.sphere_atlas()))
    return mf.check_atlas(atlas, samples=5, seed=int(rng.integers(2**31))), _ctx(atlas=atlas.name)


def manifold_suite() -> list[Property]:
    s = "manifold"
    return [
        Property(s, "transition_codomains", 1e-12, transitions_trial),
        Property(s, "open_cover", 0.0, open_cover_trial),
        Property(s, "cocycle", 1e-9, cocycle_trial),
        Property(s, "chart_independence", 1e-9, chart_independence_trial),
        Property(s, "projection_naturality", 1e-9, projection_trial),
        Property(s, "functoriality", 1e-9, manifold_functoriality_trial),
        Property(s, "vector_bundle_criterion", 0.0, bundle_trial, trials=1),
    ]


# -- Lie groups ------------------------------------------------------------------

LIE_CASES = (("SO", 2), ("SO", 3), ("GL", 2), ("unipotent", 3))
LIE_ALGEBRAS = ("dual", "jet:2", "dual*dual")


def _lie_case(rng, cases, algebras):
    group, n = _pick(rng, cases)
    return group, n, preset(_pick(rng, algebras))


def _mres(a, b) -> float:
    a = a.entries if hasattr(a, "entries") else np.asarray(a)
    b = b.entries if hasattr(b, "entries") else np.asarray(b)
    return relative_residual(a, b)


def group_axioms_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        a, b, c = (lg.random_group(alg, n, group, rng) for _ in range(3))
        e = lg.group_identity(alg, n, group)
        ai = lg.group_inv(a)
        res = max(
            _mres(lg.group_mul(lg.group_mul(a, b), c), lg.group_mul(a, lg.group_mul(b, c))),
            _mres(lg.group_mul(e, a), a),
            _mres(lg.group_mul(a, e), a),
            _mres(lg.group_mul(a, ai), e),
            _mres(lg.group_mul(ai, a), e),
        )
        return res, _ctx(group=f"{group}({n})", algebra=alg.name)

    return trial


def projection_hom_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        a, b = lg.random_group(alg, n, group, rng), lg.random_group(alg, n, group, rng)
        g = lg.project(a)
        res = max(
            relative_residual(lg.project(lg.group_mul(a, b)), lg.project(a) @ lg.project(b)),
            relative_residual(lg.project(lg.zero_section(g, group, alg)), g),
        )
        return res, _ctx(group=f"{group}({n})", algebra=alg.name)

    return trial


def _hom_from(rng, alg):
    """A random hom out of ``alg``: augmentation, generator scaling, or exchange."""
    from .algebra import augmentation_hom, scaling_hom

    kinds = ["aug", "scaling"] + (["exchange"] if "*" in alg.name else [])
    kind = _pick(rng, kinds)
    if kind == "aug":
        return augmentation_hom(alg)
    if kind == "scaling":
        return scaling_hom(alg, rng.uniform(-2.0, 2.0, size=len(alg.exponents[0])))
    a, b = (preset(p) for p in alg.name.split("*"))
    return exchange_iso(a, b)


def exp_naturality_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        x = lg.random_lie(alg, n, lg.LIE_TAGS[group], rng)
        phi = _hom_from(rng, alg)
        lhs = lg.push_hom_matrix(phi, lg.lifted_exp(x))
        rhs = lg.lifted_exp(lg.push_hom_matrix(phi, x))
        return _mres(lhs, rhs), _ctx(group=f"{group}({n})", hom=repr(phi))

    return trial


def bracket_tensor_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        tag = lg.LIE_TAGS[group]
        x = lg.random_lie(real_line(), n, tag, rng).shadow()
        y = lg.random_lie(real_line(), n, tag, rng).shadow()
        a = AlgebraElement(alg, rng.standard_normal(alg.dim))
        b = AlgebraElement(alg, rng.standard_normal(alg.dim))
        lhs = lg.lifted_bracket(lg.pure_tensor(x, a, tag), lg.pure_tensor(y, b, tag))
        rhs = lg.pure_tensor(x @ y - y @ x, a * b, tag)
        return _mres(lhs, rhs), _ctx(group=f"{group}({n})", algebra=alg.name)

    return trial


def jacobi_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        tag = lg.LIE_TAGS[group]
        x, y, z = (lg.random_lie(alg, n, tag, rng) for _ in range(3))
        br = lg.lifted_bracket
        total = br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))
        scale = max(1.0, *(float(np.max(np.abs(br(u, br(v, w)).entries))) for u, v, w in ((x, y, z), (y, z, x), (z, x, y))))
        return float(np.max(np.abs(total.entries))) / scale, _ctx(group=f"{group}({n})", algebra=alg.name)

    return trial


def semidirect_trial(cases=LIE_CASES, algebras=LIE_ALGEBRAS) -> Trial:
    def trial(rng):
        group, n, alg = _lie_case(rng, cases, algebras)
        m = lg.random_group(alg, n, group, rng)
        rep = lg.semidirect_check(m)
        return max(rep.residual, rep.fiber_residual), _ctx(group=f"{group}({n})", algebra=alg.name)

    return trial


def exp_first_order_trial(rng, h: float = 1e-5):
    """Over D the x-slot of ``exp(t(X0 + X1 x))`` equals ``d/ds expm(t(X0 + s X1))``."""
    group, n = _pick(rng, LIE_CASES)
    tag = lg.LIE_TAGS[group]
    alg = dual()
    x = lg.random_lie(alg, n, tag, rng)
    t = float(rng.uniform(-1.0, 1.0))
    x0, x1 = x.entries[..., 0], x.entries[..., 1]
    slot = lg.lifted_exp(x * t).entries[..., 1]
    fd = (expm(t * (x0 + h * x1)) - expm(t * (x0 - h * x1))) / (2 * h)
    return relative_residual(slot, fd), _ctx(group=f"{group}({n})", t=t)


def liegroup_suite() -> list[Property]:
    s = "liegroup"
    return [
        Property(s, "group_axioms", 1e-9, group_axioms_trial()),
        Property(s, "projection_homomorphism", 1e-12, projection_hom_trial()),
        Property(s, "exp_naturality", 1e-9, exp_naturality_trial()),
        Property(s, "bracket_pure_tensor", 1e-9, bracket_tensor_trial()),
        Property(s, "jacobi", 1e-9, jacobi_trial()),
        Property(s, "semidirect_reassembly", 1e-9, semidirect_trial()),
        Property(s, "exp_first_order", 1e-6, exp_first_order_trial),
    ]


SUITES = {
    "algebra": algebra_suite,
    "lift": lift_suite,
    "manifold": manifold_suite,
    "liegroup": liegroup_suite,
}
