"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured worst
residual, the tolerance and the wall time. The lines are collected again in
the terminal summary (see ``conftest.py``) and are also printed by running
this file directly.
"""

import time

import numpy as np
import sympy as sp

from weilfunctor import LiftedVector, dual, eval_lift, jet, push_hom, recover_algebra, tensor_product
from weilfunctor.algebra import exchange_iso
from weilfunctor.lift import flatten, lift_graph, nest, relative_residual
from weilfunctor.manifold import is_vector_bundle, sphere_atlas
from weilfunctor.sampling import PRESET_NAMES, preset, random_graph, random_lifted, sample_graph_and_point
from weilfunctor.verify import (
    LIE_ALGEBRAS,
    LIE_CASES,
    LIFT_PRESETS,
    Property,
    bracket_tensor_trial,
    chart_independence_trial,
    cocycle_trial,
    decomposition_trial,
    dual_fd_trial,
    exp_naturality_trial,
    functoriality_trial,
    group_axioms_trial,
    naturality_trial,
    oracle_trial,
    projection_hom_trial,
    projection_trial,
    run_property,
    semidirect_trial,
)
from weilfunctor.sampling import HOM_KINDS

SEED = 20240601
LINES: list[str] = []


def report(num, title, ok, residual, tol, seconds, limit=None, extra=""):
    timing = f"{seconds:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
    line = f"{'PASS' if ok else 'FAIL'}  [{num:>2}] {title:<34} max_residual={residual:.3e}  tol={tol:.0e}  time={timing}"
    if extra:
        line += f"  {extra}"
    LINES.append(line)
    print(line)
    return ok


def run_all(props, trials):
    """Run properties and return (worst residual, first counterexample or None)."""
    worst, first = 0.0, None
    for prop in props:
        res = run_property(prop, SEED, trials)
        worst = max(worst, res.max_residual)
        if first is None and res.counterexample:
            first = f"{res.name}: {res.counterexample}"
    return worst, first


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_01_dual_vs_finite_differences():
    prop = Property("acceptance", "dual_fd", 1e-6, dual_fd_trial(points=10, h=1e-5))
    (worst, bad), dt = timed(lambda: run_all([prop], 50))
    ok = report(1, "dual slot vs central differences", bad is None and dt < 5, worst, 1e-6, dt, 5, "50 graphs x 10 points")
    assert ok, bad


def _sympy_graph(g, symbols):
    vals = []
    for nd in g.nodes:
        a = vals[nd.args[0]] if nd.args else None
        if nd.op == "input":
            vals.append(symbols[nd.param])
        elif nd.op == "const":
            vals.append(sp.Rational(str(nd.param)))
        elif nd.op == "add":
            vals.append(a + vals[nd.args[1]])
        elif nd.op == "mul":
            vals.append(a * vals[nd.args[1]])
        elif nd.op == "neg":
            vals.append(-a)
        elif nd.op == "pow":
            vals.append(a ** int(nd.param))
        else:
            raise AssertionError(f"non-polynomial op {nd.op}")
    return [vals[o] for o in g.outputs]


def test_02_jet3_vs_symbolic_derivatives():
    rng = np.random.default_rng([SEED, 2])
    alg = jet(3)
    t = sp.Symbol("t")
    cases = []
    for _ in range(50):
        g = random_graph(rng, 1, 1, depth=6, polynomial=True)
        cases.append((g, float(rng.uniform(-1.5, 1.5))))

    # oracle: exact rational Taylor coefficients, built without the lift machinery
    t0 = time.perf_counter()
    oracles = []
    for g, x in cases:
        (expr,) = _sympy_graph(g, [t])
        x0 = sp.Rational(repr(x))
        coeffs = [sp.diff(expr, t, k).subs(t, x0) / sp.factorial(k) for k in range(4)]
        oracles.append(np.array([float(c) for c in coeffs]))
    oracle_time = time.perf_counter() - t0

    def lifts():
        return [eval_lift(g, LiftedVector.seed(alg, [x])).coeffs()[0] for g, x in cases]

    got, dt = timed(lifts)
    worst = max(relative_residual(a, b) for a, b in zip(got, oracles))
    ok = report(2, "jet:3 slots vs symbolic Taylor", worst < 1e-9 and dt < 5, worst, 1e-9, dt, 5, f"50 polynomial graphs; oracle build {oracle_time:.2f}s")
    assert ok


def test_03_functoriality():
    props = [Property("acceptance", f"functoriality[{a}]", 1e-9, functoriality_trial((a,))) for a in LIFT_PRESETS]
    (worst, bad), dt = timed(lambda: run_all(props, 200))
    ok = report(3, "functoriality of lifts", bad is None and dt < 30, worst, 1e-9, dt, 30, "200 pairs x 4 algebras")
    assert ok, bad


def test_04_taylor_formula_equals_eval():
    props = [Property("acceptance", f"oracle[{a}]", 1e-9, oracle_trial((a,))) for a in ("dual*dual", "jet:2:2")]
    (worst, bad), dt = timed(lambda: run_all(props, 100))
    ok = report(4, "Taylor formula vs graph lift", bad is None, worst, 1e-9, dt, extra="100 graphs x 2 algebras")
    assert ok, bad


def test_05_naturality():
    # five homs of each kind, 50 inputs through each square
    props = [Property("acceptance", f"naturality[{k}]", 1e-9, naturality_trial((k,), inputs=50)) for k in HOM_KINDS]
    (worst, bad), dt = timed(lambda: run_all(props, 20 // len(HOM_KINDS)))
    ok = report(5, "naturality squares", bad is None, worst, 1e-9, dt, extra="20 homs x 50 inputs")
    assert ok, bad


def test_06_nesting_and_exchange():
    rng = np.random.default_rng([SEED, 6])
    d = dual()
    dd = tensor_product(d, d)
    swap = exchange_iso(d, d)

    def trials():
        worst = 0.0
        exact = True
        for _ in range(100):
            n = int(rng.integers(1, 3))
            g, x = sample_graph_and_point(rng, n, int(rng.integers(1, 3)), depth=5)
            v = random_lifted(rng, dd, x)
            flat = eval_lift(g, v)
            nested = flatten(eval_lift(lift_graph(g, d), nest(v, d, d)), d, d)
            worst = max(worst, relative_residual(flat, nested))
            # conjugating by the exchange swaps the two first-order slots and nothing else
            c, s = flat.coeffs(), push_hom(swap, flat).coeffs()
            exact &= np.array_equal(s, c[:, [0, 2, 1, 3]])
            worst = max(worst, relative_residual(push_hom(swap, eval_lift(g, push_hom(swap, v))), flat))
        return worst, exact

    (worst, exact), dt = timed(trials)
    ok = report(6, "nested D(D) vs flat D*D", worst < 1e-9 and exact, worst, 1e-9, dt, extra=f"exchange swap exact={exact}")
    assert ok


def test_07_decomposition():
    prop = Property("acceptance", "decomposition", 1e-9, decomposition_trial)
    (worst, bad), dt = timed(lambda: run_all([prop], 20))
    ok = report(7, "idempotent decomposition", bad is None and dt < 10, worst, 1e-9, dt, 10, "20 rotated sums")
    assert ok, bad


def test_08_vector_bundle_criterion():
    t0 = time.perf_counter()
    s2 = sphere_atlas()
    tangent = is_vector_bundle(s2, dual())
    jets = is_vector_bundle(s2, jet(2))
    dt = time.perf_counter() - t0
    defect = jets.witness.defect if jets.witness else 0.0
    ok = tangent.is_vector_bundle and not jets.is_vector_bundle and defect > 1e-3
    line_ok = report(8, "vector bundle criterion on S2", ok, defect, 1e-3, dt, extra="residual column = jet:2 witness defect (must exceed tol)")
    assert line_ok


def test_09_manifold_gluing():
    props = []
    for atlas in ("S1", "S2"):
        for name, trial in (("cocycle", cocycle_trial), ("chart_independence", chart_independence_trial), ("projection", projection_trial)):
            props.append(Property("acceptance", f"{name}[{atlas}]", 1e-9, lambda rng, t=trial, a=atlas: t(rng, atlases=(a,))))
    (worst, bad), dt = timed(lambda: run_all(props, 200))
    ok = report(9, "S1/S2 gluing suites", bad is None, worst, 1e-9, dt, extra="3 suites x 2 atlases x 200 points")
    assert ok, bad


def test_10_lie_groups():
    factories = {
        "group_axioms": group_axioms_trial,
        "projection_homomorphism": projection_hom_trial,
        "exp_naturality": exp_naturality_trial,
        "bracket_pure_tensor": bracket_tensor_trial,
        "semidirect_reassembly": semidirect_trial,
    }
    props = [
        Property("acceptance", f"{name}[{g}({n}),{a}]", 1e-9, make(((g, n),), (a,)))
        for name, make in factories.items()
        for g, n in LIE_CASES
        for a in LIE_ALGEBRAS
    ]
    (worst, bad), dt = timed(lambda: run_all(props, 100))
    ok = report(10, "lifted matrix groups", bad is None and dt < 60, worst, 1e-9, dt, 60, "5 laws x 4 groups x 3 algebras x 100")
    assert ok, bad


def test_11_recover_algebra():
    t0 = time.perf_counter()
    worst = 0.0
    names = PRESET_NAMES + ("R", "jet:1", "jet:4", "jet:3:2", "dual*dual*dual")
    for name in names:
        alg = preset(name)
        back = recover_algebra(alg)
        worst = max(worst, float(np.max(np.abs(back.structure_constants - alg.structure_constants))))
        worst = max(worst, float(np.max(np.abs(back.unit - alg.unit))))
    dt = time.perf_counter() - t0
    ok = report(11, "algebra recovered from its functor", worst < 1e-12, worst, 1e-12, dt, extra=f"{len(names)} presets")
    assert ok


if __name__ == "__main__":
    import sys

    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_")]:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
