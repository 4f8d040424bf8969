import math

import numpy as np
import pytest
from hypothesis import given, settings

from weilfunctor import (
    AlgebraError,
    FiniteAlgebra,
    ParseError,
    WeilAlgebra,
    dual,
    dumps_algebra,
    evaluate,
    format_graph,
    jet,
    loads_algebra,
    parse_expressions,
    rebase,
    tensor_product,
)
from weilfunctor.parse import tokenize
from weilfunctor.sampling import PRESET_NAMES, preset, random_change_of_basis, random_graph

# -- expressions ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, x, want",
    [
        ("1 + 2 * 3", [], 7),
        ("2 ^ 3 ^ 2", [], 512),
        ("-2 ^ 2", [], -4),
        ("(-2) ^ 2", [], 4),
        ("x1 - x2 - x3", [1, 2, 3], -4),
        ("x1 / x2 / 2", [8, 2], 2),
        ("exp(0) + log(1) + sin(0) + cos(0) + sqrt(4)", [], 4),
        ("x1^-1", [4], 0.25),
        ("2.5e-1 * x1", [4], 1),
        (".5 + 1.", [], 1.5),
        ("--x1", [3], 3),
    ],
)
def test_parse_and_evaluate(text, x, want):
    g = parse_expressions(text, arity=len(x))
    assert evaluate(g, x)[0] == pytest.approx(want)


def test_list_of_expressions():
    g = parse_expressions("x1 * x2, x1 + x2, 3")
    assert g.arity == 2 and g.n_outputs == 3
    assert np.allclose(evaluate(g, [2, 5]), [10, 7, 3])


def test_arity_defaults_to_largest_variable():
    assert parse_expressions("x3 + 1").arity == 3


@pytest.mark.parametrize(
    "text, pos",
    [
        ("x1 +* 2", 4),
        ("exp(x1", 6),
        ("foo(x1)", 0),
        ("x1 ^ 1.5", 5),
        ("x1 ^ x1", 5),
        ("2 $ 3", 2),
        ("x0", 0),
        ("", 0),
        ("x1 x2", 3),
    ],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expressions(text, arity=2)
    assert info.value.position == pos
    assert f"(at position {pos})" in str(info.value)


def test_variable_beyond_arity():
    with pytest.raises(ParseError, match="exceeds"):
        parse_expressions("x1 + x3", arity=2)


def test_tokenize_positions():
    toks = tokenize("exp( x12 )")
    assert [(k, v, p) for k, v, p in toks] == [
        ("name", "exp", 0),
        ("op", "(", 3),
        ("name", "x12", 5),
        ("op", ")", 9),
        ("end", "", 10),
    ]


@settings(max_examples=60, deadline=None)
@given(seed=__import__("hypothesis").strategies.integers(0, 2**31))
def test_format_parse_roundtrip(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 2, 2, depth=5)
    back = parse_expressions(format_graph(g), arity=2)
    x = rng.uniform(0.5, 1.5, size=2)
    try:
        want = evaluate(g, x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return
    got = evaluate(back, x)
    assert np.allclose(got, want, rtol=1e-12, equal_nan=True)


def test_division_is_multiplication_by_inverse():
    g = parse_expressions("x1 / x2")
    assert {nd.op for nd in g.nodes} == {"input", "mul", "inv"}


# -- algebra files -------------------------------------------------------------------------

DUAL_TEXT = """\
# dual numbers
dim 2
unit 1 0
aug 1 0
labels 1 x
sc 0 0 -> 0:1
sc 0 1 -> 1:1
"""


def test_load_dual():
    alg = loads_algebra(DUAL_TEXT)
    assert isinstance(alg, WeilAlgebra)
    assert np.array_equal(alg.structure_constants, dual().structure_constants)
    assert alg.labels() == ("1", "x") and alg.height == 1


def test_dump_dual_is_canonical():
    assert dumps_algebra(dual()) == DUAL_TEXT.split("\n", 1)[1]


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_roundtrip_presets_exactly(name):
    alg = preset(name)
    back = loads_algebra(dumps_algebra(alg))
    assert np.array_equal(back.structure_constants, alg.structure_constants)
    assert np.array_equal(back.unit, alg.unit) and np.array_equal(back.aug, alg.aug)
    assert back.labels() == alg.labels() and back.height == alg.height


def test_roundtrip_rebased_algebra():
    rng = np.random.default_rng(0)
    alg = rebase(tensor_product(jet(2), dual()), random_change_of_basis(rng, 6))
    back = loads_algebra(dumps_algebra(alg))
    assert np.max(np.abs(back.structure_constants - alg.structure_constants)) < 1e-12
    assert back.height == 3


def test_missing_aug_gives_generic_algebra():
    text = "dim 2\nunit 1 1\nsc 0 0 -> 0:1\nsc 1 1 -> 1:1\n"
    alg = loads_algebra(text)
    assert type(alg) is FiniteAlgebra


def test_lower_triangle_line_rejected():
    text = DUAL_TEXT + "sc 1 0 -> 1:1\n"
    with pytest.raises(ParseError, match="i > j"):
        loads_algebra(text)


def test_duplicate_pair_rejected():
    with pytest.raises(ParseError, match="twice"):
        loads_algebra(DUAL_TEXT + "sc 0 1 -> 1:2\n")


@pytest.mark.parametrize(
    "text, match",
    [
        ("unit 1 0\n", "dim"),
        ("dim 2\n", "unit"),
        ("dim 0\nunit\n", "positive"),
        ("dim 2\nunit 1 0\nsc 0 5 -> 0:1\n", "range"),
        ("dim 2\nunit 1 0\nsc 0 0 0:1\n", "sc i j"),
        ("dim 2\nunit 1 0\nbasis 1 x\n", "unknown field"),
        ("dim two\nunit 1 0\n", "line 1"),
    ],
)
def test_malformed_files(text, match):
    with pytest.raises(ParseError, match=match):
        loads_algebra(text)


def test_invalid_weil_table_rejected_when_checked():
    text = DUAL_TEXT.replace("sc 0 1 -> 1:1\n", "sc 0 1 -> 1:1\nsc 1 1 -> 0:-1\n")
    with pytest.raises(AlgebraError):
        loads_algebra(text)
    alg = loads_algebra(text, check=False)
    assert alg.height is None


def test_floats_survive_roundtrip():
    text = dumps_algebra(rebase(dual(), np.array([[1.0, 0.0], [math.pi, 1 / 3]])))
    alg = loads_algebra(text)
    assert dumps_algebra(alg) == text
