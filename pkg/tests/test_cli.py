import subprocess
import sys

import numpy as np
import pytest

from weilfunctor import dual, dumps_algebra, jet, rebase, tensor_product
from weilfunctor.algebra import direct_sum, real_line
from weilfunctor.cli import main
from weilfunctor.sampling import random_change_of_basis


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def values(out):
    return [float(line.split()[-1]) for line in out.splitlines() if not line.startswith("#")]


# -- lift ---------------------------------------------------------------------------------------


def test_lift_exp_jet3(capsys):
    code, out, _ = run(capsys, "lift", "--algebra", "jet:3", "exp(x1)", "--at", "0")
    assert code == 0
    assert out.splitlines()[1:] == [
        "f1  1    1",
        "f1  x    1",
        "f1  x^2  0.5",
        "f1  x^3  0.166666666667",
    ]


def test_lift_identity_dual(capsys):
    code, out, _ = run(capsys, "lift", "--algebra", "dual", "x1", "--at", "7")
    assert code == 0 and values(out) == [7, 1]


def test_lift_product_dual_dual(capsys):
    code, out, _ = run(capsys, "lift", "--algebra", "dual*dual", "x1*x2", "--at", "3", "5")
    assert code == 0 and values(out) == [15, 5, 3, 1]
    assert out.startswith("# algebra dual*dual  dim=4  height=2  at=3 5\n")


def test_lift_several_outputs(capsys):
    code, out, _ = run(capsys, "lift", "--algebra", "dual", "x1^2, sin(x1)", "--at", "0")
    assert code == 0 and values(out) == [0, 0, 0, 1]


def test_lift_explicit_seeds(capsys):
    # one generator, two variables: x2 held constant
    code, out, _ = run(capsys, "lift", "--algebra", "dual", "x1*x2", "--at", "3", "5", "--seed-slots", "x", "-")
    assert code == 0 and values(out) == [15, 5]
    code, out, _ = run(capsys, "lift", "--algebra", "dual", "x1*x2", "--at", "3", "5", "--seed-slots", "x", "x")
    assert code == 0 and values(out) == [15, 8]
    code, out, _ = run(capsys, "lift", "--algebra", "jet:2", "x1", "--at", "3", "--seed-slots", "2")
    assert code == 0 and values(out) == [3, 0, 1]  # plain index


@pytest.mark.parametrize("slot", ["0", "1"])
def test_lift_rejects_unit_slot(capsys, slot):
    # "1" is the label of the unit, so it is looked up as a label first
    code, _, err = run(capsys, "lift", "--algebra", "dual", "x1", "--at", "3", "--seed-slots", slot)
    assert code == 2 and "nilpotent" in err


def test_lift_seeding_ambiguity(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "dual", "x1*x2", "--at", "3", "5")
    assert code == 2 and "seed" in err


def test_lift_bad_slot(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "dual", "x1", "--at", "1", "--seed-slots", "q")
    assert code == 2 and "label" in err


def test_lift_parse_error(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "dual", "x1 +* 2", "--at", "1")
    assert code == 2 and "position 4" in err


def test_lift_arity_mismatch(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "dual", "x1 + x2", "--at", "1")
    assert code == 2


def test_lift_domain_error(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "dual", "log(x1 - 2)", "--at", "1")
    assert code == 3 and "node" in err


def test_lift_unknown_algebra(capsys):
    code, _, err = run(capsys, "lift", "--algebra", "quux", "x1", "--at", "1")
    assert code == 2 and "quux" in err


# -- decompose -------------------------------------------------------------------------------


@pytest.fixture
def algebra_file(tmp_path):
    def write(alg, name="alg.txt"):
        path = tmp_path / name
        path.write_text(dumps_algebra(alg))
        return str(path)

    return write


def test_decompose_r_times_r(capsys, algebra_file):
    code, out, _ = run(capsys, "decompose", algebra_file(direct_sum(real_line(), real_line())))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k 2"
    assert lines.count("summand 1: dim 1 height 0") + lines.count("summand 2: dim 1 height 0") == 2


def test_decompose_dual(capsys, algebra_file):
    code, out, _ = run(capsys, "decompose", algebra_file(dual()))
    assert code == 0
    assert out.splitlines() == ["k 1", "idempotent 1: 1 0", "summand 1: dim 2 height 1"]


def test_decompose_rotated_d_plus_d(capsys, algebra_file):
    rng = np.random.default_rng(11)
    alg = rebase(direct_sum(dual(), dual()), random_change_of_basis(rng, 4))
    code, out, _ = run(capsys, "decompose", algebra_file(alg))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k 2"
    assert [ln.split(": ")[1] for ln in lines if ln.startswith("summand")] == ["dim 2 height 1"] * 2


def test_decompose_complex_numbers(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("dim 2\nunit 1 0\nsc 0 0 -> 0:1\nsc 0 1 -> 1:1\nsc 1 1 -> 0:-1\n")
    code, _, err = run(capsys, "decompose", str(path))
    assert code == 3 and "formally real" in err


# -- validate, tensor, --out ----------------------------------------------------------------


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", "jet:2:2")[1] == "ok: dim 6 height 2\n"
    path = tmp_path / "broken.txt"
    path.write_text("dim 2\nunit 1 0\naug 1 0\nsc 0 0 -> 0:1\nsc 0 1 -> 1:1\nsc 1 1 -> 0:1\n")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 4 and out.startswith("invalid:")


def test_validate_needs_one_algebra(capsys):
    assert run(capsys, "validate")[0] == 2
    assert run(capsys, "validate", "dual", "--algebra", "dual")[0] == 2
    assert run(capsys, "validate", "--algebra", "dual")[0] == 0


def test_tensor_prints_algebra(capsys):
    code, out, _ = run(capsys, "tensor", "jet:2", "dual")
    assert code == 0
    assert out == dumps_algebra(tensor_product(jet(2), dual()))
    assert run(capsys, "tensor", "--algebra", "jet:2", "--algebra", "dual")[1] == out


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, "tensor", "dual", "dual", "--out", str(target))
    assert code == 0 and target.read_text() == out


def test_roundtrip_gives_identical_lift(capsys, algebra_file):
    alg = tensor_product(jet(2), dual())
    path = algebra_file(alg)
    args = ["exp(x1)*sin(x2)", "--at", "0.3", "1.2"]
    a = run(capsys, "lift", "--algebra", "jet:2*dual", *args)
    b = run(capsys, "lift", "--algebra", path, *args)
    assert a[0] == b[0] == 0
    assert a[1].splitlines()[1:] == b[1].splitlines()[1:]
    assert run(capsys, "validate", path)[0] == 0


# -- verify -------------------------------------------------------------------------------


def test_verify_all_smoke(capsys):
    code, out, _ = run(capsys, "verify", "all", "--seed", "1", "--trials", "1")
    assert code == 0
    for suite in ("algebra", "lift", "manifold", "liegroup"):
        assert f"{suite}." in out
    assert "FAIL" not in out


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "algebra", "--seed", "5", "--trials", "5")
    b = run(capsys, "verify", "algebra", "--seed", "5", "--trials", "5")
    assert a == b and a[0] == 0


def test_verify_lift_seed_42(capsys):
    code, out, _ = run(capsys, "verify", "lift", "--seed", "42", "--trials", "200")
    assert code == 0
    line = next(ln for ln in out.splitlines() if "lift.functoriality" in ln)
    assert "trials=200" in line and "max_residual=" in line


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "bogus"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weilfunctor", "lift", "--algebra", "dual", "x1^3", "--at", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert values(proc.stdout) == [8, 12]
