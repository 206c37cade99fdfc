import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laguerre_schrodinger import ParseError, make_uniform_grid, parse_potential
from laguerre_schrodinger.expr import BinOp, Call, Neg, Num, Var, parse_expression


def test_constant_one():
    p = parse_potential("1")
    assert p.is_constant and p.constant_value() == 1.0
    assert parse_potential("one").constant_value() == 1.0
    assert parse_potential("zero").constant_value() == 0.0


def test_example_expression():
    p = parse_potential("x^2 + sin(3*x)")
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(p(x), x**2 + np.sin(3 * x), rtol=0, atol=1e-15)
    assert not p.is_constant


def test_syntax_error_offset():
    with pytest.raises(ParseError) as info:
        parse_potential("x +")
    assert info.value.position == 3
    assert "offset 3" in str(info.value)


@pytest.mark.parametrize("text,where", [("x ** 2", 3), ("(x + 1", 6), ("2 $ x", 2), ("foo(x)", 0)])
def test_error_positions(text, where):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.position == where


def test_precedence():
    assert str(parse_expression("-x^2")) == "(-(x ^ 2.0))"
    assert parse_expression("2^3^2").evaluate(np.zeros(1))[0] == 512.0
    assert parse_expression("2^-1").evaluate(np.zeros(1))[0] == 0.5
    assert parse_expression("1 - 2 - 3").evaluate(np.zeros(1))[0] == -4.0
    assert parse_expression("8 / 4 / 2").evaluate(np.zeros(1))[0] == 1.0


def test_nonfinite_evaluation():
    p = parse_potential("1/x")
    with pytest.raises(ParseError, match="not finite"):
        p(np.linspace(0, 1, 5))


def test_empty():
    with pytest.raises(ParseError):
        parse_potential("   ")


def test_sample_file(tmp_path):
    x = np.linspace(0, 2, 41)
    path = tmp_path / "q.csv"
    np.savetxt(path, np.column_stack([x, np.cos(x)]), delimiter=",", header="x,q", comments="")
    pot = parse_potential(f"@{path}")
    assert pot.d == 2.0
    prof = pot.profile(make_uniform_grid(2.0, 41))
    np.testing.assert_array_equal(prof.values, np.cos(x))
    fine = pot.profile(make_uniform_grid(2.0, 401))
    assert np.max(np.abs(fine.values - np.cos(fine.grid.nodes))) <= 1e-5


def test_bad_sample_file(tmp_path):
    path = tmp_path / "q.csv"
    np.savetxt(path, np.column_stack([[0.5, 1.0], [1.0, 2.0]]), delimiter=",")
    with pytest.raises(ParseError):
        parse_potential(f"@{path}")


numbers = st.floats(0, 100, allow_nan=False).map(Num)
leaves = st.one_of(numbers, st.just(Var()))
trees = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(BinOp, st.sampled_from("+-*/^"), sub, sub),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "abs"]), sub),
    ),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(trees)
def test_print_parse_round_trip(tree):
    assert parse_expression(str(tree)) == tree
