import json
import random

import pytest
from hypothesis import given, strategies as st

from obscura.deformed_algebra import Element, Mode
from obscura.errors import ExpressionSyntaxError, SpecError
from obscura.monomials import NaryApp, Node
from obscura.spec_loader import (
    Add,
    Bracket,
    Gen,
    Lit,
    Nary,
    Neg,
    Product,
    ScalarMul,
    Sub,
    evaluate,
    format_ast,
    load_spec,
    parse_expression,
    parse_scalar,
)
from obscura.scalar_field import root_of_unity, scalar

BASE = {
    "grading": {"cyclic_orders": [2]},
    "generators": [{"symbol": "x", "grade": "(1)", "mu": "1/2"}, {"symbol": "y", "grade": [1], "mu": "1/3"}],
    "mode": "graded",
    "factors": {"epsilon": "sign_rule", "pi": "trivial"},
}


def spec_with(**changes):
    doc = json.loads(json.dumps(BASE))
    doc.update(changes)
    return load_spec(doc)


def test_minimal_spec():
    spec = load_spec(json.dumps(BASE))
    assert spec.symbols == ["x", "y"]
    assert spec.grades == {"x": (1,), "y": (1,)}
    assert spec.epsilon((1,), (1,)) == -1
    assert len(spec.digest) == 16


def test_digest_ignores_key_order():
    a = load_spec(json.dumps(BASE))
    b = load_spec(json.dumps(dict(reversed(list(BASE.items())))))
    assert a.digest == b.digest


def test_mu_zero_rejected():
    doc = json.loads(json.dumps(BASE))
    doc["generators"][0]["mu"] = "0"
    with pytest.raises(SpecError, match="membership must be positive"):
        load_spec(doc)


def test_errors_are_collected():
    doc = json.loads(json.dumps(BASE))
    doc["generators"][0]["mu"] = "2"
    doc["generators"][1]["grade"] = "(5)"
    doc["mode"] = "banana"
    with pytest.raises(SpecError) as info:
        load_spec(doc)
    paths = [e.split(":")[0] for e in info.value.errors]
    assert paths == ["mode", "generators[0].mu", "generators[1].grade"]


def test_missing_table_key_is_listed():
    doc = json.loads(json.dumps(BASE))
    doc["factors"] = {"pi": {"table": {"(0),(0)": 1, "(0),(1)": 1, "(1),(0)": 1}}}
    with pytest.raises(SpecError, match=r"missing 1 keys: \(1\),\(1\)"):
        load_spec(doc)


def test_syntax_error_has_position():
    with pytest.raises(SpecError, match="line 1 column"):
        load_spec('{"grading": }')


def test_reserved_and_duplicate_symbols():
    doc = json.loads(json.dumps(BASE))
    doc["generators"].append({"symbol": "e", "grade": 0})
    doc["generators"].append({"symbol": "x", "grade": 0})
    with pytest.raises(SpecError) as info:
        load_spec(doc)
    assert len(info.value.errors) == 2


def test_explicit_membership_table():
    spec = spec_with(membership={"compound": "explicit", "table": {"x . y": "1/8"}})
    assert spec.membership.of(("x", "y")) == scalar(1) / 8


def test_scalar_parsing():
    assert parse_scalar("1/2") == scalar(1) / 2
    assert parse_scalar("-3") == -3
    assert parse_scalar("zeta^2", 3) == root_of_unity(3, 2)
    assert parse_scalar("1 + zeta + zeta^2", 3) == 0
    for bad in ["x", "1/0", 0.5]:
        with pytest.raises((ValueError, ExpressionSyntaxError)):
            parse_scalar(bad)


def test_star_parsing_rules():
    spec = spec_with(mode="star")
    assert parse_expression("x * y", spec) == Product("*", Gen("x"), Gen("y"))
    assert parse_expression("2 * x * y", spec) == Product("*", ScalarMul(Lit(scalar(2)), Gen("x")), Gen("y"))
    with pytest.raises(ExpressionSyntaxError, match="nonassociative product requires parentheses"):
        parse_expression("x * y * x", spec)
    assert parse_expression("(x * y) * x", spec) == Product("*", Product("*", Gen("x"), Gen("y")), Gen("x"))
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("e", spec)


def test_bracket_and_nary_parsing():
    spec = spec_with(mode="double")
    ast = parse_expression("L[x, L[y, x]]", spec)
    assert ast == Bracket(Gen("x"), Bracket(Gen("y"), Gen("x")))
    nspec = spec_with(mode="nary", arity=3)
    assert parse_expression("[x, y, x]", nspec) == Nary((Gen("x"), Gen("y"), Gen("x")))
    with pytest.raises(ExpressionSyntaxError, match="arity mismatch"):
        parse_expression("[x, y]", nspec)
    nested = parse_expression("[[x, y, x], y, x]", nspec)
    assert evaluate(nested, nspec) == Element.monomial(NaryApp((NaryApp(("x", "y", "x")), "y", "x")))


@pytest.mark.parametrize("text", ["x +", "q . x", "x . . y", "(x . y", "x ** y", "[x, y]", "x ^ 2", "x $ y"])
def test_graded_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        parse_expression(text, spec_with())


def test_evaluate_modes():
    g = spec_with()
    assert evaluate(parse_expression("2 * (x . y) - y . x", g), g) == Element({("x", "y"): 2, ("y", "x"): -1})
    assert evaluate(parse_expression("3 + e", g), g) == Element.monomial((), 4)
    s = spec_with(mode="star")
    out = evaluate(parse_expression("x * (x + y)", s), s)
    # mu(x + y) = min(1/2, 1/3), so the x * x term picks up (1/2) / (1/3)
    assert out == Element({Node("x", "x"): scalar(3) / 2, Node("x", "y"): 1})


ops = {"graded": ".", "star": "*", "double": "**", "weyl": "o"}


def random_ast(rng, mode, depth):
    if depth == 0 or rng.random() < 0.25:
        return Gen(rng.choice("xy"))
    kind = rng.choice(["add", "sub", "neg", "scale", "prod", "prod"])
    left, right = random_ast(rng, mode, depth - 1), random_ast(rng, mode, depth - 1)
    if kind == "add":
        return Add(left, right)
    if kind == "sub":
        return Sub(left, right)
    if kind == "neg":
        return Neg(left)
    if kind == "scale":
        if isinstance(left, ScalarMul):
            left = Neg(left)  # the parser folds directly nested scalar multiples
        return ScalarMul(Lit(scalar(rng.randint(-5, 5) or 1) / rng.randint(1, 4)), left)
    return Product(ops[mode], left, right)


@given(st.integers(0, 10**6), st.sampled_from(sorted(ops)))
def test_round_trip(seed, mode):
    extra = {"weyl": {"c": "1/4"}} if mode == "weyl" else {}
    spec = spec_with(mode=mode, **extra)
    ast = random_ast(random.Random(seed), mode, 4)
    text = format_ast(ast)
    assert parse_expression(text, spec) == ast
    assert format_ast(parse_expression(text, spec)) == text
