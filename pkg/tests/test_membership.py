from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from obscura.errors import InvalidMembershipError, UndefinedMembershipError
from obscura.membership import (
    EXPLICIT,
    MembershipTable,
    ZERO,
    as_membership,
    check_direct_sum,
    check_obscure_axioms,
    enumerate_trees,
    joint_membership,
    mu_includes,
    mu_intersect,
    mu_negate,
    mu_union,
)
from obscura.monomials import NaryApp, Node

mus = st.fractions(min_value=0, max_value=1, max_denominator=30).filter(lambda q: q > 0)


@pytest.mark.parametrize("bad", [0, -1, Fraction(3, 2), "x", "0"])
def test_rejects_out_of_range(bad):
    with pytest.raises(InvalidMembershipError):
        as_membership(bad)


def test_positive_message():
    with pytest.raises(InvalidMembershipError, match="membership must be positive"):
        as_membership("0")


def test_lattice_operations():
    assert mu_union("1/2", "1/3") == Fraction(1, 2)
    assert mu_intersect("1/2", "1/3") == Fraction(1, 3)
    assert mu_includes("1/3", "1/2")
    assert mu_negate(1) == 0


def test_min_rule_and_explicit():
    mu = MembershipTable({"x": "1/2", "y": "1/3"})
    assert mu.of(("x", "y")) == Fraction(1, 3)
    assert mu.of(Node("x", Node("y", "x"))) == Fraction(1, 3)
    assert mu.of(NaryApp(("x", "x"))) == Fraction(1, 2)
    assert mu.of(()) == 1 and mu.of(ZERO) == 1
    ex = MembershipTable({"x": "1/2", "y": "1/3"}, EXPLICIT, {("x", "y"): "1/8"})
    assert ex.of(("x", "y")) == Fraction(1, 8)
    with pytest.raises(UndefinedMembershipError):
        ex.of(("y", "x"))
    with pytest.raises(UndefinedMembershipError):
        mu.of("q")


def test_joint_membership_is_max():
    mu0 = MembershipTable({"x": "1/4"})
    mu1 = MembershipTable({"y": "1/2"})
    assert joint_membership({0: mu0, 1: mu1}, {0: "x", 1: "y"}) == Fraction(1, 2)


def test_direct_sum():
    assert check_direct_sum({"x": "1/2"}, {"y": "1/3"}) == (True, None)
    assert check_direct_sum({"x": "1/2", ZERO: 1}, {"x": "1/3", ZERO: 1}) == (False, "x")


def test_tree_enumeration_counts():
    # Catalan numbers times symbol choices
    assert len(enumerate_trees(["x"], 4)) == 1 + 1 + 2 + 5
    assert len(enumerate_trees(["x", "y"], 3)) == 2 + 4 + 16


def test_explicit_violation_reported():
    mu = MembershipTable({"x": "1/2", "y": "1/3"}, EXPLICIT, {("x", "y"): "1/8"})
    rep = check_obscure_axioms(mu)
    assert not rep.ok
    assert rep.first.law == "m2" and rep.first.inputs == ("x", "y")
    assert any("skipped" in n for n in rep.notes)


@given(st.lists(mus, min_size=1, max_size=4))
def test_min_rule_satisfies_axioms(values):
    syms = [f"g{i}" for i in range(len(values))]
    mu = MembershipTable(dict(zip(syms, values)))
    assert check_obscure_axioms(mu, max_length=3).ok
    assert check_obscure_axioms(mu, max_length=3, kind="tree").ok
