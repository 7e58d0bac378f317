import itertools

import pytest
from hypothesis import given, strategies as st

from obscura.errors import InvalidGradeError, SizeLimitError, UnsupportedGroupError
from obscura.grading import GradingGroup, GroupAutomorphism, enumerate_automorphisms, format_grade, sign_rule_epsilon

groups = st.sampled_from([(2,), (3,), (4,), (2, 2), (2, 3), (6,), (2, 2, 2)]).map(GradingGroup)


def test_elements_are_lexicographic():
    G = GradingGroup((2, 3))
    assert G.elements() == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert G.size == 6 and G.zero == (0, 0)


def test_grade_reduction_and_checks():
    G = GradingGroup((2, 4))
    assert G.grade((3, -1)) == (1, 3)
    with pytest.raises(InvalidGradeError):
        G.check((2, 0))
    with pytest.raises(InvalidGradeError):
        G.grade((1,))
    with pytest.raises(InvalidGradeError):
        GradingGroup(())


def test_size_limit():
    with pytest.raises(SizeLimitError):
        GradingGroup((7, 7)).elements(max_size=10)
    with pytest.raises(SizeLimitError):
        list(GradingGroup((3,)).tuples(5, budget=100))


def test_sign_rule():
    G = GradingGroup((2, 2))
    assert sign_rule_epsilon(G, (1, 1), (1, 0)) == -1
    assert sign_rule_epsilon(G, (1, 1), (1, 1)) == 1
    with pytest.raises(UnsupportedGroupError):
        sign_rule_epsilon(GradingGroup((3,)), (1,), (1,))


@pytest.mark.parametrize("orders, count", [((2,), 1), ((3,), 2), ((4,), 2), ((2, 2), 6), ((2, 4), 8), ((2, 2, 2), 168)])
def test_automorphism_counts(orders, count):
    autos = enumerate_automorphisms(GradingGroup(orders))
    assert len(autos) == count
    assert sum(phi.is_identity() for phi in autos) == 1


def test_bad_automorphism():
    G = GradingGroup((2, 2))
    with pytest.raises(InvalidGradeError):
        GroupAutomorphism(G, ((1, 0), (1, 0)))


@given(groups, st.data())
def test_group_laws(G, data):
    el = st.sampled_from(G.elements())
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert G.add(a, G.add(b, c)) == G.add(G.add(a, b), c)
    assert G.add(a, b) == G.add(b, a)
    assert G.add(a, G.neg(a)) == G.zero
    assert format_grade(a).startswith("(")


@given(st.sampled_from([(2, 2), (4,), (2, 4)]).map(GradingGroup))
def test_automorphisms_are_additive_bijections(G):
    for phi in enumerate_automorphisms(G):
        assert sorted(phi(g) for g in G.elements()) == G.elements()
        for g, h in itertools.product(G.elements(), repeat=2):
            assert phi(G.add(g, h)) == G.add(phi(g), phi(h))
