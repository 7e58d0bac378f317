"""
n-ary products over obscure graded sets.

A single application [a1, ..., an] is related to each rearrangement
[a_sigma(1), ..., a_sigma(n)] by a scalar factor.  The membership part of that
factor is mu(a_sigma(n)) / mu(a_n); it only looks at the last slot, which is
what reduces it to mu(a)/mu(b) when n = 2.
"""

from __future__ import annotations

from enum import Enum
import itertools
from typing import Mapping, Sequence

from obscura.errors import ArityError, FlattenError, InvalidPermutationError
from obscura.factor_systems import (
    FactorSystem,
    check_permutation,
    inverse_permutation,
    is_identity,
    nonidentity_permutations,
    perm_name,
    permute,
)
from obscura.membership import MembershipTable
from obscura.monomials import NaryApp
from obscura.report import Report
from obscura.scalar_field import Scalar, scalar

# the ternary rearrangements in the order the literature lists them
TERNARY_ORDER = ((1, 3, 2), (2, 3, 1), (2, 1, 3), (3, 1, 2), (3, 2, 1))


class NaryMode(str, Enum):
    MEMBERSHIP_ONLY = "membership"
    DOUBLE = "double"


def nary_membership_factor(args: Sequence[str], sigma, mu: MembershipTable, order: int = 2) -> Scalar:
    """eps_sigma = mu(a_sigma(n)) / mu(a_n) for sigma != identity."""
    n = len(args)
    sigma = check_permutation(sigma, n)
    if is_identity(sigma):
        raise InvalidPermutationError("the membership factor is defined for non-identity permutations only")
    return scalar(mu.of(args[sigma[-1] - 1]) / mu.of(args[-1]), order)


def _grading_factor(pi: FactorSystem, grades: Sequence, sigma) -> Scalar:
    return pi(*grades) / pi(*permute(grades, sigma))


def nary_swap(
    word: NaryApp,
    sigma,
    mu: MembershipTable,
    mode: NaryMode = NaryMode.MEMBERSHIP_ONLY,
    pi: FactorSystem | None = None,
    grades: Mapping | None = None,
    order: int = 2,
) -> tuple[NaryApp, Scalar]:
    """Return (rearranged word, f) with word = f * rearranged word.

    In DOUBLE mode f is the grading ratio pi(x) / pi(x o sigma) times the
    membership factor.
    """
    if not word.is_flat():
        raise FlattenError("nary_swap acts on a single application; flatten nested words first")
    n = len(word.args)
    sigma = check_permutation(sigma, n)
    if is_identity(sigma):
        return word, scalar(1, order)
    factor = nary_membership_factor(word.args, sigma, mu, order)
    if NaryMode(mode) is NaryMode.DOUBLE:
        if pi is None or grades is None:
            raise ValueError("DOUBLE mode needs a factor system and generator grades")
        if pi.arity != n:
            raise ArityError(f"factor system has arity {pi.arity}, word has {n} arguments")
        factor = factor * _grading_factor(pi, [grades[s] for s in word.args], sigma)
    return NaryApp(permute(word.args, sigma)), factor


def ternary_factor_vector(pi3: FactorSystem, grades) -> tuple[Scalar, ...]:
    """The five ratios pi(g) / pi(g o sigma), sigma in 132, 231, 213, 312, 321."""
    if pi3.arity != 3:
        raise ArityError(f"need a ternary factor system, got arity {pi3.arity}")
    grades = tuple(grades)
    return tuple(_grading_factor(pi3, grades, s) for s in TERNARY_ORDER)


def check_total_commutativity(
    words: Sequence[NaryApp],
    mu: MembershipTable,
    mode: NaryMode = NaryMode.MEMBERSHIP_ONLY,
    pi: FactorSystem | None = None,
    grades: Mapping | None = None,
    order: int = 2,
) -> Report:
    """Every non-identity rearrangement of every word must carry factor 1.

    ``details["failing"]`` lists the permutations that fail on some word and
    ``details["commuting"]`` the ones that are identically 1.
    """
    report = Report(law="aa")
    if not words:
        return report
    n = len(words[0].args)
    failing = []
    for sigma in nonidentity_permutations(n):
        bad = False
        for w in words:
            report.checked += 1
            _, f = nary_swap(w, sigma, mu, mode, pi, grades, order)
            if f != 1:
                report.record((perm_name(sigma), list(w.args)), f, 1)
                bad = True
        if bad:
            failing.append(perm_name(sigma))
    report.details["failing"] = failing
    report.details["commuting"] = [perm_name(s) for s in nonidentity_permutations(n) if perm_name(s) not in failing]
    return report


def flatten_nary(word: NaryApp, associative: bool) -> NaryApp:
    """Flatten nested applications; only sound for associative n-ary products."""
    if word.is_flat():
        return word
    if not associative:
        raise FlattenError("nested n-ary words only flatten when the n-ary cocycle condition holds")
    out = []
    for a in word.args:
        out.extend(flatten_nary(a, True).args if isinstance(a, NaryApp) else [a])
    return NaryApp(tuple(out))


def sorting_permutation(args: Sequence[str], rank: Mapping[str, int]) -> tuple[int, ...]:
    """The sigma with args o sigma sorted by rank (stable)."""
    return tuple(i + 1 for i in sorted(range(len(args)), key=lambda i: (rank[args[i]], i)))


def normalize_nary(
    word: NaryApp,
    rank: Mapping[str, int],
    mu: MembershipTable,
    mode: NaryMode = NaryMode.MEMBERSHIP_ONLY,
    pi: FactorSystem | None = None,
    grades: Mapping | None = None,
    order: int = 2,
) -> tuple[NaryApp, Scalar]:
    """Bring a single application to sorted argument order with its exact factor."""
    sigma = sorting_permutation(word.args, rank)
    return nary_swap(word, sigma, mu, mode, pi, grades, order)


def check_pair_law(args: Sequence[str], mu: MembershipTable, **kw) -> Report:
    """Swapping by sigma and then back by its inverse multiplies to 1."""
    report = Report(law="ee1")
    word = NaryApp(tuple(args))
    for sigma in nonidentity_permutations(len(args)):
        report.checked += 1
        moved, f = nary_swap(word, sigma, mu, **kw)
        back, g = nary_swap(moved, inverse_permutation(sigma), mu, **kw)
        if back != word or f * g != 1:
            report.record((perm_name(sigma), list(args)), f * g, 1)
    return report


def all_words(symbols: Sequence[str], n: int) -> list[NaryApp]:
    return [NaryApp(t) for t in itertools.product(symbols, repeat=n)]
