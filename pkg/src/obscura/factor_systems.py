"""
Binary and n-ary factor systems over a finite grading group.

Tables are stored extensionally (one entry per grade tuple), so every law
below is a finite loop.  Loops run over tuples in lexicographic order, which
makes the first recorded witness the lexicographically least violation.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Callable, Mapping, Sequence

from obscura.errors import ArityError, InvalidLambdaError, InvalidPermutationError, SizeLimitError
from obscura.grading import DEFAULT_MAX_GROUP_SIZE, Grade, GradingGroup, GroupAutomorphism, format_grade
from obscura.membership import MembershipTable
from obscura.report import FAIL, NOT_FOUND, PASS, Report
from obscura.scalar_field import Scalar, scalar

DEFAULT_BUDGET = 100_000


# -- permutations ---------------------------------------------------------------

def permutations(n: int) -> list[tuple[int, ...]]:
    """All permutations of 1..n in one-line notation, lexicographic."""
    return list(itertools.permutations(range(1, n + 1)))


def nonidentity_permutations(n: int) -> list[tuple[int, ...]]:
    return permutations(n)[1:]


def check_permutation(sigma, n: int | None = None) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise InvalidPermutationError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    if n is not None and len(sigma) != n:
        raise InvalidPermutationError(f"{sigma} does not act on {n} slots")
    return sigma


def permute(args: Sequence, sigma: Sequence[int]) -> tuple:
    """The rearrangement (args[sigma(1)], ..., args[sigma(n)])."""
    return tuple(args[s - 1] for s in sigma)


def inverse_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def perm_name(sigma: Sequence[int]) -> str:
    return "".join(str(s) for s in sigma)


def is_identity(sigma: Sequence[int]) -> bool:
    return tuple(sigma) == tuple(range(1, len(sigma) + 1))


# -- factor systems -------------------------------------------------------------

class FactorSystem:
    """A total map G^n -> k^x (n = ``arity``)."""

    def __init__(self, group: GradingGroup, arity: int, table: Mapping, order: int = 2):
        if arity < 2:
            raise ArityError(f"factor systems need arity >= 2, got {arity}")
        self.group = group
        self.arity = arity
        self.order = order
        elements = group.elements(max_size=max(group.size, DEFAULT_MAX_GROUP_SIZE))
        self.table: dict[tuple[Grade, ...], Scalar] = {}
        for key in itertools.product(elements, repeat=arity):
            if key not in table:
                raise KeyError(f"factor table has no entry for {', '.join(map(format_grade, key))}")
            value = scalar(table[key], order)
            if value.is_zero():
                raise ValueError(f"factor value at {key} is zero; factors live in k^x")
            self.table[key] = value

    @classmethod
    def from_function(cls, group, arity, fn: Callable, order: int = 2) -> "FactorSystem":
        keys = itertools.product(group.elements(max_size=group.size), repeat=arity)
        return cls(group, arity, {k: fn(*k) for k in keys}, order)

    @classmethod
    def trivial(cls, group, arity: int = 2, order: int = 2) -> "FactorSystem":
        return cls.from_function(group, arity, lambda *_: 1, order)

    @classmethod
    def coboundary(cls, group, lam: Mapping, arity: int = 2, order: int = 2) -> "FactorSystem":
        """lam(x1)...lam(xn) / lam(x1 + ... + xn)."""
        return factor_equivalence_transform(cls.trivial(group, arity, order), lam)

    def __call__(self, *grades: Grade) -> Scalar:
        return self.table[tuple(grades)]

    def keys(self):
        return self.table.keys()

    def __eq__(self, other):
        if not isinstance(other, FactorSystem):
            return NotImplemented
        return (self.group, self.arity, self.order) == (other.group, other.arity, other.order) and (
            self.table == other.table
        )

    def with_entry(self, key, value) -> "FactorSystem":
        table = dict(self.table)
        table[tuple(key)] = value
        return FactorSystem(self.group, self.arity, table, self.order)

    def __repr__(self):
        return f"FactorSystem({self.group}, arity={self.arity})"


class CommutationFactor:
    """A binary commutation factor table G x G -> k^x.

    With ``validate=True`` (a direct commutation factor such as the sign
    rule) the constructor insists on (e1)-(e3).  Ratio tables derived from a
    factor system, and the non-cocycle grading factors of double algebras,
    are built with ``validate=False``.
    """

    def __init__(self, group: GradingGroup, table: Mapping, order: int = 2, validate: bool = True):
        self.group = group
        self.order = order
        elements = group.elements(max_size=max(group.size, DEFAULT_MAX_GROUP_SIZE))
        self.table: dict[tuple[Grade, Grade], Scalar] = {}
        for key in itertools.product(elements, repeat=2):
            if key not in table:
                raise KeyError(f"commutation table has no entry for {format_grade(key[0])}, {format_grade(key[1])}")
            value = scalar(table[key], order)
            if value.is_zero():
                raise ValueError(f"commutation factor at {key} is zero")
            self.table[key] = value
        if validate:
            report = check_epsilon_axioms(self)
            if not report.ok:
                raise ValueError(f"not a commutation factor: {report}")

    @classmethod
    def from_function(cls, group, fn, order: int = 2, validate: bool = True) -> "CommutationFactor":
        keys = itertools.product(group.elements(max_size=group.size), repeat=2)
        return cls(group, {k: fn(*k) for k in keys}, order, validate)

    @classmethod
    def trivial(cls, group, order: int = 2) -> "CommutationFactor":
        return cls.from_function(group, lambda g, h: 1, order)

    @classmethod
    def sign_rule(cls, group, order: int = 2) -> "CommutationFactor":
        from obscura.grading import sign_rule_epsilon

        return cls.from_function(group, lambda g, h: sign_rule_epsilon(group, g, h, order), order)

    def __call__(self, g: Grade, h: Grade) -> Scalar:
        return self.table[(tuple(g), tuple(h))]

    def __eq__(self, other):
        if not isinstance(other, CommutationFactor):
            return NotImplemented
        return self.group == other.group and self.table == other.table


# -- binary checks -----------------------------------------------------------------

def check_cocycle_binary(pi: FactorSystem, max_size: int = DEFAULT_MAX_GROUP_SIZE) -> Report:
    """pi(a, b+c) pi(b, c) == pi(a, b) pi(a+b, c) for all triples."""
    if pi.arity != 2:
        raise ArityError(f"binary cocycle check on an arity-{pi.arity} system")
    G = pi.group
    els = G.elements(max_size=max_size)
    report = Report(law="sa")
    for a, b, c in itertools.product(els, repeat=3):
        report.checked += 1
        lhs = pi(a, G.add(b, c)) * pi(b, c)
        rhs = pi(a, b) * pi(G.add(a, b), c)
        if lhs != rhs:
            report.record(tuple(map(format_grade, (a, b, c))), lhs, rhs)
    return report


def epsilon_from_pi(pi: FactorSystem) -> CommutationFactor:
    """eps(a, b) = pi(a, b) / pi(b, a)."""
    if pi.arity != 2:
        raise ArityError("epsilon_from_pi needs a binary factor system")
    table = {(a, b): pi(a, b) / pi(b, a) for (a, b) in pi.keys()}
    return CommutationFactor(pi.group, table, pi.order, validate=False)


def check_epsilon_axioms(eps: CommutationFactor, max_size: int = DEFAULT_MAX_GROUP_SIZE) -> Report:
    """(e1) eps(a,b) eps(b,a) = 1, (e2)/(e3) multiplicativity in each slot."""
    G = eps.group
    els = G.elements(max_size=max_size)
    report = Report(law="e1-e3")
    for a, b in itertools.product(els, repeat=2):
        report.checked += 1
        lhs = eps(a, b) * eps(b, a)
        if lhs != 1:
            report.record(tuple(map(format_grade, (a, b))), lhs, 1, law="e1")
    for a, b, c in itertools.product(els, repeat=3):
        report.checked += 2
        lhs, rhs = eps(a, G.add(b, c)), eps(a, b) * eps(a, c)
        if lhs != rhs:
            report.record(tuple(map(format_grade, (a, b, c))), lhs, rhs, law="e2")
        lhs, rhs = eps(G.add(a, b), c), eps(a, c) * eps(b, c)
        if lhs != rhs:
            report.record(tuple(map(format_grade, (a, b, c))), lhs, rhs, law="e3")
    zero = G.zero
    report.details["eps(a,0)=eps(0,a)=1"] = all(eps(a, zero) == 1 and eps(zero, a) == 1 for a in els)
    report.details["eps(a,a)^2=1"] = all(eps(a, a) * eps(a, a) == 1 for a in els)
    return report


def factor_equivalence_transform(pi: FactorSystem, lam: Mapping) -> FactorSystem:
    """pi~(x1..xn) = lam(x1)...lam(xn) / lam(x1+...+xn) * pi(x1..xn)."""
    G = pi.group
    lam = {tuple(g): scalar(v, pi.order) for g, v in lam.items()}
    for g in G.elements(max_size=G.size):
        if g not in lam:
            raise InvalidLambdaError(f"lambda is not defined at {format_grade(g)}")
        if lam[g].is_zero():
            raise InvalidLambdaError(f"lambda vanishes at {format_grade(g)}")
    table = {}
    for key, value in pi.table.items():
        num = lam[key[0]]
        for g in key[1:]:
            num = num * lam[g]
        table[key] = num / lam[G.sum(key)] * value
    return FactorSystem(G, pi.arity, table, pi.order)


def find_equivalence(pi_a: FactorSystem, pi_b: FactorSystem, value_pool: Sequence, budget: int = 10**6) -> Report:
    """Search lambda over a finite pool with transform(pi_a, lambda) == pi_b.

    lambda(0) is forced by the (0,...,0) entries (it is 1 for normalised
    systems).  NOT_FOUND is only conclusive when the commutation data of the
    two systems differ, since equivalence preserves it.
    """
    report = Report(law="equivalence")
    G = pi_a.group
    if (pi_a.group, pi_a.arity) != (pi_b.group, pi_b.arity):
        raise ArityError("systems must share group and arity")
    if commutation_vector_from_pi(pi_a).components != commutation_vector_from_pi(pi_b).components:
        report.status = NOT_FOUND
        report.details["conclusive"] = True
        report.notes.append("commutation factors differ, so the systems are not equivalent")
        return report

    zero = G.zero
    zkey = (zero,) * pi_a.arity
    lam0 = pi_b(*zkey) / pi_a(*zkey)
    others = [g for g in G.elements(max_size=G.size) if g != zero]
    pool = []
    for v in value_pool:
        v = scalar(v, pi_a.order)
        if not v.is_zero() and v not in pool:
            pool.append(v)
    if len(pool) ** len(others) > budget:
        raise SizeLimitError(f"{len(pool)}^{len(others)} candidate lambdas exceed the budget {budget}")

    for values in itertools.product(pool, repeat=len(others)):
        report.checked += 1
        lam = {zero: lam0, **dict(zip(others, values))}
        if factor_equivalence_transform(pi_a, lam) == pi_b:
            report.status = PASS
            report.details["lambda"] = {format_grade(g): lam[g] for g in sorted(lam)}
            return report
    report.status = NOT_FOUND
    report.details["conclusive"] = False
    report.notes.append("no lambda found over the given value pool; this is not a proof of inequivalence")
    return report


# -- n-ary checks ------------------------------------------------------------------

def check_cocycle_nary(pi: FactorSystem, budget: int = DEFAULT_BUDGET) -> Report:
    """The n-1 equalities of the n-ary cocycle condition on every (2n-1)-tuple.

    Expression i (1-based) is pi(x_i..x_{i+n-1}) times pi of the outer
    product with that block collapsed to its sum; equality j compares
    expressions j and j+1.
    """
    G, n = pi.group, pi.arity
    report = Report(law="pa")
    for xs in G.tuples(2 * n - 1, budget):
        report.checked += 1
        exprs = []
        for i in range(n):
            block = xs[i : i + n]
            outer = xs[:i] + (G.sum(block),) + xs[i + n :]
            exprs.append(pi(*block) * pi(*outer))
        for j in range(n - 1):
            if exprs[j] != exprs[j + 1]:
                report.record(tuple(map(format_grade, xs)), exprs[j], exprs[j + 1], law=f"pa[{j + 1}]")
                break
    return report


@dataclass
class CommutationFactorVector:
    """The n!-1 ratios eps_sigma(x) = pi(x) / pi(x o sigma), sigma != id."""

    arity: int
    group: GradingGroup
    components: dict  # sigma -> {grade tuple -> Scalar}

    def __call__(self, sigma, *grades) -> Scalar:
        return self.components[tuple(sigma)][tuple(grades)]

    def names(self) -> list[str]:
        return [perm_name(s) for s in self.components]

    def check_normalization(self) -> Report:
        """eps_sigma(x) * eps_{sigma^-1}(x o sigma) = 1 and eps_sigma(x,..,x) = 1."""
        report = Report(law="ee1")
        for sigma, comp in self.components.items():
            inv = inverse_permutation(sigma)
            for xs, value in comp.items():
                report.checked += 1
                back = self.components[inv][permute(xs, sigma)]
                if value * back != 1:
                    report.record((perm_name(sigma), tuple(map(format_grade, xs))), value * back, 1)
            for g in self.group.elements(max_size=self.group.size):
                report.checked += 1
                if comp[(g,) * self.arity] != 1:
                    report.record((perm_name(sigma), format_grade(g)), comp[(g,) * self.arity], 1)
        return report


def commutation_vector_from_pi(pi: FactorSystem) -> CommutationFactorVector:
    components = {}
    for sigma in nonidentity_permutations(pi.arity):
        components[sigma] = {xs: v / pi(*permute(xs, sigma)) for xs, v in pi.table.items()}
    return CommutationFactorVector(pi.arity, pi.group, components)


def pullback(pi: FactorSystem, phis: Sequence[GroupAutomorphism]) -> FactorSystem:
    """pi*(a1..an) = pi(phi_1(a1), ..., phi_n(an)); one phi means phi_i = phi."""
    phis = list(phis)
    if len(phis) == 1:
        phis = phis * pi.arity
    if len(phis) != pi.arity:
        raise ArityError(f"need 1 or {pi.arity} automorphisms, got {len(phis)}")
    table = {xs: pi(*(phi(x) for phi, x in zip(phis, xs))) for xs in pi.keys()}
    return FactorSystem(pi.group, pi.arity, table, pi.order)


TOTALLY_SYMMETRIC = "TOTALLY_SYMMETRIC"
PARTIAL = "PARTIAL"
GENERIC = "GENERIC"


@dataclass(frozen=True)
class SymmetryClass:
    kind: str
    m: int
    sigmas: tuple  # permutations whose component is identically 1

    def __str__(self):
        if self.kind == PARTIAL:
            return f"{self.m}-PARTIAL({', '.join(perm_name(s) for s in self.sigmas)})"
        return self.kind


def classify_symmetry(vec: CommutationFactorVector) -> SymmetryClass:
    trivial = tuple(s for s, comp in vec.components.items() if all(v == 1 for v in comp.values()))
    m = len(trivial)
    if m == len(vec.components):
        return SymmetryClass(TOTALLY_SYMMETRIC, m, trivial)
    if m == 0:
        return SymmetryClass(GENERIC, 0, ())
    return SymmetryClass(PARTIAL, m, trivial)


def quotient_factor(pi1: FactorSystem, pi2: FactorSystem) -> FactorSystem:
    if (pi1.group, pi1.arity) != (pi2.group, pi2.arity):
        raise ArityError("quotient needs systems with the same group and arity")
    table = {xs: pi1(*xs) / pi2(*xs) for xs in pi1.keys()}
    return FactorSystem(pi1.group, pi1.arity, table, pi1.order)


# -- membership deformed conditions -------------------------------------------------

def check_deformed_cocycle(
    eps_pm: CommutationFactor,
    mu: MembershipTable,
    grades: Mapping[str, Grade],
    generators: Sequence[str] | None = None,
) -> Report:
    """The membership deformed cocycle-like conditions (em1)-(em3).

    ``grades`` maps each generator symbol to its grade; ``mu`` resolves
    generator memberships and the membership of two-letter products b.c.
    Only generator triples are checked.
    """
    G = eps_pm.group
    syms = list(generators) if generators is not None else list(grades)

    def e_mu(a, b):
        return mu.of(a) / mu.of(b)

    report = Report(law="em1-em3")
    report.notes.append("checked on generator triples only; mu of compound arguments comes from the compound rule")
    for a, b in itertools.product(syms, repeat=2):
        report.checked += 1
        ga, gb = grades[a], grades[b]
        lhs = eps_pm(ga, gb) * eps_pm(gb, ga)
        rhs = 1 / (e_mu(a, b) * e_mu(b, a))
        if lhs != rhs:
            report.record((a, b), lhs, rhs, law="em1")
    for a, b, c in itertools.product(syms, repeat=3):
        ga, gb, gc = grades[a], grades[b], grades[c]
        report.checked += 2
        lhs = eps_pm(ga, G.add(gb, gc))
        rhs = eps_pm(ga, gb) * eps_pm(ga, gc) * (e_mu(a, b) * e_mu(a, c) / (mu.of(a) / mu.of((b, c))))
        if lhs != rhs:
            report.record((a, b, c), lhs, rhs, law="em2")
        lhs = eps_pm(G.add(ga, gb), gc)
        rhs = eps_pm(ga, gc) * eps_pm(gb, gc) * (e_mu(a, c) * e_mu(b, c) / (mu.of((a, b)) / mu.of(c)))
        if lhs != rhs:
            report.record((a, b, c), lhs, rhs, law="em3")
    return report


def check_deformed_schur(
    pi_mu: FactorSystem,
    mu: MembershipTable,
    grades: Mapping[str, Grade],
    generators: Sequence[str] | None = None,
) -> Report:
    """pi_mu(a', b'+c') pi_mu(b', c') = pi_mu(a', b') pi_mu(a'+b', c') mu(a.b) / mu(b)."""
    G = pi_mu.group
    syms = list(generators) if generators is not None else list(grades)
    report = Report(law="pm-sa")
    for a, b, c in itertools.product(syms, repeat=3):
        ga, gb, gc = grades[a], grades[b], grades[c]
        report.checked += 1
        lhs = pi_mu(ga, G.add(gb, gc)) * pi_mu(gb, gc)
        rhs = pi_mu(ga, gb) * pi_mu(G.add(ga, gb), gc) * (mu.of((a, b)) / mu.of(b))
        if lhs != rhs:
            report.record((a, b, c), lhs, rhs)
    return report
