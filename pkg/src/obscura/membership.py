"""
Obscure (fuzzy) sets: membership values, lattice operations, joint
membership of graded elements, and the obscure-algebra inequalities.

Membership values are exact rationals in (0, 1].  The zero element of an
algebra always has full membership; it is spelled ``ZERO`` here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
from types import MappingProxyType
from typing import Iterable, Mapping

from obscura.errors import InvalidMembershipError, UndefinedMembershipError
from obscura.monomials import NaryApp, Node, format_monomial, leaves
from obscura.report import Report

MIN_RULE = "min"
EXPLICIT = "explicit"
ZERO = "0"


def as_membership(value) -> Fraction:
    """Validate and convert to a membership value in (0, 1]."""
    try:
        mu = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidMembershipError(f"not a rational membership value: {value!r}") from exc
    if mu <= 0:
        raise InvalidMembershipError(f"membership must be positive, got {mu}")
    if mu > 1:
        raise InvalidMembershipError(f"membership must be at most 1, got {mu}")
    return mu


def mu_union(x, y) -> Fraction:
    return max(as_membership(x), as_membership(y))


def mu_intersect(x, y) -> Fraction:
    return min(as_membership(x), as_membership(y))


def mu_includes(x, y) -> bool:
    return as_membership(x) <= as_membership(y)


def mu_negate(x) -> Fraction:
    # may be 0, which is a rational but not a membership value
    return 1 - as_membership(x)


@dataclass(frozen=True, eq=False)
class MembershipTable:
    """Membership of generators plus a rule for compound monomials.

    ``compound`` is either MIN_RULE (a product gets the minimum over its
    factors) or EXPLICIT (products are looked up in ``explicit``).
    """

    generator_mu: Mapping[str, Fraction]
    compound: str = MIN_RULE
    explicit: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.compound not in (MIN_RULE, EXPLICIT):
            raise InvalidMembershipError(f"unknown compound rule {self.compound!r}")
        gens = {str(k): as_membership(v) for k, v in self.generator_mu.items()}
        table = {k: as_membership(v) for k, v in self.explicit.items()}
        object.__setattr__(self, "generator_mu", MappingProxyType(gens))
        object.__setattr__(self, "explicit", MappingProxyType(table))

    @property
    def symbols(self) -> list[str]:
        return list(self.generator_mu)

    def of(self, m) -> Fraction:
        """Membership of a monomial (generator, word, tree or n-ary application)."""
        if isinstance(m, str):
            if m == ZERO:
                return Fraction(1)
            try:
                return self.generator_mu[m]
            except KeyError:
                raise UndefinedMembershipError(f"no membership for generator {m!r}") from None
        if isinstance(m, tuple):
            if not m:
                return Fraction(1)  # the unit e
            if len(m) == 1:
                return self.of(m[0])
        if not isinstance(m, (tuple, Node, NaryApp)):
            raise TypeError(f"not a monomial: {m!r}")
        if self.compound == MIN_RULE:
            return min(self.of(s) for s in leaves(m))
        if m in self.explicit:
            return self.explicit[m]
        raise UndefinedMembershipError(
            f"explicit membership table has no entry for {format_monomial(m)}"
        )

    def is_constant(self) -> bool:
        return len(set(self.generator_mu.values())) <= 1


def joint_membership(tables: Mapping, components: Mapping) -> Fraction:
    """Membership of a = sum_g a_(g): the maximum of mu_g(a_(g)) over present components.

    ``tables`` maps grade -> MembershipTable (or any object with ``of``),
    ``components`` maps grade -> homogeneous monomial.
    """
    if not components:
        raise UndefinedMembershipError("element has no homogeneous components")
    values = []
    for g, comp in components.items():
        if g not in tables:
            raise UndefinedMembershipError(f"no membership table for grade {g}")
        values.append(tables[g].of(comp))
    return max(values)


def _support(table) -> dict:
    if isinstance(table, MembershipTable):
        return dict(table.generator_mu)
    return {k: as_membership(v) for k, v in table.items() if k != ZERO}


def check_direct_sum(mu_g, mu_h) -> tuple[bool, str | None]:
    """Whether min(mu_g, mu_h) is the obscure unity eta.

    Both tables are extended by 0 off their support; the zero element has
    membership 1 in every table, so only nonzero symbols can break eta.
    Returns (ok, first offending symbol).
    """
    a, b = _support(mu_g), _support(mu_h)
    for sym in sorted(set(a) | set(b)):
        if min(a.get(sym, Fraction(0)), b.get(sym, Fraction(0))) != 0:
            return False, sym
    return True, None


def enumerate_words(symbols: list[str], max_length: int) -> list[tuple]:
    out = []
    for n in range(1, max_length + 1):
        out.extend(itertools.product(symbols, repeat=n))
    return out


def enumerate_trees(symbols: list[str], max_leaves: int) -> list:
    by_size: dict[int, list] = {1: list(symbols)}
    for n in range(2, max_leaves + 1):
        trees = []
        for k in range(1, n):
            for left in by_size[k]:
                for right in by_size[n - k]:
                    trees.append(Node(left, right))
        by_size[n] = trees
    return [t for n in range(1, max_leaves + 1) for t in by_size[n]]


def _splits(m):
    if isinstance(m, Node):
        yield m.left, m.right
    elif isinstance(m, tuple):
        for i in range(1, len(m)):
            yield m[:i], m[i:]


def check_obscure_axioms(
    table: MembershipTable,
    generators: Iterable[str] | None = None,
    max_length: int = 2,
    kind: str = "word",
    grade_of=None,
) -> Report:
    """Check mu(a+b) >= mu(a)^mu(b), mu(ab) >= mu(a)^mu(b), mu(ka) >= mu(a).

    Products are checked on every monomial up to ``max_length`` factors (words,
    or product trees when ``kind="tree"``), for every way of splitting it into
    two factors.  Sums are reported under two readings: the min rule, and the
    joint (max over grades) rule when grade information is supplied.
    """
    if max_length < 2:
        raise ValueError("max_length must be at least 2")
    symbols = list(generators) if generators is not None else table.symbols
    monomials = (
        enumerate_trees(symbols, max_length) if kind == "tree" else enumerate_words(symbols, max_length)
    )
    report = Report(law="m1-m3")
    unresolved = 0

    def mu(m):
        try:
            return table.of(m)
        except UndefinedMembershipError:
            return None

    # (m2) products
    for m in monomials:
        for u, v in _splits(m):
            mw, mu_u, mu_v = mu(m), mu(u), mu(v)
            if None in (mw, mu_u, mu_v):
                unresolved += 1
                continue
            report.checked += 1
            bound = min(mu_u, mu_v)
            if mw < bound:
                report.record(
                    (format_monomial(u), format_monomial(v)),
                    lhs=f"mu({format_monomial(m)}) = {mw}",
                    rhs=f"min = {bound}",
                    law="m2",
                )

    # (m1) sums, both readings
    resolved = [m for m in monomials if mu(m) is not None]
    joint_strict = 0
    for u, v in itertools.product(resolved, repeat=2):
        report.checked += 1
        bound = min(mu(u), mu(v))
        by_min = bound
        if grade_of is not None and grade_of(u) != grade_of(v):
            by_joint = max(mu(u), mu(v))
            joint_strict += by_joint > bound
        else:
            by_joint = by_min
        if by_min < bound or by_joint < bound:
            report.record((format_monomial(u), format_monomial(v)), lhs=by_joint, rhs=bound, law="m1")

    # (m3) scalar multiples: membership ignores coefficients
    report.checked += len(resolved)

    report.details["m1_min_rule"] = "mu(a+b) = mu(a) ^ mu(b), equality"
    report.details["m1_joint_rule"] = (
        f"mu(a+b) = max over grades; strict inequality on {joint_strict} pairs"
        if grade_of is not None
        else "not evaluated (no grade information)"
    )
    report.details["m3"] = "mu(k a) = mu(a) structurally"
    if unresolved:
        report.notes.append(f"{unresolved} product splits skipped: membership not defined by the table")
    return report

