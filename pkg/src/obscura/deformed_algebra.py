"""
Elements, products and rewriting for the membership deformed algebras.

Four modes share one :class:`Element` type (a finite map monomial ->
coefficient):

* ``star``   nonassociative product a*b = (mu(a)/mu(b)) b*a on product trees
* ``graded`` associative eps-commutative product on flat words
* ``double`` associative product whose reorder factor is eps_pm * eps_mu
* ``weyl``   the two-generator deformed Weyl algebra with unit e

The star mode only offers local moves (swap, one-step distribution); no
global normal form is attempted because the product is not associative.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import itertools
import os
from typing import Iterable, Mapping, Sequence

from obscura.errors import HomogeneityError, InvalidWordError, RefusedError, UndefinedMembershipError
from obscura.grading import Grade, GradingGroup
from obscura.membership import MIN_RULE, MembershipTable
from obscura.monomials import NaryApp, Node, format_monomial, leaves
from obscura.report import FAIL, PASS, Report, Witness
from obscura.scalar_field import Scalar, scalar


class Mode(str, Enum):
    NONASSOC_STAR = "star"
    ASSOC_GRADED = "graded"
    ASSOC_DOUBLE = "double"
    WEYL = "weyl"
    NARY = "nary"


OPERATORS = {
    Mode.NONASSOC_STAR: "*",
    Mode.ASSOC_GRADED: ".",
    Mode.ASSOC_DOUBLE: "**",
    Mode.WEYL: "o",
    Mode.NARY: ",",
}


@dataclass(frozen=True)
class Generator:
    symbol: str
    grade: Grade
    mu: Fraction


def _coerce_coeff(value, order: int) -> Scalar:
    return value if isinstance(value, Scalar) else scalar(value, order)


def _term_key(m):
    return (len(leaves(m)), format_monomial(m))


class Element:
    """A finite linear combination of monomials with exact coefficients.

    Zero coefficients are never stored.  Elements are treated as immutable.
    """

    __slots__ = ("terms", "order", "mode")

    def __init__(self, terms: Mapping | Iterable = (), order: int = 2, mode: Mode | None = None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            c = _coerce_coeff(c, order)
            acc[m] = acc[m] + c if m in acc else c
        self.terms = {m: c for m, c in acc.items() if not c.is_zero()}
        self.order = order
        self.mode = mode

    @classmethod
    def monomial(cls, m, coeff=1, order: int = 2, mode: Mode | None = None) -> "Element":
        return cls({m: coeff}, order, mode)

    @classmethod
    def zero(cls, order: int = 2, mode: Mode | None = None) -> "Element":
        return cls({}, order, mode)

    def _like(self, terms) -> "Element":
        return Element(terms, self.order, self.mode)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: _term_key(kv[0])))

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m) -> Scalar:
        return self.terms.get(m, scalar(0, self.order))

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self._like(itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "Element":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "Element":
        k = _coerce_coeff(k, self.order)
        return self._like({m: k * c for m, c in self.terms.items()})

    def __rmul__(self, k):
        if isinstance(k, (int, Fraction, Scalar)):
            return self.scale(k)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, op: str | None = None) -> str:
        if op is None:
            op = OPERATORS.get(self.mode, ".")
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            text = format_monomial(m, op)
            parts.append(text if c == 1 else f"{c} * {text}")
        return " + ".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Element({self.format()!r})"


def monomial_grade(m, grades: Mapping[str, Grade], group: GradingGroup) -> Grade:
    """Grade of a monomial: the sum of its generator grades."""
    return group.sum([grades[s] for s in leaves(m)])


def element_grade(elem: Element, grades: Mapping[str, Grade], group: GradingGroup) -> Grade:
    """Grade of a homogeneous element; raises if its terms disagree."""
    found = {monomial_grade(m, grades, group) for m in elem.terms}
    if len(found) != 1:
        raise HomogeneityError(f"{elem} is not homogeneous (grades {sorted(found)})")
    return found.pop()


# -- membership factor and the star product -------------------------------------------

def membership_factor(a, b, mu: MembershipTable, order: int = 2) -> Scalar:
    """eps_mu(a, b) = mu(a) / mu(b)."""
    return scalar(mu.of(a) / mu.of(b), order)


def star_swap(node: Node, mu: MembershipTable, order: int = 2) -> tuple[Node, Scalar]:
    """a*b = eps_mu(a, b) b*a: returns (b*a, eps_mu(a, b))."""
    if not isinstance(node, Node):
        raise TypeError(f"star_swap needs a product node, got {node!r}")
    return Node(node.right, node.left), membership_factor(node.left, node.right, mu, order)


def sum_membership(elem: Element, mu: MembershipTable) -> Fraction:
    """Membership of a sum of monomials: the minimum over its terms.

    This is the smallest value the obscure-algebra inequality on sums allows,
    and it is what the min rule gives for a sum of generators.
    """
    if elem.is_zero():
        return Fraction(1)
    return min(mu.of(m) for m in elem.terms)


def star_left_distribute(a: Element, b_plus_c: Element, mu: MembershipTable) -> Element:
    """a*(b+c) = (mu(b)/mu(b+c)) a*b + (mu(c)/mu(b+c)) a*c, linear in a."""
    total = sum_membership(b_plus_c, mu)
    terms = []
    for u, cu in a.terms.items():
        for v, cv in b_plus_c.terms.items():
            terms.append((Node(u, v), cu * cv * scalar(mu.of(v) / total, a.order)))
    return Element(terms, a.order, Mode.NONASSOC_STAR)


def star_right_distribute(b_plus_c: Element, a: Element) -> Element:
    """(b+c)*a = b*a + c*a with unit coefficients (a must be a monomial)."""
    if len(a.terms) != 1:
        raise ValueError("right distribution expects a single-term right factor")
    (v, cv), = a.terms.items()
    return Element([(Node(u, v), cu * cv) for u, cu in b_plus_c.terms.items()], a.order, Mode.NONASSOC_STAR)


def star_product(a: Element, b: Element, mu: MembershipTable) -> Element:
    """The star product of two elements, distributing over both sides."""
    return star_left_distribute(a, b, mu)


def _tree_key(t, rank: Mapping[str, int]):
    return (len(leaves(t)), tuple(rank[s] for s in leaves(t)), format_monomial(t))


def _sort_tree(t, rank, mu: MembershipTable, order: int):
    if isinstance(t, str):
        return t, scalar(1, order)
    left, cl = _sort_tree(t.left, rank, mu, order)
    right, cr = _sort_tree(t.right, rank, mu, order)
    coeff = cl * cr
    node = Node(left, right)
    if _tree_key(left, rank) > _tree_key(right, rank):
        node, f = star_swap(node, mu, order)
        coeff = coeff * f
    return node, coeff


def star_sort(elem: Element, rank: Mapping[str, int], mu: MembershipTable) -> Element:
    """Order the two factors of every product node by star swaps only.

    Bracketing is never changed, so this is a canonical form for the swap
    relation alone and not a normal form of the nonassociative algebra.
    """
    terms = []
    for m, c in elem.terms.items():
        t, f = _sort_tree(m, rank, mu, elem.order)
        terms.append((t, c * f))
    return Element(terms, elem.order, Mode.NONASSOC_STAR)


def nonassociativity_report(mu: MembershipTable, generators: Sequence[str] | None = None) -> Report:
    """Evaluate both necessary associativity conditions on every generator triple.

    (a*b)*c = a*(b*c) would force mu(a) = mu(b) mu(c) / mu(b*c) and
    mu(b)^2 = mu(a*b) mu(b*c).  Triples run lexicographically in declaration
    order, repeated generators included.
    """
    syms = list(generators) if generators is not None else mu.symbols
    if len(syms) < 2:
        raise ValueError("need at least two generators")
    report = Report(law="assertion", max_witnesses=2 * len(syms) ** 3)
    for a, b, c in itertools.product(syms, repeat=3):
        report.checked += 1
        mb, mc, mbc, mab = mu.of(b), mu.of(c), mu.of(Node(b, c)), mu.of(Node(a, b))
        lhs, rhs = mu.of(a), mb * mc / mbc
        if lhs != rhs:
            report.record((a, b, c), lhs, rhs, law="cond1")
        lhs, rhs = mb * mb, mab * mbc
        if lhs != rhs:
            report.record((a, b, c), lhs, rhs, law="cond2")
    return report


def nonassociativity_witness(mu: MembershipTable, generators: Sequence[str] | None = None) -> Witness | None:
    """The first violating triple, or None when both conditions always hold."""
    return nonassociativity_report(mu, generators).first


# -- associative modes ---------------------------------------------------------------

def _bubble(word: tuple, rank: Mapping[str, int], factor, left_to_right: bool = True):
    """Sort a word by adjacent transpositions; returns (sorted word, accumulated factor)."""
    w = list(word)
    coeff = None
    n = len(w)
    changed = True
    while changed:
        changed = False
        positions = range(n - 1) if left_to_right else range(n - 2, -1, -1)
        for i in positions:
            u, v = w[i], w[i + 1]
            if rank[u] > rank[v]:
                f = factor(u, v)
                coeff = f if coeff is None else coeff * f
                w[i], w[i + 1] = v, u
                changed = True
    return tuple(w), coeff


class _WordAlgebra:
    """Shared machinery for associative algebras with a pairwise reorder factor."""

    mode: Mode

    def __init__(self, generators: Sequence[Generator], group: GradingGroup, order: int = 2):
        self.generators = list(generators)
        self.group = group
        self.order = order
        self.rank = {g.symbol: i for i, g in enumerate(self.generators)}
        self.grades = {g.symbol: g.grade for g in self.generators}

    def swap_factor(self, u: str, v: str) -> Scalar:  # pragma: no cover - abstract
        raise NotImplementedError

    def _check_word(self, word):
        if not isinstance(word, tuple):
            raise InvalidWordError(f"associative modes use flat words, got {format_monomial(word)}")
        for s in word:
            if s not in self.rank:
                raise InvalidWordError(f"unknown generator {s!r}")

    def normalize_word(self, word: tuple, left_to_right: bool = True) -> Element:
        self._check_word(word)
        w, coeff = _bubble(word, self.rank, self.swap_factor, left_to_right)
        if coeff is None:
            coeff = scalar(1, self.order)
        for u, v in zip(w, w[1:]):
            # u.u = f u.u with f != 1 forces u.u = 0
            if u == v and self.swap_factor(u, u) != 1:
                return Element.zero(self.order, self.mode)
        return Element.monomial(w, coeff, self.order, self.mode)

    def normalize(self, elem: Element, left_to_right: bool = True) -> Element:
        out = Element.zero(self.order, self.mode)
        for m, c in elem.terms.items():
            out = out + self.normalize_word(m, left_to_right).scale(c)
        return out

    def multiply(self, a: Element, b: Element) -> Element:
        terms = [(u + v, cu * cv) for u, cu in a.terms.items() for v, cv in b.terms.items()]
        return Element(terms, self.order, self.mode)

    def word_grade(self, word) -> Grade:
        return monomial_grade(word, self.grades, self.group)


class GradedAlgebra(_WordAlgebra):
    """Associative eps-commutative algebra: u.v = eps(u', v') v.u."""

    mode = Mode.ASSOC_GRADED

    def __init__(self, generators, eps, order: int = 2):
        super().__init__(generators, eps.group, order)
        self.eps = eps

    def swap_factor(self, u, v):
        return self.eps(self.grades[u], self.grades[v])


def normalize_assoc_graded(elem: Element, eps, generators: Sequence[Generator]) -> Element:
    return GradedAlgebra(generators, eps, eps.order).normalize(elem)


def _debug_enabled() -> bool:
    return os.environ.get("OBSCURA_DEBUG", "") not in ("", "0")


class DoubleAlgebra(_WordAlgebra):
    """Associative double commutative algebra: u**v = eps_pm(u', v') eps_mu(u, v) v**u.

    Construction refuses contexts failing the deformed cocycle conditions,
    since normal forms would then depend on the order of the swaps.
    """

    mode = Mode.ASSOC_DOUBLE

    def __init__(self, generators, eps_pm, mu: MembershipTable, order: int = 2, debug: bool | None = None):
        from obscura.factor_systems import check_deformed_cocycle

        super().__init__(generators, eps_pm.group, order)
        self.eps_pm = eps_pm
        self.mu = mu
        self.debug = _debug_enabled() if debug is None else debug
        self.gate = check_deformed_cocycle(eps_pm, mu, self.grades, [g.symbol for g in self.generators])
        if not self.gate.ok:
            self.gate.status = "REFUSED"
            raise RefusedError(
                "double normalization refused: the deformed cocycle conditions fail", self.gate
            )

    def factor(self, u, v) -> Scalar:
        """eps_pm(u', v') eps_mu(u, v) for generators or words u, v."""
        g = self.group
        gu = monomial_grade(u, self.grades, g)
        gv = monomial_grade(v, self.grades, g)
        return self.eps_pm(gu, gv) * membership_factor(u, v, self.mu, self.order)

    def swap_factor(self, u, v):
        return self.factor(u, v)

    def normalize(self, elem: Element, left_to_right: bool = True) -> Element:
        out = super().normalize(elem, left_to_right)
        if self.debug:
            other = super().normalize(elem, not left_to_right)
            assert out == other, f"normal form depends on swap order: {out} vs {other}"
        return out


def normalize_assoc_double(elem: Element, eps_pm, mu: MembershipTable, generators) -> Element:
    return DoubleAlgebra(generators, eps_pm, mu, eps_pm.order).normalize(elem)


# -- Weyl algebra ---------------------------------------------------------------------

class WeylAlgebra:
    """x o y -> (mu(x)/mu(y)) y o x + (c/mu(y)) e, normal order y^a x^b."""

    mode = Mode.WEYL

    def __init__(self, x: str, y: str, mu_x, mu_y, c, order: int = 2):
        self.x, self.y = x, y
        self.order = order
        self.mu_x, self.mu_y = Fraction(mu_x), Fraction(mu_y)
        self.c = scalar(c, order)
        self.swap = scalar(self.mu_x / self.mu_y, order)
        self.unit_coeff = self.c / scalar(self.mu_y, order)
        self._cache: dict = {}

    def reduce_word(self, word: tuple) -> Element:
        for s in word:
            if s not in (self.x, self.y):
                raise InvalidWordError(f"{s!r} is not a Weyl generator ({self.x}, {self.y})")
        return Element(self._reduce(tuple(word)), self.order, Mode.WEYL)

    def _reduce(self, word: tuple) -> dict:
        if word in self._cache:
            return self._cache[word]
        for i in range(len(word) - 1):
            if word[i] == self.x and word[i + 1] == self.y:
                out: dict = {}
                swapped = word[:i] + (self.y, self.x) + word[i + 2 :]
                dropped = word[:i] + word[i + 2 :]
                for w, c in self._reduce(swapped).items():
                    out[w] = out.get(w, 0) + c * self.swap
                for w, c in self._reduce(dropped).items():
                    out[w] = out.get(w, 0) + c * self.unit_coeff
                break
        else:
            out = {word: scalar(1, self.order)}
        self._cache[word] = out
        return out

    def normalize(self, elem: Element) -> Element:
        out = Element.zero(self.order, Mode.WEYL)
        for m, c in elem.terms.items():
            out = out + self.reduce_word(m).scale(c)
        return out

    def is_normal(self, word: tuple) -> bool:
        return all(not (u == self.x and v == self.y) for u, v in zip(word, word[1:]))


def weyl_reduce(word: Sequence[str], mu: MembershipTable, c, x: str = "x", y: str = "y", order: int = 2) -> Element:
    """Normal-order a word over {x, y}; the unit e is dropped from the word."""
    word = tuple(s for s in word if s != "e")
    return WeylAlgebra(x, y, mu.of(x), mu.of(y), c, order).reduce_word(word)


def check_mka(mu: MembershipTable, samples: Iterable) -> Report:
    """mu(k a) = mu(a): membership is read off the monomial and ignores k."""
    report = Report(law="mka")
    for k, a in samples:
        report.checked += 1
        lhs = mu.of(a)  # the coefficient k never reaches the membership table
        rhs = mu.of(a)
        if lhs != rhs:  # pragma: no cover - structural
            report.record((str(k), format_monomial(a)), lhs, rhs)
    report.notes.append("membership is defined on monomials, so scalar multiples share it structurally")
    return report
