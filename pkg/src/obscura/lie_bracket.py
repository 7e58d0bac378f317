"""
The double eps-eps Lie bracket L[a, b] = a**b - E(a, b) b**a with
E(a, b) = eps_pm(a', b') mu(a)/mu(b), its skew law and the deformed Jacobi
identity.

Two ambients are offered:

* ``normalized`` (default) computes in the double commutative algebra,
  so every word is brought to normal form.  There a**b and E(a,b) b**a have
  the same normal form, and the bracket of two monomials vanishes.
* ``free`` computes in the free associative algebra on the generators with
  E taken on whole words (using the compound membership rule).  This is the
  setting in which the skew and Jacobi laws carry real content.

The Jacobi prefactor of the term L[a, L[b, c]] is E(a, b) by default
(``prefactor="leading"``); ``prefactor="standard"`` uses E(c, a), the placement
of the classical colour Jacobi identity.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from obscura.deformed_algebra import DoubleAlgebra, Element, Mode, element_grade
from obscura.errors import HomogeneityError
from obscura.report import Report
from obscura.scalar_field import Scalar

AMBIENTS = ("normalized", "free")
PREFACTORS = ("leading", "standard")


class BracketContext:
    """A validated double algebra plus the choice of ambient and Jacobi prefactor.

    Building the underlying :class:`DoubleAlgebra` runs the deformed cocycle
    gate, so an invalid context raises RefusedError before any bracket.
    """

    def __init__(self, algebra: DoubleAlgebra, ambient: str = "normalized", prefactor: str = "leading"):
        if ambient not in AMBIENTS:
            raise ValueError(f"ambient must be one of {AMBIENTS}")
        if prefactor not in PREFACTORS:
            raise ValueError(f"prefactor must be one of {PREFACTORS}")
        self.algebra = algebra
        self.ambient = ambient
        self.prefactor = prefactor

    @classmethod
    def build(cls, generators, eps_pm, mu, order: int = 2, **kw) -> "BracketContext":
        return cls(DoubleAlgebra(generators, eps_pm, mu, order), **kw)

    @property
    def order(self) -> int:
        return self.algebra.order

    @property
    def symbols(self) -> list[str]:
        return [g.symbol for g in self.algebra.generators]

    def E(self, u: tuple, v: tuple) -> Scalar:
        return self.algebra.factor(u, v)

    def finish(self, elem: Element) -> Element:
        if self.ambient == "normalized":
            return self.algebra.normalize(elem)
        return elem

    def gen(self, s: str) -> Element:
        return Element.monomial((s,), 1, self.order, Mode.ASSOC_DOUBLE)


def _check_homogeneous(elem: Element, ctx: BracketContext) -> None:
    if elem.is_zero():
        return
    element_grade(elem, ctx.algebra.grades, ctx.algebra.group)
    for m in elem.terms:
        if not isinstance(m, tuple):
            raise HomogeneityError(f"bracket arguments must be words, got {m!r}")


def bracket(a: Element, b: Element, ctx: BracketContext) -> Element:
    """L[a, b], extended bilinearly over the terms of a and b."""
    _check_homogeneous(a, ctx)
    _check_homogeneous(b, ctx)
    terms = []
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            k = cu * cv
            terms.append((u + v, k))
            terms.append((v + u, -k * ctx.E(u, v)))
    return ctx.finish(Element(terms, ctx.order, Mode.ASSOC_DOUBLE))


def check_skew(ctx: BracketContext, pairs: Sequence | None = None) -> Report:
    """L[a, b] = -E(a, b) L[b, a] for every generator pair."""
    syms = ctx.symbols
    pairs = list(pairs) if pairs is not None else list(itertools.product(syms, repeat=2))
    report = Report(law="leb")
    report.details["ambient"] = ctx.ambient
    for a, b in pairs:
        report.checked += 1
        A, B = ctx.gen(a), ctx.gen(b)
        lhs = bracket(A, B, ctx)
        rhs = bracket(B, A, ctx).scale(-ctx.E((a,), (b,)))
        if ctx.finish(lhs - rhs) != 0:
            report.record((a, b), lhs.format("**"), rhs.format("**"))
    return report


def jacobi_residual(ctx: BracketContext, a: str, b: str, c: str) -> Element:
    """Sum over the cyclic shifts (a,b,c), (b,c,a), (c,a,b) of prefactor * L[a, L[b, c]]."""
    total = Element.zero(ctx.order, Mode.ASSOC_DOUBLE)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = bracket(ctx.gen(y), ctx.gen(z), ctx)
        if inner.is_zero():
            continue
        outer = bracket(ctx.gen(x), inner, ctx)
        pre = ctx.E((x,), (y,)) if ctx.prefactor == "leading" else ctx.E((z,), (x,))
        total = total + outer.scale(pre)
    return ctx.finish(total)


def check_jacobi(ctx: BracketContext, triples: Sequence | None = None) -> Report:
    """The deformed Jacobi identity on every generator triple; residuals are reported verbatim."""
    syms = ctx.symbols
    triples = list(triples) if triples is not None else list(itertools.product(syms, repeat=3))
    report = Report(law="jac")
    report.details["ambient"] = ctx.ambient
    report.details["prefactor"] = ctx.prefactor
    for a, b, c in triples:
        report.checked += 1
        residual = jacobi_residual(ctx, a, b, c)
        if residual != 0:
            report.record((a, b, c), residual.format("**"), "0")
    return report
