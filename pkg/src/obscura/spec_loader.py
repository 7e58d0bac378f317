"""
Algebra specification documents (JSON) and the expression language.

A spec document looks like::

    {
      "field_order": 2,
      "grading": {"cyclic_orders": [2]},
      "generators": [{"symbol": "x", "grade": "(1)", "mu": "1/2"}, ...],
      "membership": {"compound": "min"},
      "mode": "graded",
      "factors": {"epsilon": "sign_rule", "pi": "trivial"}
    }

All validation problems are collected and raised together as one SpecError.

Expressions use ``+``, ``-``, scalar literals (integers, ``/``, ``zeta``,
``^``), parentheses and one product operator per mode: ``*`` (star),
``.`` (graded), ``**`` (double), ``o`` (weyl), plus ``[a, b, c]`` for n-ary
applications and ``L[a, b]`` for the bracket.  ``*`` with a scalar operand is
scalar multiplication in every mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import hashlib
import itertools
import json
import os
import re
from typing import Any

from obscura.deformed_algebra import (
    OPERATORS,
    Element,
    Generator,
    Mode,
    star_product,
)
from obscura.errors import ExpressionSyntaxError, ObscuraError, SpecError
from obscura.factor_systems import CommutationFactor, FactorSystem, epsilon_from_pi
from obscura.grading import Grade, GradingGroup, format_grade
from obscura.membership import EXPLICIT, MIN_RULE, MembershipTable, as_membership
from obscura.monomials import NaryApp, Node
from obscura.scalar_field import Scalar, root_of_unity, scalar

RESERVED = frozenset({"e", "o", "L", "zeta"})
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
GRADE_RE = re.compile(r"\(([^()]*)\)")


# -- the spec model -------------------------------------------------------------------

@dataclass
class AlgebraSpec:
    field_order: int
    group: GradingGroup
    generators: list[Generator]
    membership: MembershipTable
    mode: Mode
    epsilon: CommutationFactor | None = None
    pi: FactorSystem | None = None
    pi_nary: FactorSystem | None = None
    weyl_c: Scalar | None = None
    weyl_generators: tuple[str, str] | None = None
    arity: int = 2
    digest: str = ""
    document: dict = field(default_factory=dict, repr=False)

    @property
    def symbols(self) -> list[str]:
        return [g.symbol for g in self.generators]

    @property
    def grades(self) -> dict[str, Grade]:
        return {g.symbol: g.grade for g in self.generators}

    @property
    def rank(self) -> dict[str, int]:
        return {g.symbol: i for i, g in enumerate(self.generators)}

    @property
    def operator(self) -> str:
        return OPERATORS[self.mode]


def spec_digest(document: Any) -> str:
    canon = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_grade(value, group: GradingGroup) -> Grade:
    """Accept "(1,0)", [1, 0] or (for rank one) a bare integer."""
    if isinstance(value, bool):
        raise ValueError(f"not a grade: {value!r}")
    if isinstance(value, int):
        parts = [value]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    elif isinstance(value, str):
        m = GRADE_RE.fullmatch(value.strip())
        body = m.group(1) if m else value
        try:
            parts = [int(p) for p in body.split(",")] if body.strip() else []
        except ValueError:
            raise ValueError(f"not a grade: {value!r}") from None
    else:
        raise ValueError(f"not a grade: {value!r}")
    if not all(isinstance(p, int) and not isinstance(p, bool) for p in parts):
        raise ValueError(f"not a grade: {value!r}")
    if len(parts) != group.rank:
        raise ValueError(f"grade {value!r} has {len(parts)} components, the group {group} has {group.rank}")
    for p, n in zip(parts, group.cyclic_orders):
        if not 0 <= p < n:
            raise ValueError(f"grade {value!r} is not an element of {group}")
    return tuple(parts)


def parse_grade_key(key: str, group: GradingGroup, arity: int) -> tuple:
    found = GRADE_RE.findall(key)
    if len(found) != arity:
        raise ValueError(f"table key {key!r} should list {arity} grades")
    return tuple(parse_grade(f"({g})", group) for g in found)


def parse_scalar(value, order: int = 2) -> Scalar:
    """A scalar from a JSON number or an expression string such as "1/2" or "zeta^2"."""
    if isinstance(value, bool):
        raise ValueError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return scalar(value, order)
    if isinstance(value, float):
        raise ValueError(f"inexact number {value!r}; write it as a rational string")
    if not isinstance(value, str):
        raise ValueError(f"not a scalar: {value!r}")
    ast = Parser(value, _ScalarContext(order)).parse()
    if not isinstance(ast, Lit):
        raise ValueError(f"not a scalar: {value!r}")
    return ast.value


class _ScalarContext:
    mode = None
    symbols: frozenset = frozenset()
    arity = 0

    def __init__(self, order):
        self.field_order = order


# -- loading ----------------------------------------------------------------------------

def load_spec_file(path: str) -> AlgebraSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError([f"{path}: {exc.strerror}"]) from None
    return load_spec(text)


def load_spec(document) -> AlgebraSpec:
    """Parse (if given text) and validate a spec; raises SpecError listing every problem."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError([f"line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(document, dict):
        raise SpecError(["spec document must be a JSON object"])
    return _Loader(document).load()


class _Loader:
    def __init__(self, doc: dict):
        self.doc = doc
        self.errors: list[str] = []

    def err(self, path: str, msg: str) -> None:
        self.errors.append(f"{path}: {msg}")

    def load(self) -> AlgebraSpec:
        doc = self.doc
        known = {"field_order", "grading", "generators", "membership", "mode", "factors", "weyl", "arity", "name", "description"}
        for key in doc:
            if key not in known:
                self.err(key, "unknown field")

        order = doc.get("field_order", 2)
        if not isinstance(order, int) or isinstance(order, bool) or order < 1:
            self.err("field_order", f"must be a positive integer, got {order!r}")
            order = 2

        group = self._group()
        mode = self._mode()
        arity = doc.get("arity", 3 if mode is Mode.NARY else 2)
        if not isinstance(arity, int) or isinstance(arity, bool) or arity < 2:
            self.err("arity", f"must be an integer >= 2, got {arity!r}")
            arity = 2
        generators = self._generators(group) if group else []
        membership = self._membership(generators, mode, arity, order)

        spec = AlgebraSpec(order, group, generators, membership, mode, arity=arity, document=doc)
        if group is not None:
            self._factors(spec)
        if mode is Mode.WEYL:
            self._weyl(spec)
        if self.errors:
            raise SpecError(self.errors)
        spec.digest = spec_digest(doc)
        return spec

    def _group(self) -> GradingGroup | None:
        grading = self.doc.get("grading")
        if not isinstance(grading, dict) or "cyclic_orders" not in grading:
            self.err("grading.cyclic_orders", "required")
            return None
        orders = grading["cyclic_orders"]
        if (
            not isinstance(orders, list)
            or not orders
            or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in orders)
        ):
            self.err("grading.cyclic_orders", f"must be a nonempty list of positive integers, got {orders!r}")
            return None
        return GradingGroup(tuple(orders))

    def _mode(self) -> Mode:
        raw = self.doc.get("mode", "graded")
        try:
            return Mode(raw)
        except ValueError:
            self.err("mode", f"must be one of {[m.value for m in Mode]}, got {raw!r}")
            return Mode.ASSOC_GRADED

    def _generators(self, group: GradingGroup) -> list[Generator]:
        raw = self.doc.get("generators")
        if not isinstance(raw, list) or not raw:
            self.err("generators", "must be a nonempty list")
            return []
        extra_mu = (self.doc.get("membership") or {}).get("mu", {}) if isinstance(self.doc.get("membership"), dict) else {}
        out, seen = [], set()
        for i, g in enumerate(raw):
            path = f"generators[{i}]"
            if not isinstance(g, dict):
                self.err(path, "must be an object")
                continue
            sym = g.get("symbol")
            if not isinstance(sym, str) or not IDENT_RE.match(sym):
                self.err(f"{path}.symbol", f"not an identifier: {sym!r}")
                continue
            if sym in RESERVED:
                self.err(f"{path}.symbol", f"{sym!r} is reserved")
                continue
            if sym in seen:
                self.err(f"{path}.symbol", f"duplicate symbol {sym!r}")
                continue
            seen.add(sym)
            grade = None
            try:
                grade = parse_grade(g.get("grade", 0 if group.rank == 1 else None), group)
            except ValueError as exc:
                self.err(f"{path}.grade", str(exc))
            raw_mu = g.get("mu", extra_mu.get(sym, 1) if isinstance(extra_mu, dict) else 1)
            mu = None
            try:
                mu = as_membership(raw_mu if not isinstance(raw_mu, float) else str(raw_mu))
            except ObscuraError as exc:
                self.err(f"{path}.mu", str(exc))
            if grade is not None and mu is not None:
                out.append(Generator(sym, grade, mu))
        return out

    def _membership(self, generators, mode, arity, order) -> MembershipTable:
        raw = self.doc.get("membership", {})
        gens = {g.symbol: g.mu for g in generators}
        if not isinstance(raw, dict):
            self.err("membership", "must be an object")
            return MembershipTable(gens)
        compound = raw.get("compound", MIN_RULE)
        if compound not in (MIN_RULE, EXPLICIT):
            self.err("membership.compound", f"must be 'min' or 'explicit', got {compound!r}")
            compound = MIN_RULE
        table = {}
        ctx = _ParseContext(mode, set(gens), arity, order)
        for key, value in (raw.get("table") or {}).items():
            path = f"membership.table[{key!r}]"
            try:
                mono = ast_to_monomial(Parser(key, ctx).parse(), mode)
                table[mono] = as_membership(value)
            except (ObscuraError, ValueError) as exc:
                self.err(path, str(exc))
        if table and compound != EXPLICIT:
            self.err("membership.table", "a table is only used with compound 'explicit'")
        return MembershipTable(gens, compound, table)

    def _factor(self, path: str, raw, group, arity: int, order: int) -> FactorSystem | None:
        if raw == "trivial":
            return FactorSystem.trivial(group, arity, order)
        if isinstance(raw, dict) and "coboundary" in raw:
            lam = {}
            for key, value in raw["coboundary"].items():
                try:
                    lam[parse_grade(key, group)] = parse_scalar(value, order)
                except ValueError as exc:
                    self.err(f"{path}.coboundary[{key!r}]", str(exc))
            missing = [format_grade(g) for g in group.elements(max_size=group.size) if g not in lam]
            if missing:
                self.err(f"{path}.coboundary", f"missing grades {', '.join(missing)}")
                return None
            try:
                return FactorSystem.coboundary(group, lam, arity, order)
            except ObscuraError as exc:
                self.err(f"{path}.coboundary", str(exc))
                return None
        if isinstance(raw, dict) and "table" in raw:
            table = self._table(f"{path}.table", raw["table"], group, arity, order)
            return FactorSystem(group, arity, table, order) if table is not None else None
        self.err(path, f"expected 'trivial', {{'coboundary': ...}} or {{'table': ...}}, got {raw!r}")
        return None

    def _table(self, path, raw, group, arity, order) -> dict | None:
        if not isinstance(raw, dict):
            self.err(path, "must be an object")
            return None
        table, ok = {}, True
        for key, value in raw.items():
            try:
                k = parse_grade_key(key, group, arity)
                v = parse_scalar(value, order)
            except ValueError as exc:
                self.err(f"{path}[{key!r}]", str(exc))
                ok = False
                continue
            if v.is_zero():
                self.err(f"{path}[{key!r}]", "factor values must be nonzero")
                ok = False
            if k in table:
                self.err(f"{path}[{key!r}]", "duplicate key")
                ok = False
            table[k] = v
        missing = [
            ",".join(map(format_grade, k))
            for k in itertools.product(group.elements(max_size=group.size), repeat=arity)
            if k not in table
        ]
        if missing:
            shown = "; ".join(missing[:8]) + ("; ..." if len(missing) > 8 else "")
            self.err(path, f"table is not total, missing {len(missing)} keys: {shown}")
            return None
        return table if ok else None

    def _factors(self, spec: AlgebraSpec) -> None:
        raw = self.doc.get("factors", {})
        if not isinstance(raw, dict):
            self.err("factors", "must be an object")
            return
        G, order = spec.group, spec.field_order
        if "pi" in raw:
            spec.pi = self._factor("factors.pi", raw["pi"], G, 2, order)
        if "pi_nary" in raw:
            spec.pi_nary = self._factor("factors.pi_nary", raw["pi_nary"], G, spec.arity, order)
        eps = raw.get("epsilon")
        if eps is None:
            if spec.pi is not None:
                spec.epsilon = epsilon_from_pi(spec.pi)
        elif eps == "sign_rule":
            if not G.is_elementary_2():
                self.err("factors.epsilon", f"the sign rule needs Z2^n, got {G}")
            else:
                spec.epsilon = CommutationFactor.sign_rule(G, order)
        elif eps == "trivial":
            spec.epsilon = CommutationFactor.trivial(G, order)
        elif isinstance(eps, dict) and "table" in eps:
            table = self._table("factors.epsilon.table", eps["table"], G, 2, order)
            if table is not None:
                spec.epsilon = CommutationFactor(G, table, order, validate=False)
        else:
            self.err("factors.epsilon", f"expected 'sign_rule', 'trivial' or {{'table': ...}}, got {eps!r}")
        for key in raw:
            if key not in ("pi", "pi_nary", "epsilon"):
                self.err(f"factors.{key}", "unknown field")

    def _weyl(self, spec: AlgebraSpec) -> None:
        raw = self.doc.get("weyl")
        if not isinstance(raw, dict) or "c" not in raw:
            self.err("weyl.c", "required in weyl mode")
            return
        try:
            spec.weyl_c = parse_scalar(raw["c"], spec.field_order)
        except ValueError as exc:
            self.err("weyl.c", str(exc))
        names = raw.get("generators", spec.symbols[:2])
        if not (isinstance(names, list) and len(names) == 2 and all(n in spec.symbols for n in names)):
            self.err("weyl.generators", f"must name two declared generators, got {names!r}")
            return
        spec.weyl_generators = tuple(names)


# -- expressions ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Scalar


@dataclass(frozen=True)
class Gen:
    symbol: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Add:
    left: Any
    right: Any


@dataclass(frozen=True)
class Sub:
    left: Any
    right: Any


@dataclass(frozen=True)
class Neg:
    operand: Any


@dataclass(frozen=True)
class ScalarMul:
    k: Lit
    operand: Any


@dataclass(frozen=True)
class Product:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Nary:
    args: tuple


@dataclass(frozen=True)
class Bracket:
    left: Any
    right: Any


class _ParseContext:
    def __init__(self, mode, symbols, arity, field_order):
        self.mode = mode
        self.symbols = frozenset(symbols)
        self.arity = arity
        self.field_order = field_order


TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^().\[\],]))")
PRODUCT_OPS = ("*", ".", "**", "o")


class Parser:
    """Recursive descent: sum < product < unary minus < power < atom."""

    def __init__(self, text: str, ctx):
        self.text = text
        self.ctx = ctx
        self.tokens = self._tokenize(text)
        self.i = 0

    @staticmethod
    def _tokenize(text):
        out, pos = [], 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = TOKEN_RE.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", start)
            start = m.start(m.lastindex)
            num, ident, op = m.groups()
            if num is not None:
                out.append(("num", num, start))
            elif ident is not None:
                out.append(("op", "o", start) if ident == "o" else ("id", ident, start))
            else:
                out.append(("op", op, start))
            pos = m.end()
        out.append(("end", None, len(text)))
        return out

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", tok[2])
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(msg, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            if isinstance(left, Lit) and isinstance(right, Lit):
                left = Lit(left.value + right.value if op == "+" else left.value - right.value)
            else:
                left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self):
        left = self.unary()
        star_products = 0
        while self.peek()[0] == "op" and self.peek()[1] in PRODUCT_OPS + ("/",):
            tok = self.take()
            op = tok[1]
            right = self.unary()
            if op == "/":
                if not isinstance(right, Lit):
                    self.fail("division is only by scalars", tok)
                if right.value.is_zero():
                    self.fail("division by zero", tok)
                inv = Lit(1 / right.value)
                left = Lit(left.value * inv.value) if isinstance(left, Lit) else _scale(inv, left)
                continue
            if op == "*" and (isinstance(left, Lit) or isinstance(right, Lit)):
                if isinstance(left, Lit) and isinstance(right, Lit):
                    left = Lit(left.value * right.value)
                else:
                    left = _scale(left, right) if isinstance(left, Lit) else _scale(right, left)
                continue
            mode = self.ctx.mode
            wanted = OPERATORS.get(mode)
            if mode is None or op != wanted:
                where = "a scalar expression" if mode is None else f"{mode.value} mode"
                self.fail(f"operator {op!r} is not a product in {where}", tok)
            if isinstance(left, Lit) or isinstance(right, Lit):
                self.fail(f"use '*' to multiply by a scalar, not {op!r}", tok)
            if mode is Mode.NONASSOC_STAR:
                star_products += 1
                if star_products > 1:
                    self.fail("nonassociative product requires parentheses", tok)
            left = Product(op, left, right)
        return left

    def unary(self):
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            operand = self.unary()
            return Lit(-operand.value) if isinstance(operand, Lit) else Neg(operand)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            if not isinstance(base, Lit):
                self.fail("powers apply to scalars only", tok)
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            num = self.take()
            if num[0] != "num":
                self.fail("exponent must be an integer", num)
            try:
                return Lit(base.value ** (sign * int(num[1])))
            except ZeroDivisionError:
                self.fail("zero to a negative power", tok)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Lit(scalar(int(val), self.ctx.field_order))
        if kind == "id":
            if val == "zeta":
                return Lit(root_of_unity(self.ctx.field_order, 1))
            if val == "e":
                if self.ctx.mode not in (Mode.ASSOC_GRADED, Mode.ASSOC_DOUBLE, Mode.WEYL):
                    self.fail("the unit e is not available in this mode", tok)
                return Unit()
            if val == "L" and self.peek()[1] == "[":
                if self.ctx.mode is not Mode.ASSOC_DOUBLE:
                    self.fail("L[a, b] needs double mode", tok)
                self.take()
                left = self.expr()
                self.expect(",")
                right = self.expr()
                self.expect("]")
                return Bracket(left, right)
            if val in self.ctx.symbols:
                return Gen(val)
            self.fail(f"unknown symbol {val!r}", tok)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and val == "[":
            if self.ctx.mode is not Mode.NARY:
                self.fail("[...] applications need nary mode", tok)
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect("]")
            if len(args) != self.ctx.arity:
                self.fail(f"arity mismatch: got {len(args)} arguments, the product takes {self.ctx.arity}", tok)
            return Nary(tuple(args))
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def _scale(k: Lit, node):
    if isinstance(node, ScalarMul):
        return ScalarMul(Lit(k.value * node.k.value), node.operand)
    return ScalarMul(k, node)


def parse_expression(text: str, spec: AlgebraSpec):
    ctx = _ParseContext(spec.mode, spec.symbols, spec.arity, spec.field_order)
    return Parser(text, ctx).parse()


def format_ast(node) -> str:
    """Fully parenthesised text; parsing it back gives the same tree."""
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Gen):
        return node.symbol
    if isinstance(node, Unit):
        return "e"
    if isinstance(node, Add):
        return f"({format_ast(node.left)} + {format_ast(node.right)})"
    if isinstance(node, Sub):
        return f"({format_ast(node.left)} - {format_ast(node.right)})"
    if isinstance(node, Neg):
        return f"(-{format_ast(node.operand)})"
    if isinstance(node, ScalarMul):
        return f"({format_ast(node.k)} * {format_ast(node.operand)})"
    if isinstance(node, Product):
        return f"({format_ast(node.left)} {node.op} {format_ast(node.right)})"
    if isinstance(node, Nary):
        return "[" + ", ".join(format_ast(a) for a in node.args) + "]"
    if isinstance(node, Bracket):
        return f"L[{format_ast(node.left)}, {format_ast(node.right)}]"
    raise TypeError(f"not an expression node: {node!r}")


def ast_to_monomial(node, mode: Mode):
    """A bare monomial (no sums, no coefficients), e.g. a membership table key."""
    if isinstance(node, Gen):
        return node.symbol
    if isinstance(node, Unit):
        return ()
    if isinstance(node, Product):
        left, right = ast_to_monomial(node.left, mode), ast_to_monomial(node.right, mode)
        if mode is Mode.NONASSOC_STAR:
            return Node(left, right)
        as_word = lambda m: m if isinstance(m, tuple) else (m,)  # noqa: E731
        return as_word(left) + as_word(right)
    if isinstance(node, Nary):
        return NaryApp(tuple(ast_to_monomial(a, mode) for a in node.args))
    raise ValueError(f"{format_ast(node)} is not a monomial")


def evaluate(node, spec: AlgebraSpec, bracket_ctx=None) -> Element:
    """Expand an expression into an Element (no normalization is applied)."""
    order, mode = spec.field_order, spec.mode

    def ev(n) -> Element:
        if isinstance(n, Lit):
            if mode in (Mode.NONASSOC_STAR, Mode.NARY):
                if n.value.is_zero():
                    return Element.zero(order, mode)
                raise ValueError("a bare scalar has no meaning without a unit in this mode")
            return Element.monomial((), n.value, order, mode)
        if isinstance(n, Gen):
            m = n.symbol if mode in (Mode.NONASSOC_STAR, Mode.NARY) else (n.symbol,)
            return Element.monomial(m, 1, order, mode)
        if isinstance(n, Unit):
            return Element.monomial((), 1, order, mode)
        if isinstance(n, Add):
            return ev(n.left) + ev(n.right)
        if isinstance(n, Sub):
            return ev(n.left) - ev(n.right)
        if isinstance(n, Neg):
            return -ev(n.operand)
        if isinstance(n, ScalarMul):
            return ev(n.operand).scale(n.k.value)
        if isinstance(n, Product):
            a, b = ev(n.left), ev(n.right)
            if mode is Mode.NONASSOC_STAR:
                return star_product(a, b, spec.membership)
            terms = [(u + v, cu * cv) for u, cu in a.terms.items() for v, cv in b.terms.items()]
            return Element(terms, order, mode)
        if isinstance(n, Nary):
            out = [((), scalar(1, order))]
            for arg in n.args:
                e = ev(arg)
                out = [(m + (u,), c * cu) for m, c in out for u, cu in e.terms.items()]
            return Element([(NaryApp(m), c) for m, c in out], order, mode)
        if isinstance(n, Bracket):
            from obscura.lie_bracket import BracketContext, bracket

            ctx = bracket_ctx or BracketContext.build(spec.generators, spec.epsilon, spec.membership, order)
            return bracket(ev(n.left), ev(n.right), ctx)
        raise TypeError(f"not an expression node: {n!r}")

    return ev(node)


def resolve_spec_path(path: str | None) -> str:
    path = path or os.environ.get("OBSCURA_SPEC")
    if not path:
        raise SpecError(["no spec given: pass --spec or set OBSCURA_SPEC"])
    return path
