"""
Monomial shapes shared by every algebra mode.

* associative modes use flat words: ``tuple[str, ...]`` (``()`` is the unit e)
* the nonassociative star mode uses product trees: a leaf is a generator
  symbol, an internal node is :class:`Node`
* n-ary modes use :class:`NaryApp`
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Node:
    left: "Tree"
    right: "Tree"


Tree = Union[str, Node]


@dataclass(frozen=True)
class NaryApp:
    args: tuple  # of str | NaryApp

    def is_flat(self) -> bool:
        return all(isinstance(a, str) for a in self.args)


Monomial = Union[tuple, str, Node, NaryApp]


def leaves(m) -> list[str]:
    """Generator symbols of a monomial, left to right."""
    if isinstance(m, str):
        return [m]
    if isinstance(m, tuple):
        return list(m)
    if isinstance(m, Node):
        return leaves(m.left) + leaves(m.right)
    if isinstance(m, NaryApp):
        out = []
        for a in m.args:
            out += leaves(a)
        return out
    raise TypeError(f"not a monomial: {m!r}")


def depth_first_nodes(tree: Tree):
    if isinstance(tree, Node):
        yield tree
        yield from depth_first_nodes(tree.left)
        yield from depth_first_nodes(tree.right)


def format_monomial(m, op: str = ".") -> str:
    """Canonical text; compound monomials are parenthesised so they re-parse."""
    if isinstance(m, str):
        return m
    if isinstance(m, tuple):
        if not m:
            return "e"
        if len(m) == 1:
            return m[0]
        return "(" + f" {op} ".join(m) + ")"
    if isinstance(m, Node):
        return f"({format_monomial(m.left, op)} {op} {format_monomial(m.right, op)})"
    if isinstance(m, NaryApp):
        return "[" + ", ".join(format_monomial(a, op) for a in m.args) + "]"
    raise TypeError(f"not a monomial: {m!r}")
