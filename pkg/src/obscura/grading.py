"""Finite abelian grading groups, their automorphisms, and the sign rule."""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Iterator, Sequence

from obscura.errors import InvalidGradeError, SizeLimitError, UnsupportedGroupError
from obscura.scalar_field import Scalar, scalar

Grade = tuple  # tuple[int, ...], one entry per cyclic factor

DEFAULT_MAX_GROUP_SIZE = 256


@dataclass(frozen=True)
class GradingGroup:
    """Z_{n1} x Z_{n2} x ... presented by its cyclic orders."""

    cyclic_orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.cyclic_orders)
        if not orders:
            raise InvalidGradeError("a grading group needs at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise InvalidGradeError(f"cyclic orders must be >= 1, got {list(orders)}")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def size(self) -> int:
        out = 1
        for n in self.cyclic_orders:
            out *= n
        return out

    @property
    def zero(self) -> Grade:
        return (0,) * self.rank

    def is_elementary_2(self) -> bool:
        return all(n == 2 for n in self.cyclic_orders)

    def elements(self, max_size: int = DEFAULT_MAX_GROUP_SIZE) -> list[Grade]:
        """All elements in lexicographic order."""
        if self.size > max_size:
            raise SizeLimitError(f"group of size {self.size} exceeds enumeration bound {max_size}")
        return list(itertools.product(*(range(n) for n in self.cyclic_orders)))

    def tuples(self, k: int, budget: int) -> Iterator[tuple[Grade, ...]]:
        """All k-tuples of elements, lexicographically; refuses if |G|^k > budget."""
        if self.size**k > budget:
            raise SizeLimitError(
                f"{self.size}^{k} = {self.size**k} tuples exceed the budget {budget}"
            )
        return itertools.product(self.elements(max_size=self.size), repeat=k)

    def grade(self, values) -> Grade:
        """Build a grade, reducing each entry modulo its order."""
        if isinstance(values, int):
            values = (values,)
        values = tuple(values)
        if len(values) != self.rank:
            raise InvalidGradeError(
                f"grade {values} has {len(values)} components, group has {self.rank}"
            )
        return tuple(int(v) % n for v, n in zip(values, self.cyclic_orders))

    def check(self, g) -> Grade:
        g = tuple(g)
        if len(g) != self.rank:
            raise InvalidGradeError(f"grade {g} has {len(g)} components, group has {self.rank}")
        for v, n in zip(g, self.cyclic_orders):
            if not (isinstance(v, int) and 0 <= v < n):
                raise InvalidGradeError(f"grade {g} is not reduced modulo {self.cyclic_orders}")
        return g

    def add(self, g: Grade, h: Grade) -> Grade:
        return grade_add(self, g, h)

    def sum(self, grades: Sequence[Grade]) -> Grade:
        out = self.zero
        for g in grades:
            out = grade_add(self, out, g)
        return out

    def neg(self, g: Grade) -> Grade:
        return tuple((-v) % n for v, n in zip(self.check(g), self.cyclic_orders))

    def scale(self, k: int, g: Grade) -> Grade:
        return tuple((k * v) % n for v, n in zip(g, self.cyclic_orders))

    def __str__(self) -> str:
        return " x ".join(f"Z{n}" for n in self.cyclic_orders)


def grade_add(G: GradingGroup, g: Grade, h: Grade) -> Grade:
    g, h = G.check(g), G.check(h)
    return tuple((a + b) % n for a, b, n in zip(g, h, G.cyclic_orders))


def format_grade(g: Grade) -> str:
    return "(" + ",".join(str(v) for v in g) + ")"


def sign_rule_epsilon(G: GradingGroup, g: Grade, h: Grade, order: int = 2) -> Scalar:
    """(-1)^<g,h> on Z_2^n, with <g,h> = sum g_i h_i."""
    if not G.is_elementary_2():
        raise UnsupportedGroupError(f"the sign rule needs Z2^n, got {G}")
    g, h = G.check(g), G.check(h)
    dot = sum(a * b for a, b in zip(g, h))
    return scalar(-1 if dot % 2 else 1, order)


@dataclass(frozen=True)
class GroupAutomorphism:
    """An automorphism given by the images of the standard generators."""

    group: GradingGroup
    images: tuple[Grade, ...]

    def __post_init__(self):
        G = self.group
        images = tuple(G.check(img) for img in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != G.rank:
            raise InvalidGradeError(f"need {G.rank} generator images, got {len(images)}")
        for n, img in zip(G.cyclic_orders, images):
            if G.scale(n, img) != G.zero:
                raise InvalidGradeError(f"image {img} has order not dividing {n}")
        elements = G.elements(max_size=G.size)
        mapped = {self(g) for g in elements}
        if len(mapped) != len(elements):
            raise InvalidGradeError(f"generator images {images} do not give a bijection")
        for g in elements:
            for h in elements:
                if self(G.add(g, h)) != G.add(self(g), self(h)):
                    raise InvalidGradeError(f"generator images {images} are not additive")

    def __call__(self, g: Grade) -> Grade:
        G = self.group
        out = G.zero
        for coeff, img in zip(g, self.images):
            out = tuple((a + coeff * b) % n for a, b, n in zip(out, img, G.cyclic_orders))
        return out

    def is_identity(self) -> bool:
        return all(self(g) == g for g in self.group.elements(max_size=self.group.size))


def enumerate_automorphisms(
    G: GradingGroup, max_size: int = DEFAULT_MAX_GROUP_SIZE, budget: int = 10**6
) -> list[GroupAutomorphism]:
    """Every automorphism of G, by brute force over generator images."""
    elements = G.elements(max_size=max_size)
    candidates = [
        [x for x in elements if G.scale(n, x) == G.zero] for n in G.cyclic_orders
    ]
    total = 1
    for c in candidates:
        total *= len(c)
    if total > budget:
        raise SizeLimitError(f"{total} candidate image tuples exceed the budget {budget}")

    found = []
    for images in itertools.product(*candidates):
        mapped = set()
        ok = True
        for g in elements:
            out = G.zero
            for coeff, img in zip(g, images):
                out = tuple((a + coeff * b) % n for a, b, n in zip(out, img, G.cyclic_orders))
            if out in mapped:
                ok = False
                break
            mapped.add(out)
        if ok:
            found.append(GroupAutomorphism(G, images))
    return found
