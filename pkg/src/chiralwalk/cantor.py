"""Clopen cylinders on the boundary Cantor set, exact dyadic arithmetic,
and Bernoulli product measures.

The boundary is modelled as the product space {0,1}^N; a cylinder is the set
of infinite bit sequences extending a finite prefix, and corresponds
one-to-one with the subtree hanging below that prefix.  Measures of cylinders
under the uniform product measure are exact dyadic rationals m / 2^n, so all
uniform-measure pairings stay in exact integer arithmetic.  The classical
middle-thirds picture is available through :func:`ternary_point` for
reporting only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .tree import check_vertex


@dataclass(frozen=True)
class Dyadic:
    """Exact dyadic rational num / 2**exp.

    Canonical form: ``exp >= 0`` and ``num`` odd whenever ``exp > 0``; zero is
    stored as (0, 0).  Construct through :meth:`make` (or the arithmetic
    operators, which canonicalize their results).
    """

    num: int
    exp: int

    @staticmethod
    def make(num: int, exp: int) -> "Dyadic":
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            return Dyadic(0, 0)
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        return Dyadic(num, exp)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic.make((self.num << (e - self.exp)) + (other.num << (e - other.exp)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __mul__(self, other: Union["Dyadic", int]) -> "Dyadic":
        if isinstance(other, int):
            return Dyadic.make(self.num * other, self.exp)
        return Dyadic.make(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def halve(self) -> "Dyadic":
        return Dyadic.make(self.num, self.exp + 1)

    def __lt__(self, other: "Dyadic") -> bool:
        e = max(self.exp, other.exp)
        return (self.num << (e - self.exp)) < (other.num << (e - other.exp))

    def __le__(self, other: "Dyadic") -> bool:
        return self == other or self < other

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def to_json(self) -> dict:
        return {"num": self.num, "exp": self.exp}

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}" if self.exp else str(self.num)


DYADIC_ZERO = Dyadic(0, 0)
DYADIC_ONE = Dyadic(1, 0)


@dataclass(frozen=True)
class Cylinder:
    """All infinite 0/1 sequences extending ``prefix`` (empty = whole boundary)."""

    prefix: str

    def __post_init__(self):
        check_vertex(self.prefix)

    @property
    def level(self) -> int:
        return len(self.prefix)

    def contains(self, other: "Cylinder") -> bool:
        return other.prefix.startswith(self.prefix)

    def disjoint(self, other: "Cylinder") -> bool:
        return not (self.contains(other) or other.contains(self))


@dataclass(frozen=True)
class ProductMeasure:
    """Product measure on {0,1}^N determined by per-coordinate weights.

    ``uniform``   : weight 1/2, 1/2 at every coordinate.
    ``bernoulli`` : weight theta on symbol 0 and 1 - theta on symbol 1,
                    identically at every coordinate.
    ``per_level`` : explicit weights for the first k coordinates, uniform
                    afterwards.
    """

    kind: str
    theta: float = 0.5
    level_thetas: tuple[float, ...] = ()

    @staticmethod
    def uniform() -> "ProductMeasure":
        return ProductMeasure("uniform")

    @staticmethod
    def bernoulli(theta: float) -> "ProductMeasure":
        if not 0.0 < theta < 1.0:
            raise ValueError(f"bernoulli weight must lie in (0, 1), got {theta}")
        return ProductMeasure("bernoulli", theta=theta)

    @staticmethod
    def per_level(*thetas: float) -> "ProductMeasure":
        if any(not 0.0 < t < 1.0 for t in thetas):
            raise ValueError("per-level weights must lie in (0, 1)")
        return ProductMeasure("per_level", level_thetas=tuple(thetas))

    def weight(self, coordinate: int, bit: str) -> float:
        """Weight of ``bit`` at the given 1-based coordinate."""
        if self.kind == "uniform":
            w0 = 0.5
        elif self.kind == "bernoulli":
            w0 = self.theta
        elif self.kind == "per_level":
            w0 = self.level_thetas[coordinate - 1] if coordinate <= len(self.level_thetas) else 0.5
        else:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        return w0 if bit == "0" else 1.0 - w0


def cylinder_measure(m: ProductMeasure, c: Cylinder) -> Union[Dyadic, float]:
    """Measure of a cylinder: the product of per-coordinate weights.

    Exact (a :class:`Dyadic`) for the uniform measure, a float otherwise.
    """
    if m.kind == "uniform":
        return Dyadic.make(1, c.level)
    value = 1.0
    for i, bit in enumerate(c.prefix, start=1):
        value *= m.weight(i, bit)
    return value


def ternary_point(prefix: str) -> float:
    """Middle-thirds coordinate of the boundary point prefix 0 0 0 ...

    Bit b_i contributes 2 * b_i * 3**-i, mapping binary coordinates onto the
    classical deleted-intervals picture of the Cantor set.
    """
    check_vertex(prefix)
    return sum(2 * int(bit) * 3.0 ** -(i + 1) for i, bit in enumerate(prefix))


def cantor_function(prefix: str) -> Dyadic:
    """Value of the devil's-staircase distribution function at the point
    ``prefix`` followed by zeros: sum of bit_i / 2**i, exactly."""
    check_vertex(prefix)
    return Dyadic.make(int(prefix, 2) if prefix else 0, len(prefix))


def is_prefix_partition(prefixes: Iterable[str]) -> bool:
    """True when the cylinders over ``prefixes`` partition the boundary."""
    ps = list(prefixes)
    if len(set(ps)) != len(ps):
        return False
    for p in ps:
        check_vertex(p)
    for i, a in enumerate(ps):
        for b in ps[i + 1:]:
            if a.startswith(b) or b.startswith(a):
                return False
    top = max((len(p) for p in ps), default=0)
    return sum(1 << (top - len(p)) for p in ps) == (1 << top)


def check_prefix_partition(prefixes: Iterable[str]) -> None:
    if not is_prefix_partition(prefixes):
        raise ValueError(f"prefixes do not form a complete prefix code: {sorted(prefixes)}")


def refine_partition(cells: list[Cylinder], level: int) -> list[tuple[Cylinder, Cylinder]]:
    """Refine a cylinder partition to the full level-n partition.

    Returns the 2**level cylinders of the given level in lexicographic order,
    each paired with the ancestor cell it refines.  Fails when the cells do
    not partition the boundary or when any cell is already finer than the
    requested level.
    """
    check_prefix_partition([c.prefix for c in cells])
    too_deep = [c for c in cells if c.level > level]
    if too_deep:
        raise ValueError(
            f"cannot refine to level {level}: cells {[c.prefix for c in too_deep]} are finer")
    if level > 30:
        raise ValueError(f"refusing to enumerate 2^{level} cylinders")
    by_prefix = {c.prefix: c for c in cells}

    def ancestor(p: str) -> Cylinder:
        for k in range(len(p) + 1):
            if p[:k] in by_prefix:
                return by_prefix[p[:k]]
        raise AssertionError("complete prefix code must cover every point")

    out = []
    for i in range(1 << level):
        p = format(i, f"0{level}b") if level else ""
        out.append((Cylinder(p), ancestor(p)))
    return out
