"""Degree-zero three-point functions and the induced Frobenius ring.

For an orbifold line the three-point function at map degree zero is
combinatorial: it is the pairing when the unit is inserted, and
``1/order`` when three sectors at the same special point have twists
summing to 0 modulo the order with total degree 1.  For the
Landau-Ginzburg spaces the nonzero three-point values are fixed tables.

Products are recovered from three-point values through the inverse
pairing::

    a * b = sum_{mu,nu} <a, b, mu> eta^{mu nu} nu

In all six theories every product of basis elements is a rational
multiple of a single basis element; the table builder checks this.
"""

from __future__ import annotations

from fractions import Fraction

from .statespace import StateSpace

__all__ = [
    "ProductTable",
    "build_product_table",
    "check_associativity",
    "check_frobenius_property",
    "cr_three_point",
    "fjrw_three_point",
    "is_primitive",
    "product",
]


def cr_three_point(space: StateSpace, a, b, c) -> Fraction:
    """Degree-zero three-point value on an orbifold line.

    Nonzero cases: a unit insertion gives the pairing of the other two;
    three same-point twisted sectors with degrees summing to 1 give the
    reciprocal of the isotropy order.
    """
    if not space.is_gw:
        raise ValueError("cr_three_point only applies to orbifold-line spaces")
    ea, eb, ec = (space.element(v) for v in (a, b, c))
    for unit, rest in ((ea, (eb, ec)), (eb, (ea, ec)), (ec, (ea, eb))):
        if unit.id == space.unit_id:
            return space.eta(rest[0].id, rest[1].id)
    trio = (ea, eb, ec)
    if any(e.id == space.elements[space.top_id].id for e in trio):
        # a point-class insertion forces the other degrees to sum to 0
        return Fraction(0)
    supports = {e.support for e in trio}
    if len(supports) != 1:
        return Fraction(0)
    if ea.degree + eb.degree + ec.degree != 1:
        return Fraction(0)
    return Fraction(1, ea.order)


_FJRW_THREE_POINT = {
    # complete lists of nonzero three-point values, as unordered triples
    "fjrw:p8": [
        (("1", "1", "exyz"), Fraction(1)),
        (("1", "ex", "eyz"), Fraction(1)),
        (("1", "ey", "exz"), Fraction(1)),
        (("1", "ez", "exy"), Fraction(1)),
        (("ex", "ey", "ez"), Fraction(1)),
    ],
    "fjrw:x9t": [
        (("e4", "e4", "e8"), Fraction(1)),
        (("e4", "e1", "e11"), Fraction(1)),
        (("e4", "e2", "e10"), Fraction(1)),
        (("e4", "e5", "e7"), Fraction(1)),
        (("e4", "xe0", "xe0"), Fraction(-1, 2)),
        (("e1", "e1", "e2"), Fraction(-2)),
        (("e1", "e5", "e10"), Fraction(1)),
        (("e5", "e5", "xe0"), Fraction(1)),
    ],
    "fjrw:j10t": [
        (("e2", "e2", "e10"), Fraction(1)),
        (("e2", "e1", "e11"), Fraction(1)),
        (("e2", "e4", "e8"), Fraction(1)),
        (("e2", "e5", "e7"), Fraction(1)),
        (("e2", "ze0", "ze6"), Fraction(-1, 2)),
        (("ze6", "e1", "e1"), Fraction(1)),
        (("ze0", "e1", "e7"), Fraction(1)),
        (("ze0", "ze0", "e8"), Fraction(-1, 2)),
        (("e1", "e5", "e8"), Fraction(1)),
    ],
}


def fjrw_three_point(space: StateSpace, a, b, c, broad_sign: int = 1) -> Fraction:
    """Three-point value of a Landau-Ginzburg space from its fixed table.

    ``broad_sign = -1`` rescales every broad basis vector by -1, which
    negates exactly the entries with an odd number of broad insertions.
    """
    if space.is_gw:
        raise ValueError("fjrw_three_point only applies to Landau-Ginzburg spaces")
    if broad_sign not in (1, -1):
        raise ValueError("broad_sign must be +1 or -1")
    ea, eb, ec = (space.element(v) for v in (a, b, c))
    key = tuple(sorted((ea.label, eb.label, ec.label)))
    table = {tuple(sorted(k)): v for k, v in _FJRW_THREE_POINT[space.theory]}
    value = table.get(key, Fraction(0))
    if broad_sign == -1:
        broads = sum(1 for e in (ea, eb, ec) if e.broad)
        if broads % 2 == 1:
            value = -value
    return value


class ProductTable:
    """Symmetrized three-point values and single-term products of a space.

    Attributes
    ----------
    three_point:
        Map from a sorted id-triple to its (possibly zero) value; only
        nonzero entries are stored.
    product:
        Map from a sorted id-pair ``(a, b)`` to ``(coefficient, id)`` with
        ``a * b = coefficient * element`` (absent pairs multiply to zero).
    """

    def __init__(self, space: StateSpace, broad_sign: int = 1):
        self.space = space
        self.broad_sign = broad_sign
        self.three_point: dict[tuple[int, int, int], Fraction] = {}
        self.product: dict[tuple[int, int], tuple[Fraction, int]] = {}
        self._build()

    def _raw_three_point(self, a: int, b: int, c: int) -> Fraction:
        if self.space.is_gw:
            return cr_three_point(self.space, a, b, c)
        return fjrw_three_point(self.space, a, b, c, self.broad_sign)

    def _build(self) -> None:
        n = self.space.dimension
        for a in range(n):
            for b in range(a, n):
                for c in range(b, n):
                    v = self._raw_three_point(a, b, c)
                    if v != 0:
                        self.three_point[(a, b, c)] = v
        for a in range(n):
            for b in range(a, n):
                vec = {}
                for (mu, nu, w) in self.space.eta_inverse_pairs():
                    t = self.lookup(a, b, mu)
                    if t != 0:
                        vec[nu] = vec.get(nu, Fraction(0)) + t * w
                vec = {k: v for k, v in vec.items() if v != 0}
                if len(vec) > 1:
                    raise ValueError(
                        f"product of {a} and {b} in {self.space.theory} is not "
                        "a multiple of a single basis element"
                    )
                if vec:
                    ((nu, coef),) = vec.items()
                    self.product[(a, b)] = (coef, nu)

    # ------------------------------------------------------------------
    def lookup(self, a: int, b: int, c: int) -> Fraction:
        """Three-point value for any insertion order."""
        key = tuple(sorted((a, b, c)))
        return self.three_point.get(key, Fraction(0))

    def multiply(self, a: int, b: int) -> tuple[Fraction, int] | None:
        """``(coefficient, id)`` with ``a * b = coefficient * element``,
        or None when the product vanishes."""
        return self.product.get(tuple(sorted((a, b))))


def build_product_table(space: StateSpace, broad_sign: int = 1) -> ProductTable:
    """Build and return the full ring table of a state space."""
    return ProductTable(space, broad_sign)


def product(space: StateSpace, a, b, table: ProductTable | None = None) -> dict[int, Fraction]:
    """Product of two basis elements as a sparse vector ``{id: coefficient}``."""
    table = table if table is not None else build_product_table(space)
    got = table.multiply(space.element(a).id, space.element(b).id)
    return {} if got is None else {got[1]: got[0]}


def is_primitive(space: StateSpace, a, table: ProductTable | None = None) -> bool:
    """True when the element is not a product of two positive-degree elements.

    Derived from the product table alone, independently of the static flag
    stored on the basis element.
    """
    table = table if table is not None else build_product_table(space)
    e = space.element(a)
    if e.degree == 0 or e.degree == 1 and e.id == space.top_id and space.is_gw:
        return False
    if e.degree == 0:
        return False
    for (x, y), (coef, target) in table.product.items():
        if target != e.id or coef == 0:
            continue
        ex, ey = space.elements[x], space.elements[y]
        if ex.degree > 0 and ey.degree > 0:
            return False
    return True


def check_associativity(table: ProductTable) -> None:
    """Raise if ``(a*b)*c != a*(b*c)`` anywhere in the basis."""
    space = table.space
    n = space.dimension
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left: dict[int, Fraction] = {}
                ab = table.multiply(a, b)
                if ab is not None:
                    coef, m = ab
                    mc = table.multiply(m, c)
                    if mc is not None:
                        left[mc[1]] = coef * mc[0]
                right: dict[int, Fraction] = {}
                bc = table.multiply(b, c)
                if bc is not None:
                    coef, m = bc
                    am = table.multiply(a, m)
                    if am is not None:
                        right[am[1]] = coef * am[0]
                if {k: v for k, v in left.items() if v} != {
                    k: v for k, v in right.items() if v
                }:
                    raise ValueError(
                        f"associativity fails at ({a},{b},{c}) in {space.theory}"
                    )


def check_frobenius_property(table: ProductTable) -> None:
    """Raise unless ``eta(a*b, c) == <a, b, c>`` for every basis triple."""
    space = table.space
    n = space.dimension
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = Fraction(0)
                ab = table.multiply(a, b)
                if ab is not None:
                    coef, m = ab
                    lhs = coef * space.eta(m, c)
                if lhs != table.lookup(a, b, c):
                    raise ValueError(
                        f"Frobenius property fails at ({a},{b},{c}) in {space.theory}"
                    )
