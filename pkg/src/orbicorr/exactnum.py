"""Exact rational numbers and truncated power series over them.

All quantitative results in this package are exact: values are
:class:`fractions.Fraction` instances end to end, and series are sparse
polynomials in a single formal variable ``q`` carried together with an
explicit truncation order.  No floating point enters any computation.

The canonical text form of a rational is ``"p/q"`` in lowest terms with the
sign on the numerator, or ``"p"`` when the denominator is 1.  This form is
used by the JSON cache and the command-line interface.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Q",
    "QSeries",
    "parse_rational",
    "render_rational",
]

#: Alias for the exact rational type used throughout the package.
Q = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse the canonical ``"p/q"`` (or ``"p"``) form into a rational.

    Parameters
    ----------
    text:
        A string such as ``"-5/36"``, ``"1/3"`` or ``"7"``.  Whitespace
        around the string is tolerated; anything else raises ``ValueError``.

    Returns
    -------
    Fraction
        The exact rational value.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a string, got {type(text).__name__}")
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty rational literal")
    try:
        value = Fraction(stripped)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc
    if value.denominator == 0:  # pragma: no cover - Fraction already raises
        raise ValueError(f"zero denominator in {text!r}")
    return value


def render_rational(value: Fraction | int) -> str:
    """Render a rational in the canonical ``"p/q"`` / ``"p"`` text form."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QSeries:
    """A truncated sparse power series ``sum_d c_d q^d`` with exact coefficients.

    The series is known for all degrees ``d < order``; coefficients at or
    beyond ``order`` are unknown (not zero).  Arithmetic therefore truncates
    to the minimum order of the operands.

    Parameters
    ----------
    coeffs:
        Mapping from non-negative integer degree to coefficient.  Zero
        coefficients are dropped; degrees at or beyond ``order`` are
        rejected.
    order:
        Exclusive truncation order; must be a positive integer.
    """

    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs: Mapping[int, Fraction | int], order: int):
        if not isinstance(order, int) or order <= 0:
            raise ValueError(f"truncation order must be a positive integer, got {order!r}")
        table: dict[int, Fraction] = {}
        for degree, coeff in coeffs.items():
            if not isinstance(degree, int) or degree < 0:
                raise ValueError(f"series degree must be a non-negative integer, got {degree!r}")
            if degree >= order:
                raise ValueError(f"degree {degree} is not below the truncation order {order}")
            value = Fraction(coeff)
            if value != 0:
                table[degree] = value
        self._coeffs = table
        self._order = order

    # ------------------------------------------------------------------
    # basic access
    # ------------------------------------------------------------------
    @property
    def order(self) -> int:
        """Exclusive truncation order of the series."""
        return self._order

    def coefficient(self, degree: int) -> Fraction:
        """Coefficient of ``q**degree``; raises if the degree is truncated away."""
        if degree >= self._order:
            raise ValueError(f"degree {degree} exceeds truncation order {self._order}")
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        return self._coeffs.get(degree, Fraction(0))

    def coefficients(self) -> list[Fraction]:
        """All known coefficients as a dense list ``[c_0, ..., c_{order-1}]``."""
        return [self._coeffs.get(d, Fraction(0)) for d in range(self._order)]

    def items(self) -> list[tuple[int, Fraction]]:
        """Sorted ``(degree, coefficient)`` pairs of the nonzero terms."""
        return sorted(self._coeffs.items())

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Fraction | int | str]) -> "QSeries":
        """Build a series from a dense coefficient list ``[c_0, c_1, ...]``."""
        dense = list(coeffs)
        if not dense:
            raise ValueError("a series needs at least one coefficient")
        table = {
            d: parse_rational(c) if isinstance(c, str) else Fraction(c)
            for d, c in enumerate(dense)
        }
        return cls(table, order=len(dense))

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        """The zero series at the given truncation order."""
        return cls({}, order=order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        """The constant series 1 at the given truncation order."""
        return cls({0: Fraction(1)}, order=order)

    # ------------------------------------------------------------------
    # arithmetic (results truncate to the minimum operand order)
    # ------------------------------------------------------------------
    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self._order, other._order)
        table: dict[int, Fraction] = {}
        for degree in set(self._coeffs) | set(other._coeffs):
            if degree >= order:
                continue
            table[degree] = self._coeffs.get(degree, Fraction(0)) + other._coeffs.get(
                degree, Fraction(0)
            )
        return QSeries(table, order)

    def __neg__(self) -> "QSeries":
        return QSeries({d: -c for d, c in self._coeffs.items()}, self._order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "QSeries | Fraction | int") -> "QSeries":
        if isinstance(other, (Fraction, int)):
            return QSeries(
                {d: c * other for d, c in self._coeffs.items()}, self._order
            )
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self._order, other._order)
        table: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                degree = d1 + d2
                if degree >= order:
                    continue
                table[degree] = table.get(degree, Fraction(0)) + c1 * c2
        return QSeries(table, order)

    def __rmul__(self, other: "Fraction | int") -> "QSeries":
        if isinstance(other, (Fraction, int)):
            return self * other
        return NotImplemented

    # ------------------------------------------------------------------
    # comparison and display
    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._order, tuple(sorted(self._coeffs.items()))))

    def is_zero(self) -> bool:
        """True if every known coefficient vanishes."""
        return not self._coeffs

    def __repr__(self) -> str:
        if not self._coeffs:
            body = "0"
        else:
            parts = []
            for degree, coeff in self.items():
                text = render_rational(coeff)
                if degree == 0:
                    parts.append(text)
                elif degree == 1:
                    parts.append(f"{text}*q")
                else:
                    parts.append(f"{text}*q^{degree}")
            body = " + ".join(parts)
        return f"QSeries({body} + O(q^{self._order}))"
