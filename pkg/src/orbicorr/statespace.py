"""Graded state spaces for six elliptic-curve-like quantum theories.

Three spaces are the orbifold cohomology of a projective line with three
special points whose isotropy orders are ``(3,3,3)``, ``(4,4,2)`` or
``(6,3,2)``.  Each has a basis made of the untwisted unit ``1``, twisted
sectors attached to the three special points (``x1..x{p-1}`` at the first
point, and so on), and the degree-1 point class ``P``.

The other three are Landau-Ginzburg state spaces of three cubic-type
singularities with all weights 1/3, here called ``p8``, ``x9t`` and
``j10t``.  Their sectors are indexed by diagonal group elements; a sector is
*broad* when some coordinate of the group element acts trivially.  Degrees,
pairings and the group data are fixed tables.

Every number is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import render_rational

__all__ = [
    "ALL_THEORIES",
    "BasisElement",
    "StateSpace",
    "UnsupportedTarget",
    "build_fjrw_space",
    "build_gw_space",
    "build_space",
]


class UnsupportedTarget(ValueError):
    """Raised when a theory identifier is not one of the six supported ones."""


GW_THEORIES = ("gw:p333", "gw:p442", "gw:p632")
FJRW_THEORIES = ("fjrw:p8", "fjrw:x9t", "fjrw:j10t")
ALL_THEORIES = GW_THEORIES + FJRW_THEORIES

_GW_ORDERS = {
    "gw:p333": (3, 3, 3),
    "gw:p442": (4, 4, 2),
    "gw:p632": (6, 3, 2),
}


@dataclass(frozen=True)
class BasisElement:
    """One basis vector of a state space.

    Attributes
    ----------
    id:
        Position in the basis (0-based, also the row index of the pairing).
    label:
        Short text name used by the CLI and the JSON cache.
    support:
        For orbifold-line spaces: which special point carries the sector
        (``"x"``, ``"y"``, ``"z"``) or ``"untwisted"`` for ``1`` and ``P``.
        For Landau-Ginzburg spaces this is bookkeeping only.
    twist:
        Sector index: ``i`` for a twisted sector ``x{i}``; for
        Landau-Ginzburg spaces the exponent of the group generator (or the
        row number when the group is not cyclic).
    degree:
        Complex degree in ``[0, 1]``; the unit has degree 0 and the top
        element degree 1.
    order:
        Isotropy order of the supporting point (orbifold line) or the order
        of the group element (Landau-Ginzburg); 1 for the untwisted sectors.
    theta:
        Landau-Ginzburg only: the triple of rotation phases in ``[0,1)`` of
        the group element indexing the sector.  Empty for orbifold lines.
    broad:
        Landau-Ginzburg only: True when some phase is 0 (the sector keeps a
        nontrivial fixed locus).
    primitive:
        True when the element is not a product of two positive-degree
        elements.  Stored statically here; re-derived and cross-checked in
        the ring module.
    """

    id: int
    label: str
    support: str
    twist: int
    degree: Fraction
    order: int
    theta: tuple[Fraction, ...]
    broad: bool
    primitive: bool


class StateSpace:
    """A graded vector space with a nondegenerate symmetric pairing."""

    def __init__(
        self,
        theory: str,
        elements: list[BasisElement],
        pairing: list[list[Fraction]],
        group: list[tuple[Fraction, Fraction, Fraction]] | None = None,
        weights: tuple[Fraction, Fraction, Fraction] | None = None,
    ):
        self.theory = theory
        self.elements = tuple(elements)
        self.dimension = len(elements)
        self.pairing = tuple(tuple(row) for row in pairing)
        self.pairing_inverse = _invert_symmetric(self.pairing)
        self.group = tuple(group) if group is not None else ()
        self.weights = weights
        self._by_label = {e.label: e for e in elements}
        units = [e.id for e in elements if e.degree == 0]
        tops = [e.id for e in elements if e.degree == 1]
        if len(units) != 1 or len(tops) != 1:
            raise ValueError("state space must have a unique unit and a unique top element")
        self.unit_id = units[0]
        self.top_id = tops[0]
        self._duals = tuple(self._dual_of(i) for i in range(self.dimension))
        self._eta_pairs = None
        self._check_tables()

    # ------------------------------------------------------------------
    def _dual_of(self, i: int) -> int:
        partners = [j for j in range(self.dimension) if self.pairing[i][j] != 0]
        if len(partners) != 1:
            raise ValueError(f"basis element {i} must pair with exactly one partner")
        return partners[0]

    def _check_tables(self) -> None:
        n = self.dimension
        for i in range(n):
            for j in range(n):
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise ValueError("pairing must be symmetric")
                if self.pairing[i][j] != 0:
                    if self.elements[i].degree + self.elements[j].degree != 1:
                        raise ValueError("pairing must couple complementary degrees")
                ident = sum(
                    self.pairing[i][k] * self.pairing_inverse[k][j] for k in range(n)
                )
                if ident != (1 if i == j else 0):
                    raise ValueError("pairing inverse is wrong")

    # ------------------------------------------------------------------
    def element(self, ref: "int | str | BasisElement") -> BasisElement:
        """Resolve an element from its id, its label, or itself."""
        if isinstance(ref, BasisElement):
            return ref
        if isinstance(ref, int):
            return self.elements[ref]
        if ref in self._by_label:
            return self._by_label[ref]
        raise KeyError(f"no basis element {ref!r} in {self.theory}")

    def dual_id(self, i: int) -> int:
        """Id of the unique partner with a nonzero pairing against ``i``."""
        return self._duals[i]

    def eta(self, i: int, j: int) -> Fraction:
        """Pairing value between basis elements ``i`` and ``j``."""
        return self.pairing[i][j]

    def eta_inverse_pairs(self) -> tuple[tuple[int, int, Fraction], ...]:
        """All ``(mu, nu, value)`` with a nonzero inverse-pairing entry.

        This is the sum range for node insertions when a curve is split at
        a node: ``sum_{mu,nu} value * (... mu) (nu ...)``.
        """
        if self._eta_pairs is None:
            out = []
            for i in range(self.dimension):
                for j in range(self.dimension):
                    if self.pairing_inverse[i][j] != 0:
                        out.append((i, j, self.pairing_inverse[i][j]))
            self._eta_pairs = tuple(out)
        return self._eta_pairs

    @property
    def is_gw(self) -> bool:
        return self.theory in GW_THEORIES

    def theory_card(self) -> dict:
        """JSON-serializable summary of the space (for golden tests)."""
        return {
            "theory": self.theory,
            "dimension": self.dimension,
            "unit": self.elements[self.unit_id].label,
            "top": self.elements[self.top_id].label,
            "elements": [
                {
                    "id": e.id,
                    "label": e.label,
                    "support": e.support,
                    "twist": e.twist,
                    "degree": render_rational(e.degree),
                    "order": e.order,
                    "theta": [render_rational(t) for t in e.theta],
                    "broad": e.broad,
                    "primitive": e.primitive,
                }
                for e in self.elements
            ],
            "pairing": [
                [render_rational(v) for v in row] for row in self.pairing
            ],
        }

    def theory_card_json(self) -> str:
        return json.dumps(self.theory_card(), indent=2, sort_keys=True)


def _invert_symmetric(matrix: tuple[tuple[Fraction, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of a small symmetric matrix by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("pairing matrix is degenerate")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# ----------------------------------------------------------------------
# orbifold projective lines
# ----------------------------------------------------------------------

def build_gw_space(orders: tuple[int, int, int]) -> StateSpace:
    """State space of the orbifold line with isotropy orders ``(p, q, r)``.

    Basis: ``1``, then ``x1..x{p-1}`` of degree ``i/p``, ``y1..y{q-1}``,
    ``z1..z{r-1}``, then the point class ``P`` of degree 1.  The pairing is
    ``1/|s|`` between a twisted sector and its inverse twist at the same
    point, and 1 between ``1`` and ``P``.
    """
    theory = next((t for t, o in _GW_ORDERS.items() if o == tuple(orders)), None)
    if theory is None:
        raise UnsupportedTarget(f"unsupported isotropy orders {orders!r}")
    p, q, r = orders
    elements: list[BasisElement] = []

    def add(label, support, twist, degree, order, primitive):
        elements.append(
            BasisElement(
                id=len(elements),
                label=label,
                support=support,
                twist=twist,
                degree=Fraction(degree),
                order=order,
                theta=(),
                broad=False,
                primitive=primitive,
            )
        )

    add("1", "untwisted", 0, 0, 1, False)
    for support, order in (("x", p), ("y", q), ("z", r)):
        for i in range(1, order):
            add(f"{support}{i}", support, i, Fraction(i, order), order, i == 1)
    add("P", "untwisted", 0, 1, 1, False)

    n = len(elements)
    pairing = [[Fraction(0)] * n for _ in range(n)]
    for e in elements:
        if e.support == "untwisted":
            continue
        partner = next(
            f for f in elements if f.support == e.support and f.twist == e.order - e.twist
        )
        pairing[e.id][partner.id] = Fraction(1, e.order)
    unit = elements[0].id
    top = elements[-1].id
    pairing[unit][top] = pairing[top][unit] = Fraction(1)
    return StateSpace(theory, elements, pairing)


# ----------------------------------------------------------------------
# Landau-Ginzburg state spaces
# ----------------------------------------------------------------------

_THIRD = Fraction(1, 3)


def _f(*pairs) -> tuple[Fraction, ...]:
    return tuple(Fraction(a, b) for a, b in pairs)


def _p8_tables():
    """Sectors of the three-cubic singularity with its full diagonal group.

    The group is (Z/3)^3 acting coordinatewise by cube roots of unity; all
    ten-ish sectors in the state space are narrow, indexed by the eight
    group elements with no trivial phase.
    """
    rows = [
        # label, theta_x, theta_y, theta_z
        ("1", (1, 3), (1, 3), (1, 3)),
        ("ex", (2, 3), (1, 3), (1, 3)),
        ("ey", (1, 3), (2, 3), (1, 3)),
        ("ez", (1, 3), (1, 3), (2, 3)),
        ("exy", (2, 3), (2, 3), (1, 3)),
        ("exz", (2, 3), (1, 3), (2, 3)),
        ("eyz", (1, 3), (2, 3), (2, 3)),
        ("exyz", (2, 3), (2, 3), (2, 3)),
    ]
    group = [
        (Fraction(a, 3), Fraction(b, 3), Fraction(c, 3))
        for a in range(3)
        for b in range(3)
        for c in range(3)
    ]
    pairs = [("1", "exyz"), ("ex", "eyz"), ("ey", "exz"), ("ez", "exy")]
    pairing_values = {pair: Fraction(1) for pair in pairs}
    primitives = {"ex", "ey", "ez"}
    return rows, group, pairing_values, primitives


def _x9t_tables():
    """Sectors of the second singularity: cyclic group of order 12.

    The generator acts with phases ``(10/12, 4/12, 1/12)``; sector ``e{j}``
    is the ``j``-th power, and the single broad sector ``xe0`` sits at
    ``j = 6`` (phases ``(0, 0, 1/2)``).
    """
    gen = (Fraction(10, 12), Fraction(4, 12), Fraction(1, 12))
    group = [
        tuple((g * j) % 1 for g in gen) for j in range(12)
    ]
    basis_js = [1, 2, 4, 5, 6, 7, 8, 10, 11]
    labels = {6: "xe0"}
    rows = []
    for j in basis_js:
        label = labels.get(j, f"e{j}")
        rows.append((label, j, group[j]))
    pairing_values = {
        ("e1", "e11"): Fraction(1),
        ("e2", "e10"): Fraction(1),
        ("e4", "e8"): Fraction(1),
        ("e5", "e7"): Fraction(1),
        ("xe0", "xe0"): Fraction(-1, 2),
    }
    primitives = {"e1", "e5"}
    return rows, group, pairing_values, primitives


def _j10t_tables():
    """Sectors of the third singularity: group Z/3 x Z/6 (18 elements).

    Element ``(i, j)`` acts with phases ``(2j/3 mod 1, i/3, j/6)``.  The
    basis takes ``i = 1, 2`` and ``j != 3``; the two ``j = 0`` sectors are
    broad (labels ``ze0`` and ``ze6``).
    """
    group = [
        ((Fraction(2 * j, 3)) % 1, Fraction(i, 3), Fraction(j, 6))
        for i in range(3)
        for j in range(6)
    ]

    def theta(i, j):
        return ((Fraction(2 * j, 3)) % 1, Fraction(i, 3), Fraction(j, 6))

    rows = []
    for i in (1, 2):
        for j in (0, 1, 2, 4, 5):
            k = 6 * (i - 1) + j
            label = {0: "ze0", 6: "ze6"}.get(k, f"e{k}")
            rows.append((label, k, theta(i, j)))
    pairing_values = {
        ("e1", "e11"): Fraction(1),
        ("e2", "e10"): Fraction(1),
        ("e4", "e8"): Fraction(1),
        ("e5", "e7"): Fraction(1),
        ("ze0", "ze6"): Fraction(-1, 2),
    }
    primitives = {"e1", "e8"}
    return rows, group, pairing_values, primitives


def _element_order(theta: tuple[Fraction, ...]) -> int:
    order = 1
    for t in theta:
        order = order * t.denominator // _gcd(order, t.denominator)
    return order


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def build_fjrw_space(name: str) -> StateSpace:
    """Landau-Ginzburg state space for ``p8``, ``x9t`` or ``j10t``.

    Degrees are stored from the fixed tables and re-derived from the group
    phases: a narrow sector of phases ``theta`` has degree
    ``sum(theta_i - 1/3)``, a broad one ``1 + sum(theta_i - 1/3)``.
    """
    name = name.lower()
    if name == "p8":
        raw_rows, group, pairing_values, primitives = _p8_tables()
        rows = [(label, k, (tx, ty, tz)) for k, (label, tx, ty, tz) in enumerate(raw_rows)]
        rows = [
            (label, k, tuple(Fraction(a, b) for (a, b) in theta))
            for (label, k, theta) in rows
        ]
        theory = "fjrw:p8"
    elif name == "x9t":
        rows, group, pairing_values, primitives = _x9t_tables()
        theory = "fjrw:x9t"
    elif name == "j10t":
        rows, group, pairing_values, primitives = _j10t_tables()
        theory = "fjrw:j10t"
    else:
        raise UnsupportedTarget(f"unsupported singularity {name!r}")

    weights = (_THIRD, _THIRD, _THIRD)
    elements: list[BasisElement] = []
    for label, twist, theta in rows:
        broad = any(t == 0 for t in theta)
        shift = sum((t - w for t, w in zip(theta, weights)), Fraction(0))
        degree = shift + (1 if broad else 0)
        elements.append(
            BasisElement(
                id=len(elements),
                label=label,
                support="untwisted",
                twist=twist,
                degree=degree,
                order=_element_order(theta),
                theta=tuple(theta),
                broad=broad,
                primitive=label in primitives,
            )
        )
    n = len(elements)
    by_label = {e.label: e for e in elements}
    pairing = [[Fraction(0)] * n for _ in range(n)]
    for (la, lb), value in pairing_values.items():
        a, b = by_label[la].id, by_label[lb].id
        pairing[a][b] = value
        pairing[b][a] = value
    group_set = {tuple(g) for g in group}
    for e in elements:
        if tuple(e.theta) not in group_set:
            raise ValueError(f"sector {e.label} is outside the symmetry group")
    return StateSpace(theory, elements, pairing, group=group, weights=weights)


def build_space(theory: str) -> StateSpace:
    """Build any of the six supported state spaces from its identifier."""
    norm = theory.lower().replace("_", ":")
    if norm in _GW_ORDERS:
        return build_gw_space(_GW_ORDERS[norm])
    if norm.startswith("fjrw:"):
        return build_fjrw_space(norm.split(":", 1)[1])
    raise UnsupportedTarget(f"unknown theory {theory!r}")
