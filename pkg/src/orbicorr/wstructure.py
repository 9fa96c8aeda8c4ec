"""Line-bundle degrees and boundary graphs for Landau-Ginzburg 4-point values.

On a genus-``g`` curve with ``k`` orbifold marks decorated by diagonal
group elements, the ``j``-th structure line has degree::

    deg L_j = q_j * (2g - 2 + k) - sum_l theta_j(gamma_l)

with ``q_j`` the ``j``-th weight.  A non-integer degree means the moduli
problem is empty and the value is 0.  A degree >= 0 breaks concavity.
Only a line of degree <= -2 contributes; at ``(g, k) = (0, 4)`` exactly
one line is active with degree -2, and its value is computed from the
degree-2 part of an index class: a constant, one term per mark, and one
term per boundary graph.

A boundary graph splits the four marks in two pairs on two rational
components joined by a node.  Componentwise integrality on the first
component forces the node decoration; the graph counts only when that
forced decoration belongs to the symmetry group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .statespace import StateSpace

__all__ = [
    "BroadInsertion",
    "DecoratedGraph",
    "EmptyModuli",
    "NotConcave",
    "UnsupportedTarget",
    "enumerate_boundary_graphs",
    "grr_four_point",
    "line_bundle_degrees",
]


class UnsupportedTarget(ValueError):
    """The requested (genus, marks) pair is outside the supported range."""


class EmptyModuli(ArithmeticError):
    """Some line-bundle degree is not an integer: the value is zero."""


class NotConcave(ArithmeticError):
    """Some line-bundle degree is >= 0, so the index computation is invalid."""


class BroadInsertion(ValueError):
    """A broad sector was inserted where only narrow ones are allowed."""


Theta = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class DecoratedGraph:
    """One two-component boundary graph of a four-pointed rational curve.

    ``split`` lists the two pairs of mark positions; ``edge_theta`` is the
    forced node decoration on the component carrying mark 0, and
    ``edge_theta_inverse`` the decoration seen from the other component.
    """

    split: tuple[tuple[int, int], tuple[int, int]]
    edge_theta: Theta
    edge_theta_inverse: Theta


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _as_thetas(space: StateSpace, decorations) -> list[Theta]:
    out = []
    for d in decorations:
        if isinstance(d, tuple):
            out.append(tuple(Fraction(t) for t in d))
        else:
            e = space.element(d)
            if not e.theta:
                raise ValueError(f"{e.label} carries no group decoration")
            out.append(tuple(e.theta))
    return out


def line_bundle_degrees(
    space: StateSpace, genus: int, decorations
) -> tuple[Fraction, Fraction, Fraction]:
    """Degrees of the three structure lines, exact and possibly non-integral."""
    if space.is_gw:
        raise ValueError("line bundles are only defined for Landau-Ginzburg spaces")
    thetas = _as_thetas(space, decorations)
    k = len(thetas)
    degs = []
    for j, q in enumerate(space.weights):
        degs.append(q * (2 * genus - 2 + k) - sum(t[j] for t in thetas))
    return tuple(degs)


def _inverse_theta(theta: Theta) -> Theta:
    return tuple(_mod1(-t) for t in theta)


def enumerate_boundary_graphs(space: StateSpace, decorations) -> list[DecoratedGraph]:
    """All counting boundary graphs for four decorated marks.

    For each of the three ways to pair up the marks, the node decoration
    is forced componentwise by integrality on the first component:
    ``theta_j(edge) = (q_j - theta_j(a) - theta_j(b)) mod 1``.  The graph
    is kept when the forced decoration lies in the symmetry group; the
    opposite component then satisfies integrality automatically whenever
    the undegenerated four-point problem does.
    """
    thetas = _as_thetas(space, decorations)
    if len(thetas) != 4:
        raise UnsupportedTarget("boundary graphs are enumerated for four marks only")
    group = {tuple(g) for g in space.group}
    graphs = []
    for split in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        (a, b), (c, d) = split
        edge = tuple(
            _mod1(q - thetas[a][j] - thetas[b][j]) for j, q in enumerate(space.weights)
        )
        if edge not in group:
            continue
        inv = _inverse_theta(edge)
        # the far component must force the inverse decoration
        far = tuple(
            _mod1(q - thetas[c][j] - thetas[d][j]) for j, q in enumerate(space.weights)
        )
        if far != inv:
            continue
        graphs.append(DecoratedGraph(split=split, edge_theta=edge, edge_theta_inverse=inv))
    return graphs


def _index_term(theta_j: Fraction) -> Fraction:
    return Fraction(1, 12) - theta_j * (1 - theta_j) / 2


def grr_four_point(space: StateSpace, insertions) -> Fraction:
    """Genus-0 four-point value of four narrow sectors from index data.

    Raises ``BroadInsertion`` for broad inputs, ``EmptyModuli`` (value
    zero) when some line degree is non-integral, ``NotConcave`` when a
    degree is >= 0, and ``UnsupportedTarget`` unless exactly four
    insertions are given.  The result is symmetric in the insertions.
    """
    if space.is_gw:
        raise ValueError("grr_four_point only applies to Landau-Ginzburg spaces")
    elems = [space.element(v) for v in insertions]
    if len(elems) != 4:
        raise UnsupportedTarget("only the (genus 0, 4 marks) case is supported")
    for e in elems:
        if e.broad:
            raise BroadInsertion(f"{e.label} is a broad sector")
    thetas = [tuple(e.theta) for e in elems]
    degs = line_bundle_degrees(space, 0, thetas)
    if any(d.denominator != 1 for d in degs):
        raise EmptyModuli(f"non-integral line degrees {tuple(map(str, degs))}")
    if any(d >= 0 for d in degs):
        raise NotConcave(f"non-negative line degree among {tuple(map(str, degs))}")
    active = [j for j, d in enumerate(degs) if d <= -2]
    graphs = enumerate_boundary_graphs(space, thetas)
    total = Fraction(0)
    for j in active:
        q = space.weights[j]
        value = q * q / 2 - q / 2 + Fraction(1, 12)
        for t in thetas:
            value -= _index_term(t[j])
        for g in graphs:
            value += _index_term(g.edge_theta[j])
        total += value
    return total


def grr_value_or_zero(space: StateSpace, insertions) -> Fraction:
    """Like :func:`grr_four_point` but maps an empty moduli problem to 0."""
    try:
        return grr_four_point(space, insertions)
    except EmptyModuli:
        return Fraction(0)
