"""Genus-1 primary correlators from the codimension-two boundary relation.

Getzler's relation equates a fixed integer combination of seven boundary
strata classes to zero inside the homology of the moduli of genus-1
four-pointed curves:

    12*d22 - 4*d23 - 2*d24 + 6*d34 + d03 + d04 - 2*dbeta = 0

Each stratum is a sum of decorated dual graphs: vertices carry a genus,
marked legs and (orbifold lines) a curve degree; every node contributes a
sum over inverse-pairing insertions at its two branches.  Integrating the
theory's virtual class against the relation therefore produces one linear
equation between products of genus-0 correlators and genus-1 correlators.

The only genus-1 primary correlators the dimension rule allows are powers
of the top (point) class, so picking insertion quadruples whose strata
isolate a single new such power turns the relation into a ladder: each
orbifold-line degree (respectively each extra top insertion) is solved
from the values below it.  Pulling the relation back along the map that
forgets extra marked points distributes the extra legs over all vertices
of every graph; the evaluator enumerates those distributions with their
multinomial multiplicities and lets the string/selection zeros prune.

Graph bookkeeping conventions, each validated by the reproduction tests:

* a stratum is the sum of the *distinct* graphs in its symmetry orbit,
  each with coefficient one;
* a graph with a self-node or a doubled node has a two-element
  automorphism group, so its splitting sum carries a factor 1/2;
* node insertions run over all ordered inverse-pairing pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Dict, Optional, Tuple

from .exactnum import QSeries
from .recon0 import Engine, build_engine


class MissingDependency(RuntimeError):
    """A genus-1 value of lower order is needed but not in the table."""


class DegenerateCoefficient(RuntimeError):
    """The unknown's coefficient vanished; the solve quadruple is unusable."""


# ----------------------------------------------------------------------
# stratum shape tables
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    """One of the seven codimension-two boundary classes.

    ``vertices`` lists the genus of each vertex; ``edges`` lists nodes as
    vertex-index pairs, a self-node repeating its vertex.  ``layouts``
    enumerates the distinct placements of the four fixed legs over the
    vertices (the symmetry orbit), each entry giving, per vertex, the
    tuple of fixed-leg positions it carries.  ``automorphisms`` is the
    order of the graph automorphism group fixing all legs.
    """

    name: str
    coefficient: int
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    layouts: Tuple[Tuple[Tuple[int, ...], ...], ...]
    automorphisms: int


def _pairings():
    """The three splits of four leg positions into two unordered pairs."""
    out = []
    for partner in (1, 2, 3):
        left = (0, partner)
        right = tuple(i for i in range(4) if i not in left)
        out.append((left, right))
    return tuple(out)


def _rest(taken):
    return tuple(i for i in range(4) if i not in taken)


def _build_strata() -> Tuple[Stratum, ...]:
    chain = ((0, 1), (1, 2))
    pairings = _pairings()
    # two genus-0 end vertices around a closed genus-1 vertex
    d22 = tuple((left, (), right) for left, right in pairings)
    # genus-1 vertex with one leg, middle vertex with one, end with two
    d23 = tuple(
        ((a,), (b,), _rest((a, b)))
        for a in range(4)
        for b in range(4)
        if b != a
    )
    # bare genus-1 vertex, then two legs, then the remaining two
    d24 = tuple(
        ((), mid, _rest(mid)) for mid in combinations(range(4), 2)
    )
    # bare genus-1 vertex, then one leg, then the remaining three
    d34 = tuple(((), (a,), _rest((a,))) for a in range(4))
    # self-noded genus-0 vertex with one leg, joined to the other three
    d03 = tuple(((a,), _rest((a,))) for a in range(4))
    # bare self-noded genus-0 vertex joined to all four legs
    d04 = (((), (0, 1, 2, 3)),)
    # two genus-0 vertices joined by a doubled node, two legs each
    dbeta = tuple((left, right) for left, right in pairings)
    return (
        Stratum("d22", 12, (0, 1, 0), chain, d22, 1),
        Stratum("d23", -4, (1, 0, 0), chain, d23, 1),
        Stratum("d24", -2, (1, 0, 0), chain, d24, 1),
        Stratum("d34", 6, (1, 0, 0), chain, d34, 1),
        Stratum("d03", 1, (0, 0), ((0, 0), (0, 1)), d03, 2),
        Stratum("d04", 1, (0, 0), ((0, 0), (0, 1)), d04, 2),
        Stratum("dbeta", -2, (0, 0), ((0, 1), (0, 1)), dbeta, 2),
    )


STRATA: Tuple[Stratum, ...] = _build_strata()
STRATUM_BY_NAME: Dict[str, Stratum] = {s.name: s for s in STRATA}

# quadruples whose strata isolate exactly one new all-top genus-1 value:
# for orbifold lines one quadruple serves every degree; for the
# singularities the first entry starts the ladder and the second extends
# it with extra top insertions.
SOLVE_QUADS = {
    "gw:p333": (("x2", "x2", "y1", "z1"),),
    "gw:p442": (("x3", "x2", "y1", "z1"),),
    "gw:p632": (("x5", "x2", "y1", "z1"),),
    "fjrw:p8": (("ex", "ex", "ex", "exyz"), ("ex", "eyz", "ey", "exz")),
    "fjrw:x9t": (("e1", "e5", "e7", "e7"), ("e1", "e11", "e5", "e7")),
    "fjrw:j10t": (("e8", "e8", "e8", "e10"), ("e1", "e11", "e8", "e4")),
}


# ----------------------------------------------------------------------
# graph evaluation
# ----------------------------------------------------------------------

def _compositions(total: int, parts: int):
    """Weak compositions with the multinomial count of leg set-partitions."""
    if parts == 1:
        yield (total,), 1
        return
    for first in range(total + 1):
        for rest, weight in _compositions(total - first, parts - 1):
            yield (first,) + rest, weight * comb(total, first)


def _degree_splits(total: int, parts: int):
    """Weak compositions of a curve degree over the graph vertices."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _degree_splits(total - first, parts - 1):
            yield (first,) + rest


def _g1_lookup(table, unknown, m: int, d):
    """Affine value of the all-top genus-1 correlator with m insertions.

    Returns ``(constant, unknown_coefficient)``.  Degrees of orbifold-line
    entries other than the base one-point value are derived on the fly by
    the divisor rule ``<P^m>_d = d^(m-1) <P>_d``.
    """
    key = (m, d)
    if unknown is not None and key == unknown:
        return Fraction(0), Fraction(1)
    if d is None:  # singularity theories: table is keyed by m alone
        if m in table:
            return table[m], Fraction(0)
        raise MissingDependency(f"genus-1 value for {m} insertions")
    if m > 1:
        if d == 0:
            return Fraction(0), Fraction(0)
        base, coef = _g1_lookup(table, unknown, 1, d)
        return base * d ** (m - 1), coef * d ** (m - 1)
    if (1, d) in table:
        return table[(1, d)], Fraction(0)
    raise MissingDependency(f"genus-1 one-point value at degree {d}")


def _stratum_affine(engine: Engine, stratum: Stratum, fixed, k: int,
                    total_degree, table, unknown):
    """Stratum integral as ``(constant, coefficient)`` of the unknown."""
    space = engine.space
    gw = space.is_gw
    if gw and total_degree is None:
        raise ValueError("orbifold-line strata need a total degree")
    top = space.top_id
    marks = [space.element(v).id for v in fixed]
    pairs = space.eta_inverse_pairs()
    nv = len(stratum.vertices)
    const = Fraction(0)
    coef = Fraction(0)
    aut = Fraction(1, stratum.automorphisms)
    for layout in stratum.layouts:
        base = [[marks[i] for i in layout[v]] for v in range(nv)]
        # a genus-1 vertex with any non-top leg never meets the
        # dimension rule, so the whole placement dies
        dead = any(
            g == 1 and any(i != top for i in base[v])
            for v, g in enumerate(stratum.vertices)
        )
        if dead:
            continue
        for tops, mult in _compositions(k, nv):
            weight0 = aut * mult
            for decor in product(pairs, repeat=len(stratum.edges)):
                ins = [list(b) for b in base]
                weight = weight0
                for (a, b), (mu, nu, val) in zip(stratum.edges, decor):
                    ins[a].append(mu)
                    ins[b].append(nu)
                    weight *= val
                for v in range(nv):
                    ins[v].extend([top] * tops[v])
                if any(
                    g == 1 and any(i != top for i in ins[v])
                    for v, g in enumerate(stratum.vertices)
                ):
                    continue
                splits = (
                    _degree_splits(total_degree, nv)
                    if gw
                    else ((None,) * nv,)
                )
                for dsplit in splits:
                    prefactor = weight
                    g1_key = None
                    for v in range(nv):
                        if stratum.vertices[v] == 1:
                            g1_key = (len(ins[v]), dsplit[v])
                            continue
                        value = engine.correlator(ins[v], dsplit[v])
                        if value == 0:
                            prefactor = Fraction(0)
                            break
                        prefactor *= value
                    if prefactor == 0:
                        continue
                    if g1_key is None:
                        const += prefactor
                        continue
                    c0, c1 = _g1_lookup(table, unknown, *g1_key)
                    const += prefactor * c0
                    coef += prefactor * c1
    return const, coef


def stratum_contribution(engine: Engine, stratum, fixed, extra_top_count: int,
                         total_degree=None, table=None) -> Fraction:
    """Exact integral of one stratum against the theory's class.

    ``fixed`` are the four distinguished insertions; ``extra_top_count``
    many top-class legs are distributed over the graphs in all ways.  Any
    genus-1 factor is read from ``table`` (raising ``MissingDependency``
    when absent); pass the table returned by :func:`build_g1_table`.
    """
    st = STRATUM_BY_NAME[stratum] if isinstance(stratum, str) else stratum
    const, _ = _stratum_affine(
        engine, st, fixed, extra_top_count, total_degree, table or {}, None
    )
    return const


def getzler_residual(engine: Engine, fixed, extra_top_count: int,
                     total_degree=None, table=None) -> Fraction:
    """Value of the full seven-stratum combination; zero when consistent."""
    total = Fraction(0)
    for st in STRATA:
        total += st.coefficient * stratum_contribution(
            engine, st, fixed, extra_top_count, total_degree, table
        )
    return total


# ----------------------------------------------------------------------
# the ladder solver
# ----------------------------------------------------------------------

class Genus1Solver:
    """Builds the all-top genus-1 table for one theory, order by order."""

    def __init__(self, engine: Engine):
        self.engine = engine
        self.space = engine.space
        theory = self.space.theory
        if theory not in SOLVE_QUADS:
            raise ValueError(f"no solve quadruples for {theory!r}")
        self.quads = SOLVE_QUADS[theory]
        # orbifold lines: (m, d) -> value; singularities: m -> value
        self.table: Dict = {}

    # -- shared plumbing -------------------------------------------------

    def _solve(self, quad, k, total_degree, unknown) -> Fraction:
        const = Fraction(0)
        coef = Fraction(0)
        for st in STRATA:
            c0, c1 = _stratum_affine(
                self.engine, st, quad, k, total_degree, self.table, unknown
            )
            const += st.coefficient * c0
            coef += st.coefficient * c1
        if coef == 0:
            raise DegenerateCoefficient(
                f"unknown {unknown} does not appear in the relation for {quad}"
            )
        return -const / coef

    # -- orbifold lines ---------------------------------------------------

    def _ensure_gw(self, d: int) -> None:
        for i in range(d + 1):
            if (1, i) not in self.table:
                self.table[(1, i)] = self._solve(
                    self.quads[0], 0, i + 1, (1, i)
                )

    def value_gw(self, n: int, d: int) -> Fraction:
        """``<P^n>_{1,n,d}`` via the ladder plus the divisor rule."""
        if n < 1 or d < 0:
            raise ValueError("need n >= 1 and d >= 0")
        self._ensure_gw(d)
        if n == 1:
            return self.table[(1, d)]
        if d == 0:
            return Fraction(0)
        return d ** (n - 1) * self.table[(1, d)]

    # -- singularity theories ----------------------------------------------

    def _ensure_fjrw(self, n: int) -> None:
        for m in range(1, n + 1):
            if m not in self.table:
                quad = self.quads[0] if m == 1 else self.quads[1]
                k = 0 if m == 1 else m - 2
                self.table[m] = self._solve(quad, k, None, (m, None))

    def value_fjrw(self, n: int) -> Fraction:
        """All-top genus-1 correlator with ``n`` insertions."""
        if n < 1:
            raise ValueError("need n >= 1")
        self._ensure_fjrw(n)
        return self.table[n]

    def value(self, n: int, d=None) -> Fraction:
        if self.space.is_gw:
            if d is None:
                raise ValueError("orbifold-line values need a degree")
            return self.value_gw(n, d)
        return self.value_fjrw(n)


def getzler_solve(engine_or_theory, target, table=None) -> Fraction:
    """Solve the boundary relation for one all-top genus-1 correlator.

    ``target`` is ``(n, d)`` for orbifold lines and ``n`` (or ``(n, None)``)
    for the singularity theories.  When ``table`` (a prebuilt lower-order
    table) is given, only the final linear solve is performed; otherwise a
    fresh ladder is built.
    """
    engine = (
        engine_or_theory
        if isinstance(engine_or_theory, Engine)
        else build_engine(engine_or_theory)
    )
    solver = Genus1Solver(engine)
    if table is not None:
        solver.table = dict(table)
    if isinstance(target, tuple):
        n, d = target
    else:
        n, d = target, None
    return solver.value(n, d)


def build_g1_table(engine: Engine, n_max: int, d_max=None) -> Dict:
    """Complete all-top genus-1 table up to the caps, as a plain dict.

    Orbifold lines yield ``{(n, d): value}`` for all ``n <= n_max`` and
    ``d <= d_max``; singularity theories yield ``{n: value}``.
    """
    solver = Genus1Solver(engine)
    if engine.space.is_gw:
        if d_max is None:
            raise ValueError("orbifold-line tables need a degree cap")
        return {
            (n, d): solver.value_gw(n, d)
            for n in range(1, n_max + 1)
            for d in range(d_max + 1)
        }
    return {n: solver.value_fjrw(n) for n in range(1, n_max + 1)}


def g1_series(theory, n: int, D=None, engine: Engine | None = None):
    """Genus-1 all-top values: a degree series (lines) or an n-list.

    Orbifold lines: the :class:`QSeries` ``sum_d <P^n>_{1,n,d} q^d`` with
    coefficients for ``d = 0..D``.  Singularity theories: the list of
    all-top values for 1 up to ``n`` insertions.
    """
    eng = engine if engine is not None else build_engine(theory)
    solver = Genus1Solver(eng)
    if eng.space.is_gw:
        if D is None:
            raise ValueError("orbifold-line series need a degree cap")
        coeffs = {d: solver.value_gw(n, d) for d in range(D + 1)}
        return QSeries(coeffs, D + 1)
    return [solver.value_fjrw(m) for m in range(1, n + 1)]
