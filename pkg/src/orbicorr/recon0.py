"""Genus-0 correlator reconstruction from ring data and a minimal seed set.

A *key* is a multiset of basis insertions plus (for orbifold lines) a map
degree.  Keys reduce first by the universal rules:

* a unit insertion kills everything except the three-point pairing at
  degree zero (string rule);
* a point-class insertion in a four-or-more-point orbifold-line key pulls
  out one factor of the degree (divisor rule);
* a key whose insertion degrees do not sum to ``n - 2`` vanishes
  (dimension/selection rule);
* three-point keys at degree zero are ring constants;
* a Landau-Ginzburg key whose orbifold line degrees are fractional has no
  curves to count and vanishes (empty-moduli rule).  The boundary
  identities alone cannot see these zeros, so the rule is load-bearing:
  without it the identity system is genuinely underdetermined.

What remains is an *atomic* key.  Atomic keys are derived from boundary
identities of four-pointed rational curves (associativity identities):
for a quadruple ``(g1, g2, g3, g4)``, spectators ``S`` and degree ``d``::

    E(g1,g2;g3,g4) = E(g1,g3;g2,g4)

    E(a,b;c,e) = sum over splits S = A + B, degrees i + j = d, and node
                 decorations (mu, nu):
                 <a, b, A, mu>_i  eta^{mu nu}  <nu, B, c, e>_j

The engine picks, per key, a deterministic list of candidate instances in
which the key occurs, evaluates all other terms recursively, and solves
the resulting affine relation exactly.  Mutual recursion between keys is
handled symbolically: a revisited in-progress key contributes a formal
unknown, and the chain of affine forms is eliminated exactly as the
evaluation stack unwinds.  If every candidate degenerates, the engine
falls back to solving the full identity system at the key's caps.

The independent oracle :func:`solve_system` builds *every* identity within
caps and solves the lot by exact sparse elimination, sharing nothing with
the per-key rewrite strategy except the identity generator itself.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactnum import QSeries
from .frobenius import ProductTable, build_product_table
from .statespace import StateSpace, build_space
from .wstructure import grr_value_or_zero, line_bundle_degrees

__all__ = [
    "CapExceeded",
    "Engine",
    "Inconsistent",
    "Irreducible",
    "Underdetermined",
    "admissible_keys",
    "build_engine",
    "classify",
    "correlator",
    "default_seeds",
    "fjrw_top_series",
    "identity_precheck",
    "identity_terms",
    "reduce_key",
    "solve_system",
    "three_point_series",
    "wdvv_rhs",
]

Key = tuple[tuple[int, ...], "int | None"]


class CapExceeded(ValueError):
    """A requested key lies outside the engine's configured caps."""


class Irreducible(RuntimeError):
    """Every candidate identity degenerated and fallback was disabled."""


class Underdetermined(RuntimeError):
    """The identity system within caps does not pin down every unknown."""

    def __init__(self, unknowns):
        super().__init__(f"{len(unknowns)} unknowns undetermined")
        self.unknowns = list(unknowns)


class Inconsistent(RuntimeError):
    """The identity system within caps contradicts itself."""


class _Nonlinear(Exception):
    """Internal: a candidate identity multiplied two unresolved unknowns."""


_CONST = None  # dictionary key of the constant part of an affine form


def _aff_const(c: Fraction) -> dict:
    return {_CONST: c} if c else {}


def _aff_add(a: dict, b: dict, scale: Fraction = Fraction(1)) -> None:
    for k, v in b.items():
        nv = a.get(k, Fraction(0)) + scale * v
        if nv:
            a[k] = nv
        else:
            a.pop(k, None)


def _aff_mul(a: dict, b: dict) -> dict:
    a_const = not a or (len(a) == 1 and _CONST in a)
    b_const = not b or (len(b) == 1 and _CONST in b)
    if not a_const and not b_const:
        raise _Nonlinear
    if a_const:
        scale = a.get(_CONST, Fraction(0))
        return {k: v * scale for k, v in b.items()} if scale else {}
    scale = b.get(_CONST, Fraction(0))
    return {k: v * scale for k, v in a.items()} if scale else {}


# ----------------------------------------------------------------------
# key reduction
# ----------------------------------------------------------------------

def empty_moduli(space: StateSpace, ids) -> bool:
    """True when the orbifold line degrees are fractional: no curves exist.

    Landau-Ginzburg correlators over an empty moduli problem vanish; this
    vanishing is invisible to the boundary identities, so it is applied as
    part of key reduction alongside the dimension selection rule.
    """
    degs = line_bundle_degrees(space, 0, [space.elements[i] for i in ids])
    return any(x.denominator != 1 for x in degs)


def reduce_key(space: StateSpace, table: ProductTable, ins, degree):
    """Reduce a raw key to ``('c', value)`` or ``('k', coef, key)``.

    Applies the string, divisor, selection and empty-moduli rules and folds
    three-point keys at degree zero into ring constants.  ``key`` is
    canonical: sorted insertion ids with no unit and (orbifold lines) no
    point class.
    """
    ids = sorted(space.element(v).id for v in ins)
    gw = space.is_gw
    if gw:
        if degree is None:
            raise ValueError("orbifold-line keys need a map degree")
        if degree < 0:
            return ("c", Fraction(0))
    else:
        degree = None
    if len(ids) < 3:
        raise ValueError("keys need at least three insertions")
    coef = Fraction(1)
    if space.unit_id in ids:
        if len(ids) != 3:
            return ("c", Fraction(0))
        if not gw:
            return ("c", table.lookup(*ids))
        if degree != 0:
            return ("c", Fraction(0))
        rest = list(ids)
        rest.remove(space.unit_id)
        return ("c", space.eta(rest[0], rest[1]))
    if gw:
        top = space.top_id
        while top in ids and len(ids) > 3:
            ids.remove(top)
            coef *= degree
        if coef == 0:
            return ("c", Fraction(0))
    n = len(ids)
    total = sum(space.elements[i].degree for i in ids)
    if total != n - 2:
        return ("c", Fraction(0))
    if n == 3 and (not gw or degree == 0):
        return ("c", coef * table.lookup(*ids))
    if not gw and empty_moduli(space, ids):
        return ("c", Fraction(0))
    return ("k", coef, (tuple(ids), degree))


# ----------------------------------------------------------------------
# the boundary identity
# ----------------------------------------------------------------------

def _expansion_terms(space: StateSpace, a, b, c, e, spectators, degree):
    """Terms of ``E(a,b;c,e)`` as ``(coef, (ins1, d1), (ins2, d2))``."""
    pairs = space.eta_inverse_pairs()
    spect = list(spectators)
    n_s = len(spect)
    if degree is None:
        splits = [(None, None)]
    else:
        splits = [(i, degree - i) for i in range(degree + 1)]
    for mask in range(1 << n_s):
        side_a = [spect[k] for k in range(n_s) if mask >> k & 1]
        side_b = [spect[k] for k in range(n_s) if not mask >> k & 1]
        for i, j in splits:
            for mu, nu, w in pairs:
                yield (w, ([a, b] + side_a + [mu], i), ([nu] + side_b + [c, e], j))


def identity_terms(space: StateSpace, quad, spectators, degree):
    """Terms of the full identity ``E(g1,g2;g3,g4) - E(g1,g3;g2,g4)``.

    The identity sums to zero for any quadruple, spectator multiset and
    degree; every genus-0 value in this package is derived from, and
    audited against, instances of it.
    """
    g1, g2, g3, g4 = quad
    for coef, k1, k2 in _expansion_terms(space, g1, g2, g3, g4, spectators, degree):
        yield (coef, k1, k2)
    for coef, k1, k2 in _expansion_terms(space, g1, g3, g2, g4, spectators, degree):
        yield (-coef, k1, k2)


def identity_precheck(space: StateSpace, quad, spectators) -> bool:
    """False when every term of the identity vanishes by the selection rule.

    Each term needs the insertion degrees of the quadruple and spectators,
    plus the node pair's contribution of exactly 1, to total ``len(S) + 2``.
    """
    total = sum(space.element(v).degree for v in quad)
    total += sum(space.element(v).degree for v in spectators)
    return total == len(spectators) + 1


# ----------------------------------------------------------------------
# classification of atomic keys
# ----------------------------------------------------------------------

def classify(space: StateSpace, ins, degree=None) -> str:
    """Shape class of an atomic key.

    Orbifold lines: three-point keys are ``Type2/4/6`` by the number of
    distinct special points; four-point keys are ``Type1`` (mixed points)
    or ``Type3/5`` (single point, largest/smaller isotropy order);
    five-or-more-point keys are ``Basic5``.  More than two non-primitive
    insertions always gives ``NotBasic``.  Landau-Ginzburg keys use the
    same count-based buckets.
    """
    ids = sorted(space.element(v).id for v in ins)
    if space.unit_id in ids or (space.is_gw and space.top_id in ids):
        raise ValueError("classification applies to keys without unit or point class")
    elems = [space.elements[i] for i in ids]
    nonprim = sum(1 for e in elems if not e.primitive)
    if nonprim > 2:
        return "NotBasic"
    n = len(ids)
    if n >= 5:
        return "Basic5"
    if not space.is_gw:
        return "Type1" if n == 4 else "Type6"
    supports = {e.support for e in elems}
    if n == 3:
        return {3: "Type2", 2: "Type4", 1: "Type6"}[len(supports)]
    if len(supports) > 1:
        return "Type1"
    order = elems[0].order
    max_order = max(e.order for e in space.elements)
    return "Type3" if order == max_order else "Type5"


# ----------------------------------------------------------------------
# seeds
# ----------------------------------------------------------------------

_FJRW_SEED_KEYS = {
    "fjrw:p8": [
        ("ex", "ex", "ex", "exyz"),
        ("ey", "ey", "ey", "exyz"),
        ("ez", "ez", "ez", "exyz"),
        ("ex", "ey", "ez", "exyz"),
    ],
    "fjrw:x9t": [
        ("e1", "e5", "e7", "e7"),
    ],
    "fjrw:j10t": [
        ("e8", "e8", "e8", "e10"),
        ("e1", "e1", "e4", "e10"),
        ("e1", "e8", "e5", "e10"),
    ],
}


def default_seeds(space: StateSpace, broad_sign: int = 1) -> dict[Key, Fraction]:
    """The minimal seed data beyond the ring constants.

    Orbifold lines: the degree-1 three-point value over the three distinct
    special points, normalized to 1.  Landau-Ginzburg: narrow four-point
    values computed from line-bundle index data (including the forced
    zeros of empty moduli problems).
    """
    if space.is_gw:
        ids = tuple(sorted(space.element(v).id for v in ("x1", "y1", "z1")))
        return {(ids, 1): Fraction(1)}
    seeds = {}
    for labels in _FJRW_SEED_KEYS[space.theory]:
        ids = tuple(sorted(space.element(v).id for v in labels))
        value = grr_value_or_zero(space, labels)
        if broad_sign == -1:
            broads = sum(1 for v in labels if space.element(v).broad)
            if broads % 2 == 1:
                value = -value
        seeds[(ids, None)] = value
    return seeds


# ----------------------------------------------------------------------
# the per-key rewrite engine
# ----------------------------------------------------------------------

class Engine:
    """Deterministic genus-0 correlator engine for one theory.

    Parameters
    ----------
    space, table:
        The state space and its ring table.
    n_max, d_max:
        Caps on insertions and (orbifold lines) degree for atomic keys.
    seeds:
        Seed values; defaults to :func:`default_seeds`.
    solver_fallback:
        When False, keys whose candidate identities all degenerate raise
        ``Irreducible`` instead of deferring to :func:`solve_system`.
    """

    def __init__(
        self,
        space: StateSpace,
        table: ProductTable | None = None,
        n_max: int = 6,
        d_max: int = 6,
        seeds: dict[Key, Fraction] | None = None,
        solver_fallback: bool = True,
    ):
        self.space = space
        self.table = table if table is not None else build_product_table(space)
        self.n_max = n_max
        self.d_max = d_max if space.is_gw else None
        self.seeds = (
            dict(seeds)
            if seeds is not None
            else default_seeds(space, self.table.broad_sign)
        )
        self.solver_fallback = solver_fallback
        # final results: key -> (value, rule, children)
        self.store: dict[Key, tuple[Fraction, str, tuple[Key, ...]]] = {}
        self._pending: dict[Key, tuple[dict, str, tuple[Key, ...]]] = {}
        self._onstack: list[Key] = []
        self._solved_cache: dict = {}
        self._rcache: dict = {}

    def _reduce(self, ids, degree):
        """Memoized :func:`reduce_key` over integer insertion ids."""
        ck = (tuple(sorted(ids)), degree)
        hit = self._rcache.get(ck)
        if hit is None:
            hit = reduce_key(self.space, self.table, ck[0], degree)
            self._rcache[ck] = hit
        return hit

    # -- public API -----------------------------------------------------
    def correlator(self, ins, degree=None) -> Fraction:
        """Exact correlator value of a raw key (labels, ids or elements)."""
        ids = [self.space.element(v).id for v in ins]
        red = self._reduce(ids, degree)
        if red[0] == "c":
            return red[1]
        _, coef, key = red
        return coef * self._key_value(key)

    def describe(self, ins, degree=None):
        """``(value, rule, depth)``, labelling reduction shortcuts too."""
        red = self._reduce([self.space.element(v).id for v in ins], degree)
        if red[0] == "c":
            ids = sorted(self.space.element(v).id for v in ins)
            if self.space.unit_id in ids:
                rule = "String0" if red[1] == 0 else "CRProduct"
            elif len(ids) == 3 and red[1] != 0:
                rule = "CRProduct"
            elif self.space.is_gw and self.space.top_id in ids and len(ids) > 3:
                rule = "Divisor"
            else:
                rule = "Selection0"
            return red[1], rule, 0
        _, coef, key = red
        value = coef * self._key_value(key)
        rule = "Divisor" if coef != 1 else self.store[key][1]
        return value, rule, self.depth(key)

    def depth(self, key: Key) -> int:
        """Realized derivation-chain length from the key down to seeds."""
        memo: dict[Key, int] = {}

        def walk(k: Key, guard: frozenset) -> int:
            if k in memo:
                return memo[k]
            if k in guard or k not in self.store:
                return 0
            children = self.store[k][2]
            if not children:
                memo[k] = 0
                return 0
            memo[k] = 1 + max(walk(c, guard | {k}) for c in children)
            return memo[k]

        return walk(key, frozenset())

    # -- evaluation core --------------------------------------------------
    def _key_value(self, key: Key) -> Fraction:
        if key in self.store:
            return self.store[key][0]
        ids, degree = key
        if len(ids) > self.n_max or (self.d_max is not None and degree > self.d_max):
            raise CapExceeded(
                f"key {key} exceeds caps n<={self.n_max}, d<={self.d_max}"
            )
        self._eval(key)
        self._finalize()
        if key not in self.store:
            raise RuntimeError(f"evaluation of {key} did not settle")
        return self.store[key][0]

    def _eval(self, key: Key) -> dict:
        if key in self.store:
            return _aff_const(self.store[key][0])
        if key in self._pending:
            return self._flatten(dict(self._pending[key][0]))
        if key in self._onstack:
            return {key: Fraction(1)}
        if key in self.seeds:
            self.store[key] = (self.seeds[key], "Seed", ())
            return _aff_const(self.seeds[key])
        ids, degree = key
        if len(ids) > max(self.n_max, 4) or (
            self.d_max is not None and degree > self.d_max
        ):
            raise CapExceeded(f"intermediate key {key} exceeds engine caps")
        self._onstack.append(key)
        try:
            rhs, rule, deps = self._expand(key)
        except BaseException:
            # the key could not be assigned: drop every pending relation
            # that mentions it, or they would dangle forever
            self._purge_dependents(key)
            raise
        finally:
            self._onstack.pop()
        if any(k is not _CONST for k in rhs):
            self._pending[key] = (rhs, rule, deps)
        else:
            self.store[key] = (rhs.get(_CONST, Fraction(0)), rule, deps)
        return dict(rhs)

    def _purge_dependents(self, key: Key) -> None:
        dead = {key}
        changed = True
        while changed:
            changed = False
            for k, (aff, _, _) in list(self._pending.items()):
                if k not in dead and any(r in dead for r in aff):
                    del self._pending[k]
                    dead.add(k)
                    changed = True

    def _flatten(self, aff: dict) -> dict:
        out: dict = {}
        for k, v in aff.items():
            if k is _CONST:
                _aff_add(out, {_CONST: v})
            elif k in self.store:
                _aff_add(out, _aff_const(self.store[k][0] * v))
            elif k in self._pending:
                sub = self._flatten(dict(self._pending[k][0]))
                self._pending[k] = (sub,) + self._pending[k][1:]
                _aff_add(out, sub, v)
            else:
                _aff_add(out, {k: v})
        return out

    def _finalize(self) -> None:
        assert not self._onstack
        for key in list(self._pending):
            if key not in self._pending:
                continue
            flat = self._flatten(dict(self._pending[key][0]))
            bad = [k for k in flat if k is not _CONST]
            if bad:
                raise RuntimeError(f"unresolved references {bad} for {key}")
            _, rule, deps = self._pending.pop(key)
            self.store[key] = (flat.get(_CONST, Fraction(0)), rule, deps)

    # -- candidate instances ---------------------------------------------
    def _expand(self, key: Key):
        label = classify(self.space, key[0])
        for quad, spectators, degree in self._candidates(key):
            try:
                aff, deps = self._identity_affine(quad, spectators, degree)
            except (_Nonlinear, CapExceeded, Irreducible, Underdetermined, Inconsistent):
                continue  # this instance degenerated; try the next one
            aff = self._flatten(aff)
            kappa = aff.pop(key, Fraction(0))
            if kappa == 0:
                continue  # the key cancelled out of this instance
            rhs = {k: -v / kappa for k, v in aff.items()}
            rule = self._rule_label(key, label, degree)
            deps = tuple(k for k in deps if k != key)
            return rhs, rule, deps
        if not self.solver_fallback:
            raise Irreducible(f"no productive identity found for {key}")
        value = self._solver_value(key)
        return _aff_const(value), "SolverFallback", ()

    def _rule_label(self, key: Key, label: str, instance_degree) -> str:
        if self.space.is_gw and key[1] == 0 and instance_degree == 0:
            return "WDVVd0"
        if label == "NotBasic":
            return "NonBasicSplit"
        return label

    def _identity_affine(self, quad, spectators, degree):
        total: dict = {}
        deps: set[Key] = set()
        for coef, raw1, raw2 in identity_terms(self.space, quad, spectators, degree):
            f1 = self._term_aff(raw1, deps)
            if not f1:
                continue
            f2 = self._term_aff(raw2, deps)
            if not f2:
                continue
            _aff_add(total, _aff_mul(f1, f2), coef)
        return total, sorted(deps)

    def _term_aff(self, raw, deps: set) -> dict:
        ins, d = raw
        red = self._reduce(ins, d)
        if red[0] == "c":
            return _aff_const(red[1])
        _, coef, key = red
        deps.add(key)
        sub = self._eval(key)
        return {k: coef * v for k, v in sub.items()}

    def _candidates(self, key: Key):
        ids, degree = key
        space = self.space
        if space.is_gw:
            if degree >= 1:
                if len(ids) == 3:
                    yield from self._candidates_point_class(key)
                elif len(ids) == 4 and self._dual_pair_shape(ids):
                    yield from self._candidates_dual_pair(key)
                yield from self._candidates_product(key, degree)
            else:
                supports = {space.elements[i].support for i in ids}
                if len(supports) == 1:
                    yield from self._candidates_degree_lift(key)
                    yield from self._candidates_product(key, 0)
                else:
                    yield from self._candidates_product(key, 0)
                    yield from self._candidates_degree_lift(key)
        else:
            yield from self._candidates_product(key, None)

    def _dual_pair_shape(self, ids) -> bool:
        a, b, c, d = ids
        return a == b and c == d and self.space.dual_id(a) == c

    def _primitive_ids(self):
        return [e.id for e in self.space.elements if e.primitive]

    def _candidates_point_class(self, key: Key):
        """Identities whose leading term divisor-reduces to the key."""
        ids, degree = key
        space = self.space
        used = {space.elements[i].support for i in ids}
        prims = sorted(
            self._primitive_ids(),
            key=lambda p: (space.elements[p].support in used, p),
        )
        pair_choices: list[tuple[int, int]] = []
        if len(ids) == 3:
            by_support: dict[str, list[int]] = {}
            for i in ids:
                by_support.setdefault(space.elements[i].support, []).append(i)
            shared = sorted(v for v in by_support.values() if len(v) >= 2)
            if shared:
                pair_choices.append(tuple(sorted(shared[0])[:2]))
        for g1, g2 in itertools.combinations(sorted(ids), 2):
            if (g1, g2) not in pair_choices:
                pair_choices.append((g1, g2))
        for beta in prims:
            beta_dual = space.dual_id(beta)
            for g1, g2 in pair_choices:
                rest = list(ids)
                rest.remove(g1)
                rest.remove(g2)
                yield (g1, g2, beta, beta_dual), tuple(rest), degree

    def _candidates_dual_pair(self, key: Key):
        """Same-point pair keys <g,g,g',g'>: spectators carry the low pair."""
        ids, degree = key
        space = self.space
        low, high = ids[0], ids[2]
        support = space.elements[low].support
        for beta in sorted(self._primitive_ids()):
            if space.elements[beta].support == support:
                continue
            yield (high, high, beta, space.dual_id(beta)), (low, low), degree

    def _candidates_product(self, key: Key, degree):
        """Identities exposing the key through a product factorization."""
        ids, _ = key
        space = self.space
        elems = [space.elements[i] for i in ids]
        targets = sorted(
            {e.id for e in elems if not e.primitive},
            key=lambda i: (space.elements[i].degree, i),
        )
        for m in targets:
            facts = []
            for (a, b), (coef, out) in sorted(self.table.product.items()):
                if out == m and coef != 0:
                    ea, eb = space.elements[a], space.elements[b]
                    if ea.degree > 0 and eb.degree > 0:
                        facts.append((a, b))
                        if a != b:
                            facts.append((b, a))
            facts.sort()
            rest_ids = list(ids)
            rest_ids.remove(m)
            pairs = sorted(
                set(itertools.permutations(sorted(set(rest_ids)), 2))
                | {(g, g) for g in set(rest_ids) if rest_ids.count(g) >= 2}
            )
            for a, b in facts:
                for g1, g2 in pairs:
                    spect = list(rest_ids)
                    spect.remove(g1)
                    spect.remove(g2)
                    yield (g1, g2, a, b), tuple(spect), degree

    def _candidates_degree_lift(self, key: Key):
        """Degree-1 identities exposing a degree-0 key at a node."""
        ids, _ = key
        space = self.space
        exposed = sorted(set(ids), key=lambda i: (-space.elements[i].degree, i))
        used = {space.elements[i].support for i in ids}
        positive = [
            e for e in space.elements if e.degree > 0 and e.id != space.top_id
        ]
        for t_star in exposed:
            target_deg = space.elements[t_star].degree
            pairs = []
            for ea, eb in itertools.combinations_with_replacement(positive, 2):
                if ea.degree + eb.degree == target_deg:
                    off = ea.support not in used and eb.support not in used
                    prim = ea.primitive and eb.primitive
                    pairs.append((not (off and prim), ea.id, eb.id))
            pairs.sort()
            rest_ids = list(ids)
            rest_ids.remove(t_star)
            tail_pairs = sorted(set(itertools.combinations(sorted(rest_ids), 2)))
            for _, g1, g2 in pairs:
                for g3, g4 in tail_pairs:
                    spect = list(rest_ids)
                    spect.remove(g3)
                    spect.remove(g4)
                    yield (g1, g2, g3, g4), tuple(spect), 1

    # -- solver fallback ---------------------------------------------------
    def _solver_value(self, key: Key) -> Fraction:
        ids, degree = key
        n_cap = max(len(ids), 4)
        if degree is None:
            d_cap = None
        else:
            # solve the whole degree range once; later fallbacks hit the cache
            d_cap = max(degree, 1, self.d_max if self.d_max is not None else 1)
        cached = self._solved_cache.get(n_cap)
        if cached is None or (d_cap is not None and cached[0] < d_cap):
            solved = solve_system(
                self.space,
                n_max=n_cap,
                d_max=d_cap,
                seeds=self.seeds,
                table=self.table,
            )
            cached = (d_cap if d_cap is not None else 0, solved)
            self._solved_cache[n_cap] = cached
        return cached[1][key]


def build_engine(
    theory: "str | StateSpace",
    n_max: int = 6,
    d_max: int = 6,
    broad_sign: int = 1,
    seeds: dict[Key, Fraction] | None = None,
    solver_fallback: bool = True,
) -> Engine:
    """Convenience constructor resolving a theory id to an engine."""
    space = theory if isinstance(theory, StateSpace) else build_space(theory)
    table = build_product_table(space, broad_sign)
    return Engine(
        space,
        table,
        n_max=n_max,
        d_max=d_max,
        seeds=seeds,
        solver_fallback=solver_fallback,
    )


def correlator(engine: Engine, ins, degree=None) -> Fraction:
    """Module-level alias of :meth:`Engine.correlator`."""
    return engine.correlator(ins, degree)


def wdvv_rhs(engine: Engine, g1, g2, g3, g4, spectators, degree=None) -> Fraction:
    """Exact residual of one boundary identity against computed values.

    Returns ``E(g1,g2;g3,g4) - E(g1,g3;g2,g4)``; a consistent value store
    gives exactly zero for every quadruple, spectator multiset and degree.
    """
    space = engine.space
    quad = [space.element(v).id for v in (g1, g2, g3, g4)]
    spect = [space.element(v).id for v in spectators]
    if space.is_gw and degree is None:
        raise ValueError("orbifold-line identities need a degree")
    total = Fraction(0)
    for coef, raw1, raw2 in identity_terms(space, quad, spect, degree):
        r1 = engine._reduce(*raw1)
        v1 = r1[1] if r1[0] == "c" else r1[1] * engine._key_value(r1[2])
        if v1 == 0:
            continue
        r2 = engine._reduce(*raw2)
        v2 = r2[1] if r2[0] == "c" else r2[1] * engine._key_value(r2[2])
        total += coef * v1 * v2
    return total


# ----------------------------------------------------------------------
# the independent oracle
# ----------------------------------------------------------------------

def admissible_keys(space: StateSpace, n_max: int, d_max: int | None):
    """All atomic keys within caps (selection-passing, no unit/point class)."""
    base = [
        e.id
        for e in space.elements
        if e.id != space.unit_id and not (space.is_gw and e.id == space.top_id)
    ]
    for n in range(3, n_max + 1):
        for combo in itertools.combinations_with_replacement(base, n):
            total = sum(space.elements[i].degree for i in combo)
            if total != n - 2:
                continue
            if space.is_gw:
                for d in range((d_max or 0) + 1):
                    if n == 3 and d == 0:
                        continue  # ring constant, not an unknown
                    yield (tuple(combo), d)
            elif n >= 4 and not empty_moduli(space, combo):
                yield (tuple(combo), None)


def solve_system(
    theory: "str | StateSpace",
    n_max: int,
    d_max: int | None = None,
    seeds: dict[Key, Fraction] | None = None,
    table: ProductTable | None = None,
) -> dict[Key, Fraction]:
    """Solve every boundary identity within caps by exact elimination.

    This is the oracle route: it shares only the identity generator with
    the rewrite engine.  Rows accumulate products of two unknowns in a
    deferred pool retried whenever one factor gets solved.  Raises
    :class:`Underdetermined` or :class:`Inconsistent` when the system
    within caps fails to pin a unique exact solution.
    """
    space = theory if isinstance(theory, StateSpace) else build_space(theory)
    table = table if table is not None else build_product_table(space)
    seeds = dict(seeds) if seeds is not None else default_seeds(space, table.broad_sign)
    if not space.is_gw:
        d_max = None

    unknown_list = sorted(
        admissible_keys(space, n_max, d_max),
        key=lambda k: (k[1] or 0, len(k[0]), k[0]),
    )
    unknowns = set(unknown_list)
    order = {k: i for i, k in enumerate(unknown_list)}
    solved: dict[Key, Fraction] = {k: v for k, v in seeds.items() if k in unknowns}

    base = [
        e.id
        for e in space.elements
        if e.id != space.unit_id and not (space.is_gw and e.id == space.top_id)
    ]

    rcache: dict = {}

    def cached_reduce(ins, d):
        ck = (tuple(sorted(ins)), d)
        hit = rcache.get(ck)
        if hit is None:
            hit = reduce_key(space, table, ck[0], d)
            rcache[ck] = hit
        return hit

    def build_row(quad, spect, d):
        lin: dict[Key, Fraction] = {}
        const = Fraction(0)
        nonlin = []
        for coef, raw1, raw2 in identity_terms(space, quad, spect, d):
            r1 = cached_reduce(*raw1)
            if r1[0] == "c" and r1[1] == 0:
                continue
            r2 = cached_reduce(*raw2)
            if r2[0] == "c" and r2[1] == 0:
                continue
            if r1[0] == "c" and r2[0] == "c":
                const += coef * r1[1] * r2[1]
            elif r1[0] == "c":
                _aff_add(lin, {r2[2]: coef * r1[1] * r2[1]})
            elif r2[0] == "c":
                _aff_add(lin, {r1[2]: coef * r1[1] * r2[1]})
            else:
                nonlin.append((coef * r1[1] * r2[1], r1[2], r2[2]))
        return lin, const, nonlin

    rows = []
    degrees = [None] if not space.is_gw else list(range((d_max or 0) + 1))
    # spectator multisets run one size past the cap: such identities can
    # still be fully in-cap after reduction (point-class insertions strip),
    # and some keys are pinned only by them.  Rows touching out-of-cap
    # unknowns are discarded.
    for size in range(n_max - 1):
        for spect in itertools.combinations_with_replacement(base, size):
            for a, b, c, e in itertools.combinations_with_replacement(base, 4):
                if not identity_precheck(space, (a, b, c, e), spect):
                    continue
                for quad in {(a, b, c, e), (a, e, b, c)}:
                    for d in degrees:
                        lin, const, nonlin = build_row(quad, spect, d)
                        touched = set(lin)
                        for _, k1, k2 in nonlin:
                            touched.add(k1)
                            touched.add(k2)
                        if any(k not in unknowns for k in touched):
                            continue
                        if lin or nonlin or const:
                            rows.append((lin, const, nonlin))

    def substitute(row):
        lin, const, nonlin = row
        new_lin: dict[Key, Fraction] = {}
        for k, v in lin.items():
            if k in solved:
                const += v * solved[k]
            else:
                _aff_add(new_lin, {k: v})
        new_nonlin = []
        for coef, k1, k2 in nonlin:
            v1 = solved.get(k1)
            v2 = solved.get(k2)
            if v1 is not None and v2 is not None:
                const += coef * v1 * v2
            elif v1 is not None:
                _aff_add(new_lin, {k2: coef * v1})
            elif v2 is not None:
                _aff_add(new_lin, {k1: coef * v2})
            else:
                new_nonlin.append((coef, k1, k2))
        return new_lin, const, new_nonlin

    progress = True
    while progress:
        progress = False
        pivots: dict[Key, tuple[dict, Fraction]] = {}
        next_rows = []
        for row in rows:
            lin, const, nonlin = substitute(row)
            if nonlin:
                next_rows.append((lin, const, nonlin))
                continue
            while lin:
                head = min(lin, key=lambda k: order[k])
                if head not in pivots:
                    inv = 1 / lin.pop(head)
                    pivots[head] = (
                        {k: v * inv for k, v in lin.items()},
                        -const * inv,
                    )
                    break
                tail, value = pivots[head]
                factor = lin.pop(head)
                _aff_add(lin, tail, -factor)
                const += factor * value
            else:
                if const != 0:
                    raise Inconsistent(f"identity row reduces to {const} = 0")
        # back-substitute pivot relations whose tails are fully solved
        changed = True
        while changed:
            changed = False
            for head, (tail, value) in pivots.items():
                if head in solved:
                    continue
                if all(k in solved for k in tail):
                    solved[head] = value - sum(v * solved[k] for k, v in tail.items())
                    changed = True
                    progress = True
        # carry unsolved pivot relations into the next pass as plain rows
        for head, (tail, value) in pivots.items():
            if head not in solved:
                lin = dict(tail)
                lin[head] = Fraction(1)
                next_rows.append((lin, -value, []))
        rows = next_rows
        if all(k in solved for k in unknowns):
            break

    missing = [k for k in unknown_list if k not in solved]
    if missing:
        raise Underdetermined(missing)
    return solved


# ----------------------------------------------------------------------
# series helpers
# ----------------------------------------------------------------------

def three_point_series(
    theory, a, b, c, order: int, engine: Engine | None = None
) -> QSeries:
    """Degree series ``sum_d <a, b, c>_d q^d`` up to (exclusive) ``order``."""
    eng = (
        engine
        if engine is not None
        else build_engine(theory, n_max=4, d_max=max(order - 1, 1))
    )
    coeffs = {d: eng.correlator([a, b, c], d) for d in range(order)}
    return QSeries(coeffs, order)


def fjrw_top_series(
    singularity, insertions, count_max: int, engine: Engine | None = None
):
    """Values with 0..count_max extra top-element insertions appended."""
    theory = (
        singularity if str(singularity).startswith("fjrw") else f"fjrw:{singularity}"
    )
    ins = list(insertions)
    eng = (
        engine
        if engine is not None
        else build_engine(theory, n_max=len(ins) + count_max)
    )
    top = eng.space.elements[eng.space.top_id].label
    return [eng.correlator(ins + [top] * m) for m in range(count_max + 1)]
