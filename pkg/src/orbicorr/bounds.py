"""Empirical audit of the correlator growth estimates.

The reconstruction arguments come with explicit convergence estimates:
the maximum correlator magnitude over basis insertions is bounded by
factorial-geometric envelopes in the insertion count and curve degree.
The constants in those envelopes are existential, so this module turns
them into a regression check: compute the exact magnitude table inside
the configured caps, fit the smallest workable rational constant, and
report any entry no constant could repair.

Envelopes audited (I denotes the max magnitude at the index):

* orbifold lines, genus 0:  I(n, d) <= d^(n-5) C^(n+d-4)  for d >= 1,
  and I(n, 0) <= C^(n-4), both in range n + d >= 4;
* orbifold lines, genus 1:  I(n, d) <= d^(2n-3) C^(n+2d-2) for d >= 1,
  and I(n, 0) <= 1;
* singularity theories, genus 0:  I(K) <= C^(K-4) (K-5)!  for K >= 5;
* singularity theories, genus 1:  I(K) <= C^K K!.

Two standalone exact inequalities used inside the estimate proofs are
also checked: the convolution bound  sum_{i=1}^{d-1} i^-2 (d-i)^-2
<= 6 d^-2  and the binomial-ratio bound  sum_{i=2}^{k-2}
k(k-1) / (i(i-1)(k-i)(k-i-1)) <= 9/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Optional, Tuple

from .recon0 import Engine, build_engine
from .recon1 import Genus1Solver


@dataclass
class GrowthReport:
    """Magnitude table, fitted constant, and irreparable violations."""

    theory: str
    table: Dict[Tuple[int, int, Optional[int]], Fraction]
    fitted_C: Optional[Fraction]
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and (
            self.fitted_C is not None or not self.table
        )

    def to_json(self) -> dict:
        return {
            "theory": self.theory,
            "table": {
                f"g{g}/n{n}/" + ("-" if d is None else f"d{d}"): str(v)
                for (g, n, d), v in sorted(
                    self.table.items(),
                    key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0),
                )
            },
            "fitted_C": None if self.fitted_C is None else str(self.fitted_C),
            "violations": self.violations,
        }


# ----------------------------------------------------------------------
# magnitude tables
# ----------------------------------------------------------------------

def _max_magnitude(engine: Engine, n: int, d) -> Fraction:
    """Max |correlator| over all basis multisets of size n."""
    best = Fraction(0)
    ids = range(engine.space.dimension)
    for combo in combinations_with_replacement(ids, n):
        value = engine.correlator(combo, d)
        if value < 0:
            value = -value
        if value > best:
            best = value
    return best


def _constraints(table) -> Tuple[List[Tuple[int, Fraction]], List[dict]]:
    """Reduce each table entry to ``C**exponent >= bound`` form.

    Entries whose exponent is zero (or whose envelope involves no C at
    all) must hold outright; failures land in the violation list.
    """
    needs: List[Tuple[int, Fraction]] = []
    violations: List[dict] = []

    def push(g, n, d, exponent, bound):
        if exponent > 0:
            needs.append((exponent, bound))
        elif bound > 1:
            violations.append({
                "genus": g, "n": n, "d": d,
                "reason": f"fixed envelope exceeded: {bound} > 1",
            })

    for (g, n, d), value in table.items():
        if d is None:  # singularity theories
            if g == 0:
                if n >= 5:
                    push(g, n, d, n - 4, value / factorial(n - 5))
            else:
                push(g, n, d, n, value / factorial(n))
        else:  # orbifold lines
            if g == 0:
                if n + d < 4:
                    continue
                if d == 0:
                    push(g, n, d, n - 4, value)
                else:
                    push(g, n, d, n + d - 4,
                         value * Fraction(d) ** (5 - n))
            else:
                if d == 0:
                    push(g, n, d, 0, value)
                else:
                    push(g, n, d, n + 2 * d - 2,
                         value * Fraction(d) ** (3 - 2 * n))
    return needs, violations


def fitted_C(constraints, refine_bits: int = 20) -> Optional[Fraction]:
    """Smallest workable rational constant for ``C**e >= bound`` rows.

    Doubles from 1 until every constraint holds, then dyadically bisects
    down to ``2**-refine_bits`` and returns the passing endpoint.  With
    no constraints the answer is 1.  All comparisons are exact.
    """

    def holds(c: Fraction) -> bool:
        return all(c ** e >= b for e, b in constraints)

    if not constraints:
        return Fraction(1)
    hi = Fraction(1)
    while not holds(hi):
        hi *= 2
        if hi > Fraction(2) ** 64:
            return None
    lo = hi / 2
    if hi == 1:
        return hi
    for _ in range(refine_bits):
        mid = (lo + hi) / 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def growth_table(theory, caps: dict, engine: Engine | None = None,
                 g1_solver: Genus1Solver | None = None) -> GrowthReport:
    """Exact magnitude table within ``caps`` plus the fitted constant.

    Recognized cap keys: orbifold lines use ``n_max``/``d_max`` (genus 0)
    and ``g1_n_max``/``g1_d_max``; singularity theories use ``K_max``
    (genus 0) and ``g1_n_max``.  Absent keys skip that family; empty caps
    give an empty, vacuously passing report.
    """
    table: Dict[Tuple[int, int, Optional[int]], Fraction] = {}
    name = theory if isinstance(theory, str) else theory.space.theory
    eng = None

    def get_engine() -> Engine:
        nonlocal eng
        if eng is None:
            if engine is not None:
                eng = engine
            elif isinstance(theory, Engine):
                eng = theory
            else:
                n_need = max(caps.get("n_max", 0), caps.get("K_max", 0), 3)
                d_need = max(caps.get("d_max", 0), 1)
                eng = build_engine(theory, n_max=n_need, d_max=d_need)
        return eng

    if "n_max" in caps:  # orbifold lines, genus 0
        for n in range(3, caps["n_max"] + 1):
            for d in range(caps.get("d_max", 0) + 1):
                table[(0, n, d)] = _max_magnitude(get_engine(), n, d)
    if "K_max" in caps:  # singularity theories, genus 0
        for k in range(3, caps["K_max"] + 1):
            table[(0, k, None)] = _max_magnitude(get_engine(), k, None)
    if "g1_n_max" in caps:
        solver = g1_solver if g1_solver is not None else Genus1Solver(
            get_engine()
        )
        if solver.space.is_gw:
            for n in range(1, caps["g1_n_max"] + 1):
                for d in range(caps.get("g1_d_max", 0) + 1):
                    v = solver.value_gw(n, d)
                    table[(1, n, d)] = v if v >= 0 else -v
        else:
            for n in range(1, caps["g1_n_max"] + 1):
                v = solver.value_fjrw(n)
                table[(1, n, None)] = v if v >= 0 else -v

    needs, violations = _constraints(table)
    return GrowthReport(name, table, fitted_C(needs), violations)


# ----------------------------------------------------------------------
# standalone inequalities
# ----------------------------------------------------------------------

def inequality_checks(d_max: int = 50, k_max: int = 50) -> dict:
    """Exact verification of the two proof inequalities up to the caps."""
    failures = []
    for d in range(2, d_max + 1):
        lhs = sum(
            (Fraction(1, i * i) * Fraction(1, (d - i) * (d - i)))
            for i in range(1, d)
        )
        if lhs > Fraction(6, d * d):
            failures.append({"family": "convolution", "d": d, "lhs": str(lhs)})
    for k in range(4, k_max + 1):
        lhs = sum(
            Fraction(k * (k - 1), i * (i - 1) * (k - i) * (k - i - 1))
            for i in range(2, k - 1)
        )
        if lhs > Fraction(9, 2):
            failures.append({"family": "binomial", "k": k, "lhs": str(lhs)})
    return {
        "d_max": d_max,
        "k_max": k_max,
        "failures": failures,
        "pass": not failures,
    }
