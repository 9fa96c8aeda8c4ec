"""Period-side sanity layer: hypergeometric series and expansion goldens.

The orbifold-line correlator series have period-integral counterparts
governed by a second-order differential equation in the deformation
coordinate.  Everything here is formal and exact:

* truncated Gauss hypergeometric series over rationals;
* the annihilator check — the distinguished period solves the (cleared)
  operator ``(s^3 + 27) u'' + 3 s^2 u' + s u`` identically, coefficient
  by coefficient in ``t = 1/s``;
* the classical terminating-series evaluation at 1 (Chu-Vandermonde),
  randomized over rational parameters;
* the pinned leading coefficients of the three-point q-expansions that
  the reconstruction engine must reproduce.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .recon0 import Engine, build_engine, three_point_series


class PoleInC(ValueError):
    """The series hits a vanishing Pochhammer denominator in range."""


def pochhammer(x: Fraction, k: int) -> Fraction:
    """Rising factorial ``x (x+1) ... (x+k-1)`` with the empty product 1."""
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


@dataclass(frozen=True)
class HSeries:
    """Truncated hypergeometric series with exact coefficients.

    ``coefficients[k]`` multiplies the k-th power of the variable; the
    recursion ``c_{k+1}/c_k = (a+k)(b+k) / ((c+k)(k+1))`` holds for every
    index with a nonzero predecessor.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    variable: str
    coefficients: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def value_at_one(self) -> Fraction:
        """Sum of coefficients: the value at 1 of a terminating series."""
        return sum(self.coefficients, Fraction(0))


def hypergeom(a, b, c, order: int, variable: str = "z") -> HSeries:
    """Exact truncation of ``2F1(a, b; c; .)`` through ``order``."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    coeffs = [Fraction(1)]
    term = Fraction(1)
    for k in range(order):
        if term == 0:
            coeffs.extend([Fraction(0)] * (order - k))
            break
        if c + k == 0:
            raise PoleInC(f"third parameter {c} hits zero at index {k + 1}")
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
        coeffs.append(term)
    return HSeries(a, b, c, variable, tuple(coeffs))


# ----------------------------------------------------------------------
# the period annihilator
# ----------------------------------------------------------------------

def period_coefficients(order: int) -> List[Fraction]:
    """Coefficients (in ``t = 1/s``) of the distinguished period.

    The period is ``-t * 2F1(1/3, 2/3; 1; -27 t^3)``, so only exponents
    ``3k + 1`` are populated.
    """
    h = hypergeom(Fraction(1, 3), Fraction(2, 3), 1, order // 3 + 1)
    out = [Fraction(0)] * (order + 1)
    for k, ck in enumerate(h.coefficients):
        m = 3 * k + 1
        if m > order:
            break
        out[m] = -ck * Fraction(-27) ** k
    return out


def pf_residual(order: int, u: Optional[Sequence] = None) -> List[Fraction]:
    """Apply the cleared period operator to a formal series in ``t = 1/s``.

    For ``u = sum a_m t^m`` the operator ``(s^3+27) u'' + 3 s^2 u' + s u``
    collects to ``(m-1)^2 a_m + 27 (m-3)(m-2) a_{m-3}`` at ``t^{m-1}``;
    the returned list holds these for ``m = 0..order``.  With the default
    series every entry is zero; a constant input leaves the zeroth entry
    alive, which is the negative control.
    """
    if order < 2:
        raise ValueError("need order >= 2 to see the operator act")
    a = list(period_coefficients(order)) if u is None else [
        Fraction(x) for x in u
    ]
    a += [Fraction(0)] * (order + 1 - len(a))

    def coef(m: int) -> Fraction:
        return a[m] if 0 <= m <= order else Fraction(0)

    return [
        (m - 1) ** 2 * coef(m) + 27 * (m - 3) * (m - 2) * coef(m - 3)
        for m in range(order + 1)
    ]


def chu_vandermonde_check(k_max: int = 10, trials: int = 20,
                          seed: int = 0) -> dict:
    """Randomized exact test of ``2F1(-k, b; c; 1) = (c-b)_k / (c)_k``."""
    rng = random.Random(seed)
    failures = []
    cases = 0
    for _ in range(trials):
        b = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        c = Fraction(rng.randint(1, 30), rng.randint(1, 12))
        for k in range(k_max + 1):
            cases += 1
            lhs = hypergeom(-k, b, c, k).value_at_one()
            rhs = pochhammer(c - b, k) / pochhammer(c, k)
            if lhs != rhs:
                failures.append({"k": k, "b": str(b), "c": str(c)})
    return {"cases": cases, "failures": failures, "pass": not failures}


# ----------------------------------------------------------------------
# pinned q-expansions
# ----------------------------------------------------------------------

# Leading three-point series coefficients the engine must reproduce.
# Entries are (insertions, pinned prefix by degree); coefficients past
# the pinned prefix are reported informationally by golden_check.
PINNED_SERIES: Dict[str, Tuple[Tuple[Tuple[str, str, str], Tuple[Fraction, ...]], ...]] = {
    "gw:p333": (
        (("x1", "y1", "z1"), (Fraction(0), Fraction(1))),
        (("x1", "x1", "x1"), (Fraction(1, 3),)),
    ),
    "gw:p442": (
        (("x1", "y1", "z1"),
         (Fraction(0), Fraction(1), Fraction(0), Fraction(0), Fraction(0),
          Fraction(2))),
        (("x2", "x1", "x1"),
         (Fraction(1, 4), Fraction(0), Fraction(0), Fraction(0),
          Fraction(1))),
    ),
    "gw:p632": (
        (("x1", "y1", "z1"),
         (Fraction(0), Fraction(1), Fraction(0), Fraction(0), Fraction(0),
          Fraction(0), Fraction(0), Fraction(2))),
        (("y1", "y1", "y1"),
         (Fraction(1, 3), Fraction(0), Fraction(0), Fraction(0),
          Fraction(0), Fraction(0), Fraction(2))),
        (("x4", "x1", "x1"),
         (Fraction(1, 6), Fraction(0), Fraction(0), Fraction(0),
          Fraction(0), Fraction(0), Fraction(1))),
    ),
}


def golden_check(theory: str, D: int, engine: Engine | None = None) -> dict:
    """Compare computed three-point degree series against pinned prefixes.

    Returns a JSON-ready report; ``pass`` is true when every pinned
    coefficient with degree <= D matches exactly.
    """
    if theory not in PINNED_SERIES:
        raise ValueError(f"no pinned series for {theory!r}")
    eng = engine if engine is not None else build_engine(
        theory, n_max=4, d_max=max(D, 1)
    )
    report = {"theory": theory, "depth": D, "series": [], "pass": True}
    for insertions, pinned in PINNED_SERIES[theory]:
        series = three_point_series(theory, *insertions, order=D + 1,
                                    engine=eng)
        computed = [series.coefficient(d) for d in range(D + 1)]
        checked = {
            d: computed[d] == pinned[d]
            for d in range(min(D + 1, len(pinned)))
        }
        ok = all(checked.values())
        report["series"].append({
            "insertions": list(insertions),
            "pinned": [str(x) for x in pinned],
            "computed": [str(x) for x in computed],
            "mismatches": [d for d, good in checked.items() if not good],
            "pass": ok,
        })
        report["pass"] = report["pass"] and ok
    return report
