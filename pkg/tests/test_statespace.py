"""State spaces: bases, gradings, pairings, and duality."""

import json
from fractions import Fraction

import pytest

from orbicorr.statespace import (
    FJRW_THEORIES,
    GW_THEORIES,
    UnsupportedTarget,
    build_space,
)

ALL_THEORIES = GW_THEORIES + FJRW_THEORIES

DIMENSIONS = {
    "gw:p333": 8,
    "gw:p442": 9,
    "gw:p632": 10,
    "fjrw:p8": 8,
    "fjrw:x9t": 9,
    "fjrw:j10t": 10,
}

UNIT_TOP = {
    "gw:p333": ("1", "P"),
    "gw:p442": ("1", "P"),
    "gw:p632": ("1", "P"),
    "fjrw:p8": ("1", "exyz"),
    "fjrw:x9t": ("e4", "e8"),
    "fjrw:j10t": ("e2", "e10"),
}


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_dimension(spaces, theory):
    assert spaces(theory).dimension == DIMENSIONS[theory]
    assert len(spaces(theory).elements) == DIMENSIONS[theory]


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_unit_and_top(spaces, theory):
    sp = spaces(theory)
    unit_label, top_label = UNIT_TOP[theory]
    assert sp.element(sp.unit_id).label == unit_label
    assert sp.element(sp.top_id).label == top_label
    assert sp.element(sp.unit_id).degree == 0
    assert sp.element(sp.top_id).degree == 1


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_is_gw_flag(spaces, theory):
    assert spaces(theory).is_gw == theory.startswith("gw:")


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_element_lookup_forms_agree(spaces, theory):
    sp = spaces(theory)
    for e in sp.elements:
        assert sp.element(e.id) is e
        assert sp.element(e.label) is e
        assert sp.element(e) is e


def test_element_lookup_rejects_unknown(spaces):
    sp = spaces("gw:p333")
    with pytest.raises(KeyError):
        sp.element("bogus")
    with pytest.raises(IndexError):
        sp.element(99)


def test_unknown_theory_rejected():
    with pytest.raises(UnsupportedTarget):
        build_space("gw:p555")
    with pytest.raises(UnsupportedTarget):
        build_space("fjrw:e6")


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_pairing_is_symmetric_and_dual_supported(spaces, theory):
    sp = spaces(theory)
    n = sp.dimension
    for i in range(n):
        for j in range(n):
            assert sp.eta(i, j) == sp.eta(j, i)
        dual = sp.dual_id(i)
        assert sp.eta(i, dual) != 0
        # the pairing is supported exactly on dual pairs
        for j in range(n):
            if j != dual:
                assert sp.eta(i, j) == 0


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_duality_is_an_involution(spaces, theory):
    sp = spaces(theory)
    for e in sp.elements:
        assert sp.dual_id(sp.dual_id(e.id)) == e.id
        # complementary degrees
        assert e.degree + sp.element(sp.dual_id(e.id)).degree == 1


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_pairing_inverse(spaces, theory):
    sp = spaces(theory)
    n = sp.dimension
    for i in range(n):
        for j in range(n):
            s = sum(sp.pairing[i][k] * sp.pairing_inverse[k][j] for k in range(n))
            assert s == (1 if i == j else 0)


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_eta_inverse_pairs_reassemble_inverse(spaces, theory):
    sp = spaces(theory)
    dense = [[Fraction(0)] * sp.dimension for _ in range(sp.dimension)]
    for mu, nu, val in sp.eta_inverse_pairs():
        dense[mu][nu] += val
    assert [list(row) for row in dense] == [list(r) for r in sp.pairing_inverse]


def test_gw_twisted_sector_pairing_normalization(spaces):
    # the pairing of a twisted sector with its opposite is 1/(point order)
    for theory in GW_THEORIES:
        sp = spaces(theory)
        for e in sp.elements:
            if e.id in (sp.unit_id, sp.top_id):
                assert sp.eta(e.id, sp.dual_id(e.id)) == 1
            else:
                assert sp.eta(e.id, sp.dual_id(e.id)) == Fraction(1, e.order)


def test_fjrw_pairing_normalization(spaces):
    # narrow sectors pair to 1; broad sectors pair to -1/2
    for theory in FJRW_THEORIES:
        sp = spaces(theory)
        for e in sp.elements:
            expected = Fraction(-1, 2) if e.broad else 1
            assert sp.eta(e.id, sp.dual_id(e.id)) == expected


def test_broad_census(spaces):
    broads = {
        "gw:p333": [],
        "gw:p442": [],
        "gw:p632": [],
        "fjrw:p8": [],
        "fjrw:x9t": ["xe0"],
        "fjrw:j10t": ["ze0", "ze6"],
    }
    for theory, expected in broads.items():
        sp = spaces(theory)
        assert [e.label for e in sp.elements if e.broad] == expected


def test_broad_sectors_are_self_paired_under_duality(spaces):
    spx = spaces("fjrw:x9t")
    xe0 = spx.element("xe0")
    assert spx.dual_id(xe0.id) == xe0.id
    spj = spaces("fjrw:j10t")
    assert spj.element(spj.dual_id(spj.element("ze0").id)).label == "ze6"


def test_p333_basis_layout(spaces):
    sp = spaces("gw:p333")
    assert [e.label for e in sp.elements] == [
        "1",
        "x1",
        "x2",
        "y1",
        "y2",
        "z1",
        "z2",
        "P",
    ]
    x1 = sp.element("x1")
    assert x1.support == "x"
    assert x1.degree == Fraction(1, 3)
    assert x1.order == 3
    assert x1.primitive


def test_gw_sector_orders(spaces):
    orders = {
        "gw:p333": {"x": 3, "y": 3, "z": 3},
        "gw:p442": {"x": 4, "y": 4, "z": 2},
        "gw:p632": {"x": 6, "y": 3, "z": 2},
    }
    for theory, expected in orders.items():
        sp = spaces(theory)
        seen = {}
        for e in sp.elements:
            if e.support in ("x", "y", "z"):
                seen.setdefault(e.support, e.order)
        assert seen == expected


def test_fjrw_theta_decorations(spaces):
    sp = spaces("fjrw:x9t")
    xe0 = sp.element("xe0")
    assert xe0.broad
    assert xe0.theta == (Fraction(0), Fraction(0), Fraction(1, 2))
    # narrow sectors carry strictly fractional decorations in every slot
    for e in sp.elements:
        if not e.broad and e.theta:
            assert all(0 < t < 1 for t in e.theta)


@pytest.mark.parametrize("theory", ALL_THEORIES)
def test_theory_card_roundtrip(spaces, theory):
    sp = spaces(theory)
    card = sp.theory_card()
    assert card["theory"] == theory
    assert card["dimension"] == sp.dimension
    assert card["unit"] == sp.element(sp.unit_id).label
    assert card["top"] == sp.element(sp.top_id).label
    assert json.loads(sp.theory_card_json()) == card
