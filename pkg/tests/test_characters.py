import json
from fractions import Fraction

import pytest

from hyperposet import characters as C
from hyperposet.algebra import MultiPoly
from hyperposet.genseries import tau
from hyperposet.posetlab import EnumerationBoundError, whitney_character
from hyperposet.symfunc import SymFunc, exp_specialize, operad, plethysm, suspension, suspension_at_one

t = MultiPoly.t()


def sym2(order):
    return SymFunc({((1, 1), 0): Fraction(1, 2), ((2,), 0): Fraction(1, 2)}, order)


def test_hal_degree_two():
    b = C.hal(5)
    assert b.hal_pa.homogeneous(2) == SymFunc.p((1, 1), 5)
    assert b.hal.homogeneous(2) == sym2(5)


def test_hal_checks():
    assert all(c.passed for c in C.verify_hal(7, 6))


def test_hal_dimensions_are_tau():
    dims = exp_specialize(C.hal(6).hal)
    for n in range(2, 7):
        assert dims[n] == tau(n).substitute(t=-t)


def test_hal_bar_chain():
    checks = C.verify_hal_bar(7)
    assert all(c.passed for c in checks), [c.line() for c in checks]
    bar = C.hal_bar(6)
    sp = suspension_at_one(operad("PreLie", 6))
    assert bar.hal_pa.homogeneous(2) == SymFunc.p((1, 1), 6)
    assert sp.homogeneous(2) == -SymFunc.p((1, 1), 6)


def test_anticyclic_m_small():
    m = C.anticyclic_m(5)
    assert m.homogeneous(1).is_zero()
    assert m.homogeneous(2) == SymFunc({((1, 1), 0): Fraction(1, 2), ((2,), 0): Fraction(-1, 2)}, 5)


def test_wh_pp():
    w = C.wh_pp(5)
    assert w.homogeneous(1) == SymFunc.p(1, 5)
    assert w.homogeneous(2) == sym2(5) - SymFunc.p((1, 1), 5, t=1)
    for n in range(1, 6):
        assert w.homogeneous(n) == whitney_character("pointed_partition", n)
    assert C.wh_pp_dimension_check(7).passed


def test_ce_terms():
    assert C.ce_term((1,)) == 1
    assert C.ce_term((2,)) == t
    assert C.ce_term((1, 1)) == 2 - t
    assert C.ce_check(7).passed


def test_ce_matches_plethysm_low_degrees():
    rhs = plethysm(suspension(operad("Comm", 3)), operad("PreLie", 3))
    assert C.ce_formula(3) == rhs


def test_lie_generators():
    g = C.euler_generators(6)
    assert g.homogeneous(1) == SymFunc.p(1, 6)
    # one generator in degree 2, counted with the graded sign (-1)^(n-1)
    assert exp_specialize(g)[2] == -1
    assert C.lie_generators_check(6).passed


def test_annexe():
    b = C.annexe_characters(6)
    assert b.ha.homogeneous(2) == sym2(6)
    assert exp_specialize(b.ha)[4].evaluate(t=1) == 29
    assert b.hac.coefficient((1, 1, 1)).evaluate(t=1) * 6 == 4
    checks = C.annexe_check(5, 8)
    assert all(c.passed for c in checks), [c.line() for c in checks]


def test_conjecture_report():
    rep = C.conjecture_report(2)
    assert rep.equal and rep.dimension_check
    assert rep.lhs == sym2(2)
    rep3 = C.conjecture_report(3)
    assert exp_specialize(rep3.rhs)[3] == 1 - 3 * t
    payload = json.loads(json.dumps(C.conjecture_report(4).to_json()))
    assert set(payload) == {"n", "equal", "dimension_check", "difference"}
    assert payload["dimension_check"] is True
    with pytest.raises(EnumerationBoundError):
        C.conjecture_report(6)


def test_order_checks():
    with pytest.raises(ValueError):
        C.hal(1)
