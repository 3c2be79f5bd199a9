from fractions import Fraction

import pytest

from hyperposet.algebra import MultiPoly, TruncatedSeries
from hyperposet.genseries import (
    ConsistencyError,
    chi,
    chi_alternates,
    hypertree_counts,
    lambert_w,
    mobius_hat,
    solve_cyclic_system,
    solve_hypertree_system,
    tau,
    verify_closed_form,
)

t = MultiPoly.t()
s = MultiPoly.s()
u2, u3 = MultiPoly.u(2), MultiPoly.u(3)


def test_hypertree_counts():
    assert hypertree_counts(8)[2:] == [1, 4, 29, 311, 4447, 79745, 1722681]


def test_weighted_ha_degree_three():
    assert solve_hypertree_system(6).ha[3] == u3 + 3 * t * u2 ** 2


@pytest.mark.parametrize("weighted", [False, True])
def test_cyclic_residuals(weighted):
    bundle = solve_cyclic_system(7, weighted)
    assert bundle.dissymmetry_residual().is_zero()
    assert bundle.pointing_residual().is_zero()


def test_hypertree_residuals():
    bundle = solve_hypertree_system(7)
    assert bundle.dissymmetry_residual().is_zero()
    assert bundle.pointing_residual().is_zero()


def test_tau_values():
    assert tau(3) == 1 + 3 * t
    assert tau(4) == 1 + 12 * t + 20 * t ** 2
    assert tau(5) == 1 + 35 * t + 180 * t ** 2 + 210 * t ** 3


def test_chi_small():
    assert chi(3).as_poly() == s - 3
    assert chi(4).as_poly() == s ** 2 - 12 * s + 20
    assert str(chi(4)) == "s^2 - 12*s + 20"
    assert chi(4).tsv() == "4\t1,-12,20"
    assert chi(2).as_poly() == 1


@pytest.mark.parametrize("n", range(3, 9))
def test_chi_methods_agree_and_alternate(n):
    a = chi(n, method="via_tau")
    b = chi(n, method="triangular")
    assert a == b
    assert chi_alternates(a)


@pytest.mark.parametrize("n", range(3, 9))
def test_mobius_hat(n):
    assert mobius_hat(n) == (-1) ** (n - 1) * (n - 1) ** (n - 2)


def test_argument_checks():
    with pytest.raises(ValueError):
        chi(9, order=8)
    with pytest.raises(ValueError):
        mobius_hat(2)
    with pytest.raises(ValueError):
        chi(4, method="bogus")
    assert issubclass(ConsistencyError, AssertionError)


def test_closed_form():
    checks = verify_closed_form(8)
    assert [c.name for c in checks] == ["closed_form_A", "closed_form_B", "lambert_A", "lambert_z"]
    assert all(c.passed for c in checks)


def test_lambert_coefficients():
    w = lambert_w(5)
    assert [w[n] for n in range(6)] == [0, 1, -2, 9, -64, 625]
