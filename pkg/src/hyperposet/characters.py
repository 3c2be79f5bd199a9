"""Symmetric-function characters built from hypertrees: HAL and its t = 1
specialisation, the anticyclic character M, Whitney characters of pointed
partitions, the Lie-generator relation, the permutation characters of
(cyclic) hypertrees, and a harness comparing HAL with the Whitney character
of the hypertree poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy.ntheory import divisors

from .algebra import MultiPoly, TruncatedSeries, solve_fixpoint
from .genseries import solve_cyclic_system, solve_hypertree_system, tau
from .report import Check
from .symfunc import (
    SymFunc,
    d_p1,
    exp_specialize,
    invert_unit,
    operad,
    partitions,
    plethysm,
    rank_shift,
    suspension,
    suspension_at_one,
    z_lambda,
)

T = MultiPoly.t()


def _check_order(order: int, lo: int = 2) -> None:
    if order < lo:
        raise ValueError(f"order must be at least {lo}, got {order}")


def _compare(name: str, lhs: SymFunc, rhs: SymFunc) -> Check:
    diff = lhs - rhs
    degree = diff.min_degree()
    detail = "" if degree is None else f"difference {diff.homogeneous(degree)}"
    return Check(name, degree is None, degree, detail)


def _compare_series(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries, upto: int) -> Check:
    for n in range(upto + 1):
        if lhs[n] != rhs[n]:
            return Check(name, False, n, f"{lhs[n]} != {rhs[n]}")
    return Check(name, True)


# HAL

@dataclass(frozen=True)
class HalBundle:
    hal_pa: SymFunc
    hal_p: SymFunc
    hal_a: SymFunc
    hal: SymFunc

    def dissymmetry_residual(self) -> SymFunc:
        return self.hal - self.hal_p - self.hal_a + self.hal_pa

    def pointing_residual(self) -> SymFunc:
        return self.hal_p - _pointing(self.hal)

    def at_one(self) -> HalBundle:
        return HalBundle(*(f.evaluate_t(1) for f in (self.hal_pa, self.hal_p, self.hal_a, self.hal)))


def _pointing(f: SymFunc) -> SymFunc:
    """p_1 d/dp_1, which keeps the order of f."""
    return (SymFunc.p(1, f.order) * d_p1(f).with_order(f.order))


@lru_cache(maxsize=None)
def hal(order: int = 8) -> HalBundle:
    _check_order(order)
    p1 = SymFunc.p(1, order)
    t = SymFunc.t(order)
    comm = operad("Comm", order)
    s_assoc = suspension(operad("Assoc", order))
    s_lie = suspension(operad("Lie", order))

    def update(pa: SymFunc) -> SymFunc:
        return p1 * plethysm(s_assoc, plethysm(comm, p1 - t * pa))

    hal_pa = solve_fixpoint(update, order, SymFunc.zero(order))
    inner = plethysm(comm, p1 - t * hal_pa)
    hal_p = p1 * plethysm(s_lie, inner)
    hal_a = plethysm(comm - p1, p1 - t * hal_pa)
    return HalBundle(hal_pa, hal_p, hal_a, hal_p + hal_a - hal_pa)


def hal_closed_forms(order: int = 8) -> HalBundle:
    """The t = 1 bundle written through the suspended PreLie character."""
    _check_order(order)
    p1 = SymFunc.p(1, order)
    s_prelie = suspension_at_one(operad("PreLie", order))
    comm_s = plethysm(operad("Comm", order), s_prelie)
    pa = p1 - s_prelie
    p = p1 * s_prelie
    a = comm_s - s_prelie
    return HalBundle(pa, p, a, p1 * s_prelie + comm_s - p1)


def hal_bar(order: int = 8) -> HalBundle:
    """HAL at t = 1, computed both ways; a disagreement raises ValueError."""
    direct = hal(order).at_one()
    closed = hal_closed_forms(order)
    for name in ("hal_pa", "hal_p", "hal_a", "hal"):
        check = _compare(name, getattr(direct, name), getattr(closed, name))
        if not check.passed:
            raise ValueError(f"hal_bar {name}: degree {check.degree}: {check.detail}")
    return closed


def anticyclic_m(order: int = 8) -> SymFunc:
    """M with M + 1 = p_1 + p_1 PreLie + 1/(1 + Comm o PreLie)."""
    _check_order(order)
    prelie = operad("PreLie", order)
    p1 = SymFunc.p(1, order)
    inverse = invert_unit(1 + plethysm(operad("Comm", order), prelie))
    return p1 + p1 * prelie + inverse - 1


def verify_hal(order: int = 7, dim_upto: int = 6) -> list[Check]:
    bundle = hal(order)
    checks = [
        _compare("hal_pointing", bundle.hal_p, _pointing(bundle.hal)),
        _compare("hal_dissymmetry", bundle.dissymmetry_residual(), SymFunc.zero(order)),
    ]
    dims = exp_specialize(bundle.hal)
    bad = None
    for n in range(2, min(dim_upto, order) + 1):
        if dims[n] != tau(n, max(order, n)).substitute(t=-T):
            bad = n
            break
    checks.append(Check("hal_dimensions_tau", bad is None, bad))
    return checks


def verify_hal_bar(order: int = 7) -> list[Check]:
    direct = hal(order).at_one()
    closed = hal_closed_forms(order)
    checks = [_compare(f"hal_bar_{name}", getattr(direct, name), getattr(closed, name))
              for name in ("hal_pa", "hal_p", "hal_a", "hal")]
    checks.append(_compare("hal_bar_minus_sigma_m", closed.hal, -suspension_at_one(anticyclic_m(order))))
    return checks


# Whitney characters of pointed partitions

def wh_pp(order: int = 8) -> SymFunc:
    """Comm o Sigma_t PreLie."""
    _check_order(order, 1)
    return plethysm(operad("Comm", order), suspension(operad("PreLie", order)))


def _fixed_points_of_power(mult: dict[int, int], k: int) -> int:
    return sum(d * mult.get(d, 0) for d in divisors(k))


def ce_term(part: tuple[int, ...]) -> MultiPoly:
    """Coefficient of p_lambda / z_lambda in the explicit Whitney formula."""
    mult: dict[int, int] = {}
    for k in part:
        mult[k] = mult.get(k, 0) + 1
    m1 = mult.get(1, 0)
    if m1 == 0:
        value = MultiPoly.monomial(-1, t=-1)  # (-t)^(-1)
    else:
        value = (MultiPoly.const(m1) - T) ** (m1 - 1)
    for k, mk in mult.items():
        if k == 1:
            continue
        base = MultiPoly.const(_fixed_points_of_power(mult, k)) - MultiPoly.t(k)
        value = value * (base ** mk - base ** (mk - 1) * (k * mk))
    return value


def ce_formula(order: int = 8) -> SymFunc:
    _check_order(order, 1)
    coeffs = {}
    for n in range(1, order + 1):
        for part in partitions(n):
            coeffs[part] = ce_term(part) * Fraction(1, z_lambda(part))
    return SymFunc.from_coefficients(coeffs, order)


def ce_check(order: int = 7) -> Check:
    rhs = plethysm(suspension(operad("Comm", order)), operad("PreLie", order))
    return _compare("ce_formula", ce_formula(order), rhs)


def wh_pp_dimension_check(order: int = 7) -> Check:
    """dim WH_i of PP_n is C(n-1, i) n^i, read with sign (-t)^i."""
    dims = exp_specialize(wh_pp(order))
    for n in range(1, order + 1):
        want = MultiPoly.from_t_coeffs({i: comb(n - 1, i) * n ** i * (-1) ** i for i in range(n)})
        if dims[n] != want:
            return Check("wh_pp_dimensions", False, n, f"{dims[n]} != {want}")
    return Check("wh_pp_dimensions", True)


# Lie generators

def euler_generators(order: int = 8) -> SymFunc:
    """Comm o Sigma PreLie (t = 1)."""
    _check_order(order)
    return plethysm(operad("Comm", order), suspension_at_one(operad("PreLie", order)))


def lie_generators_check(order: int = 8) -> Check:
    bar = hal_closed_forms(order).hal
    p1 = SymFunc.p(1, order)
    rhs = p1 - (_pointing(bar) - bar)
    return _compare("lie_generators", euler_generators(order), rhs)


# permutation characters of hypertrees and cyclic hypertrees

@dataclass(frozen=True)
class AnnexeBundle:
    ha: SymFunc
    ha_p: SymFunc
    ha_a: SymFunc
    ha_pa: SymFunc
    hac: SymFunc
    hac_p: SymFunc
    hac_a: SymFunc
    hac_pa: SymFunc

    def residuals(self) -> dict[str, SymFunc]:
        return {
            "ha_dissymmetry": self.ha_pa + self.ha - self.ha_p - self.ha_a,
            "ha_pointing": self.ha_p - _pointing(self.ha),
            "hac_dissymmetry": self.hac_pa + self.hac - self.hac_p - self.hac_a,
            "hac_pointing": self.hac_p - _pointing(self.hac),
        }


@lru_cache(maxsize=None)
def annexe_characters(order: int = 8) -> AnnexeBundle:
    """Rank-graded permutation characters; each edge beyond the first carries t."""
    _check_order(order)
    p1 = SymFunc.p(1, order)
    t = SymFunc.t(order)
    comm = operad("Comm", order)
    theta_comm = rank_shift(comm)
    theta_assoc = rank_shift(operad("Assoc", order))
    theta_cyc = rank_shift(operad("Cyc", order))

    ha_p = solve_fixpoint(
        lambda hp: p1 * plethysm(theta_comm, plethysm(comm, p1 + t * hp)),
        order, SymFunc.zero(order))
    y = plethysm(comm, p1 + t * ha_p)
    ha_pa = p1 * y * plethysm(1 + t * theta_comm, y)
    ha_a = plethysm(comm - p1, p1 + t * ha_p)

    hac_pa = solve_fixpoint(
        lambda hpa: p1 * plethysm(theta_assoc, plethysm(comm, p1 + t * hpa)),
        order, SymFunc.zero(order))
    yc = plethysm(comm, p1 + t * hac_pa)
    hac_p = p1 * plethysm(theta_cyc, yc)
    hac_a = plethysm(comm - p1, p1 + t * hac_pa)
    return AnnexeBundle(ha_p + ha_a - ha_pa, ha_p, ha_a, ha_pa,
                        hac_p + hac_a - hac_pa, hac_p, hac_a, hac_pa)


def annexe_check(max_n: int = 5, order: int = 8) -> list[Check]:
    from .posetlab import perm_character

    bundle = annexe_characters(order)
    checks = [_compare(name, r, SymFunc.zero(order)) for name, r in bundle.residuals().items()]
    for family, char in (("hypertree", bundle.ha), ("cyclic_hypertree", bundle.hac)):
        bad = None
        for n in range(2, max_n + 1):
            if char.homogeneous(n) != perm_character(family, n):
                bad = n
                break
        checks.append(Check(f"annexe_{family}_perm_character", bad is None, bad))
    ha_series = solve_hypertree_system(order).ha.substitute(u=lambda i: 1)
    hac_series = solve_cyclic_system(order).hac
    checks.append(_compare_series("annexe_ha_dimensions", exp_specialize(bundle.ha), ha_series, order))
    checks.append(_compare_series("annexe_hac_dimensions", exp_specialize(bundle.hac), hac_series, order))
    return checks


# WH = HAL harness

@dataclass(frozen=True)
class ConjectureReport:
    n: int
    lhs: SymFunc
    rhs: SymFunc
    equal: bool
    dimension_check: bool
    difference: SymFunc

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "equal": self.equal,
            "dimension_check": self.dimension_check,
            "difference": self.difference.to_json(),
        }


def conjecture_report(n: int, bound: int = 5) -> ConjectureReport:
    """Whitney character of the hypertree poset against degree-n HAL.

    Equality of full characters is recorded, not required; the dimension
    level comparison with tau_n(-t) must hold.
    """
    from .posetlab import EnumerationBoundError, whitney_character

    if n < 2 or n > bound:
        raise EnumerationBoundError(f"conjecture report limited to 2 <= n <= {bound}, got {n}")
    order = max(n, 2)
    lhs = whitney_character("hypertree", n)
    rhs = hal(order).hal.homogeneous(n)
    want = tau(n, order).substitute(t=-T)
    dims_ok = exp_specialize(lhs)[n] == want and exp_specialize(rhs)[n] == want
    difference = lhs - rhs
    return ConjectureReport(n, lhs, rhs, difference.is_zero(), dims_ok, difference)
