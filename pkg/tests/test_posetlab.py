from fractions import Fraction
from itertools import permutations

import pytest

from hyperposet import posetlab as P
from hyperposet.algebra import MultiPoly
from hyperposet.genseries import chi
from hyperposet.symfunc import SymFunc

s = MultiPoly.s()
t = MultiPoly.t()


def H(n, *edges):
    return P.Hypertree.from_edges(n, edges)


def sym2(order=2):
    return SymFunc({((1, 1), 0): Fraction(1, 2), ((2,), 0): Fraction(1, 2)}, order)


@pytest.mark.parametrize("n, count", [(2, 1), (3, 4), (4, 29), (5, 311), (6, 4447)])
def test_hypertree_counts(n, count):
    trees = P.enumerate_family("hypertree", n)
    assert len(trees) == count == len(set(trees))
    assert all(h.is_valid() for h in trees)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fallback_agrees(n):
    assert P.enumerate_hypertrees_bruteforce(n) == P.enumerate_family("hypertree", n)


@pytest.mark.parametrize("family", P.FAMILIES)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_counts_match_formulas(family, n):
    assert len(P.enumerate_family(family, n)) == P.expected_count(family, n)


def test_small_families():
    assert len(P.enumerate_family("forest", 2)) == 3
    assert len(P.enumerate_family("pointed_partition", 3)) == 10
    for family in P.FAMILIES:
        assert P.enumerate_family(family, 4) == P.enumerate_family(family, 4)


def test_bounds():
    with pytest.raises(P.EnumerationBoundError):
        P.enumerate_family("hypertree", 1)
    with pytest.raises(P.EnumerationBoundError):
        P.enumerate_family("hypertree", 8)
    with pytest.raises(ValueError):
        P.enumerate_family("graph", 3)


def test_cyclic_orders_per_base():
    from math import factorial, prod
    for h in P.enumerate_family("hypertree", 4):
        cyc = P.cyclic_structures(h)
        assert len(cyc) == prod(factorial(h.degree(v) - 1) for v in range(1, 5))


def test_hypertree_leq_examples():
    bottom = H(3, (1, 2, 3))
    trees = [h for h in P.enumerate_family("hypertree", 3) if h.rank == 1]
    assert all(P.leq("hypertree", bottom, h) for h in trees)
    a, b = trees[:2]
    assert not P.leq("hypertree", a, b) and not P.leq("hypertree", b, a)
    with pytest.raises(ValueError):
        P.leq("hypertree", bottom, H(4, (1, 2, 3, 4)))


def test_hypertree_leq_needs_connected_pieces():
    # 1-2, 3-4 lie inside {1,2,3,4} but only connect through 5
    fine = H(5, (1, 2), (2, 5), (3, 5), (3, 4))
    coarse = H(5, (1, 2, 3, 4), (2, 5))
    assert not P.leq("hypertree", coarse, fine)


def test_forest_bottom_and_leq():
    forests = P.enumerate_family("forest", 3)
    empty = P.RootedForest.from_edges(3, [])
    assert all(P.leq("forest", empty, f) for f in forests)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_leq_equivariant(n):
    for family in P.POSET_FAMILIES:
        elements = P.enumerate_family(family, n)
        for sigma in list(permutations(range(1, n + 1)))[:6]:
            assert sorted(map(str, (x.act(sigma) for x in elements))) == sorted(map(str, elements))
            for a in elements[:8]:
                for b in elements:
                    assert P.leq(family, a, b) == P.leq(family, a.act(sigma), b.act(sigma))


def test_pointed_partition_poset():
    pp = P.family_poset("pointed_partition", 3)
    assert pp.char_poly() == (s - 3) ** 2
    top = P.PointedPartition.from_blocks(3, [(1, (1, 2, 3))])
    assert pp.mobius(pp.bottom, top) == 3
    with pytest.raises(ValueError):
        pp.mobius(top, pp.bottom)


@pytest.mark.parametrize("n", range(1, 6))
def test_pp_and_forest_char_poly(n):
    want = (s - n) ** (n - 1)
    assert P.family_poset("pointed_partition", n).char_poly() == want
    assert P.family_poset("forest", n).char_poly() == want


@pytest.mark.parametrize("n", range(3, 7))
def test_hypertree_char_poly_matches_series(n):
    assert P.family_poset("hypertree", n).char_poly() == chi(n).as_poly()


@pytest.mark.parametrize("n", range(2, 6))
def test_forest_boolean(n):
    assert P.boolean_intervals(n).passed


@pytest.mark.parametrize("n", range(2, 6))
def test_phi(n):
    checks = P.verify_phi(n)
    assert all(c.passed for c in checks), [c.line() for c in checks]


def test_phi_example():
    f = P.RootedForest.from_edges(2, [(2, 1)])
    assert P.phi(f) == P.PointedPartition.from_blocks(2, [(1, (1, 2))])


def test_fixed_subposets():
    pp2 = P.family_poset("pointed_partition", 2)
    assert len(P.fixed_subposet(pp2, (2, 1))) == 1
    ha3 = P.family_poset("hypertree", 3)
    fixed = P.fixed_subposet(ha3, (2, 1, 3))
    assert len(fixed) == 2
    assert H(3, (1, 3), (2, 3)) in fixed
    assert len(P.fixed_subposet(ha3, (1, 2, 3))) == len(ha3)


def test_perm_character_examples():
    assert P.perm_character("hypertree", 2) == sym2()
    assert P.perm_character("forest", 1) == SymFunc.p(1, 1)
    cyc = P.perm_character("cyclic_hypertree", 3)
    assert cyc.coefficient((1, 1, 1)).evaluate(t=1) * 6 == 4


def test_whitney_character_examples():
    expected = sym2() - SymFunc.p((1, 1), 2, t=1)
    assert P.whitney_character("pointed_partition", 2) == expected
    assert P.whitney_character("forest", 2) == expected
    assert P.whitney_character("hypertree", 2) == sym2()


@pytest.mark.parametrize("family", P.POSET_FAMILIES)
@pytest.mark.parametrize("n", range(2, 6))
def test_whitney_identity_column_is_char_poly(family, n):
    poset = P.family_poset(family, n)
    r = poset.max_rank
    ident = P.whitney_character(family, n).coefficient((1,) * n)
    from math import factorial
    chi_s = poset.char_poly().s_coeffs()
    # t^r chi(1/t): coefficient of t^i is the coefficient of s^(r - i)
    want = MultiPoly.from_t_coeffs({i: chi_s[r - i] for i in range(r + 1)})
    assert ident * factorial(n) == want


@pytest.mark.parametrize("family", P.FAMILIES)
def test_cache_round_trip(family, tmp_path):
    path = P.dump_cache(family, 4, tmp_path)
    fam, n, elements = P.load_cache(path)
    assert (fam, n) == (family, 4)
    assert elements == P.enumerate_family(family, 4)


def test_cache_format_and_validation(tmp_path):
    path = P.dump_cache("hypertree", 3, tmp_path / "h.txt")
    lines = path.read_text().splitlines()
    assert lines[0] == "# hypertree 3 4"
    assert "3|12,13" in lines
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        P.load_cache(path)
    path.write_text("# hypertree 3 3\n" + "\n".join(lines[1:4]) + "\n")
    with pytest.raises(ValueError):
        P.load_cache(path)


def test_cache_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv(P.CACHE_ENV, str(tmp_path))
    assert P.cache_dir() == tmp_path


def test_permutation_of_type():
    assert P.permutation_of_type((2, 1)) == (2, 1, 3)
    assert P.permutation_of_type((3,)) == (2, 3, 1)
