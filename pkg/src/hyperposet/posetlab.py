"""Explicit hypertrees, cyclic hypertrees, pointed partitions and rooted
forests, with brute-force poset machinery used as an oracle for the
generating-series and character computations.

Vertices are 1..n.  A permutation ``sigma`` is a tuple with ``sigma[v - 1]``
the image of ``v``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

from sympy.utilities.iterables import multiset_partitions

from .algebra import MultiPoly
from .report import Check
from .symfunc import SymFunc, partitions, z_lambda

FAMILIES = ("hypertree", "cyclic_hypertree", "pointed_partition", "forest")
POSET_FAMILIES = ("hypertree", "pointed_partition", "forest")
DEFAULT_BOUNDS = {"hypertree": 7, "cyclic_hypertree": 7, "pointed_partition": 8, "forest": 7}
CACHE_ENV = "HYPERPOSET_CACHE"


class EnumerationBoundError(ValueError):
    """The requested size is below the family minimum or above the safety bound."""


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _edge_key(edge: tuple[int, ...]):
    return (edge[0], len(edge), edge)


# structures

@dataclass(frozen=True)
class Hypertree:
    n: int
    edges: tuple[tuple[int, ...], ...]
    masks: tuple[int, ...] = field(compare=False, repr=False, default=())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> Hypertree:
        canon = tuple(sorted((tuple(sorted(e)) for e in edges), key=_edge_key))
        return cls(n, canon, tuple(_mask(e) for e in canon))

    @property
    def rank(self) -> int:
        return len(self.edges) - 1

    def incident(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if v in e)

    def degree(self, v: int) -> int:
        return len(self.incident(v))

    def act(self, sigma: Sequence[int]) -> Hypertree:
        return Hypertree.from_edges(self.n, ([sigma[v - 1] for v in e] for e in self.edges))

    def is_valid(self) -> bool:
        return is_hypertree(self.n, self.edges)

    def __str__(self) -> str:
        return f"{self.n}|" + ",".join("".join(map(str, e)) for e in self.edges)


@dataclass(frozen=True)
class CyclicHypertree:
    base: Hypertree
    orders: tuple[tuple[int, ...], ...]  # per vertex 1..n: edge indices, rotated to start at the smallest

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def rank(self) -> int:
        return self.base.rank

    def act(self, sigma: Sequence[int]) -> CyclicHypertree:
        new_base = self.base.act(sigma)
        position = {e: i for i, e in enumerate(new_base.edges)}
        relabel = [position[tuple(sorted(sigma[v - 1] for v in e))] for e in self.base.edges]
        orders: list = [None] * self.n
        for v, order in enumerate(self.orders, start=1):
            orders[sigma[v - 1] - 1] = _rotate_min(tuple(relabel[i] for i in order))
        return CyclicHypertree(new_base, tuple(orders))

    def __str__(self) -> str:
        return f"{self.base}|" + ";".join(".".join(map(str, o)) for o in self.orders)


def _rotate_min(cycle: tuple[int, ...]) -> tuple[int, ...]:
    if not cycle:
        return cycle
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


@dataclass(frozen=True)
class PointedPartition:
    n: int
    blocks: tuple[tuple[int, tuple[int, ...]], ...]  # (pointed element, block) sorted by block
    masks: tuple[int, ...] = field(compare=False, repr=False, default=())
    pointed_mask: int = field(compare=False, repr=False, default=0)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[tuple[int, Iterable[int]]]) -> PointedPartition:
        canon = tuple(sorted(((p, tuple(sorted(b))) for p, b in blocks), key=lambda pb: pb[1]))
        for p, b in canon:
            if p not in b:
                raise ValueError(f"pointed element {p} not in block {b}")
        return cls(n, canon, tuple(_mask(b) for _, b in canon), _mask(p for p, _ in canon))

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    @property
    def pointed(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.blocks)

    def act(self, sigma: Sequence[int]) -> PointedPartition:
        return PointedPartition.from_blocks(
            self.n, ((sigma[p - 1], [sigma[v - 1] for v in b]) for p, b in self.blocks))

    def __str__(self) -> str:
        return f"{self.n}|" + ",".join(f"{p}:{''.join(map(str, b))}" for p, b in self.blocks)


@dataclass(frozen=True)
class RootedForest:
    n: int
    edges: tuple[tuple[int, int], ...]  # (child, parent), sorted
    mask: int = field(compare=False, repr=False, default=0)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> RootedForest:
        canon = tuple(sorted((int(c), int(p)) for c, p in edges))
        return cls(n, canon, _mask(c * (n + 1) + p for c, p in canon))

    @property
    def rank(self) -> int:
        return len(self.edges)

    def parent(self) -> dict[int, int]:
        return dict(self.edges)

    def roots(self) -> tuple[int, ...]:
        children = {c for c, _ in self.edges}
        return tuple(v for v in range(1, self.n + 1) if v not in children)

    def act(self, sigma: Sequence[int]) -> RootedForest:
        return RootedForest.from_edges(self.n, ((sigma[c - 1], sigma[p - 1]) for c, p in self.edges))

    def __str__(self) -> str:
        return f"{self.n}|" + ",".join(f"{c}>{p}" for c, p in self.edges)


# validity

def is_hypertree(n: int, edges: Sequence[Sequence[int]]) -> bool:
    """Connected, covering, and sum(|a| - 1) = n - 1 (a tree incidence graph)."""
    if not edges or any(len(e) < 2 for e in edges):
        return False
    if len(set(map(frozenset, edges))) != len(edges):
        return False
    if sum(len(e) - 1 for e in edges) != n - 1:
        return False
    covered = set().union(*map(set, edges))
    if covered != set(range(1, n + 1)):
        return False
    reached = {edges[0][0]}
    grown = True
    while grown:
        grown = False
        for e in edges:
            if reached & set(e) and not set(e) <= reached:
                reached |= set(e)
                grown = True
    return len(reached) == n


# enumeration

def _subsets(items: Sequence[int], nonempty: bool = False):
    start = 1 if nonempty else 0
    for r in range(start, len(items) + 1):
        yield from itertools.combinations(items, r)


def _rooted_hypertrees(root: int, rest: frozenset, memo: dict) -> list[tuple[frozenset, ...]]:
    """Edge lists of hypertrees on {root} | rest (empty list when rest is empty).

    The vertices hanging off ``root`` through one of its edges form a block;
    the block containing min(rest) is peeled first, so each hypertree is
    produced exactly once.
    """
    key = (root, rest)
    if key in memo:
        return memo[key]
    if not rest:
        memo[key] = [()]
        return memo[key]
    first = min(rest)
    others = sorted(rest - {first})
    out = []
    for extra in _subsets(others):
        block = frozenset((first,) + extra)
        remaining = rest - block
        tails = _rooted_hypertrees(root, remaining, memo)
        for branch in _edge_branches(root, block, memo):
            for tail in tails:
                out.append(branch + tail)
    memo[key] = out
    return out


def _edge_branches(root: int, block: frozenset, memo: dict) -> list[tuple[frozenset, ...]]:
    """Structures on block hanging from root through exactly one edge."""
    out = []
    items = sorted(block)
    for on_edge in _subsets(items, nonempty=True):
        hanging = [v for v in items if v not in on_edge]
        edge = frozenset((root,) + on_edge)
        for owners in itertools.product(on_edge, repeat=len(hanging)):
            groups = {w: [] for w in on_edge}
            for v, w in zip(hanging, owners):
                groups[w].append(v)
            subtrees = [_rooted_hypertrees(w, frozenset(vs), memo) for w, vs in groups.items()]
            for combo in itertools.product(*subtrees):
                out.append((edge,) + tuple(e for part in combo for e in part))
    return out


def enumerate_hypertrees(n: int) -> list[Hypertree]:
    memo: dict = {}
    trees = {Hypertree.from_edges(n, edges) for edges in _rooted_hypertrees(1, frozenset(range(2, n + 1)), memo)}
    return sorted(trees, key=lambda h: (h.rank, [_edge_key(e) for e in h.edges]))


def enumerate_hypertrees_bruteforce(n: int) -> list[Hypertree]:
    """Filter every set of candidate edges; only sensible for n <= 4 or 5."""
    candidates = [c for r in range(2, n + 1) for c in itertools.combinations(range(1, n + 1), r)]
    found = []
    for k in range(1, n):
        for edges in itertools.combinations(candidates, k):
            if is_hypertree(n, edges):
                found.append(Hypertree.from_edges(n, edges))
    return sorted(found, key=lambda h: (h.rank, [_edge_key(e) for e in h.edges]))


def cyclic_structures(base: Hypertree) -> list[CyclicHypertree]:
    per_vertex = []
    for v in range(1, base.n + 1):
        inc = base.incident(v)
        first, rest = inc[0], inc[1:]
        per_vertex.append([(first,) + p for p in itertools.permutations(rest)])
    return [CyclicHypertree(base, orders) for orders in itertools.product(*per_vertex)]


def enumerate_cyclic_hypertrees(n: int) -> list[CyclicHypertree]:
    return [c for h in enumerate_hypertrees(n) for c in cyclic_structures(h)]


def enumerate_pointed_partitions(n: int) -> list[PointedPartition]:
    out = []
    for blocks in multiset_partitions(list(range(1, n + 1))):
        for points in itertools.product(*blocks):
            out.append(PointedPartition.from_blocks(n, zip(points, blocks)))
    return sorted(out, key=lambda x: (x.rank, x.blocks))


def enumerate_forests(n: int) -> list[RootedForest]:
    out = []
    choices = [[0] + [p for p in range(1, n + 1) if p != v] for v in range(1, n + 1)]
    for parents in itertools.product(*choices):
        if _acyclic(parents):
            out.append(RootedForest.from_edges(n, ((v, p) for v, p in enumerate(parents, start=1) if p)))
    return sorted(out, key=lambda f: (f.rank, f.edges))


def _acyclic(parents: Sequence[int]) -> bool:
    n = len(parents)
    for v in range(1, n + 1):
        steps, w = 0, v
        while parents[w - 1]:
            w = parents[w - 1]
            steps += 1
            if steps > n:
                return False
    return True


_ENUMERATORS: dict[str, Callable[[int], list]] = {
    "hypertree": enumerate_hypertrees,
    "cyclic_hypertree": enumerate_cyclic_hypertrees,
    "pointed_partition": enumerate_pointed_partitions,
    "forest": enumerate_forests,
}

_MIN_N = {"hypertree": 2, "cyclic_hypertree": 2, "pointed_partition": 1, "forest": 1}

_ENUM_CACHE: dict[tuple[str, int], tuple] = {}


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def check_bounds(family: str, n: int, bound: int | None = None) -> None:
    _check_family(family)
    if n < _MIN_N[family]:
        raise EnumerationBoundError(f"{family} needs n >= {_MIN_N[family]}, got {n}")
    limit = DEFAULT_BOUNDS[family] if bound is None else bound
    if n > limit:
        raise EnumerationBoundError(f"{family} enumeration limited to n <= {limit}, got {n}")


def enumerate_family(family: str, n: int, bound: int | None = None) -> list:
    """Canonical, duplicate-free list of all structures of a family on {1..n}."""
    check_bounds(family, n, bound)
    key = (family, n)
    if key not in _ENUM_CACHE:
        _ENUM_CACHE[key] = tuple(_ENUMERATORS[family](n))
    return list(_ENUM_CACHE[key])


# order relations

def hypertree_leq(a: Hypertree, b: Hypertree) -> bool:
    """a <= b iff every edge of a is the union of the edges of b inside it,
    and those edges form a hypertree on it (connected, hence sum |e|-1 = |a|-1)."""
    for m in a.masks:
        inside = excess = 0
        for e in b.masks:
            if e & ~m == 0:
                inside |= e
                excess += e.bit_count() - 1
        if inside != m or excess != m.bit_count() - 1:
            return False
    return True


def pointed_partition_leq(a: PointedPartition, b: PointedPartition) -> bool:
    """a refines b and every element pointed in b is pointed in a."""
    if b.pointed_mask & ~a.pointed_mask:
        return False
    return all(any(m & ~big == 0 for big in b.masks) for m in a.masks)


def forest_leq(a: RootedForest, b: RootedForest) -> bool:
    """a is obtained from b by removing oriented edges."""
    return a.mask & ~b.mask == 0


_LEQ = {"hypertree": hypertree_leq, "pointed_partition": pointed_partition_leq, "forest": forest_leq}


def leq(family: str, a, b) -> bool:
    if family not in _LEQ:
        raise ValueError(f"no order on family {family!r}")
    if a.n != b.n:
        raise ValueError(f"vertex sets differ: {a.n} vs {b.n}")
    return _LEQ[family](a, b)


# generic finite posets

class FinitePoset:
    """Materialised graded poset with a unique minimum and memoised Mobius values."""

    def __init__(self, elements: Iterable[Hashable], leq: Callable, rank: Callable,
                 act: Callable | None = None, family: str | None = None):
        self.elements = sorted(elements, key=rank)
        self._leq = leq
        self._rank = rank
        self.act = act
        self.family = family
        self._members = set(self.elements)
        if not self.elements:
            raise ValueError("empty poset")
        self.bottom = self.elements[0]
        if any(rank(x) == rank(self.bottom) for x in self.elements[1:]):
            raise ValueError("poset has no unique minimum")
        self._mobius: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    def __iter__(self):
        return iter(self.elements)

    def leq(self, a, b) -> bool:
        return self._leq(a, b)

    def rank(self, x) -> int:
        return self._rank(x)

    @property
    def max_rank(self) -> int:
        return max(self._rank(x) for x in self.elements)

    def up_set(self, a) -> list:
        return [x for x in self.elements if self._leq(a, x)]

    def interval(self, a, b) -> list:
        return [x for x in self.elements if self._leq(a, x) and self._leq(x, b)]

    def mobius_from(self, a) -> dict:
        """mu(a, x) for every x >= a, computed upward from a."""
        if a not in self._mobius:
            up = self.up_set(a)
            ranks = [self._rank(x) for x in up]
            mu: dict = {}
            for i, x in enumerate(up):
                if x == a:
                    mu[x] = 1
                    continue
                total = 0
                for j in range(i):
                    if ranks[j] < ranks[i] and self._leq(up[j], x):
                        total += mu[up[j]]
                mu[x] = -total
            self._mobius[a] = mu
        return self._mobius[a]

    def mobius(self, a, b) -> int:
        if not self._leq(a, b):
            raise ValueError("mobius(a, b) needs a <= b")
        return self.mobius_from(a)[b]

    def char_poly(self) -> MultiPoly:
        """sum_x mu(0, x) s^(r - rank x), r the top rank."""
        r = self.max_rank
        mu = self.mobius_from(self.bottom)
        coeffs = [0] * (r + 1)
        for x, m in mu.items():
            coeffs[r - self._rank(x)] += m
        return MultiPoly.from_s_coeffs(coeffs)

    def subposet(self, keep: Callable[[Hashable], bool]) -> FinitePoset:
        return FinitePoset([x for x in self.elements if keep(x)], self._leq, self._rank,
                           act=self.act, family=self.family)


def _rank(x) -> int:
    return x.rank


def _act(sigma, x):
    return x.act(sigma)


def family_poset(family: str, n: int, bound: int | None = None) -> FinitePoset:
    if family not in _LEQ:
        raise ValueError(f"no order on family {family!r}")
    return FinitePoset(enumerate_family(family, n, bound), _LEQ[family], _rank, act=_act, family=family)


def mobius(poset: FinitePoset, a, b) -> int:
    return poset.mobius(a, b)


def char_poly(poset: FinitePoset) -> MultiPoly:
    return poset.char_poly()


# symmetric-group actions

def permutation_of_type(part: Sequence[int]) -> tuple[int, ...]:
    """The permutation (1..k1)(k1+1..k1+k2)... of the given cycle type."""
    sigma = []
    start = 1
    for k in part:
        sigma.extend(list(range(start + 1, start + k)) + [start])
        start += k
    return tuple(sigma)


def fixed_subposet(poset: FinitePoset, sigma: Sequence[int]) -> FinitePoset:
    """Elements fixed by sigma, with the induced order and inherited ranks."""
    if poset.act is None:
        raise ValueError("poset carries no group action")
    if poset.act(sigma, poset.bottom) != poset.bottom:
        raise AssertionError("sigma does not fix the minimum")
    return poset.subposet(lambda x: poset.act(sigma, x) == x)


def perm_character(family: str, n: int, bound: int | None = None) -> SymFunc:
    """sum_lambda (sum over sigma-fixed structures of t^rank) p_lambda / z_lambda."""
    elements = enumerate_family(family, n, bound)
    terms: dict = {}
    for part in partitions(n):
        sigma = permutation_of_type(part)
        counts: dict[int, int] = {}
        for x in elements:
            if x.act(sigma) == x:
                counts[x.rank] = counts.get(x.rank, 0) + 1
        for e, c in counts.items():
            terms[(part, e)] = Fraction(c, z_lambda(part))
    return SymFunc(terms, n)


def whitney_character(family: str, n: int, bound: int | None = None) -> SymFunc:
    """Lefschetz form of sum_i ch(WH_i) (-t)^i.

    For each cycle type, sum mu(0, x) t^rank(x) over the fixed subposet; this is
    the alternating Whitney character when the poset is Cohen-Macaulay.
    """
    if family not in POSET_FAMILIES:
        raise ValueError(f"no Whitney character for family {family!r}")
    poset = family_poset(family, n, bound)
    terms: dict = {}
    for part in partitions(n):
        fixed = fixed_subposet(poset, permutation_of_type(part))
        for x, m in fixed.mobius_from(fixed.bottom).items():
            key = (part, x.rank)
            terms[key] = terms.get(key, 0) + Fraction(m, z_lambda(part))
    return SymFunc(terms, n)


# pointed partitions versus forests

def phi(forest: RootedForest) -> PointedPartition:
    """Trees become blocks, roots become the pointed elements."""
    parent = forest.parent()

    def root_of(v):
        while v in parent:
            v = parent[v]
        return v

    blocks: dict[int, list[int]] = {}
    for v in range(1, forest.n + 1):
        blocks.setdefault(root_of(v), []).append(v)
    return PointedPartition.from_blocks(forest.n, blocks.items())


def _all_permutations(n: int):
    return itertools.permutations(range(1, n + 1))


def verify_phi(n: int, bound: int | None = None) -> list[Check]:
    forests = family_poset("forest", n, bound)
    pps = family_poset("pointed_partition", n, bound)
    images = {f: phi(f) for f in forests}
    by_rank: dict[int, list] = {}
    for f in forests:
        by_rank.setdefault(f.rank, []).append(f)
    monotone = all(pointed_partition_leq(images[a], images[b])
                   for a in forests for b in by_rank.get(a.rank + 1, ()) if forest_leq(a, b))
    surjective = set(images.values()) == set(pps.elements)
    rank_ok = all(f.rank == n - len(images[f].blocks) for f in forests)
    sigmas = list(_all_permutations(n)) if n <= 4 else [permutation_of_type(p) for p in partitions(n)]
    equivariant = all(phi(f.act(s)) == images[f].act(s) for s in sigmas for f in forests)
    same_chi = forests.char_poly() == pps.char_poly()
    return [
        Check(f"phi_monotone_n{n}", monotone),
        Check(f"phi_surjective_n{n}", surjective),
        Check(f"phi_rank_preserving_n{n}", rank_ok),
        Check(f"phi_equivariant_n{n}", equivariant),
        Check(f"phi_char_poly_n{n}", same_chi),
    ]


def boolean_intervals(n: int, bound: int | None = None) -> Check:
    """Every interval [a, b] of F_n has 2^(rank b - rank a) elements and mu = (-1)^(rank diff)."""
    forests = family_poset("forest", n, bound)
    for a in forests:
        mu = forests.mobius_from(a)
        for b, m in mu.items():
            k = b.rank - a.rank
            size = sum(1 for x in mu if forest_leq(x, b))
            if size != 2 ** k or m != (-1) ** k:
                return Check(f"forest_boolean_intervals_n{n}", False, detail=f"[{a}, {b}]")
    return Check(f"forest_boolean_intervals_n{n}", True)


# counts and cache files

def expected_count(family: str, n: int) -> int:
    _check_family(family)
    if family == "forest":
        return (n + 1) ** (n - 1)
    if family == "pointed_partition":
        return sum(comb(n, k) * k ** (n - k) for k in range(1, n + 1))
    from .genseries import hypertree_counts, tau

    order = max(n, 2)
    if family == "hypertree":
        return hypertree_counts(order)[n]
    return int(tau(n, order).evaluate(t=1))


def encode(x) -> str:
    if x.n > 9:
        raise ValueError("the line format uses single-digit vertex labels")
    return str(x)


def _digits(s: str) -> list[int]:
    return [int(ch) for ch in s]


def decode(family: str, line: str):
    _check_family(family)
    fields = line.strip().split("|")
    n = int(fields[0])
    if family == "hypertree":
        return Hypertree.from_edges(n, map(_digits, fields[1].split(",")))
    if family == "cyclic_hypertree":
        base = Hypertree.from_edges(n, map(_digits, fields[1].split(",")))
        orders = tuple(tuple(int(i) for i in o.split(".")) for o in fields[2].split(";"))
        return CyclicHypertree(base, orders)
    if family == "pointed_partition":
        blocks = []
        for chunk in fields[1].split(","):
            p, b = chunk.split(":")
            blocks.append((int(p), _digits(b)))
        return PointedPartition.from_blocks(n, blocks)
    edges = []
    if len(fields) > 1 and fields[1]:
        for chunk in fields[1].split(","):
            c, p = chunk.split(">")
            edges.append((int(c), int(p)))
    return RootedForest.from_edges(n, edges)


def cache_dir(default: str | os.PathLike | None = None) -> Path:
    return Path(os.environ.get(CACHE_ENV) or default or Path.home() / ".cache" / "hyperposet")


def dump_cache(family: str, n: int, path: str | os.PathLike, bound: int | None = None) -> Path:
    """Write one canonical structure per line after a ``# family n count`` header."""
    elements = enumerate_family(family, n, bound)
    path = Path(path)
    if path.is_dir():
        path = path / f"{family}_{n}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {family} {n} {len(elements)}"] + [encode(x) for x in elements]
    path.write_text("\n".join(lines) + "\n")
    return path


def load_cache(path: str | os.PathLike) -> tuple[str, int, list]:
    """Read a cache file back; the count must match the header and the known total."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing header line")
    _, family, n, count = lines[0].split()
    n, count = int(n), int(count)
    elements = [decode(family, line) for line in lines[1:] if line.strip()]
    if len(elements) != count or len(set(elements)) != count:
        raise ValueError(f"{path}: header announces {count} structures, file holds {len(elements)}")
    if count != expected_count(family, n):
        raise ValueError(f"{path}: {count} structures, expected {expected_count(family, n)}")
    return family, n, elements
