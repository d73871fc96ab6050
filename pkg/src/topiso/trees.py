"""Trees of partial injections describing closed subsets of Sym(omega).

A partial injection ``sigma`` is a tuple ``(sigma(0), ..., sigma(k-1))`` of
distinct naturals. A closed set ``P`` of permutations is coded by the tree of
all ``sigma`` extended by some member of ``P``.

Finitely generated finite groups give explicit trees. Infinite groups are
given intensionally by a :class:`StructureOracle`. Questions about infinite
objects are answered on a bounded universe, and every count carries a status
saying whether it is exact, only a lower bound, or certified infinite.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Protocol, Sequence, Union

PartialInjection = tuple

INFINITE = "infinite"


# -- partial injections ------------------------------------------------------

def is_partial_injection(sigma: Sequence[int]) -> bool:
    return all(v >= 0 for v in sigma) and len(set(sigma)) == len(sigma)


def compose_partial(s2: Sequence[int], s1: Sequence[int]) -> PartialInjection:
    """``s2 . s1`` on the longest initial segment where it is defined."""
    out = []
    for v in s1:
        if v >= len(s2):
            break
        out.append(s2[v])
    return tuple(out)


def invert_partial(sigma: Sequence[int]) -> PartialInjection:
    inv = {v: i for i, v in enumerate(sigma)}
    out = []
    while len(out) in inv:
        out.append(inv[len(out)])
    return tuple(out)


def identity_prefix(n: int) -> PartialInjection:
    return tuple(range(n))


# -- finite permutation groups -----------------------------------------------

class CapExceeded(RuntimeError):
    pass


def parse_cycles(text: str) -> dict:
    """``"(0 1 2)(3 4)"`` as a point map; ``"()"`` is the identity."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\)\s*)+", text):
        raise ValueError(f"bad cycle notation: {text!r}")
    perm = {}
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
        if len(set(pts)) != len(pts) or any(x in perm for x in pts):
            raise ValueError(f"cycles are not disjoint: {text!r}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return {a: b for a, b in perm.items() if a != b}


def perm_tuple(perm: dict, m: int) -> tuple:
    return tuple(perm.get(i, i) for i in range(m))


def support_bound(perms: Iterable[dict]) -> int:
    return max((max(p) + 1 for p in perms if p), default=0)


def generate_group(gens: Sequence[tuple], m: int, cap: int = 10 ** 5) -> frozenset:
    """Closure of the generators (as tuples on ``range(m)``) under composition."""
    ident = tuple(range(m))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[g[i]] for i in range(m))
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    nxt.append(h)
        frontier = nxt
    return frozenset(seen)


def _prefix(g: tuple, k: int) -> PartialInjection:
    m = len(g)
    return tuple(g[i] if i < m else i for i in range(k))


# -- trees -------------------------------------------------------------------

@dataclass(frozen=True)
class GroupTree:
    depth: int
    levels: tuple  # levels[k] = frozenset of partial injections of length k

    def __post_init__(self):
        if len(self.levels) != self.depth + 1 or self.levels[0] != frozenset({()}):
            raise ValueError("level 0 must be the empty sequence")
        for k in range(1, self.depth + 1):
            if any(len(s) != k or s[:-1] not in self.levels[k - 1] for s in self.levels[k]):
                raise ValueError(f"level {k} is not prefix-closed")

    def __contains__(self, sigma) -> bool:
        return len(sigma) <= self.depth and tuple(sigma) in self.levels[len(sigma)]

    def nodes(self):
        for level in self.levels:
            yield from level

    def level_sizes(self) -> list[int]:
        return [len(level) for level in self.levels]


def tree_from_perms(perms: Iterable[tuple], depth: int) -> GroupTree:
    perms = list(perms)
    levels = tuple(frozenset(_prefix(g, k) for g in perms) for k in range(depth + 1))
    return GroupTree(depth, levels)


def tree_from_nodes(nodes: Iterable[Sequence[int]], depth: int) -> GroupTree:
    """Prefix closure of the given sequences, cut at ``depth``."""
    levels = [set() for _ in range(depth + 1)]
    for s in nodes:
        s = tuple(s)[:depth]
        for k in range(len(s) + 1):
            levels[k].add(s[:k])
    levels[0].add(())
    return GroupTree(depth, tuple(frozenset(l) for l in levels))


def tree_of_group(generators: Sequence[dict], depth: int, cap: int = 10 ** 5) -> GroupTree:
    m = support_bound(generators)
    group = generate_group([perm_tuple(g, m) for g in generators], m, cap)
    return tree_from_perms(group, depth)


def subgroup_axioms_check(tree: GroupTree) -> bool:
    """Identity, inverse and composition closure on the represented levels.

    Only a necessary condition for the coded closed set to be a subgroup,
    since the tree is cut at a finite depth.
    """
    for n in range(tree.depth + 1):
        if identity_prefix(n) not in tree:
            return False
    nodes = list(tree.nodes())
    for s in nodes:
        if invert_partial(s) not in tree:
            return False
    for s in nodes:
        for t in nodes:
            if compose_partial(t, s) not in tree:
                return False
    return True


@lru_cache(maxsize=8192)
def tree_products(TA: GroupTree, TB: GroupTree) -> frozenset:
    """All ``alpha . beta`` with ``beta`` in TB, ``alpha`` in TA and ``|alpha| > max beta``.

    Only the shortest admissible ``alpha`` matter: a longer one yields the same
    composite, because the values of ``beta`` never reach beyond ``max beta``.
    """
    out = set()
    for beta in TB.nodes():
        need = max(beta, default=-1) + 1
        if need > TA.depth:
            continue
        for alpha in TA.levels[need]:
            out.add(compose_partial(alpha, beta))
    return frozenset(out)


def product_subset_check(TA: GroupTree, TB: GroupTree, TC: GroupTree, depth: Optional[int] = None) -> bool:
    """Tree-level test of ``AB <= C`` over all represented pairs."""
    if depth is not None and not (TA.depth == TB.depth == TC.depth == depth):
        raise ValueError("trees must be truncated at the stated depth")
    return all(s in TC for s in tree_products(TA, TB))


# -- oracles for possibly infinite groups ------------------------------------

Extensions = Union[frozenset, str]


class StructureOracle(Protocol):
    def same_orbit(self, t1: tuple, t2: tuple) -> bool: ...

    def extensions(self, sigma: tuple) -> Extensions: ...

    def orbit_status(self, n: int, bound: int) -> str: ...

    def roelcke_status(self, n: int, bound: int) -> str: ...


class FiniteGroupOracle:
    """A finite group acting on ``{0, ..., m-1}``; every answer is exact."""

    def __init__(self, generators: Sequence[dict], m: Optional[int] = None, cap: int = 10 ** 5):
        self.m = support_bound(generators) if m is None else m
        self.group = generate_group([perm_tuple(g, self.m) for g in generators], self.m, cap)

    @property
    def universe(self) -> int:
        return self.m

    def same_orbit(self, t1, t2) -> bool:
        return len(t1) == len(t2) and any(tuple(g[x] for x in t1) == tuple(t2) for g in self.group)

    def extensions(self, sigma) -> Extensions:
        k = len(sigma)
        if k >= self.m:
            return frozenset({k}) if any(_prefix(g, k) == tuple(sigma) for g in self.group) else frozenset()
        return frozenset(g[k] for g in self.group if g[:k] == tuple(sigma))

    def orbit_status(self, n, bound) -> str:
        return "exact" if bound >= self.m else "lower_bound"

    def roelcke_status(self, n, bound) -> str:
        return "exact" if bound >= self.m else "lower_bound"


class SymmetricGroupOracle:
    """All of Sym(omega): orbits are equality patterns."""

    universe = None

    def same_orbit(self, t1, t2) -> bool:
        return _equality_pattern(t1) == _equality_pattern(t2)

    def extensions(self, sigma) -> Extensions:
        return INFINITE if is_partial_injection(sigma) else frozenset()

    def orbit_status(self, n, bound) -> str:
        return "exact" if bound >= n else "lower_bound"

    def roelcke_status(self, n, bound) -> str:
        return "exact" if bound >= 2 * n else "lower_bound"


class TrivialGroupOracle:
    """The trivial group on omega: every tuple is alone in its orbit."""

    universe = None

    def same_orbit(self, t1, t2) -> bool:
        return tuple(t1) == tuple(t2)

    def extensions(self, sigma) -> Extensions:
        return frozenset({len(sigma)}) if tuple(sigma) == identity_prefix(len(sigma)) else frozenset()

    def orbit_status(self, n, bound) -> str:
        # each of the infinitely many n-tuples is its own orbit
        return "infinite" if n >= 1 else "exact"

    def roelcke_status(self, n, bound) -> str:
        return "exact"


def _dyadic(i: int):
    """The i-th dyadic rational in (0, 1), as (numerator, log2 denominator)."""
    k = (i + 1).bit_length()
    j = i + 1 - (1 << (k - 1))
    return 2 * j + 1, k


def _dyadic_key(i: int):
    num, k = _dyadic(i)
    return num << (64 - k)


def _order_pattern(t, key) -> tuple:
    keys = [key(x) for x in t]
    ranks = sorted(set(keys))
    return tuple(ranks.index(v) for v in keys)


def _equality_pattern(t) -> tuple:
    first = {}
    return tuple(first.setdefault(x, len(first)) for x in t)


class DLOOracle:
    """Automorphisms of the dense order of the dyadic rationals in (0, 1).

    Point ``i`` of omega stands for the i-th dyadic rational (1/2, 1/4, 3/4,
    1/8, ...). Two tuples share an orbit exactly when they have the same
    order pattern. A partial injection extends to an automorphism iff it
    preserves the order, and then it has infinitely many one-step extensions.
    """

    universe = None

    def point(self, i: int):
        num, k = _dyadic(i)
        return num, 1 << k

    def same_orbit(self, t1, t2) -> bool:
        return len(t1) == len(t2) and _order_pattern(t1, _dyadic_key) == _order_pattern(t2, _dyadic_key)

    def extensions(self, sigma) -> Extensions:
        k = len(sigma)
        dom = list(range(k))
        if not is_partial_injection(sigma) or _order_pattern(dom, _dyadic_key) != _order_pattern(sigma, _dyadic_key):
            return frozenset()
        return INFINITE

    def orbit_status(self, n, bound) -> str:
        return "exact" if bound >= n else "lower_bound"

    def roelcke_status(self, n, bound) -> str:
        return "exact" if bound >= 2 * n else "lower_bound"


def _z_decode(i: int) -> int:
    return (i + 1) // 2 if i % 2 else -(i // 2)


def _z_encode(z: int) -> int:
    return 2 * z - 1 if z > 0 else -2 * z


class ZTranslationOracle:
    """The integers acting on themselves by translation, with omega coding Z as 0, 1, -1, 2, -2, ..."""

    universe = None

    def translate(self, k: int, i: int) -> int:
        return _z_encode(_z_decode(i) + k)

    def same_orbit(self, t1, t2) -> bool:
        if len(t1) != len(t2):
            return False
        if not t1:
            return True
        k = _z_decode(t2[0]) - _z_decode(t1[0])
        return all(self.translate(k, a) == b for a, b in zip(t1, t2))

    def extensions(self, sigma) -> Extensions:
        if not sigma:
            return INFINITE
        k = _z_decode(sigma[0]) - _z_decode(0)
        if any(self.translate(k, i) != v for i, v in enumerate(sigma)):
            return frozenset()
        return frozenset({self.translate(k, len(sigma))})

    def orbit_status(self, n, bound) -> str:
        # differences of coordinates are invariant and unbounded once n >= 2
        return "exact" if n <= 1 and bound >= 1 else ("infinite" if n >= 2 else "lower_bound")

    def roelcke_status(self, n, bound) -> str:
        # U is trivial for n >= 1 and Z is infinite
        return "infinite" if n >= 1 else "exact"


# -- counting on a bounded universe ------------------------------------------

@dataclass(frozen=True)
class Count:
    value: int      # classes seen within the bound
    status: str     # "exact", "lower_bound" or "infinite"

    @property
    def is_finite(self) -> bool:
        return self.status == "exact"

    def __str__(self):
        if self.status == "infinite":
            return "Infinite"
        return str(self.value) if self.status == "exact" else f">= {self.value}"


def _bounded(oracle, universe_bound: int) -> int:
    u = getattr(oracle, "universe", None)
    return universe_bound if u is None else min(u, universe_bound)


def _classes(tuples: Iterable[tuple], same) -> list[list[tuple]]:
    """Partition by a same-orbit predicate, keeping first-seen order."""
    classes: list[list[tuple]] = []
    for t in tuples:
        for cls in classes:
            if same(cls[0], t):
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes


@dataclass
class CanonicalStructure:
    bound: int
    predicates: dict = field(default_factory=dict)  # n -> list of (least tuple, frozenset orbit)


def canonical_structure(oracle, n_max: int, universe_bound: int) -> CanonicalStructure:
    """Predicates ``P^n_i``: the orbit of the i-th lexicographically least tuple."""
    b = _bounded(oracle, universe_bound)
    out = CanonicalStructure(b)
    for n in range(n_max + 1):
        classes = _classes(itertools.product(range(b), repeat=n), oracle.same_orbit)
        out.predicates[n] = [(cls[0], frozenset(cls)) for cls in classes]
    return out


def orbit_count(oracle, n: int, universe_bound: int) -> Count:
    b = _bounded(oracle, universe_bound)
    value = len(_classes(itertools.product(range(b), repeat=n), oracle.same_orbit))
    return Count(value, oracle.orbit_status(n, b))


def roelcke_check(oracle, n: int, universe_bound: int) -> Count:
    """Double cosets of ``U`` = pointwise stabiliser of ``0..n-1``.

    ``U g U`` is determined by the orbit of the pair ``(a, g a)`` with
    ``a = (0, ..., n-1)``, so the classes are the orbits on pairs of tuples
    lying in the orbit of ``a``.
    """
    b = _bounded(oracle, universe_bound)
    a = identity_prefix(n)
    orbit = [t for t in itertools.product(range(b), repeat=n) if oracle.same_orbit(a, t)]
    pairs = (s + t for s in orbit for t in orbit)
    value = len(_classes(pairs, oracle.same_orbit))
    return Count(value, oracle.roelcke_status(n, b))


def double_cosets_finite(group: Iterable[tuple], n: int) -> int:
    """``|U \\ G / U|`` for a finite permutation group, by direct enumeration."""
    group = list(group)
    U = [g for g in group if all(g[i] == i for i in range(n))]
    m = len(group[0]) if group else 0
    comp = lambda x, y: tuple(x[y[i]] for i in range(m))
    seen, count = set(), 0
    for g in group:
        if g in seen:
            continue
        count += 1
        for u in U:
            ug = comp(u, g)
            for v in U:
                seen.add(comp(ug, v))
    return count


# -- compactness -------------------------------------------------------------

def is_compact(obj, depth: int = 3, root: tuple = ()) -> bool:
    """Every level of the (rooted) tree is finite, checked up to ``depth``.

    For an oracle this is a semi-decision: a True answer covers only the
    explored levels.
    """
    if isinstance(obj, GroupTree):
        return True
    frontier = [tuple(root)]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            ext = obj.extensions(s)
            if ext == INFINITE:
                return False
            nxt.extend(s + (v,) for v in sorted(ext))
        frontier = nxt
    return True


def is_locally_compact(obj, tau: tuple, depth: int = 3) -> bool:
    """The subtree above ``tau`` is finite at each explored level."""
    if isinstance(obj, GroupTree):
        return True
    return is_compact(obj, depth, root=tau)
