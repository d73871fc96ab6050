"""Finite quotients G(A)/R_n as explicit groups, computed by term rewriting.

This module is the brute-force ground truth for the closed-form arithmetic in
:mod:`topiso.mekler` and deliberately shares no arithmetic with it. Words are
tuples of :class:`~topiso.words.X` / :class:`~topiso.words.Z` letters; a word
is normalised by

* moving central letters ``z(r,s)`` to the front (they commute with everything),
* expanding ``x_i^e`` into ``e mod p`` single letters,
* bubble-sorting generator letters with ``x_s x_r -> x_r x_s z(r,s)^(p-1)``
  for a non-edge ``r < s`` and ``x_s x_r -> x_r x_s`` for an edge,
* collecting runs of equal letters modulo p.

Each swap removes one inversion, so rewriting terminates.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .graphs import Graph, induced
from .words import X, Z, format_word

DEFAULT_ENUM_CAP = 10 ** 6
DEFAULT_ISO_CAP = 10 ** 4

Word = tuple


class ResourceCapExceeded(RuntimeError):
    """A brute-force computation would exceed its configured element cap."""


@dataclass(frozen=True, eq=False)
class QuotientLevel:
    """The finite group ``G(A)/R_n``, presented on generators ``x_0..x_{n-1}``.

    ``graph`` is already the level's graph (on ``n`` vertices).
    """

    graph: Graph
    p: int
    _collect_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _prepared: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.graph.n_vertices

    @property
    def order(self) -> int:
        return self.p ** (self.n + len(self.graph.non_edges))

    def check_cap(self, cap: int) -> None:
        if self.order > cap:
            raise ResourceCapExceeded(f"quotient of order {self.order} exceeds cap {cap}")

    def _letters(self):
        # prebuilt letter objects, indexed [r][s][e] and [i][e]
        cache = self._collect_cache.get("letters")
        if cache is None:
            n, p = self.n, self.p
            zs = [[[Z(r, s, e) for e in range(p)] for s in range(n)] for r in range(n)]
            xs = [[X(i, e) for e in range(p)] for i in range(n)]
            cache = self._collect_cache["letters"] = (zs, xs)
        return cache

    def _collect(self, gens: tuple) -> tuple:
        """Rewrite a word of single generator letters into sorted form.

        Returns the central letters produced by swaps and the collected
        generator part.
        """
        hit = self._collect_cache.get(gens)
        if hit is not None:
            return hit
        p, edges = self.p, self.graph.edges
        w = list(gens)
        corr: dict = {}
        bound = max(1, self.n) * len(w) ** 2 + 1
        steps = 0
        swapped = True
        while swapped:
            swapped = False
            for k in range(len(w) - 1):
                s, r = w[k], w[k + 1]
                if s > r:
                    w[k], w[k + 1] = r, s
                    if (r, s) not in edges:
                        corr[(r, s)] = corr.get((r, s), 0) + p - 1
                    steps += 1
                    swapped = True
            if steps > bound:
                raise AssertionError("rewriting exceeded its step bound")
        runs: dict = {}
        for i in w:
            runs[i] = runs.get(i, 0) + 1
        xs = self._letters()[1]
        out = (
            tuple(sorted((rs, e % p) for rs, e in corr.items() if e % p)),
            tuple(xs[i][e % p] for i, e in sorted(runs.items()) if e % p),
        )
        self._collect_cache[gens] = out
        return out

    def _prepare(self, word) -> tuple:
        """Central letters summed up front, generator powers expanded to letters."""
        word = tuple(word)
        hit = self._prepared.get(word)
        if hit is not None:
            return hit
        p, n, edges = self.p, self.n, self.graph.edges
        central: dict = {}
        gens: list = []
        for letter in word:
            if len(letter) == 2:
                i, e = letter
                if not (0 <= i < n):
                    raise IndexError(f"x{i} out of range at level {n}")
                gens.extend((i,) * (e % p))
            else:
                r, s, e = letter
                if not (0 <= r < n and 0 <= s < n) or r == s:
                    raise IndexError(f"z({r},{s}) out of range at level {n}")
                if r > s:
                    r, s, e = s, r, -e
                if (r, s) not in edges:
                    central[(r, s)] = central.get((r, s), 0) + e
        out = (tuple(central.items()), tuple(gens))
        if len(self._prepared) < 1 << 20:
            self._prepared[word] = out
        return out

    def _finish(self, central: dict, gens: tuple) -> Word:
        p = self.p
        corr, vec = self._collect(gens)
        for rs, e in corr:
            central[rs] = central.get(rs, 0) + e
        if not central:
            return vec
        zs = self._letters()[0]
        return tuple(
            zs[r][s][e % p] for (r, s), e in sorted(central.items()) if e % p
        ) + vec

    def normalize(self, word: Iterable) -> Word:
        """Normal form ``z...z x_i1^e1 ... x_ik^ek`` with ``i1 < ... < ik``."""
        cen, gens = self._prepare(word)
        return self._finish(dict(cen), gens)

    def multiply(self, word1: Word, word2: Word) -> Word:
        c1, g1 = self._prepare(word1)
        c2, g2 = self._prepare(word2)
        central = dict(c1)
        for rs, e in c2:
            central[rs] = central.get(rs, 0) + e
        return self._finish(central, g1 + g2)

    def identity(self) -> Word:
        return ()

    def generators(self) -> list[Word]:
        return [(X(i, 1),) for i in range(self.n)]


def word_maps(word: Word) -> tuple[dict, dict]:
    """``(central, vector)`` exponent maps of a normal-form word."""
    central = {(l.r, l.s): l.e for l in word if isinstance(l, Z)}
    vector = {l.i: l.e for l in word if isinstance(l, X)}
    return central, vector


def format_normal_word(word: Word) -> str:
    return format_word(*word_maps(word))


def oracle_multiply(word1: Word, word2: Word, level: QuotientLevel) -> Word:
    return level.multiply(word1, word2)


def oracle_inverse(word: Word, level: QuotientLevel) -> Word:
    inv = []
    for letter in reversed(word):
        if isinstance(letter, X):
            inv.append(X(letter.i, -letter.e))
        else:
            inv.append(Z(letter.r, letter.s, -letter.e))
    return level.normalize(inv)


def oracle_commutator(a: Word, b: Word, level: QuotientLevel) -> Word:
    return level.normalize(
        oracle_inverse(a, level) + oracle_inverse(b, level) + tuple(a) + tuple(b)
    )


def oracle_power(word: Word, k: int, level: QuotientLevel) -> Word:
    out: Word = ()
    for _ in range(k):
        out = oracle_multiply(out, word, level)
    return out


def enumerate_level(level: QuotientLevel, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Word]:
    """All ``order`` normal forms of the level."""
    level.check_cap(cap)
    p, n = level.p, level.n
    pairs = level.graph.non_edges
    for cen in itertools.product(range(p), repeat=len(pairs)):
        zs = tuple(Z(r, s, e) for (r, s), e in zip(pairs, cen) if e)
        for vec in itertools.product(range(p), repeat=n):
            yield zs + tuple(X(i, e) for i, e in enumerate(vec) if e)


def project(word: Word, source: QuotientLevel, target: int) -> Word:
    """Image of a level-``source`` element in level ``target`` (kill x_i, i >= target)."""
    if target > source.n or target < 0:
        raise IndexError(f"cannot project level {source.n} to level {target}")
    out = []
    for letter in word:
        if isinstance(letter, X):
            if letter.i < target:
                out.append(letter)
        elif letter.s < target:
            out.append(letter)
    return tuple(out)


def center_brute(level: QuotientLevel, cap: int = DEFAULT_ENUM_CAP) -> set:
    """Centre by enumeration: elements commuting with every generator.

    The generators generate the group, so this is the whole centre.
    """
    gens = level.generators()
    out = set()
    for z in enumerate_level(level, cap):
        if all(oracle_multiply(z, g, level) == oracle_multiply(g, z, level) for g in gens):
            out.add(z)
    return out


def centralizer_brute(level: QuotientLevel, g: Word, cap: int = DEFAULT_ENUM_CAP) -> set:
    g = level.normalize(g)
    return {
        h for h in enumerate_level(level, cap)
        if oracle_multiply(g, h, level) == oracle_multiply(h, g, level)
    }


def conjugacy_class(level: QuotientLevel, g: Word) -> set:
    """Orbit of ``g`` under conjugation by the generators."""
    gens = level.generators()
    gens_inv = [oracle_inverse(x, level) for x in gens]
    start = level.normalize(g)
    seen = {start}
    queue = deque([start])
    while queue:
        h = queue.popleft()
        for x, xi in zip(gens, gens_inv):
            c = level.normalize(xi + h + x)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return seen


# -- inverse system ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InverseSystem:
    """Levels ``G/R_0, ..., G/R_depth`` for ``R_n`` generated by the x_v with
    ``v`` outside ``order[:n]`` (default order ``0, 1, 2, ...``)."""

    graph: Graph
    p: int
    depth: int
    order: Optional[tuple] = None
    levels: tuple = field(init=False)

    def __post_init__(self):
        order = tuple(range(self.graph.n_vertices)) if self.order is None else tuple(self.order)
        if sorted(order) != list(range(self.graph.n_vertices)):
            raise ValueError("vertex order must be a permutation of the vertices")
        if not (0 <= self.depth <= self.graph.n_vertices):
            raise IndexError(f"depth {self.depth} out of range")
        object.__setattr__(self, "order", order)
        object.__setattr__(
            self,
            "levels",
            tuple(QuotientLevel(induced(self.graph, order[:n]), self.p) for n in range(self.depth + 1)),
        )

    def __getitem__(self, n: int) -> QuotientLevel:
        return self.levels[n]


# -- finite group invariants -------------------------------------------------

def subgroup_closure(level: QuotientLevel, gens: Iterable[Word], normal: bool = False) -> set:
    """Subgroup generated by ``gens`` (normal closure if ``normal``)."""
    gens = [level.normalize(g) for g in gens]
    conj = []
    if normal:
        xs = level.generators()
        conj = [(oracle_inverse(x, level), x) for x in xs]
    seen = {()}
    queue = deque([()])
    while queue:
        h = queue.popleft()
        nxt = [oracle_multiply(h, g, level) for g in gens]
        nxt += [level.normalize(xi + h + x) for xi, x in conj]
        for c in nxt:
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return seen


def element_order(level: QuotientLevel, g: Word) -> int:
    k, h = 1, g
    while h != ():
        h = oracle_multiply(h, g, level)
        k += 1
    return k


def lower_central_series(level: QuotientLevel, cap: int = DEFAULT_ENUM_CAP) -> list[set]:
    elems = list(enumerate_level(level, cap))
    series = [set(elems)]
    xs = level.generators()
    while len(series[-1]) > 1:
        comms = {oracle_commutator(a, x, level) for a in series[-1] for x in xs}
        nxt = subgroup_closure(level, comms, normal=True)
        if len(nxt) == len(series[-1]):
            break  # not nilpotent; cannot happen for these groups
        series.append(nxt)
    return series


def _abelian_invariants(level: QuotientLevel, elems: Sequence[Word], derived: set) -> tuple:
    """Invariants ``(p^k1, p^k2, ...)`` of the abelian p-group ``G/G'``."""
    p = level.p
    coset_of = {}
    reps = []
    for g in elems:
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for d in derived:
            coset_of[oracle_multiply(g, d, level)] = idx
    # order of each coset
    orders = []
    for g in reps:
        k, h = 1, g
        while h not in derived:
            h = oracle_multiply(h, g, level)
            k += 1
        orders.append(k)
    kmax = 0
    while p ** kmax < max(orders):
        kmax += 1
    counts = [sum(1 for o in orders if (p ** k) % o == 0) for k in range(kmax + 1)]
    # number of cyclic factors of order >= p^k
    at_least = [round(math.log(counts[k] // counts[k - 1], p)) for k in range(1, kmax + 1)]
    inv = []
    for k in range(1, kmax + 1):
        exactly = at_least[k - 1] - (at_least[k] if k < kmax else 0)
        inv.extend([p ** k] * exactly)
    return tuple(sorted(inv))


@dataclass(frozen=True)
class LevelInvariants:
    level: int
    order: int
    exponent: int
    nilpotency_class: int
    abelianization: tuple
    conj_classes: int

    def as_record(self) -> dict:
        return {
            "level": self.level,
            "order": self.order,
            "exponent": self.exponent,
            "class": self.nilpotency_class,
            "abelianization": list(self.abelianization),
            "conj_classes": self.conj_classes,
        }


@dataclass(frozen=True)
class Fingerprint:
    levels: tuple

    @property
    def orders(self) -> tuple:
        return tuple(lv.order for lv in self.levels)

    def serialize(self) -> str:
        return "".join(json.dumps(lv.as_record(), sort_keys=True) + "\n" for lv in self.levels)


def level_invariants(level: QuotientLevel, index: int, cap: int = DEFAULT_ENUM_CAP) -> LevelInvariants:
    elems = list(enumerate_level(level, cap))
    exponent = 1
    for g in elems:
        exponent = math.lcm(exponent, element_order(level, g))
    series = lower_central_series(level, cap)
    nil_class = len(series) - 1 if len(series[-1]) == 1 else -1
    derived = series[1] if len(series) > 1 else {()}
    ab = _abelian_invariants(level, elems, derived)
    remaining = set(elems)
    n_classes = 0
    while remaining:
        g = next(iter(remaining))
        remaining -= conjugacy_class(level, g)
        n_classes += 1
    return LevelInvariants(index, len(elems), exponent, nil_class, ab, n_classes)


def fingerprint(system: InverseSystem, cap: int = DEFAULT_ENUM_CAP) -> Fingerprint:
    return Fingerprint(tuple(level_invariants(lv, n, cap) for n, lv in enumerate(system.levels)))


# -- isomorphism of small quotients ------------------------------------------

def _cayley_map(l1: QuotientLevel, l2: QuotientLevel, images: list) -> Optional[dict]:
    """Extend ``x_i -> images[i]`` along the Cayley graph; None if inconsistent."""
    phi = {(): ()}
    queue = deque([()])
    gens1 = l1.generators()
    while queue:
        g = queue.popleft()
        for x, h in zip(gens1, images):
            gx = oracle_multiply(g, x, l1)
            target = oracle_multiply(phi[g], h, l2)
            if gx in phi:
                if phi[gx] != target:
                    return None
            else:
                phi[gx] = target
                queue.append(gx)
    return phi


def is_isomorphic_finite(l1: QuotientLevel, l2: QuotientLevel, cap: int = DEFAULT_ISO_CAP) -> bool:
    """Exact isomorphism test by backtracking over generator images."""
    l1.check_cap(cap)
    l2.check_cap(cap)
    if l1.order != l2.order:
        return False
    e2 = list(enumerate_level(l2, cap))

    def profile(level, g):
        return (element_order(level, g), len(conjugacy_class(level, g)))

    gens1 = l1.generators()
    prof1 = [profile(l1, x) for x in gens1]
    prof2 = {}
    for h in e2:
        prof2.setdefault(profile(l2, h), []).append(h)
    comm1 = [[oracle_multiply(a, b, l1) == oracle_multiply(b, a, l1) for b in gens1] for a in gens1]

    images: list = []

    def search(k: int) -> bool:
        if k == len(gens1):
            phi = _cayley_map(l1, l2, images)
            return phi is not None and len(set(phi.values())) == l1.order
        for h in prof2.get(prof1[k], []):
            if any(
                (oracle_multiply(images[j], h, l2) == oracle_multiply(h, images[j], l2)) != comm1[j][k]
                for j in range(k)
            ):
                continue
            images.append(h)
            if search(k + 1):
                return True
            images.pop()
        return False

    if l1.order == 1:
        return True
    return search(0)
