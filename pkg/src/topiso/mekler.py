"""Normal-form arithmetic in Mekler's groups G(A).

G(A) is the free nilpotent-of-class-2, exponent-p group on generators
``x_0, ..., x_{n-1}`` modulo the commutators ``[x_r, x_s]`` for edges ``rAs``.
Every element is uniquely ``c * v`` with ``c`` a product of the central
letters ``z(r,s) = [x_r, x_s]`` (``r < s``, non-edge) and
``v = x_0^a_0 * x_1^a_1 * ...`` in ascending index order.

Elements are stored densely: one exponent per vertex and one per non-edge
pair, all in ``0..p-1``. Zero means "absent", so equality of normal forms is
tuple equality.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Optional

from .fp_linalg import same_row_space
from .graphs import Graph, has_universal_vertex
from .words import X, Z, format_word, parse_word


class IncompatibleElements(ValueError):
    """Elements from different groups were combined."""


class UnsupportedGraph(ValueError):
    """The ambient graph violates a precondition of the operation."""


def check_prime(p: int) -> int:
    if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


class MeklerGroup:
    """G(A) for a finite graph A and an odd prime p."""

    def __init__(self, graph: Graph, p: int):
        self.graph = graph
        self.p = check_prime(p)
        self.n = graph.n_vertices
        self.pairs = graph.non_edges
        self.pair_index = {pq: k for k, pq in enumerate(self.pairs)}
        self._pair_list = [(k, r, s) for k, (r, s) in enumerate(self.pairs)]

    def __eq__(self, other):
        return (
            isinstance(other, MeklerGroup)
            and self.p == other.p
            and self.graph == other.graph
        )

    def __hash__(self):
        return hash((self.graph, self.p))

    def __repr__(self):
        return f"MeklerGroup({self.graph!r}, p={self.p})"

    @property
    def order(self) -> int:
        return self.p ** (self.n + len(self.pairs))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.n, (0,) * len(self.pairs))

    def generator(self, i: int) -> "GroupElement":
        if not (0 <= i < self.n):
            raise IndexError(f"generator x{i} out of range (n = {self.n})")
        vec = [0] * self.n
        vec[i] = 1
        return GroupElement(self, tuple(vec), (0,) * len(self.pairs))

    def element(self, vector: Optional[dict] = None, central: Optional[dict] = None) -> "GroupElement":
        """Build ``c * v`` directly from normal-form exponent maps."""
        p = self.p
        vec = [0] * self.n
        for i, e in (vector or {}).items():
            if not (0 <= i < self.n):
                raise IndexError(f"generator x{i} out of range (n = {self.n})")
            vec[i] = e % p
        cen = [0] * len(self.pairs)
        for (r, s), e in (central or {}).items():
            if (r, s) not in self.pair_index:
                raise ValueError(f"z({r},{s}) is not a central generator of this group")
            cen[self.pair_index[(r, s)]] = e % p
        return GroupElement(self, tuple(vec), tuple(cen))

    def commutator_letter(self, r: int, s: int, e: int = 1) -> "GroupElement":
        """``[x_r, x_s]^e`` for any distinct r, s (identity on edges)."""
        if r == s:
            raise ValueError("commutator letter needs distinct indices")
        if r > s:
            r, s, e = s, r, -e
        if (r, s) not in self.pair_index:
            if not (0 <= r < s < self.n):
                raise IndexError(f"z({r},{s}) out of range")
            return self.identity()
        return self.element(central={(r, s): e})

    def from_letters(self, letters) -> "GroupElement":
        out = self.identity()
        for letter in letters:
            if isinstance(letter, X):
                out = multiply(out, power(self.generator(letter.i), letter.e))
            else:
                out = multiply(out, self.commutator_letter(letter.r, letter.s, letter.e))
        return out

    def parse(self, text: str) -> "GroupElement":
        return self.from_letters(parse_word(text))

    def elements(self) -> Iterator["GroupElement"]:
        """Every element of the (finite) group."""
        for cen in itertools.product(range(self.p), repeat=len(self.pairs)):
            for vec in itertools.product(range(self.p), repeat=self.n):
                yield GroupElement(self, vec, cen)

    def bar_elements(self) -> Iterator["GroupElement"]:
        """One representative (empty central part) per coset of the centre letters."""
        zero = (0,) * len(self.pairs)
        for vec in itertools.product(range(self.p), repeat=self.n):
            yield GroupElement(self, vec, zero)

    def random_element(self, rng: random.Random, density: float = 1.0) -> "GroupElement":
        p = self.p
        vec = tuple(rng.randrange(p) if rng.random() < density else 0 for _ in range(self.n))
        cen = tuple(rng.randrange(p) if rng.random() < density else 0 for _ in self.pairs)
        return GroupElement(self, vec, cen)


class GroupElement:
    """An element of G(A) in normal form. Immutable."""

    __slots__ = ("group", "vec", "cen", "_hash")

    def __init__(self, group: MeklerGroup, vec: tuple, cen: tuple):
        self.group = group
        self.vec = vec
        self.cen = cen
        self._hash = None

    @property
    def vector(self) -> dict:
        return {i: e for i, e in enumerate(self.vec) if e}

    @property
    def central(self) -> dict:
        pairs = self.group.pairs
        return {pairs[k]: e for k, e in enumerate(self.cen) if e}

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, e in enumerate(self.vec) if e)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.vec == other.vec and self.cen == other.cen and self.group == other.group

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vec, self.cen))
        return self._hash

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def __invert__(self):
        return inverse(self)

    def __str__(self):
        return format_word(self.central, self.vector)

    def __repr__(self):
        return f"<{self}>"

    def sort_key(self):
        """Serialisation order: central part first, then the vector part."""
        return (tuple(sorted(self.central.items())), tuple(sorted(self.vector.items())))


def _same_group(a: GroupElement, b: GroupElement) -> MeklerGroup:
    if a.group is not b.group and a.group != b.group:
        raise IncompatibleElements("elements belong to different groups")
    return a.group


def identity(graph: Graph, p: int) -> GroupElement:
    return MeklerGroup(graph, p).identity()


def generator(graph: Graph, p: int, i: int) -> GroupElement:
    return MeklerGroup(graph, p).generator(i)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Collected product ``a * b``.

    Moving ``x_r^b`` left past ``x_s^a`` (r < s) costs ``[x_s^a, x_r^b] =
    z(r,s)^(-a*b)``; commutators of edges are trivial and never stored.
    """
    G = a.group if a.group is b.group else _same_group(a, b)
    p = G.p
    va, vb = a.vec, b.vec
    cen = [x + y for x, y in zip(a.cen, b.cen)]
    for k, r, s in G._pair_list:
        x = va[s]
        if x:
            y = vb[r]
            if y:
                cen[k] -= x * y
    return GroupElement(
        G,
        tuple([(x + y) % p for x, y in zip(va, vb)]),
        tuple([c % p for c in cen]),
    )


def inverse(a: GroupElement) -> GroupElement:
    G = a.group
    p = G.p
    va = a.vec
    cen = [-c for c in a.cen]
    for k, r, s in G._pair_list:
        if va[r] and va[s]:
            cen[k] -= va[r] * va[s]
    return GroupElement(G, tuple((-x) % p for x in va), tuple(c % p for c in cen))


def power(a: GroupElement, k: int) -> GroupElement:
    """``a^k`` by repeated squaring; negative k goes through the inverse."""
    if k < 0:
        a, k = inverse(a), -k
    result = a.group.identity()
    base = a
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """``[a, b] = a^-1 b^-1 a b`` in closed form.

    Only the vector parts matter: the exponent at a non-edge pair r < s is
    ``alpha_r * beta_s - alpha_s * beta_r``.
    """
    G = _same_group(a, b)
    p = G.p
    va, vb = a.vec, b.vec
    cen = tuple((va[r] * vb[s] - va[s] * vb[r]) % p for _, r, s in G._pair_list)
    return GroupElement(G, (0,) * G.n, cen)


def commutes(a: GroupElement, b: GroupElement) -> bool:
    G = _same_group(a, b)
    p = G.p
    va, vb = a.vec, b.vec
    return all((va[r] * vb[s] - va[s] * vb[r]) % p == 0 for _, r, s in G._pair_list)


def is_central(a: GroupElement) -> bool:
    if has_universal_vertex(a.group.graph):
        raise UnsupportedGraph(
            "graph has a vertex joined to all others; its generator would be central"
        )
    return not any(a.vec)


def centralizer_constraints(a: GroupElement) -> list[list[int]]:
    """Linear conditions on the vector part of ``w`` for ``[a, w] = 1``.

    One row per non-edge pair r < s: ``alpha_r * beta_s - alpha_s * beta_r = 0``.
    """
    G = a.group
    rows = []
    for _, r, s in G._pair_list:
        ar, as_ = a.vec[r], a.vec[s]
        if ar or as_:
            row = [0] * G.n
            row[s] = ar
            row[r] = -as_
            rows.append(row)
    return rows


def centralizer_equal(u: GroupElement, v: GroupElement) -> bool:
    """Whether ``C(u) = C(v)``.

    Both centralisers contain the whole centre and are cut out by linear
    conditions on the vector part, so they coincide exactly when the two
    constraint systems span the same row space over F_p.
    """
    G = _same_group(u, v)
    return same_row_space(centralizer_constraints(u), centralizer_constraints(v), G.p)


def restrict_support(a: GroupElement, vertices: Iterable[int]) -> GroupElement:
    """Image of ``a`` after killing every generator outside ``vertices``."""
    keep = frozenset(vertices)
    G = a.group
    vec = tuple(e if i in keep else 0 for i, e in enumerate(a.vec))
    cen = tuple(
        e if (r in keep and s in keep) else 0 for e, (r, s) in zip(a.cen, G.pairs)
    )
    return GroupElement(G, vec, cen)


def truncate(a: GroupElement, n: int) -> GroupElement:
    """Canonical representative of ``a R_n`` (drop every index >= n)."""
    return restrict_support(a, range(max(n, 0)))


def relabel_element(a: GroupElement, perm, target: MeklerGroup) -> GroupElement:
    """Apply the homomorphism ``x_i -> x_perm[i]`` into ``target``.

    ``perm`` must be a graph isomorphism ``a.group.graph -> target.graph``
    for this to be well defined.
    """
    out = target.identity()
    for (r, s), e in sorted(a.central.items()):
        out = multiply(out, target.commutator_letter(perm[r], perm[s], e))
    for i, e in sorted(a.vector.items()):
        out = multiply(out, power(target.generator(perm[i]), e))
    return out
