"""The coset structure of a Mekler group, truncated at finite depth.

The universe consists of the left and right cosets of the basis subgroups
``R_0 > R_1 > ... > R_depth`` inside the finite group ``G/R_depth``, with one
ternary relation ``R(A, B, C) <=> AB is a subset of C``. From this structure
alone one can

* define subgroups, the subgroup a coset belongs to, and coset inclusion;
* recover each group element from its filters of left and right cosets;
* turn a structure isomorphism back into a group isomorphism.

Sets of group elements are bitmasks over the element list of ``G/R_depth``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .mekler import GroupElement, MeklerGroup, inverse, multiply, restrict_support


class ConsistencyError(ValueError):
    """A pair of filters does not determine a single group element."""


class NotAnIsomorphism(ValueError):
    """A proposed universe bijection does not preserve the relation."""


@dataclass(frozen=True)
class Basis:
    """``R_n`` = normal closure of the ``x_v`` with ``v`` outside ``order[:n]``."""

    group: MeklerGroup
    depth: int
    order: Optional[tuple] = None

    def __post_init__(self):
        order = tuple(range(self.group.n)) if self.order is None else tuple(self.order)
        if sorted(order) != list(range(self.group.n)):
            raise ValueError("order must be a permutation of the vertices")
        if not (0 <= self.depth <= self.group.n):
            raise IndexError(f"depth {self.depth} out of range")
        object.__setattr__(self, "order", order)

    def kept(self, n: int) -> tuple:
        return self.order[:n]

    def truncate(self, a: GroupElement, n: int) -> GroupElement:
        return restrict_support(a, self.kept(n))

    def elements(self, n: int) -> list[GroupElement]:
        """All elements of ``G/R_n`` as truncated normal forms."""
        G = self.group
        kept = set(self.kept(n))
        vec_slots = [i for i in range(G.n) if i in kept]
        cen_slots = [k for k, (r, s) in enumerate(G.pairs) if r in kept and s in kept]
        out = []
        for ce in itertools.product(range(G.p), repeat=len(cen_slots)):
            cen = [0] * len(G.pairs)
            for k, e in zip(cen_slots, ce):
                cen[k] = e
            for ve in itertools.product(range(G.p), repeat=len(vec_slots)):
                vec = [0] * G.n
                for i, e in zip(vec_slots, ve):
                    vec[i] = e
                out.append(GroupElement(G, tuple(vec), tuple(cen)))
        return out


@dataclass(frozen=True)
class Coset:
    level: int
    side: str          # "left" or "right"
    rep: GroupElement  # the truncated normal form, canonical for the coset

    def __str__(self):
        return f"{self.level} {self.side} {self.rep}"


@dataclass
class CosetStructure:
    basis: Basis
    universe: list                 # list[Coset]
    masks: list                    # element bitmask (at depth) of each coset
    relation: frozenset            # triples (a, b, c) of universe indices
    elements: list                 # elements of G/R_depth
    index_of_element: dict
    index_of_mask: dict
    _mul: list = field(repr=False, default_factory=list)

    @property
    def depth(self) -> int:
        return self.basis.depth

    def R(self, a: int, b: int, c: int) -> bool:
        return (a, b, c) in self.relation

    def mul_index(self, i: int, j: int) -> int:
        return self._mul[i][j]

    def mask_of(self, elems) -> int:
        m = 0
        for g in elems:
            m |= 1 << self.index_of_element[g]
        return m

    def members(self, a: int) -> list[GroupElement]:
        m = self.masks[a]
        return [g for k, g in enumerate(self.elements) if (m >> k) & 1]


def _bits(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def build_structure(basis: Basis) -> CosetStructure:
    """Universe of left and right cosets of ``R_0..R_depth`` and the relation R.

    A right coset that equals a left coset as a set is not repeated.
    ``R(A, B, C)`` is decided in ``G/R_m`` with ``m`` the largest level of the
    three cosets: project the sets there, multiply setwise, test containment.
    """
    depth = basis.depth
    elements = basis.elements(depth)
    index = {g: k for k, g in enumerate(elements)}
    mul = [[index[multiply(a, b)] for b in elements] for a in elements]

    universe: list[Coset] = []
    masks: list[int] = []
    index_of_mask: dict = {}
    for side in ("left", "right"):
        for n in range(depth + 1):
            sub = [g for g in elements if basis.truncate(g, n) == basis.truncate(g, 0) and _in_kernel(basis, g, n)]
            sub_idx = [index[h] for h in sub]
            seen_reps = set()
            for g in elements:
                rep = basis.truncate(g, n)
                if rep in seen_reps:
                    continue
                seen_reps.add(rep)
                gi = index[g]
                if side == "left":
                    members = [mul[gi][h] for h in sub_idx]
                else:
                    members = [mul[h][gi] for h in sub_idx]
                m = 0
                for k in members:
                    m |= 1 << k
                if m in index_of_mask:
                    continue
                index_of_mask[m] = len(universe)
                universe.append(Coset(n, side, rep))
                masks.append(m)

    # per-level quotients for the refinement route
    level_elems = [basis.elements(m) for m in range(depth + 1)]
    level_index = [{g: k for k, g in enumerate(es)} for es in level_elems]

    def project_mask(a: int, m: int) -> int:
        out = 0
        for k in _bits(masks[a]):
            out |= 1 << level_index[m][basis.truncate(elements[k], m)]
        return out

    proj = {}
    for a in range(len(universe)):
        for m in range(universe[a].level, depth + 1):
            proj[(a, m)] = project_mask(a, m)

    def product_mask(a: int, b: int, m: int) -> int:
        es, idx = level_elems[m], level_index[m]
        out = 0
        left = [es[k] for k in _bits(proj[(a, m)])]
        right = [es[k] for k in _bits(proj[(b, m)])]
        for x in left:
            for y in right:
                out |= 1 << idx[basis.truncate(multiply(x, y), m)]
        return out

    relation = set()
    N = len(universe)
    levels = [c.level for c in universe]
    for a in range(N):
        for b in range(N):
            cache = {}
            for c in range(N):
                m = max(levels[a], levels[b], levels[c])
                if m not in cache:
                    cache[m] = product_mask(a, b, m)
                if cache[m] & ~proj[(c, m)] == 0:
                    relation.add((a, b, c))
    return CosetStructure(basis, universe, masks, frozenset(relation), elements, index, index_of_mask, mul)


def _in_kernel(basis: Basis, g: GroupElement, n: int) -> bool:
    """Whether ``g`` lies in ``R_n`` (its image in ``G/R_n`` is trivial)."""
    return not any(basis.truncate(g, n).vec) and not any(basis.truncate(g, n).cen)


# -- first-order definable predicates ----------------------------------------

def is_subgroup_def(M: CosetStructure, a: int) -> bool:
    return M.R(a, a, a)


def subgroups(M: CosetStructure) -> list[int]:
    return [a for a in range(len(M.universe)) if is_subgroup_def(M, a)]


def subgroup_included(M: CosetStructure, u: int, v: int) -> bool:
    """For subgroups: ``U <= V`` iff ``UV`` is a subset of ``V``."""
    return M.R(u, v, v)


def _maximum(M: CosetStructure, cands: Sequence[int]) -> int:
    for u in cands:
        if all(subgroup_included(M, v, u) for v in cands):
            return u
    raise ValueError("no maximum subgroup among candidates")


def left_coset_of(M: CosetStructure, a: int) -> int:
    """The maximum subgroup ``U`` with ``AU`` a subset of ``A``."""
    return _maximum(M, [u for u in subgroups(M) if M.R(a, u, a)])


def right_coset_of(M: CosetStructure, a: int) -> int:
    """The maximum subgroup ``U`` with ``UA`` a subset of ``A``."""
    return _maximum(M, [u for u in subgroups(M) if M.R(u, a, a)])


def coset_included(M: CosetStructure, a: int, b: int) -> bool:
    """``A`` is a subset of ``B``, via ``AU`` in ``B`` for ``U`` the subgroup of ``A``."""
    return M.R(a, left_coset_of(M, a), b)


# -- filters and reconstruction ----------------------------------------------

def filters(g: GroupElement, M: CosetStructure) -> tuple[frozenset, frozenset]:
    """Indices of the left cosets ``g R_n`` and right cosets ``R_n g``, n <= depth."""
    basis = M.basis
    g = basis.truncate(g, M.depth)
    gi = M.index_of_element[g]
    L, R = set(), set()
    for n in range(M.depth + 1):
        sub = [k for k, h in enumerate(M.elements) if _in_kernel(basis, h, n)]
        left = 0
        right = 0
        for k in sub:
            left |= 1 << M.mul_index(gi, k)
            right |= 1 << M.mul_index(k, gi)
        L.add(M.index_of_mask[left])
        R.add(M.index_of_mask[right])
    return frozenset(L), frozenset(R)


def check_filter_properties(L, R, M: CosetStructure) -> bool:
    L, R = list(L), list(R)
    # (1) downward directed
    for F in (L, R):
        for a, b in itertools.combinations_with_replacement(F, 2):
            if not any(coset_included(M, c, a) and coset_included(M, c, b) for c in F):
                return False
    # (2) some C in L lies inside A cap B
    for a in L:
        for b in R:
            both = M.masks[a] & M.masks[b]
            if not any(M.masks[c] & ~both == 0 for c in L):
                return False
    # (3) exactly one left coset in L and one right coset in R per basis subgroup
    for u in subgroups(M):
        if sum(1 for a in L if left_coset_of(M, a) == u) != 1:
            return False
        if sum(1 for b in R if right_coset_of(M, b) == u) != 1:
            return False
    return True


def _smallest_subgroup(M: CosetStructure) -> int:
    subs = subgroups(M)
    for u in subs:
        if all(subgroup_included(M, u, v) for v in subs):
            return u
    raise ValueError("no smallest subgroup")


def reconstruct_from_left(L, M: CosetStructure) -> GroupElement:
    """Representative of the intersection of ``L``: the compatible sequence ``r_n``."""
    by_level = {}
    for a in L:
        u = left_coset_of(M, a)
        by_level.setdefault(M.universe[u].level, []).append(a)
    if sorted(by_level) != list(range(M.depth + 1)) or any(len(v) != 1 for v in by_level.values()):
        raise ConsistencyError("L does not have exactly one coset per basis subgroup")
    finest = by_level[M.depth][0]
    members = M.members(finest)
    if len(members) != 1:
        raise ConsistencyError("finest left coset is not a single element")
    g = members[0]
    for n, (a,) in by_level.items():
        if not (M.masks[a] >> M.index_of_element[g]) & 1:
            raise ConsistencyError(f"left cosets of levels {n} and {M.depth} are disjoint")
    return g


def reconstruct_star_from_right(R, M: CosetStructure) -> GroupElement:
    """The element ``g*`` built from the inverses of the right-coset representatives."""
    by_level = {}
    for b in R:
        u = right_coset_of(M, b)
        by_level.setdefault(M.universe[u].level, []).append(b)
    if sorted(by_level) != list(range(M.depth + 1)) or any(len(v) != 1 for v in by_level.values()):
        raise ConsistencyError("R does not have exactly one coset per basis subgroup")
    members = M.members(by_level[M.depth][0])
    if len(members) != 1:
        raise ConsistencyError("finest right coset is not a single element")
    s = members[0]
    for n, (b,) in by_level.items():
        if not (M.masks[b] >> M.index_of_element[s]) & 1:
            raise ConsistencyError(f"right cosets of levels {n} and {M.depth} are disjoint")
    return inverse(s)


def reconstruct_element(L, R, M: CosetStructure) -> GroupElement:
    if not check_filter_properties(L, R, M):
        raise ConsistencyError("filters fail the filter properties")
    g = reconstruct_from_left(L, M)
    g_star = reconstruct_star_from_right(R, M)
    if multiply(g, g_star) != M.basis.group.identity():
        raise ConsistencyError("left and right filters describe different elements")
    return g


def is_structure_isomorphism(rho: Sequence[int], MG: CosetStructure, MH: CosetStructure) -> Optional[tuple]:
    """None if ``rho`` preserves R both ways, else a counterexample triple."""
    N = len(MG.universe)
    if len(MH.universe) != N or sorted(rho) != list(range(N)):
        return (-1, -1, -1)
    image = {(rho[a], rho[b], rho[c]) for a, b, c in MG.relation}
    if image == MH.relation:
        return None
    bad = next(iter(image ^ MH.relation))
    inv = {j: i for i, j in enumerate(rho)}
    return tuple(inv[x] for x in bad)


def reconstruct_isomorphism(rho: Sequence[int], MG: CosetStructure, MH: CosetStructure) -> dict:
    """The group isomorphism ``theta: G/R_depth -> H/R_depth`` induced by ``rho``."""
    bad = is_structure_isomorphism(rho, MG, MH)
    if bad is not None:
        raise NotAnIsomorphism(f"rho does not preserve R at triple {bad}")
    theta = {}
    for g in MG.elements:
        L, R = filters(g, MG)
        theta[g] = reconstruct_element(
            frozenset(rho[a] for a in L), frozenset(rho[b] for b in R), MH
        )
    return theta


def is_group_isomorphism(theta: dict, MG: CosetStructure, MH: CosetStructure) -> bool:
    if len(set(theta.values())) != len(MH.elements) or len(theta) != len(MG.elements):
        return False
    if theta[MG.basis.group.identity()] != MH.basis.group.identity():
        return False
    return all(
        theta[multiply(a, b)] == multiply(theta[a], theta[b])
        for a in MG.elements for b in MG.elements
    )


def structure_map(phi, MG: CosetStructure, MH: CosetStructure) -> list[int]:
    """The universe bijection ``A -> phi(A)`` induced by an element map ``phi``."""
    rho = []
    for a in range(len(MG.universe)):
        image = MH.mask_of(phi(g) for g in MG.members(a))
        if image not in MH.index_of_mask:
            raise NotAnIsomorphism(f"image of coset {MG.universe[a]} is not a coset")
        rho.append(MH.index_of_mask[image])
    return rho


def find_structure_isomorphisms(MG: CosetStructure, MH: CosetStructure, limit: int = 10 ** 4) -> list:
    """All R-preserving universe bijections, by backtracking (tiny structures only)."""
    N = len(MG.universe)
    if len(MH.universe) != N:
        return []

    def signature(M, a):
        return (
            sum(1 for t in M.relation if t[0] == a),
            sum(1 for t in M.relation if t[1] == a),
            sum(1 for t in M.relation if t[2] == a),
            M.R(a, a, a),
        )

    sig_g = [signature(MG, a) for a in range(N)]
    sig_h = [signature(MH, a) for a in range(N)]
    order = sorted(range(N), key=lambda a: (sum(1 for b in range(N) if sig_g[b] == sig_g[a]), a))
    rho = [-1] * N
    used = [False] * N
    found = []

    def consistent(k):
        a = order[k]
        placed = order[: k + 1]
        for x in placed:
            for y in placed:
                for t in ((a, x, y), (x, a, y), (x, y, a)):
                    if MG.R(*t) != MH.R(rho[t[0]], rho[t[1]], rho[t[2]]):
                        return False
        return True

    def search(k):
        if len(found) >= limit:
            return
        if k == N:
            found.append(tuple(rho))
            return
        a = order[k]
        for b in range(N):
            if used[b] or sig_h[b] != sig_g[a]:
                continue
            rho[a] = b
            used[b] = True
            if consistent(k):
                search(k + 1)
            used[b] = False
            rho[a] = -1

    search(0)
    return found


# -- the left-translation action ---------------------------------------------

@dataclass
class ThetaAction:
    left_cosets: list      # universe indices, in eta order
    perms: dict            # element -> tuple permutation of range(len(left_cosets))

    def is_injective(self) -> bool:
        return len(set(self.perms.values())) == len(self.perms)


def theta_action(M: CosetStructure) -> ThetaAction:
    """Permutation of the left cosets induced by left translation by each g."""
    left = [a for a, c in enumerate(M.universe) if c.side == "left"]
    pos = {a: k for k, a in enumerate(left)}
    perms = {}
    for gi, g in enumerate(M.elements):
        perm = []
        for a in left:
            m = 0
            for k in _bits(M.masks[a]):
                m |= 1 << M.mul_index(gi, k)
            perm.append(pos[M.index_of_mask[m]])
        perms[g] = tuple(perm)
    return ThetaAction(left, perms)


def check_conjugacy(phi, MG: CosetStructure, MH: CosetStructure,
                    TG: ThetaAction, TH: ThetaAction) -> bool:
    """``alpha . Theta_G(g) . alpha^-1 = Theta_H(phi(g))`` for every g."""
    rho = structure_map(phi, MG, MH)
    pos_h = {a: k for k, a in enumerate(TH.left_cosets)}
    alpha = [pos_h[rho[a]] for a in TG.left_cosets]
    alpha_inv = [0] * len(alpha)
    for i, j in enumerate(alpha):
        alpha_inv[j] = i
    for g, perm in TG.perms.items():
        conj = tuple(alpha[perm[alpha_inv[j]]] for j in range(len(alpha)))
        if conj != TH.perms[phi(g)]:
            return False
    return True
