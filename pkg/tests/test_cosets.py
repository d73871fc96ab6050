import itertools
import random

import pytest

from topiso.cosets import (
    Basis,
    ConsistencyError,
    NotAnIsomorphism,
    build_structure,
    check_conjugacy,
    check_filter_properties,
    coset_included,
    filters,
    find_structure_isomorphisms,
    is_group_isomorphism,
    is_structure_isomorphism,
    is_subgroup_def,
    left_coset_of,
    reconstruct_element,
    reconstruct_from_left,
    reconstruct_isomorphism,
    reconstruct_star_from_right,
    right_coset_of,
    structure_map,
    subgroups,
    theta_action,
)
from topiso.graphs import Graph, cycle_graph
from topiso.mekler import MeklerGroup, multiply, relabel_element

C5 = cycle_graph(5)
ROT = (1, 2, 3, 4, 0)


@pytest.fixture(scope="module")
def M3():
    return build_structure(Basis(MeklerGroup(C5, 3), 3))


@pytest.fixture(scope="module")
def M2():
    return build_structure(Basis(MeklerGroup(C5, 3), 2))


@pytest.fixture(scope="module")
def rotated():
    G = MeklerGroup(C5, 3)
    MG = build_structure(Basis(G, 3))
    MH = build_structure(Basis(G, 3, order=ROT))
    phi = lambda g: relabel_element(g, ROT, G)
    return MG, MH, phi


def coset_index(M, g, n, side="left"):
    """Universe index of g R_n (or R_n g), found through the stored sets."""
    members = [h for h in M.elements if M.basis.truncate(h, n) == M.basis.truncate(g, n)]
    return M.index_of_mask[M.mask_of(members)]


def subgroup_index(M, n):
    return coset_index(M, M.basis.group.identity(), n)


class TestUniverse:
    def test_size_and_sides(self, M3):
        # R_n is normal, so every right coset is already a left coset
        assert len(M3.universe) == 1 + 3 + 9 + 81
        assert {c.side for c in M3.universe} == {"left"}

    def test_levels_descend(self, M3):
        sizes = [bin(M3.masks[subgroup_index(M3, n)]).count("1") for n in range(4)]
        assert sizes == [81, 27, 9, 1]

    def test_reps_are_canonical(self, M3):
        for k, c in enumerate(M3.universe):
            assert M3.basis.truncate(c.rep, c.level) == c.rep
            assert c.rep in M3.members(k)
            assert M3.members(k) == [
                g for g in M3.elements if M3.basis.truncate(g, c.level) == c.rep
            ]

    def test_structure_refuses_bad_basis(self):
        with pytest.raises(IndexError):
            Basis(MeklerGroup(C5, 3), 6)
        with pytest.raises(ValueError):
            Basis(MeklerGroup(C5, 3), 2, order=(0, 0, 1, 2, 3))


class TestRelation:
    def test_subgroups_are_closed(self, M3):
        for n in range(4):
            u = subgroup_index(M3, n)
            assert M3.R(u, u, u)

    def test_idempotent_exactly_on_subgroups(self, M3):
        closed = {a for a in range(len(M3.universe)) if M3.R(a, a, a)}
        assert closed == {subgroup_index(M3, n) for n in range(4)}

    def test_coset_multiplication(self, M3):
        rng = random.Random(0)
        for _ in range(50):
            g, h, k = (rng.choice(M3.elements) for _ in range(3))
            a, b = coset_index(M3, g, 2), coset_index(M3, h, 2)
            assert M3.R(a, b, coset_index(M3, multiply(g, h), 2))
            c = coset_index(M3, k, 1)
            tr = M3.basis.truncate
            assert M3.R(a, b, c) == (tr(multiply(g, h), 1) == tr(k, 1))

    def test_relation_matches_algebraic_formula(self, M3):
        # AB <= C  iff  min(i, j) >= k and (ab) R_k = c R_k
        tr = M3.basis.truncate
        levels = [c.level for c in M3.universe]
        reps = [c.rep for c in M3.universe]
        N = len(M3.universe)
        for a, b, c in itertools.product(range(N), repeat=3):
            i, j, k = levels[a], levels[b], levels[c]
            expected = min(i, j) >= k and tr(multiply(reps[a], reps[b]), k) == reps[c]
            assert M3.R(a, b, c) == expected


class TestDefinablePredicates:
    def test_subgroup_predicate(self, M3):
        one = M3.index_of_element[M3.basis.group.identity()]
        for a in range(len(M3.universe)):
            assert is_subgroup_def(M3, a) == bool(M3.masks[a] >> one & 1)
        assert len(subgroups(M3)) == 4
        x0 = M3.basis.group.generator(0)
        assert not is_subgroup_def(M3, coset_index(M3, x0, 2))

    def test_left_and_right_coset_of(self, M3):
        for a, c in enumerate(M3.universe):
            assert left_coset_of(M3, a) == subgroup_index(M3, c.level)
            assert right_coset_of(M3, a) == subgroup_index(M3, c.level)
        r1 = subgroup_index(M3, 1)
        assert left_coset_of(M3, r1) == r1

    def test_inclusion(self, M3):
        N = len(M3.universe)
        for a, b in itertools.product(range(N), repeat=2):
            setwise = M3.masks[a] & ~M3.masks[b] == 0
            assert coset_included(M3, a, b) == setwise
        g = M3.basis.group.parse("x0*x2")
        assert coset_included(M3, coset_index(M3, g, 3), coset_index(M3, g, 1))
        assert not coset_included(M3, coset_index(M3, g, 1), coset_index(M3, g, 3))


class TestFilters:
    def test_identity(self, M3):
        L, R = filters(M3.basis.group.identity(), M3)
        assert L == R == {subgroup_index(M3, n) for n in range(4)}

    def test_shape(self, M3):
        for g in M3.elements[::7]:
            L, R = filters(g, M3)
            assert len(L) == len(R) == 4
            chain = sorted(L, key=lambda a: M3.universe[a].level)
            for a, b in zip(chain, chain[1:]):
                assert coset_included(M3, b, a)
            assert check_filter_properties(L, R, M3)

    def test_broken_filters(self, M3):
        g = M3.basis.group.parse("x0*x1^2*x2")
        L, R = filters(g, M3)
        two = next(a for a in L if M3.universe[a].level == 2)
        assert not check_filter_properties(L - {two}, R, M3)
        other = coset_index(M3, M3.basis.group.parse("x1"), 2)
        assert other != two
        assert not check_filter_properties(L | {other}, R, M3)

    def test_round_trip(self, M3):
        for g in M3.elements:
            L, R = filters(g, M3)
            assert reconstruct_element(L, R, M3) == g

    def test_left_and_right_give_inverses(self, M3):
        for g in M3.elements[::5]:
            L, R = filters(g, M3)
            assert multiply(reconstruct_from_left(L, M3), reconstruct_star_from_right(R, M3)) == M3.basis.group.identity()

    def test_mismatched_filters(self, M3):
        G = M3.basis.group
        L, _ = filters(G.generator(0), M3)
        _, R = filters(G.generator(1), M3)
        with pytest.raises(ConsistencyError):
            reconstruct_element(L, R, M3)

    def test_identity_filters(self, M3):
        L, R = filters(M3.basis.group.identity(), M3)
        assert reconstruct_element(L, R, M3) == M3.basis.group.identity()


class TestIsomorphisms:
    def test_identity_map(self, M2):
        theta = reconstruct_isomorphism(list(range(len(M2.universe))), M2, M2)
        assert all(theta[g] == g for g in M2.elements)

    def test_rotation(self, rotated):
        MG, MH, phi = rotated
        rho = structure_map(phi, MG, MH)
        assert is_structure_isomorphism(rho, MG, MH) is None
        theta = reconstruct_isomorphism(rho, MG, MH)
        assert all(theta[g] == phi(g) for g in MG.elements)
        G = MG.basis.group
        x0, x1 = G.generator(0), G.generator(1)
        assert theta[x0 * x1] == theta[x0] * theta[x1]
        assert is_group_isomorphism(theta, MG, MH)

    def test_non_preserving_map_rejected(self, M2):
        rho = list(range(len(M2.universe)))
        rho[1], rho[4] = rho[4], rho[1]
        assert is_structure_isomorphism(rho, M2, M2) is not None
        with pytest.raises(NotAnIsomorphism):
            reconstruct_isomorphism(rho, M2, M2)

    def test_brute_force_search(self, M2):
        found = find_structure_isomorphisms(M2, M2)
        for rho in found:
            assert is_group_isomorphism(reconstruct_isomorphism(rho, M2, M2), M2, M2)
        # independent count: automorphisms of G/R_2 = <x0, x1> mapping R_1 onto itself
        G = M2.basis.group
        elems = M2.elements
        r1 = {g for g in elems if not g.vec[0]}
        count = 0
        for a, b in itertools.product(elems, repeat=2):
            img = {g: multiply(_pow(a, g.vec[0]), _pow(b, g.vec[1])) for g in elems}
            if len(set(img.values())) != len(elems):
                continue
            if all(img[multiply(g, h)] == multiply(img[g], img[h]) for g in elems for h in elems):
                if {img[g] for g in r1} == r1:
                    count += 1
        assert len(found) == count == 12

    def test_relabelling_induces_structure_isomorphism(self):
        # the empty graph on three vertices: every permutation fixing vertex 0
        # is a level-respecting relabelling at depth 3
        G = MeklerGroup(Graph(3), 3)
        for pi in [(0, 1, 2), (0, 2, 1)]:
            MG = build_structure(Basis(G, 2))
            MH = build_structure(Basis(G, 2, order=pi))
            phi = lambda g, pi=pi: relabel_element(g, pi, G)
            rho = structure_map(phi, MG, MH)
            assert is_structure_isomorphism(rho, MG, MH) is None


def _pow(a, k):
    out = a.group.identity()
    for _ in range(k):
        out = multiply(out, a)
    return out


class TestTheta:
    def test_identity_and_faithfulness(self, M3):
        T = theta_action(M3)
        one = M3.basis.group.identity()
        assert T.perms[one] == tuple(range(len(T.left_cosets)))
        assert T.is_injective()

    def test_action(self, M3):
        T = theta_action(M3)
        for g, h in itertools.product(M3.elements[::9], M3.elements[::11]):
            gh = T.perms[multiply(g, h)]
            assert gh == tuple(T.perms[g][T.perms[h][i]] for i in range(len(gh)))

    def test_conjugacy_for_rotation(self, rotated):
        MG, MH, phi = rotated
        assert check_conjugacy(phi, MG, MH, theta_action(MG), theta_action(MH))
