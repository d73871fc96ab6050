import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from topiso.graphs import Graph, cycle_graph, induced, path_graph, petersen_graph
from topiso.mekler import (
    IncompatibleElements,
    MeklerGroup,
    UnsupportedGraph,
    centralizer_equal,
    check_prime,
    commutator,
    commutes,
    generator,
    identity,
    inverse,
    is_central,
    multiply,
    power,
    relabel_element,
    truncate,
)
from topiso.quotients import QuotientLevel, oracle_inverse
from topiso.words import parse_word

from .conftest import element_of_word

C5, PET = cycle_graph(5), petersen_graph()
GROUPS = {(name, p): MeklerGroup(g, p) for name, g in (("C5", C5), ("Petersen", PET)) for p in (3, 5)}


def elements(G: MeklerGroup):
    return st.builds(
        lambda vec, cen: G.element(dict(enumerate(vec)), dict(zip(G.pairs, cen))),
        st.lists(st.integers(0, G.p - 1), min_size=G.n, max_size=G.n),
        st.lists(st.integers(0, G.p - 1), min_size=len(G.pairs), max_size=len(G.pairs)),
    )


group_and_elements = st.sampled_from(sorted(GROUPS)).flatmap(
    lambda key: st.tuples(st.just(GROUPS[key]), elements(GROUPS[key]), elements(GROUPS[key]), elements(GROUPS[key]))
)


class TestConstruction:
    def test_prime_validation(self):
        assert check_prime(5) == 5
        for bad in (1, 2, 4, 9, 15):
            with pytest.raises(ValueError):
                check_prime(bad)

    def test_identity_and_generators(self):
        G = MeklerGroup(C5, 3)
        e = identity(C5, 3)
        assert e.vector == {} and e.central == {} and is_central(e)
        x0 = generator(C5, 3, 0)
        assert x0.support == {0}
        assert power(x0, 3) == e
        with pytest.raises(IndexError):
            G.generator(5)

    def test_order(self):
        assert MeklerGroup(C5, 3).order == 3 ** 10
        assert MeklerGroup(PET, 5).order == 5 ** (10 + 45 - 15)

    def test_incompatible(self):
        with pytest.raises(IncompatibleElements):
            multiply(MeklerGroup(C5, 3).generator(0), MeklerGroup(C5, 5).generator(0))

    def test_literals(self):
        G = MeklerGroup(C5, 3)
        assert G.parse("x1*x0") == G.element({0: 1, 1: 1}, {})
        a = G.parse("z(0,2)^2*x0*x3^2")
        assert str(a) == "z(0,2)^2*x0*x3^2"
        assert G.parse(str(a)) == a
        assert str(G.identity()) == "1"
        # on an edge the commutator letter is trivial
        assert G.parse("z(0,1)") == G.identity()
        assert G.parse("z(2,0)") == G.element(central={(0, 2): 2})


class TestMultiply:
    def test_examples(self):
        p = 3
        free = MeklerGroup(Graph(2), p)
        joined = MeklerGroup(path_graph(2), p)
        x0, x1 = free.generator(0), free.generator(1)
        assert (x0 * x1).vector == {0: 1, 1: 1} and (x0 * x1).central == {}
        assert (x1 * x0).vector == {0: 1, 1: 1} and (x1 * x0).central == {(0, 1): p - 1}
        y0, y1 = joined.generator(0), joined.generator(1)
        assert (y1 * y0).central == {} and y1 * y0 == y0 * y1

    def test_matches_rewriting_on_two_generators(self):
        level = QuotientLevel(Graph(2), 3)
        G = MeklerGroup(Graph(2), 3)
        word = level.multiply(level.generators()[1], level.generators()[0])
        assert element_of_word(G, word) == G.generator(1) * G.generator(0)

    @given(group_and_elements)
    def test_group_laws(self, t):
        G, a, b, c = t
        e = G.identity()
        assert (a * b) * c == a * (b * c)
        assert a * e == a == e * a
        assert a * inverse(a) == e == inverse(a) * a
        assert power(a, G.p) == e

    @given(group_and_elements)
    def test_normal_form_entries_in_range(self, t):
        G, a, b, _ = t
        ab = a * b
        assert len(ab.vec) == G.n and len(ab.cen) == len(G.pairs)
        assert all(0 <= x < G.p for x in ab.vec + ab.cen)
        assert all(e for e in ab.vector.values()) and all(e for e in ab.central.values())
        assert all(not G.graph.has_edge(r, s) for r, s in ab.central)

    def test_inverse_examples(self):
        G = MeklerGroup(Graph(2), 3)
        assert inverse(G.identity()) == G.identity()
        assert inverse(G.generator(1)) == power(G.generator(1), 2)
        a = G.generator(0) * G.generator(1)
        assert a * inverse(a) == G.identity()

    def test_inverse_matches_oracle(self):
        level = QuotientLevel(Graph(3), 3)
        G = MeklerGroup(Graph(3), 3)
        for vec in itertools.product(range(3), repeat=3):
            a = G.element(dict(enumerate(vec)))
            word = level.normalize(parse_word(str(a)))
            assert element_of_word(G, oracle_inverse(word, level)) == inverse(a)

    @given(group_and_elements, st.integers(-7, 12))
    def test_power(self, t, k):
        G, a, _, _ = t
        expected = G.identity()
        for _ in range(k % G.p):
            expected = expected * a
        assert power(a, k) == expected
        assert power(a, 0) == G.identity()
        assert power(a, G.p + 1) == a


class TestCommutators:
    @given(group_and_elements)
    def test_closed_form_equals_definition(self, t):
        G, a, b, _ = t
        assert commutator(a, b) == inverse(a) * inverse(b) * a * b

    @given(group_and_elements)
    def test_class_two_identities(self, t):
        G, a, b, c = t
        e = G.identity()
        assert commutator(commutator(a, b), c) == e
        assert commutator(a, b * c) == commutator(a, b) * commutator(a, c)
        assert commutator(a, a) == e
        assert commutes(a, power(a, 4))

    @pytest.mark.parametrize("key", sorted(GROUPS))
    def test_generator_commutators(self, key):
        G = GROUPS[key]
        for r, s in itertools.combinations(range(G.n), 2):
            for alpha, beta in itertools.product(range(1, G.p), repeat=2):
                c = commutator(power(G.generator(r), alpha), power(G.generator(s), beta))
                if G.graph.has_edge(r, s):
                    assert c == G.identity()
                else:
                    assert c == G.element(central={(r, s): alpha * beta})

    def test_commutes_examples(self):
        G = MeklerGroup(C5, 3)
        assert commutes(G.generator(0), G.generator(1))
        assert not commutes(G.generator(0), G.generator(2))
        assert commutator(G.generator(0), G.generator(2)) == G.commutator_letter(0, 2)


class TestCentre:
    def test_is_central(self):
        G = MeklerGroup(C5, 3)
        assert is_central(commutator(G.generator(0), G.generator(2)))
        assert not is_central(G.generator(0))
        assert is_central(G.identity())

    def test_universal_vertex_rejected(self):
        G = MeklerGroup(path_graph(3), 3)
        with pytest.raises(UnsupportedGraph):
            is_central(G.generator(1))


class TestCentralizers:
    @given(group_and_elements, st.integers(1, 4))
    def test_power_has_same_centralizer(self, t, gamma):
        G, a, _, _ = t
        if gamma % G.p:
            assert centralizer_equal(a, power(a, gamma))

    def test_examples(self):
        G = MeklerGroup(C5, 3)
        x = G.generator
        for r, s in itertools.permutations(range(5), 2):
            assert not centralizer_equal(x(r), x(s))
        assert centralizer_equal(x(0) * x(1), power(x(0), 2) * x(1))

    def test_agrees_with_exhaustive_comparison(self):
        G = MeklerGroup(C5, 3)
        bars = list(G.bar_elements())
        commuting = {
            a: frozenset(w for w in bars if commutes(a, w)) for a in bars
        }
        for a, b in itertools.product(bars[::7], bars[::5]):
            assert centralizer_equal(a, b) == (commuting[a] == commuting[b])


class TestTruncation:
    def test_examples(self):
        G = MeklerGroup(cycle_graph(8), 3)
        a = G.parse("x0*x7")
        assert truncate(a, 5) == G.generator(0)
        assert truncate(a, 0) == G.identity()
        assert truncate(G.identity(), 3) == G.identity()

    @given(group_and_elements, st.integers(0, 10), st.integers(0, 10))
    def test_homomorphism_and_tower(self, t, n, m):
        G, a, b, _ = t
        n, m = sorted((n, m))
        assert truncate(a * b, n) == truncate(a, n) * truncate(b, n)
        assert truncate(truncate(a, m), n) == truncate(a, n)

    @given(group_and_elements)
    def test_truncation_is_the_quotient_map(self, t):
        # the level-n element, read in the subgroup on the first n generators
        G, a, b, _ = t
        n = 4
        sub = MeklerGroup(induced(G.graph, range(n)), G.p)
        emb = lambda g: sub.element(
            {i: e for i, e in g.vector.items()}, {rs: e for rs, e in g.central.items()}
        )
        assert emb(truncate(a * b, n)) == emb(truncate(a, n)) * emb(truncate(b, n))


def test_relabelling_is_a_homomorphism():
    G = MeklerGroup(C5, 3)
    pi = [2, 3, 4, 0, 1]
    for a, b in itertools.product(list(G.bar_elements())[::11], repeat=2):
        a2 = a * G.commutator_letter(0, 2)
        assert relabel_element(a2 * b, pi, G) == relabel_element(a2, pi, G) * relabel_element(b, pi, G)
