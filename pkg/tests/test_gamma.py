import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from topiso.gamma import (
    BarElement,
    Case1,
    Case2,
    Case3,
    Case4,
    NotNice,
    bar,
    brute_classes,
    class_members,
    classify,
    gamma_brute,
    gamma_symbolic,
    roundtrip,
    sim,
    witness_exists,
)
from topiso.graphs import are_isomorphic, cycle_graph, generate_nice, path_graph, petersen_graph, relabel
from topiso.mekler import MeklerGroup, centralizer_equal, commutes, power
from topiso.quotients import QuotientLevel
from topiso.words import X

C5 = cycle_graph(5)


@pytest.fixture(scope="module")
def c5_classes():
    """Brute ~-classes of G(C5)/Z at p = 3, keyed by pure generator word."""
    reps, commute, classes, class_of = brute_classes(QuotientLevel(C5, 3))
    return classes, class_of


def word(vec):
    return tuple(X(i, e) for i, e in enumerate(vec) if e)


class TestBar:
    def test_examples(self):
        G = MeklerGroup(C5, 3)
        assert bar(G.parse("z(0,2)")) == bar(G.identity()) == BarElement(())
        assert bar(G.parse("x0*z(1,3)")) == bar(G.generator(0))
        assert bar(G.generator(0)) != bar(G.parse("x0^2"))
        assert str(bar(G.parse("x0*x2^2"))) == "x0*x2^2"


class TestSim:
    def test_examples(self):
        G = MeklerGroup(C5, 3)
        x = G.generator
        assert sim(x(0), power(x(0), 2))
        assert not sim(x(0), x(1))
        assert sim(x(0) * x(1), power(x(0), 2) * x(1))

    @given(st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), min_size=3, max_size=3))
    def test_equivalence_relation(self, vecs):
        G = MeklerGroup(C5, 3)
        a, b, c = (G.element(dict(enumerate(v))) for v in vecs)
        assert sim(a, a)
        assert sim(a, b) == sim(b, a)
        if sim(a, b) and sim(b, c):
            assert sim(a, c)


class TestClassify:
    @pytest.mark.parametrize("p", [3, 5])
    def test_examples(self, p):
        G = MeklerGroup(C5, p)
        d = classify(G.generator(3))
        assert d.case_tag == Case1(3) and d.size == p - 1
        d = classify(G.parse("x0*x1"))
        assert d.case_tag == Case2(0, 1) and d.size == (p - 1) ** 2
        d = classify(G.parse("x0*x2"))
        assert d.case_tag == Case3(1) and d.size == p * (p - 1)

    def test_petersen_case4(self):
        G = MeklerGroup(petersen_graph(), 3)
        v = G.parse("x0*x1*x2*x3*x4")
        d = classify(v)
        assert d.case_tag == Case4() and d.size == 2
        assert len(class_members(v)) == 2

    def test_central_rejected(self):
        G = MeklerGroup(C5, 3)
        with pytest.raises(ValueError):
            classify(G.parse("z(0,2)"))

    def test_case_sizes_against_brute_force(self, c5_classes):
        classes, class_of = c5_classes
        G = MeklerGroup(C5, 3)
        for vec in itertools.product(range(3), repeat=5):
            if not any(vec):
                continue
            v = G.element(dict(enumerate(vec)))
            d = classify(v)
            brute = classes[class_of[word(vec)]]
            assert len(brute) == d.size == len(class_members(v))
            assert {bar(G.element(dict((l.i, l.e) for l in w))) for w in brute} == class_members(v)

    def test_star_support_is_case3(self):
        # 3 lies in D and is joined to 2 and 4; the class is v^g x3^b
        G = MeklerGroup(C5, 3)
        v = G.parse("x2^2*x3*x4^2")
        assert classify(v).case_tag == Case3(3)
        assert len(class_members(v)) == 6

    @pytest.mark.parametrize("p", [3, 5])
    def test_case_sizes_on_petersen(self, p):
        G = MeklerGroup(petersen_graph(), p)
        rng = random.Random(p)
        for _ in range(150):
            v = G.element({i: rng.randrange(p) for i in rng.sample(range(10), rng.randint(1, 5))})
            if any(v.vec):
                assert len(class_members(v)) == classify(v).size

    def test_census(self, c5_classes):
        classes, _ = c5_classes
        sizes = sorted(len(c) for c in classes)
        # Cases 1 and 4 give 2, Case 2 gives 4, Case 3 gives 6
        assert set(sizes) == {2, 4, 6}
        assert sizes.count(4) == 5 and sizes.count(6) == 10


class TestWitness:
    def test_examples(self):
        G = MeklerGroup(C5, 3)
        w = witness_exists(G.generator(0))
        assert w is not None and commutes(w, G.generator(0)) and not sim(w, G.generator(0))
        edge = G.parse("x0*x1")
        w = witness_exists(edge)
        assert w is not None and commutes(edge, w) and not centralizer_equal(edge, w)
        assert commutes(G.generator(0), edge) and not sim(G.generator(0), edge)

    @pytest.mark.parametrize("graph", [C5, petersen_graph()], ids=["C5", "Petersen"])
    def test_case1_always_case4_never(self, graph):
        G = MeklerGroup(graph, 3)
        rng = random.Random(3)
        for i in range(G.n):
            assert witness_exists(G.generator(i)) is not None
        seen4 = 0
        for _ in range(300):
            v = G.element({i: rng.randrange(3) for i in range(G.n)})
            if any(v.vec) and isinstance(classify(v).case_tag, Case4):
                seen4 += 1
                assert witness_exists(v) is None
        assert seen4 > 0


class TestGammaSymbolic:
    @pytest.mark.parametrize("p", [3, 5])
    @pytest.mark.parametrize("graph", [C5, petersen_graph()], ids=["C5", "Petersen"])
    def test_recovers(self, graph, p):
        assert are_isomorphic(gamma_symbolic(graph, p), graph) is not None

    @pytest.mark.parametrize("n,seed", [(6, 1), (7, 2), (8, 3), (10, 4), (12, 5)])
    def test_generated_graphs(self, n, seed):
        g = generate_nice(n, seed)
        for p in (3, 5):
            assert are_isomorphic(gamma_symbolic(g, p), g) is not None

    def test_refuses_non_nice(self):
        with pytest.raises(NotNice):
            gamma_symbolic(path_graph(3), 3)


class TestGammaBrute:
    def test_matches_symbolic_on_c5(self):
        res = gamma_brute(QuotientLevel(C5, 3))
        assert are_isomorphic(res.graph, C5) is not None
        assert are_isomorphic(res.graph, gamma_symbolic(C5, 3)) is not None
        # vertex classes are exactly the powers of single generators
        for k in res.vertex_classes:
            assert all(len(w) == 1 for w in res.classes[k])

    def test_refuses_non_nice(self):
        with pytest.raises(NotNice):
            gamma_brute(QuotientLevel(path_graph(3), 3))


class TestRoundtrip:
    def test_isomorphic(self):
        v = roundtrip(C5, relabel(C5, [1, 2, 3, 4, 0]), 3)
        assert v.isomorphic and v.fingerprints_match
        v = roundtrip(C5, relabel(C5, [0, 2, 4, 1, 3]), 3)
        assert v.isomorphic and v.fingerprints_match
        assert v.summary().startswith("ISOMORPHIC (matching fingerprints")
        assert roundtrip(C5, C5, 5).isomorphic

    def test_non_isomorphic(self):
        v = roundtrip(C5, petersen_graph(), 3)
        assert not v.isomorphic and v.gamma_separates
        assert v.summary() == "NON-ISOMORPHIC (Gamma separates)"

    def test_refuses_non_nice(self):
        with pytest.raises(NotNice):
            roundtrip(C5, path_graph(3), 3)
