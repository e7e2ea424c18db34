import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specdist.generators import (BarabasiAlbert, Complete, CompleteBipartite, Cycle, DuplicatedCycle,
                                 ErdosRenyi, Hypercube, KRegularTree, LeafAttachment, Path, Petal,
                                 PreferentialAttachment, SpecParseError, Star, TreeFill, child_seeds,
                                 family_size, format_spec, generate, generate_ba, generate_er,
                                 generate_family, grow, kregular_tree_size, parse_spec)
from specdist.graph import GraphError, average_degree, build_graph, connected_components
from specdist.spectral import spectrum

COMPLETE5 = generate_family(Complete(5))


def tree_size_formula(k, d):
    return 1 + k * ((k - 1) ** d - 1) // (k - 2)


class TestFamilies:
    @pytest.mark.parametrize("k,depth,n", [(4, 6, 1457), (6, 5, 4687), (8, 4, 3201)])
    def test_tree_sizes(self, k, depth, n):
        assert kregular_tree_size(k, depth) == n == tree_size_formula(k, depth)

    def test_tree_structure(self):
        g = generate_family(KRegularTree(4, 6))
        assert g.n == 1457 and g.num_edges == g.n - 1
        assert connected_components(g)[0] == 1
        assert set(g.degrees()) == {1, 4}

    @pytest.mark.parametrize("k,depth", [(3, 1), (3, 4), (5, 3)])
    def test_tree_size_formula_small(self, k, depth):
        assert generate_family(KRegularTree(k, depth)).n == tree_size_formula(k, depth)

    def test_hypercube_two_is_four_cycle(self):
        g = generate_family(Hypercube(2))
        assert (g.n, g.num_edges) == (4, 4)
        assert g.degrees() == [2, 2, 2, 2]
        assert connected_components(g)[0] == 1

    @pytest.mark.parametrize("d", range(1, 9))
    def test_hypercube_regular(self, d):
        g = generate_family(Hypercube(d))
        assert g.n == 2 ** d
        assert set(g.degrees()) == {d}
        assert g.num_edges == d * 2 ** (d - 1)

    def test_petal_two(self):
        g = generate_family(Petal(2))
        assert (g.n, g.num_edges) == (5, 6)
        assert max(g.degrees()) == 4

    @pytest.mark.parametrize("m", [1, 5, 40])
    def test_petal_size(self, m):
        g = generate_family(Petal(m))
        assert g.n == 2 * m + 1 and g.num_edges == 3 * m

    @pytest.mark.parametrize("m", [2, 7, 100])
    def test_duplicated_cycle_counts(self, m):
        g = generate_family(DuplicatedCycle(m))
        assert g.n == 3 * m and g.num_edges == 4 * m

    @pytest.mark.parametrize("n", [2, 5, 17])
    def test_star_matches_bipartite(self, n):
        star = generate_family(Star(n))
        bip = generate_family(CompleteBipartite(1, n - 1))
        assert sorted(star.degrees()) == sorted(bip.degrees())
        assert np.array_equal(spectrum(star).values, spectrum(bip).values)

    def test_path_cycle_complete_counts(self):
        assert generate_family(Path(6)).num_edges == 5
        assert generate_family(Cycle(6)).num_edges == 6
        assert generate_family(Complete(6)).num_edges == 15

    def test_tree_fill_is_prefix_of_full_tree(self):
        full = generate_family(KRegularTree(3, 5))
        fill = generate_family(TreeFill(3, full.n))
        assert fill == full

    @pytest.mark.parametrize("spec", [Hypercube(0), Petal(0), Complete(0), Cycle(2), KRegularTree(1, 3),
                                      CompleteBipartite(0, 3)])
    def test_invalid_parameters(self, spec):
        with pytest.raises(GraphError):
            generate_family(spec)

    @pytest.mark.parametrize("spec", [Complete(7), CompleteBipartite(3, 4), Star(9), Path(4), Cycle(5),
                                      Hypercube(3), Petal(4), KRegularTree(3, 3), TreeFill(4, 30),
                                      DuplicatedCycle(5)])
    def test_family_size(self, spec):
        assert family_size(spec) == generate_family(spec).n


class TestErdosRenyi:
    @pytest.mark.parametrize("seed", range(5))
    def test_full_probability(self, seed):
        assert generate_er(ErdosRenyi(5, 4), seed) == COMPLETE5

    @pytest.mark.parametrize("seed", range(5))
    def test_zero_probability(self, seed):
        assert generate_er(ErdosRenyi(5, 0), seed).num_edges == 0

    def test_average_degree_concentration(self):
        assert abs(average_degree(generate_er(ErdosRenyi(1000, 10), 42)) - 10) < 1
        # oracle: 20 independent draws average to the target within 1%
        mean = np.mean([average_degree(generate_er(ErdosRenyi(1000, 10), s)) for s in range(20)])
        assert abs(mean - 10) < 0.1

    def test_too_dense(self):
        with pytest.raises(GraphError):
            generate_er(ErdosRenyi(5, 4.5), 0)

    def test_deterministic(self):
        assert generate_er(ErdosRenyi(300, 6), 9) == generate_er(ErdosRenyi(300, 6), 9)
        assert generate_er(ErdosRenyi(300, 6), 9) != generate_er(ErdosRenyi(300, 6), 10)


class TestBarabasiAlbert:
    def test_no_growth(self):
        assert generate_ba(BarabasiAlbert(5, 3, 5), 1) == COMPLETE5

    @pytest.mark.parametrize("seed", range(5))
    def test_one_step_full_attachment(self, seed):
        assert generate_ba(BarabasiAlbert(6, 5, 5), seed) == generate_family(Complete(6))

    def test_heavy_tail(self):
        g = generate_ba(BarabasiAlbert(1000, 2, 5), 7)
        assert max(g.degrees()) > 10 * average_degree(g)

    def test_heavy_tail_histogram(self):
        # pooled degree histogram over 20 seeds: a Poisson graph with the same
        # mean degree (about 4) essentially never has vertices of degree >= 40
        degs = np.concatenate([generate_ba(BarabasiAlbert(1000, 2, 5), s).degrees() for s in range(20)])
        assert degs.min() >= 2
        assert (degs >= 40).sum() >= 20
        poisson_tail = 1 - sum(math.exp(-4) * 4 ** j / math.factorial(j) for j in range(40))
        assert poisson_tail * degs.size < 1e-10

    def test_edge_count(self):
        g = generate_ba(BarabasiAlbert(200, 3, 5), 0)
        assert g.num_edges == 10 + 3 * 195

    def test_too_many_edges_per_step(self):
        with pytest.raises(GraphError):
            generate_ba(BarabasiAlbert(10, 6, 5), 0)

    def test_init_larger_than_n(self):
        with pytest.raises(GraphError):
            generate_ba(BarabasiAlbert(3, 1, 5), 0)


class TestGrow:
    def test_identity(self):
        g = generate_ba(BarabasiAlbert(50, 2, 5), 3)
        assert grow(g, g.n, PreferentialAttachment(2), 11) is g

    @pytest.mark.parametrize("seed", range(3))
    def test_complete_five_to_six(self, seed):
        assert grow(COMPLETE5, 6, PreferentialAttachment(5), seed) == generate_family(Complete(6))

    @pytest.mark.parametrize("rule", [LeafAttachment(), LeafAttachment(3)])
    def test_leaf_attachment_stays_tree(self, rule):
        t = generate_family(TreeFill(3, 60))
        g = grow(t, t.n + 100, rule, 5)
        assert g.n == 160 and g.num_edges == g.n - 1
        assert connected_components(g)[0] == 1

    def test_breadth_first_growth_matches_fill(self):
        assert grow(generate_family(TreeFill(4, 100)), 700, LeafAttachment(4)) == generate_family(
            TreeFill(4, 700))

    @given(st.integers(5, 40), st.integers(0, 60), st.integers(1, 3), st.integers(0, 2 ** 32))
    @settings(max_examples=25, deadline=None)
    def test_induced_subgraph(self, n, extra, m, seed):
        g = generate_ba(BarabasiAlbert(n, m, 5), seed)
        h = grow(g, n + extra, PreferentialAttachment(m), seed + 1)
        assert tuple(e for e in h.edges if e[1] < n) == g.edges

    def test_shrink_rejected(self):
        with pytest.raises(GraphError):
            grow(COMPLETE5, 4, PreferentialAttachment(1))

    def test_leaf_rule_deterministic(self):
        t = build_graph(1)
        assert grow(t, 50, LeafAttachment(), 3) == grow(t, 50, LeafAttachment(), 3)


def test_child_seeds_are_distinct_and_stable():
    a = child_seeds(123, 8)
    assert len(set(a)) == 8 and a == child_seeds(123, 8)
    assert all(0 <= s < 2 ** 64 for s in a)


class TestSpecGrammar:
    @pytest.mark.parametrize("text,expected", [
        ("complete:n=4", Complete(4)),
        ("bipartite:n1=2,n2=3", CompleteBipartite(2, 3)),
        ("tree:k=4,depth=6", KRegularTree(4, 6)),
        ("tree:k=3,n=100", TreeFill(3, 100)),
        ("ba:n=1000,m=2,init=5", BarabasiAlbert(1000, 2, 5)),
        ("ba:n=100,m=2", BarabasiAlbert(100, 2, 5)),
        ("er:n=100,d=4.5", ErdosRenyi(100, 4.5)),
        ("cube:d=3", Hypercube(3)),
        ("dupcycle:m=4", DuplicatedCycle(4)),
    ])
    def test_parse(self, text, expected):
        assert parse_spec(text) == expected

    @pytest.mark.parametrize("spec", [Complete(4), Star(9), Petal(3), KRegularTree(4, 6), TreeFill(3, 77),
                                      BarabasiAlbert(1000, 2, 5), ErdosRenyi(100, 4.5), Path(3), Cycle(8)])
    def test_round_trip(self, spec):
        assert parse_spec(format_spec(spec)) == spec

    @pytest.mark.parametrize("text,position", [
        ("complete", 8),
        ("blob:n=3", 0),
        ("complete:n=4,x=1", 13),
        ("complete:n=four", 9),
        ("cycle:n=4,n=5", 10),
    ])
    def test_errors_report_position(self, text, position):
        with pytest.raises(SpecParseError) as err:
            parse_spec(text)
        assert err.value.position == position

    def test_missing_key(self):
        with pytest.raises(SpecParseError, match="missing key"):
            parse_spec("bipartite:n1=3")

    def test_generate_dispatch(self):
        assert generate(parse_spec("er:n=5,d=4"), 1) == COMPLETE5
        assert generate(parse_spec("complete:n=5")) == COMPLETE5
