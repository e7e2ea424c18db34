import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from specdist.eigen import EigensolverError
from specdist.generators import (Complete, CompleteBipartite, Cycle, DuplicatedCycle, ErdosRenyi, Hypercube,
                                 KRegularTree, Path, Petal, Star, generate_er, generate_family)
from specdist.graph import DeleteEdge, GraphError, apply_edit, build_graph, connected_components, relabel
from specdist.spectral import (Spectrum, SpectrumSizeError, closed_form_spectrum, edge_laplacian_spectrum,
                               empirical_cdf, integrate_measure, normalized_laplacian, read_spectrum,
                               spectrum, write_spectrum)

K4 = generate_family(Complete(4))
DIAMOND = apply_edit(K4, DeleteEdge(2, 3))


def exact_spectrum(g):
    """Eigenvalues of I - D^-1 A computed symbolically (random-walk form)."""
    n = g.n
    a = sympy.zeros(n, n)
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1
    lap = sympy.eye(n) - sympy.diag(*[sympy.Rational(1, d) for d in g.degrees()]) * a
    roots = []
    for val, mult in lap.eigenvals().items():
        # cubic roots may come back in complex radical form; imaginary parts cancel
        z = complex(val.evalf(40))
        assert abs(z.imag) < 1e-20
        roots += [z.real] * mult
    return sorted(roots)


def incidence_edge_spectrum(g):
    """Edge Laplacian N^T D^-1 N from the oriented incidence matrix N."""
    n_mat = np.zeros((g.n, g.num_edges))
    for j, (u, v) in enumerate(g.edges):
        n_mat[u, j], n_mat[v, j] = 1.0, -1.0
    # isolated vertices have empty incidence rows, so their weight is irrelevant
    deg = np.maximum(np.array(g.degrees(), dtype=float), 1.0)
    return np.linalg.eigvalsh(n_mat.T @ np.diag(1 / deg) @ n_mat)


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return build_graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


class TestLaplacian:
    def test_single_edge(self):
        assert np.array_equal(normalized_laplacian(build_graph(2, [(0, 1)])), [[1, -1], [-1, 1]])

    def test_single_vertex(self):
        assert np.array_equal(normalized_laplacian(build_graph(1)), [[0]])

    def test_path3(self):
        lap = normalized_laplacian(generate_family(Path(3)))
        r = -1 / math.sqrt(2)
        assert np.allclose(lap, [[1, r, 0], [r, 1, r], [0, r, 1]], atol=1e-15)

    def test_symmetric(self):
        lap = normalized_laplacian(random_graph(40, 0.2, 1))
        assert np.array_equal(lap, lap.T)

    def test_empty_graph_rejected(self):
        with pytest.raises(GraphError):
            normalized_laplacian(build_graph(0))


class TestSpectrum:
    def test_complete4(self):
        assert np.allclose(spectrum(K4).values, [0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)

    def test_diamond_against_exact(self):
        exact = exact_spectrum(DIAMOND)
        assert np.allclose(exact, [0, 1, 4 / 3, 5 / 3], atol=1e-12)
        assert np.allclose(spectrum(DIAMOND).values, exact, atol=1e-12)

    def test_petal2(self):
        assert np.allclose(spectrum(generate_family(Petal(2))).values, [0, .5, 1.5, 1.5, 1.5], atol=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_symbolic_oracle_on_small_random_graphs(self, seed):
        g = random_graph(7, 0.5, seed)
        assert np.allclose(spectrum(g).values, exact_spectrum_with_isolated(g), atol=1e-9)

    def test_householder_route(self):
        g = random_graph(60, 0.1, 4)
        assert spectrum(g, method="householder-ql").allclose(spectrum(g), atol=1e-10)

    def test_isolated_vertices_give_zeros(self):
        g = build_graph(5, [(0, 1)])
        assert np.allclose(spectrum(g).values, [0, 0, 0, 0, 2], atol=1e-14)

    def test_size_cap(self):
        with pytest.raises(SpectrumSizeError):
            spectrum(build_graph(12), max_vertices=10)

    def test_empty_rejected(self):
        with pytest.raises(GraphError):
            spectrum(build_graph(0))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            spectrum(K4, method="power")

    def test_values_read_only(self):
        with pytest.raises(ValueError):
            spectrum(K4).values[0] = 1.0


def exact_spectrum_with_isolated(g):
    # isolated vertices have a zero Laplacian row; handle them outside sympy
    iso = [v for v in range(g.n) if not g.neighbors[v]]
    keep = [v for v in range(g.n) if g.neighbors[v]]
    if not keep:
        return [0.0] * g.n
    index = {v: i for i, v in enumerate(keep)}
    core = build_graph(len(keep), [(index[u], index[v]) for u, v in g.edges])
    return sorted(exact_spectrum(core) + [0.0] * len(iso))


CLOSED_FORM_FAMILIES = [Complete(2), Complete(9), CompleteBipartite(3, 5), CompleteBipartite(1, 1), Star(12),
                        Path(2), Path(3), Path(31), Cycle(3), Cycle(4), Cycle(50), Hypercube(1), Hypercube(2),
                        Hypercube(6), Petal(1), Petal(13)]


class TestClosedForm:
    def test_examples(self):
        assert np.allclose(closed_form_spectrum(CompleteBipartite(2, 2)).values, [0, 1, 1, 2])
        assert np.allclose(closed_form_spectrum(Path(3)).values, [0, 1, 2], atol=1e-15)
        assert np.allclose(closed_form_spectrum(Hypercube(2)).values, [0, 1, 1, 2])
        assert closed_form_spectrum(Hypercube(2)).allclose(closed_form_spectrum(Cycle(4)), atol=1e-15)

    @pytest.mark.parametrize("spec", CLOSED_FORM_FAMILIES, ids=str)
    def test_matches_solver(self, spec):
        assert spectrum(generate_family(spec)).allclose(closed_form_spectrum(spec), atol=1e-8)

    @pytest.mark.parametrize("spec", [KRegularTree(3, 3), DuplicatedCycle(4), ErdosRenyi(10, 2)])
    def test_no_closed_form(self, spec):
        with pytest.raises(GraphError):
            closed_form_spectrum(spec)


class TestInvariants:
    @pytest.mark.parametrize("seed", range(100))
    def test_zero_multiplicity_counts_components(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 201))
        g = random_graph(n, float(rng.uniform(0, 4 / max(n, 1))), seed)
        assert spectrum(g).zero_multiplicity() == connected_components(g)[0]

    @given(st.integers(1, 60), st.floats(0, 1), st.integers(0, 2 ** 32))
    @settings(max_examples=40, deadline=None)
    def test_range_and_trace(self, n, p, seed):
        g = random_graph(n, p, seed)
        vals = spectrum(g).values
        assert vals[0] >= 0 and vals[-1] <= 2
        isolated = sum(1 for nb in g.neighbors if not nb)
        assert vals.sum() == pytest.approx(n - isolated, abs=1e-9)

    @given(st.integers(2, 60), st.integers(0, 2 ** 32))
    @settings(max_examples=30, deadline=None)
    def test_isomorphism_invariance(self, n, seed):
        g = random_graph(n, 0.3, seed)
        perm = np.random.default_rng(seed).permutation(n).tolist()
        assert spectrum(relabel(g, perm)).allclose(spectrum(g), atol=1e-8)

    def test_bipartite_depends_only_on_total(self):
        a, b, c = (spectrum(generate_family(CompleteBipartite(*p))) for p in [(1, 5), (2, 4), (3, 3)])
        assert a.allclose(b, atol=1e-12) and b.allclose(c, atol=1e-12)

    @pytest.mark.parametrize("m", [3, 10, 100])
    def test_duplicated_cycle_multiplicity(self, m):
        assert spectrum(generate_family(DuplicatedCycle(m))).multiplicity(1.0) >= m


class TestMeasure:
    def test_constant_integrates_to_one(self):
        assert integrate_measure(spectrum(DIAMOND), np.ones_like) == pytest.approx(1.0)

    def test_identity_on_k4(self):
        assert integrate_measure(spectrum(K4), lambda x: x) == pytest.approx(1.0)

    def test_indicator_on_k33(self):
        s = spectrum(generate_family(CompleteBipartite(3, 3)))
        assert integrate_measure(s, lambda x: np.abs(x - 1) < 1e-9) == pytest.approx(4 / 6)

    def test_cdf_examples(self):
        assert empirical_cdf(spectrum(DIAMOND), 2.0) == 1.0
        assert empirical_cdf(closed_form_spectrum(Path(3)), 1.0) == pytest.approx(2 / 3)
        assert empirical_cdf(spectrum(K4), 1.0) == 0.25

    @pytest.mark.parametrize("n", [5, 40, 333])
    def test_path_cdf_formula(self, n):
        s = spectrum(generate_family(Path(n)))
        # midpoints between eigenvalues are continuity points of F_n
        xs = (s.values[:-1] + s.values[1:]) / 2
        formula = (np.floor((n - 1) / np.pi * np.arccos(1 - xs)) + 1) / n
        assert np.allclose(empirical_cdf(s, xs), formula)


class TestEdgeLaplacian:
    def test_k4(self):
        assert edge_laplacian_spectrum(K4).zero_multiplicity() == 3

    def test_path_is_tree(self):
        s = edge_laplacian_spectrum(generate_family(Path(9)))
        assert s.zero_multiplicity() == 0 and s.n == 8

    def test_cycle5_against_incidence(self):
        s = edge_laplacian_spectrum(generate_family(Cycle(5)))
        assert s.n == 5 and s.zero_multiplicity() == 1
        assert np.allclose(s.values, incidence_edge_spectrum(generate_family(Cycle(5))), atol=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_against_incidence(self, seed):
        g = random_graph(30, 0.12, seed)
        assert np.allclose(edge_laplacian_spectrum(g).values, incidence_edge_spectrum(g), atol=1e-9)

    def test_no_edges(self):
        with pytest.raises(GraphError):
            edge_laplacian_spectrum(build_graph(3))


class TestSerialization:
    def test_round_trip_is_exact(self):
        s = spectrum(generate_er(ErdosRenyi(80, 5), 1))
        assert np.array_equal(read_spectrum(write_spectrum(s)).values, s.values)

    def test_header(self):
        assert write_spectrum(spectrum(K4)).splitlines()[0] == "# n 4"

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            read_spectrum("# n 3\n0\n1\n")


def test_spectrum_sorts_input():
    assert np.array_equal(Spectrum([2.0, 0.0, 1.0]).values, [0, 1, 2])


def test_nonconvergence_is_an_error_not_truncation():
    with pytest.raises(EigensolverError):
        from specdist.eigen import tridiagonal_ql
        tridiagonal_ql([0.0, 1.0], [1.0], max_iter=0)
