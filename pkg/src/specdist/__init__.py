"""Spectral distance between graphs via the normalized Laplacian."""

__version__ = "0.1.0"

from .distance import (DEFAULT_SIGMA, Arcsine, DiracAtOne, Grid, PetalMixture, Semicircle,  # noqa: E402
                       build_density, check_interlacing, class_template_density, classify,
                       cube_erf_bound, default_grid, density, spectral_distance)
from .graph import (DeleteEdge, DeleteIsolatedVertex, Graph, InsertEdge, InsertIsolatedVertex,  # noqa: E402
                    apply_edit, average_degree, build_graph, connected_components, degree,
                    read_edge_list, write_edge_list)
from .spectral import (Spectrum, closed_form_spectrum, edge_laplacian_spectrum, empirical_cdf,  # noqa: E402
                       integrate_measure, normalized_laplacian, spectrum)
