"""Normalized-Laplacian spectra and the spectral measure.

The Laplacian is assembled in its symmetric form I - D^-1/2 A D^-1/2, which
is similar to the random-walk operator f(x) - mean of f over neighbours and
so has the same eigenvalues. Isolated vertices get an all-zero row and
contribute eigenvalue 0.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable, TextIO, Union

import numpy as np
import scipy.linalg

from .eigen import EigensolverError, symmetric_eigvals
from .generators import (Complete, CompleteBipartite, Cycle, FamilySpec,
                         Hypercube, Path, Petal, Star)
from .graph import Graph, GraphError, connected_components

MAX_VERTICES = 10_000
RANGE_TOL = 1e-9
ZERO_TOL = 1e-7


class SpectrumSizeError(GraphError):
    """Graph exceeds the dense eigensolver size cap."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalues; also the uniform probability measure on them."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float).ravel())
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def zero_multiplicity(self, tol: float = ZERO_TOL) -> int:
        return int(np.count_nonzero(self.values < tol))

    def multiplicity(self, value: float, tol: float = ZERO_TOL) -> int:
        return int(np.count_nonzero(np.abs(self.values - value) < tol))

    def nonzero(self, tol: float = ZERO_TOL) -> "Spectrum":
        return Spectrum(self.values[self.values >= tol])

    def allclose(self, other: "Spectrum", atol: float = 1e-8) -> bool:
        return self.n == other.n and bool(np.all(np.abs(self.values - other.values) <= atol))


def _require_vertices(g: Graph):
    if g.n == 0:
        raise GraphError("spectral operations need at least one vertex")


def normalized_laplacian(g: Graph) -> np.ndarray:
    _require_vertices(g)
    lap = np.zeros((g.n, g.n))
    deg = np.array(g.degrees(), dtype=float)
    nonisolated = deg > 0
    lap[np.diag_indices(g.n)] = nonisolated.astype(float)
    if g.edges:
        e = np.array(g.edges)
        u, v = e[:, 0], e[:, 1]
        w = -1.0 / np.sqrt(deg[u] * deg[v])
        lap[u, v] = w
        lap[v, u] = w
    return lap


def spectrum(g: Graph, method: str = "lapack", max_vertices: int = MAX_VERTICES) -> Spectrum:
    """All eigenvalues of the normalized Laplacian, clamped to [0, 2].

    ``method`` is ``"lapack"`` (scipy) or ``"householder-ql"`` (pure
    implementation in :mod:`specdist.eigen`, for small graphs).
    """
    _require_vertices(g)
    if g.n > max_vertices:
        raise SpectrumSizeError(
            f"graph has {g.n} vertices, above the dense eigensolver cap of {max_vertices}")
    lap = normalized_laplacian(g)
    if method == "lapack":
        try:
            vals = scipy.linalg.eigvalsh(lap, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(str(exc)) from exc
    elif method == "householder-ql":
        vals = symmetric_eigvals(lap)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    if vals[0] < -RANGE_TOL or vals[-1] > 2 + RANGE_TOL:
        raise EigensolverError(
            f"eigenvalues [{vals[0]!r}, {vals[-1]!r}] outside [0, 2] beyond tolerance")
    return Spectrum(np.clip(vals, 0.0, 2.0))


def closed_form_spectrum(spec: FamilySpec) -> Spectrum:
    if isinstance(spec, Complete):
        n = spec.n
        return Spectrum([0.0] + [n / (n - 1)] * (n - 1)) if n > 1 else Spectrum([0.0])
    if isinstance(spec, (CompleteBipartite, Star)):
        n = spec.n if isinstance(spec, Star) else spec.n1 + spec.n2
        if n < 2:
            raise GraphError(f"{spec} is not a valid complete bipartite graph")
        return Spectrum([0.0] + [1.0] * (n - 2) + [2.0])
    if isinstance(spec, Hypercube):
        d = spec.d
        vals = []
        for k in range(d + 1):
            vals += [2.0 * k / d] * math.comb(d, k)
        return Spectrum(vals)
    if isinstance(spec, Petal):
        m = spec.m
        return Spectrum([0.0] + [0.5] * (m - 1) + [1.5] * (m + 1))
    if isinstance(spec, Path):
        n = spec.n
        if n == 1:
            return Spectrum([0.0])
        return Spectrum(1.0 - np.cos(np.pi * np.arange(n) / (n - 1)))
    if isinstance(spec, Cycle):
        n = spec.n
        return Spectrum(1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
    raise GraphError(f"no closed-form spectrum for {spec!r}")


def integrate_measure(s: Spectrum, f: Callable[[np.ndarray], np.ndarray]) -> float:
    """Mean of ``f`` over the eigenvalues. ``f`` must accept a numpy array."""
    return float(np.mean(np.broadcast_to(f(s.values), s.values.shape)))


def empirical_cdf(s: Spectrum, x):
    """Fraction of eigenvalues <= x; vectorized over ``x``."""
    res = np.searchsorted(s.values, x, side="right") / s.n
    return float(res) if np.ndim(res) == 0 else res


def edge_laplacian_spectrum(g: Graph) -> Spectrum:
    """Spectrum of the normalized Laplacian acting on edges.

    Same nonzero eigenvalues as the vertex operator; eigenvalue 0 has
    multiplicity |E| - |V| + c (independent cycles), so the result has |E|
    entries.
    """
    if g.num_edges == 0:
        raise GraphError("edge Laplacian needs at least one edge")
    c, _ = connected_components(g)
    vals = spectrum(g).values
    cycles = g.num_edges - g.n + c
    return Spectrum(np.concatenate([np.zeros(cycles), vals[c:]]))


# -- CSV serialization ---------------------------------------------------------

def write_spectrum(s: Spectrum) -> str:
    buf = io.StringIO()
    buf.write(f"# n {s.n}\n")
    for v in s.values:
        buf.write(f"{v:.17g}\n")
    return buf.getvalue()


def read_spectrum(source: Union[str, TextIO]) -> Spectrum:
    text = source if isinstance(source, str) else source.read()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# n "):
        raise ValueError("spectrum CSV must start with '# n <count>'")
    n = int(lines[0][4:])
    vals = [float(ln) for ln in lines[1:] if not ln.startswith("#")]
    if len(vals) != n:
        raise ValueError(f"header says {n} eigenvalues, found {len(vals)}")
    return Spectrum(vals)
