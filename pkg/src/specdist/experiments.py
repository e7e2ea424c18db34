"""Distance matrices, convergence-rate fits and the growth/tree experiments."""
from __future__ import annotations

import hashlib
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Callable, Iterable, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from . import __version__
from .distance import DEFAULT_SIGMA, Grid, SpectralDensity, build_density, cube_erf_bound, default_grid, \
    spectral_distance
from .generators import (BarabasiAlbert, Complete, CompleteBipartite, Cycle, ErdosRenyi, Hypercube,
                         LeafAttachment, Path, PreferentialAttachment, Star, TreeFill, child_seeds,
                         generate_ba, generate_er, generate_family, grow)
from .graph import DeleteEdge, Graph, apply_edit, average_degree, looks_canonical, read_edge_list, \
    read_labeled_edge_list
from .spectral import Spectrum, spectrum

log = logging.getLogger(__name__)


class RateFitError(ValueError):
    pass


# -- distance matrix -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: list[str]
    values: np.ndarray
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        k = len(self.labels)
        if self.values.shape != (k, k):
            raise ValueError(f"matrix shape {self.values.shape} does not match {k} labels")

    def to_csv(self, header: Sequence[str] = ()) -> str:
        buf = io.StringIO()
        for line in header:
            buf.write(f"# {line}\n")
        for name, reason in self.skipped:
            buf.write(f"# skipped {name}: {reason}\n")
        buf.write(",".join(["label"] + self.labels) + "\n")
        for lab, row in zip(self.labels, self.values):
            buf.write(",".join([lab] + [f"{v:.17g}" for v in row]) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DistanceMatrix":
        rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        labels = rows[0].split(",")[1:]
        values = np.array([[float(v) for v in r.split(",")[1:]] for r in rows[1:]])
        return cls(labels, values)

    def to_svg(self, cell: int = 24) -> str:
        return heatmap_svg(self.labels, self.values, cell=cell)


def pairwise_matrix(labels: Sequence[str], densities: Sequence[SpectralDensity]) -> np.ndarray:
    k = len(densities)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = spectral_distance(densities[i], densities[j])
    return out


def distance_matrix(graphs: Sequence[tuple[str, Graph]], sigma: float = DEFAULT_SIGMA,
                    grid: Grid | None = None, workers: int | None = None) -> DistanceMatrix:
    """All pairwise spectral distances; each spectrum is computed once."""
    grid = grid or default_grid(sigma)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        spectra = list(pool.map(lambda item: spectrum(item[1]), graphs))
    densities = [build_density(s, sigma, grid) for s in spectra]
    labels = [name for name, _ in graphs]
    return DistanceMatrix(labels, pairwise_matrix(labels, densities))


def load_graph(path: FsPath) -> Graph:
    text = FsPath(path).read_text(encoding="utf-8")
    if looks_canonical(text):
        return read_edge_list(text)
    return read_labeled_edge_list(text)[0]


class SpectrumCache:
    """Spectra keyed by (path, sha256 of file contents)."""

    def __init__(self):
        self._store: dict[tuple[str, str], Spectrum] = {}

    def get(self, path: FsPath) -> Spectrum:
        data = FsPath(path).read_bytes()
        key = (str(path), hashlib.sha256(data).hexdigest())
        if key not in self._store:
            self._store[key] = spectrum(load_graph(path))
        return self._store[key]


def matrix_from_directory(directory: FsPath, sigma: float = DEFAULT_SIGMA, grid: Grid | None = None,
                          pattern: str = "*", cache: SpectrumCache | None = None,
                          workers: int | None = None) -> DistanceMatrix:
    """Distance matrix over every readable edge list in ``directory``.

    Unreadable files are skipped with a warning and listed in ``skipped``.
    """
    grid = grid or default_grid(sigma)
    cache = cache or SpectrumCache()
    paths = sorted(p for p in FsPath(directory).glob(pattern) if p.is_file())

    def load(p):
        try:
            return p, cache.get(p), None
        except (ValueError, OSError, UnicodeDecodeError) as exc:
            return p, None, str(exc)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        loaded = list(pool.map(load, paths))
    labels, densities, skipped = [], [], []
    for p, spec, err in loaded:
        if err is not None:
            log.warning("skipping %s: %s", p.name, err)
            skipped.append((p.name, err))
            continue
        labels.append(p.stem)
        densities.append(build_density(spec, sigma, grid))
    if len(labels) < 2:
        raise ValueError(f"need at least 2 readable graphs in {directory}, found {len(labels)}")
    return DistanceMatrix(labels, pairwise_matrix(labels, densities), skipped)


# -- SVG heatmap ------------------------------------------------------------------

DARK_BLUE = (0, 0, 139)
WHITE = (255, 255, 255)
DARK_RED = (139, 0, 0)


def ramp_color(value: float, vmax: float) -> str:
    """Linear ramp dark blue (0) -> white (vmax/2) -> dark red (vmax)."""
    t = 0.0 if vmax <= 0 else min(max(value / vmax, 0.0), 1.0)
    if t <= 0.5:
        lo, hi, u = DARK_BLUE, WHITE, t / 0.5
    else:
        lo, hi, u = WHITE, DARK_RED, (t - 0.5) / 0.5
    rgb = [round(a + (b - a) * u) for a, b in zip(lo, hi)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(labels: Sequence[str], values: np.ndarray, cell: int = 24) -> str:
    k = len(labels)
    vmax = float(values.max()) if values.size else 0.0
    margin = 8 + 7 * max((len(s) for s in labels), default=1)
    legend_h = 40
    size = margin + k * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 10}" '
           f'height="{size + legend_h}" font-family="sans-serif" font-size="10">']
    for i, lab in enumerate(labels):
        y = margin + i * cell + cell * 0.65
        out.append(f'<text x="{margin - 4}" y="{y:.1f}" text-anchor="end">{escape(lab)}</text>')
        x = margin + i * cell + cell * 0.5
        out.append(f'<text x="{x:.1f}" y="{margin - 4}" text-anchor="start" '
                   f'transform="rotate(-60 {x:.1f} {margin - 4})">{escape(lab)}</text>')
    for i in range(k):
        for j in range(k):
            v = float(values[i, j])
            out.append(f'<rect x="{margin + j * cell}" y="{margin + i * cell}" width="{cell}" '
                       f'height="{cell}" fill="{ramp_color(v, vmax)}" data-row={quoteattr(labels[i])} '
                       f'data-col={quoteattr(labels[j])} data-value="{v:.17g}"/>')
    ly = size + 12
    steps = 50
    width = max(k * cell, 100)
    for s in range(steps):
        out.append(f'<rect x="{margin + s * width / steps:.2f}" y="{ly}" width="{width / steps + 0.5:.2f}" '
                   f'height="8" fill="{ramp_color(vmax * s / (steps - 1), vmax)}"/>')
    out.append(f'<text x="{margin}" y="{ly + 20}">0</text>')
    out.append(f'<text x="{margin + width}" y="{ly + 20}" text-anchor="end" '
               f'data-max="{vmax:.17g}">max {vmax:.4g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- rate fits ---------------------------------------------------------------------

@dataclass(frozen=True)
class RateFit:
    sizes: list[float]
    distances: list[float]
    slope: float
    intercept: float
    residual: float


def fit_rate(sizes: Sequence[float], distances: Sequence[float]) -> RateFit:
    """Least-squares line through (log n, log D); ``residual`` is the RMS misfit."""
    if len(sizes) != len(distances):
        raise RateFitError("sizes and distances differ in length")
    if len(sizes) < 4:
        raise RateFitError(f"need at least 4 points, got {len(sizes)}")
    if any(d <= 0 for d in distances):
        raise RateFitError("zero distance at some size; cannot fit a log-log slope")
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(distances, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return RateFit(list(map(float, sizes)), list(map(float, distances)), float(slope), float(intercept), resid)


# -- experiment tables ---------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[list[float]]
    params: dict[str, object]

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# specdist {__version__}\n")
        for key, val in self.params.items():
            buf.write(f"# {key} {val}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _densify(sigma, grid):
    grid = grid or default_grid(sigma)
    return lambda g: build_density(spectrum(g), sigma, grid)


def experiment_growth(model: str = "ba", base_n: int = 1000, steps: int = 3, step_size: int = 1000,
                      avg_degree: float = 4.0, m: int | None = None, init: int = 5, seed: int = 0,
                      sigma: float = DEFAULT_SIGMA, grid: Grid | None = None) -> Table:
    """Two same-model groups grown from independent base graphs, plus a contrast group.

    Columns: size, same_group = D(G1_0, G1_i), cross_group = D(G1_0, G2_i),
    contrast = D(G1_0, G3_i), where G3_i comes from the other model with the
    average degree of G1_i. BA groups grow by preferential attachment; ER
    groups are redrawn at each size with the same average degree (an ER
    graph has no growth process that keeps its law).
    """
    if model not in ("ba", "er"):
        raise ValueError(f"model must be 'ba' or 'er', got {model!r}")
    if m is None:
        m = max(1, round(avg_degree / 2))
    dens = _densify(sigma, grid)
    s_g1, s_g2, s_contrast, s_grow1, s_grow2 = child_seeds(seed, 5)
    contrast_seeds = child_seeds(s_contrast, steps + 1)
    grow_seeds = (child_seeds(s_grow1, steps + 1), child_seeds(s_grow2, steps + 1))

    def base(s):
        if model == "ba":
            return generate_ba(BarabasiAlbert(base_n, m, init), s)
        return generate_er(ErdosRenyi(base_n, avg_degree), s)

    groups = [base(s_g1), base(s_g2)]
    ref = dens(groups[0])
    rows = []
    for i in range(steps + 1):
        size = base_n + i * step_size
        if i > 0:
            for j in range(2):
                if model == "ba":
                    groups[j] = grow(groups[j], size, PreferentialAttachment(m), grow_seeds[j][i])
                else:
                    groups[j] = generate_er(ErdosRenyi(size, avg_degree), grow_seeds[j][i])
        d_same = spectral_distance(ref, dens(groups[0]))
        d_cross = spectral_distance(ref, dens(groups[1]))
        w = average_degree(groups[0])
        if model == "ba":
            other = generate_er(ErdosRenyi(size, w), contrast_seeds[i])
        else:
            other = generate_ba(BarabasiAlbert(size, max(1, round(w / 2)), init), contrast_seeds[i])
        rows.append([size, d_same, d_cross, spectral_distance(ref, dens(other))])
    params = dict(experiment="growth", model=model, base_n=base_n, steps=steps, step_size=step_size,
                  avg_degree=avg_degree, m=m, init=init, seed=seed, sigma=sigma,
                  grid_step=(grid or default_grid(sigma)).h)
    return Table(["size", "same_group", "cross_group", "contrast"], rows, params)


def experiment_trees(ks: Sequence[int] = (3, 4), base_size: int = 100, steps: int = 10,
                     seed: int = 0, sigma: float = DEFAULT_SIGMA, grid: Grid | None = None) -> Table:
    """k-regular trees grown by adding leaves in breadth-first order.

    Columns: size, then ``same_k<k>`` = D(T^k_0, T^k_i) for each k, then
    ``cross_<k0>_<k>`` = D(T^k0_i, T^k_i) for each further k. The growth is
    deterministic; ``seed`` is recorded but unused.
    """
    if any(k < 3 for k in ks):
        raise ValueError(f"tree degrees must be >= 3, got {list(ks)}")
    dens = _densify(sigma, grid)
    trees = {k: generate_family(TreeFill(k, base_size)) for k in ks}
    refs = {k: dens(t) for k, t in trees.items()}
    columns = ["size"] + [f"same_k{k}" for k in ks] + [f"cross_{ks[0]}_{k}" for k in ks[1:]]
    rows = []
    for i in range(steps + 1):
        size = (i + 1) * base_size
        current = {}
        for k in ks:
            trees[k] = grow(trees[k], size, LeafAttachment(k))
            current[k] = dens(trees[k])
        row = [size] + [spectral_distance(refs[k], current[k]) for k in ks]
        row += [spectral_distance(current[ks[0]], current[k]) for k in ks[1:]]
        rows.append(row)
    params = dict(experiment="trees", ks=",".join(map(str, ks)), base_size=base_size, steps=steps,
                  seed=seed, growth="leaf attachment, breadth-first", sigma=sigma,
                  grid_step=(grid or default_grid(sigma)).h)
    return Table(columns, rows, params)


_RATE_FAMILIES: dict[str, Callable[[int], object]] = {
    "complete": Complete,
    "bipartite": lambda n: CompleteBipartite(n // 2, n - n // 2),
    "star": Star,
    "path": Path,
    "cycle": Cycle,
    "cube": Hypercube,
}


def experiment_rate(family: str, sizes: Iterable[int], edit: str = "succ", avg_degree: float = 10.0,
                    seed: int = 0, sigma: float = DEFAULT_SIGMA,
                    grid: Grid | None = None) -> tuple[Table, RateFit | None]:
    """Distance between G_n and an edited G_n' across sizes, with a log-log fit.

    ``edit`` is ``succ`` (compare with the next family member; for ``cube``
    the size is the dimension d and the pair is Q_{d-1}, Q_d) or
    ``delete-edge`` (remove one uniformly random edge). ``family`` ``er``
    draws G(n, avg_degree / (n - 1)) per size.
    """
    sizes = list(sizes)
    dens = _densify(sigma, grid)
    seeds = child_seeds(seed, len(sizes))
    rows = []
    for n, s in zip(sizes, seeds):
        if family == "er":
            g = generate_er(ErdosRenyi(n, avg_degree), s)
        elif family in _RATE_FAMILIES:
            g = generate_family(_RATE_FAMILIES[family](n - 1 if family == "cube" and edit == "succ" else n))
        else:
            raise ValueError(f"unknown family {family!r} for rate experiment")
        if edit == "succ":
            if family == "er":
                raise ValueError("edit 'succ' is not defined for random graphs")
            h = generate_family(_RATE_FAMILIES[family](n if family == "cube" else n + 1))
        elif edit == "delete-edge":
            if g.num_edges == 0:
                raise ValueError(f"graph of size {n} has no edge to delete")
            u, v = g.edges[int(np.random.default_rng(s).integers(g.num_edges))]
            h = apply_edit(g, DeleteEdge(u, v))
        else:
            raise ValueError(f"unknown edit {edit!r}")
        d = spectral_distance(dens(g), dens(h))
        row = [n, d]
        if family == "cube":
            row.append(cube_erf_bound(n, sigma))
        rows.append(row)
    columns = ["size", "distance"] + (["erf_bound"] if family == "cube" else [])
    params = dict(experiment="rate", family=family, edit=edit, sizes=",".join(map(str, sizes)),
                  avg_degree=avg_degree, seed=seed, sigma=sigma, grid_step=(grid or default_grid(sigma)).h)
    table = Table(columns, rows, params)
    distances = [r[1] for r in rows]
    fit = None
    if len(sizes) >= 4 and all(d > 0 for d in distances):
        fit = fit_rate(sizes, distances)
        params.update(slope=fit.slope, intercept=fit.intercept, residual=fit.residual)
    return table, fit

