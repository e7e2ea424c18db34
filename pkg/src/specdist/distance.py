"""Gaussian-smoothed spectral densities and the L1 spectral distance.

A spectrum with eigenvalues l_i is smoothed to

    rho(x) = (1/n) sum_i N(x; l_i, sigma^2)

and two graphs are compared by the integral of |rho_a - rho_b| over a
shared uniform grid covering [-4 sigma, 2 + 4 sigma].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .spectral import ZERO_TOL, Spectrum

DEFAULT_SIGMA = 0.05
INTERLACING_TOL = 1e-9
MASS_TOL = 1e-4
# eigenvalues processed per block when sampling densities
_CHUNK = 2048
# nodes of the angular rule used to smooth continuous templates
_ANGLE_NODES = 4096


@dataclass(frozen=True)
class Grid:
    """Uniform points ``lo + h * k`` for ``k = 0 .. num - 1``."""

    lo: float
    h: float
    num: int

    @property
    def hi(self) -> float:
        return self.lo + self.h * (self.num - 1)

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.h * np.arange(self.num)

    def check(self, sigma: float):
        slack = 1e-12
        if not self.lo <= -4 * sigma + slack:
            raise ValueError(f"grid starts at {self.lo}, must be <= -4 sigma = {-4 * sigma}")
        if not self.hi >= 2 + 4 * sigma - slack:
            raise ValueError(f"grid ends at {self.hi}, must be >= 2 + 4 sigma = {2 + 4 * sigma}")
        if not self.h <= sigma / 10 + slack:
            raise ValueError(f"grid step {self.h} too coarse, must be <= sigma/10 = {sigma / 10}")


def default_grid(sigma: float = DEFAULT_SIGMA, h: float | None = None) -> Grid:
    """Grid over [-4 sigma, 2 + 4 sigma] with step ``h`` (default sigma / 20)."""
    _check_sigma(sigma)
    if h is None:
        h = sigma / 20
    if h <= 0:
        raise ValueError(f"grid step must be positive, got {h}")
    lo = -4 * sigma
    num = int(math.ceil((2 + 8 * sigma) / h - 1e-9)) + 1
    return Grid(lo, h, num)


def _check_sigma(sigma: float):
    if not sigma > 0:
        raise ValueError(f"bandwidth sigma must be positive, got {sigma}")


def _gauss_mixture(centers: np.ndarray, weights: np.ndarray | None, sigma: float, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    norm = 1.0 / (math.sqrt(2 * math.pi) * sigma)
    for start in range(0, centers.size, _CHUNK):
        c = centers[start:start + _CHUNK]
        k = np.exp(-0.5 * ((x[:, None] - c[None, :]) / sigma) ** 2)
        if weights is None:
            out += k.sum(axis=1)
        else:
            out += k @ weights[start:start + _CHUNK]
    return out * norm


def density(s: Spectrum, sigma: float, x):
    """Smoothed spectral density at ``x`` (scalar or array)."""
    _check_sigma(sigma)
    if s.n == 0:
        raise ValueError("empty spectrum")
    out = _gauss_mixture(s.values, None, sigma, x) / s.n
    return float(out[0]) if np.ndim(x) == 0 else out


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    values: np.ndarray
    sigma: float
    grid: Grid
    spectrum: Spectrum | None = None
    label: str = ""
    # fraction of eigenvalues left out before smoothing (semicircle comparison)
    dropped_mass: float = 0.0

    def __post_init__(self):
        self.values.flags.writeable = False

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def mass(self) -> float:
        return trapezoid(self.values, self.grid.h)

    def to_csv(self) -> str:
        g = self.grid
        lines = [f"# sigma {self.sigma!r} lo {g.lo!r} hi {g.hi!r} h {g.h!r}"]
        lines += [f"{x:.17g},{y:.17g}" for x, y in zip(g.points, self.values)]
        return "\n".join(lines) + "\n"


def trapezoid(y: np.ndarray, h: float) -> float:
    return float(h * (y.sum() - 0.5 * (y[0] + y[-1])))


def _check_mass(values: np.ndarray, h: float, what: str):
    mass = trapezoid(values, h)
    if not 1 - MASS_TOL <= mass <= 1 + 1e-12:
        raise ValueError(f"{what}: density mass {mass!r} outside [1 - {MASS_TOL}, 1]")


def build_density(s: Spectrum, sigma: float = DEFAULT_SIGMA, grid: Grid | None = None,
                  label: str = "") -> SpectralDensity:
    _check_sigma(sigma)
    if s.n == 0:
        raise ValueError("empty spectrum")
    grid = grid or default_grid(sigma)
    grid.check(sigma)
    values = density(s, sigma, grid.points)
    _check_mass(values, grid.h, label or "spectrum")
    return SpectralDensity(values, sigma, grid, spectrum=s, label=label)


def _abs_cubic_cell(f: np.ndarray, k: int) -> tuple[float, float, float]:
    """Integral of |p| over cell k in units of h, plus p'(0) and p'(1).

    ``p`` is the cubic through the four samples nearest the cell, in the
    local coordinate t = (x - x_k) / h.
    """
    first = min(max(k - 1, 0), f.size - 4)
    t = np.arange(first, first + 4, dtype=float) - k
    c = np.linalg.solve(np.vander(t, 4), f[first:first + 4])
    poly = np.poly1d(c)
    prim = poly.integ()
    r = poly.roots
    r = np.sort(r[(np.abs(r.imag) < 1e-12) & (r.real > 0) & (r.real < 1)].real)
    knots = np.concatenate([[0.0], r, [1.0]])
    total = float(np.abs(np.diff(prim(knots))).sum())
    d = poly.deriv()
    return total, float(d(0.0)), float(d(1.0))


def l1_norm(f: np.ndarray, h: float, corrected: bool = True) -> float:
    """Integral of |f| over the sample range, from samples of a smooth f.

    ``corrected=False`` is the plain composite trapezoid rule. Its error is
    O(h^2) and dominated by the kinks of |f| at sign changes of f. The
    corrected rule keeps the trapezoid on every run of cells where f has
    one sign, adds the Euler-Maclaurin end term -(h^2/12) [g'] at both ends
    of each run (g = |f|, derivatives taken from f, which is smooth), and
    integrates each sign-changing cell exactly on a local cubic interpolant.
    """
    f = np.asarray(f, dtype=float)
    a, b = f[:-1], f[1:]
    cells = 0.5 * h * (np.abs(a) + np.abs(b))
    if not corrected or f.size < 4:
        return float(cells.sum())
    cells = cells.copy()
    ends = 0.0
    for k in np.flatnonzero(a * b < 0):
        area, d0, d1 = _abs_cubic_cell(f, int(k))
        cells[k] = h * area
        # run on the left ends at x_k, run on the right starts at x_{k+1}; d/dt = h d/dx
        ends += -(h / 12) * np.sign(f[k]) * d0 + (h / 12) * np.sign(f[k + 1]) * d1
    # outer ends of the sample range, one-sided second-order differences
    d_lo = (-3 * f[0] + 4 * f[1] - f[2]) / 2
    d_hi = (3 * f[-1] - 4 * f[-2] + f[-3]) / 2
    ends += (h / 12) * np.sign(f[0]) * d_lo - (h / 12) * np.sign(f[-1]) * d_hi
    return float(cells.sum() + ends)


DensityLike = Union[Spectrum, SpectralDensity]


def spectral_distance(a: DensityLike, b: DensityLike, sigma: float = DEFAULT_SIGMA,
                      grid: Grid | None = None, corrected: bool = True) -> float:
    """L1 distance between smoothed spectral densities, in [0, 2]."""
    da = a if isinstance(a, SpectralDensity) else build_density(a, sigma, grid)
    db = b if isinstance(b, SpectralDensity) else build_density(b, sigma, grid)
    if da.sigma != db.sigma or da.grid != db.grid:
        raise ValueError("densities were sampled with different sigma or grid")
    if da is db:
        return 0.0
    d = l1_norm(da.values - db.values, da.grid.h, corrected)
    return min(max(d, 0.0), 2.0)


# -- interlacing -----------------------------------------------------------------

@dataclass(frozen=True)
class InterlacingReport:
    C: int
    holds: bool
    violation_index: int | None = None


def check_interlacing(a: Spectrum, b: Spectrum, C: int, tol: float = INTERLACING_TOL) -> InterlacingReport:
    """Check lam[i-C] <= theta[i] <= lam[i+C] for every eigenvalue theta of ``b``.

    ``lam`` are the eigenvalues of ``a``, padded with 0 below index 0 and 2
    from index n upward.
    """
    if C < 0:
        raise ValueError(f"shift C must be nonnegative, got {C}")
    lam, theta = a.values, b.values
    n = lam.size
    idx = np.arange(theta.size)
    lo_idx, hi_idx = idx - C, idx + C
    lower = np.where(lo_idx < 0, 0.0, lam[np.clip(lo_idx, 0, n - 1)])
    lower = np.where(lo_idx >= n, 2.0, lower)
    upper = np.where(hi_idx >= n, 2.0, lam[np.clip(hi_idx, 0, n - 1)])
    bad = np.flatnonzero((theta < lower - tol) | (theta > upper + tol))
    if bad.size:
        return InterlacingReport(C, False, int(bad[0]))
    return InterlacingReport(C, True)


# -- spectral class templates ------------------------------------------------------

@dataclass(frozen=True)
class DiracAtOne:
    name = "dirac-at-one"

    def atoms(self):
        return np.array([1.0]), np.array([1.0])


@dataclass(frozen=True)
class PetalMixture:
    name = "petal-mixture"

    def atoms(self):
        return np.array([0.5, 1.5]), np.array([0.5, 0.5])


@dataclass(frozen=True)
class Arcsine:
    """Limit of path and cycle spectra: density 1 / (pi sqrt(2x - x^2)) on (0, 2)."""

    name = "arcsine"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 1.0 / (np.pi * np.sqrt(2 * x - x * x))
        return np.where((x > 0) & (x < 2), out, 0.0)

    def smoothed(self, sigma: float, x) -> np.ndarray:
        # x = 1 - cos(t) pushes the uniform law on [0, pi] forward to the arcsine law
        t = np.linspace(0.0, np.pi, _ANGLE_NODES)
        w = np.full(t.size, 1.0 / (t.size - 1))
        w[[0, -1]] *= 0.5
        return _gauss_mixture(1.0 - np.cos(t), w, sigma, x)


@dataclass(frozen=True)
class Semicircle:
    """Semicircle centred at 1 with radius 2 / sqrt(avg_degree)."""

    avg_degree: float
    name = "semicircle"

    @property
    def radius(self) -> float:
        return 2.0 / math.sqrt(self.avg_degree)

    def validate(self):
        if not self.avg_degree > 4:
            raise ValueError(
                f"semicircle radius {self.radius:.3f} for average degree {self.avg_degree} "
                "leaves [0, 2]; need avg_degree > 4")

    def pdf(self, x):
        r = self.radius
        x = np.asarray(x, dtype=float)
        return 2.0 / (np.pi * r * r) * np.sqrt(np.clip(r * r - (x - 1) ** 2, 0.0, None))

    def smoothed(self, sigma: float, x) -> np.ndarray:
        self.validate()
        # x = 1 + r cos(t) with weight (2/pi) sin^2(t) dt
        t = np.linspace(0.0, np.pi, _ANGLE_NODES)
        w = np.sin(t) ** 2 * (2.0 / np.pi) * (np.pi / (t.size - 1))
        return _gauss_mixture(1.0 + self.radius * np.cos(t), w, sigma, x)


ClassTemplate = Union[DiracAtOne, Arcsine, Semicircle, PetalMixture]


def class_template_density(t: ClassTemplate, sigma: float = DEFAULT_SIGMA,
                           grid: Grid | None = None) -> SpectralDensity:
    _check_sigma(sigma)
    grid = grid or default_grid(sigma)
    grid.check(sigma)
    if hasattr(t, "atoms"):
        centers, weights = t.atoms()
        values = _gauss_mixture(centers, weights, sigma, grid.points)
    else:
        values = t.smoothed(sigma, grid.points)
    _check_mass(values, grid.h, t.name)
    return SpectralDensity(values, sigma, grid, label=t.name)


@dataclass(frozen=True)
class Classification:
    template: ClassTemplate
    distance: float
    dropped_mass: float = 0.0


def default_templates(avg_degree: float | None = None) -> list[ClassTemplate]:
    templates: list[ClassTemplate] = [DiracAtOne(), Arcsine(), PetalMixture()]
    if avg_degree is not None and avg_degree > 4:
        templates.append(Semicircle(avg_degree))
    return templates


def classify(s: Spectrum, sigma: float = DEFAULT_SIGMA, grid: Grid | None = None,
             templates: Sequence[ClassTemplate] | None = None,
             avg_degree: float | None = None) -> list[Classification]:
    """Distances from the spectrum to each template, nearest first.

    Semicircle comparisons drop the numerically-zero eigenvalues first and
    report the dropped fraction. Ties keep template order.
    """
    grid = grid or default_grid(sigma)
    if templates is None:
        templates = default_templates(avg_degree)
    full = build_density(s, sigma, grid)
    results = []
    for t in templates:
        ref = class_template_density(t, sigma, grid)
        if isinstance(t, Semicircle):
            kept = s.nonzero(ZERO_TOL)
            if kept.n == 0:
                continue
            d = spectral_distance(build_density(kept, sigma, grid), ref)
            results.append(Classification(t, d, 1.0 - kept.n / s.n))
        else:
            results.append(Classification(t, spectral_distance(full, ref)))
    return sorted(results, key=lambda c: c.distance)


def cube_erf_bound(d: int, sigma: float) -> float:
    """Upper bound on D(Q_{d-1}, Q_d): 2 erf(2 / ((d - 1) 2 sigma sqrt 2))."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    _check_sigma(sigma)
    return 2.0 * math.erf(2.0 / ((d - 1) * 2.0 * sigma * math.sqrt(2.0)))


def read_density_csv(text: str) -> tuple[dict[str, float], np.ndarray, np.ndarray]:
    """Parse density CSV back into (header params, x, rho)."""
    lines = text.strip().splitlines()
    head = lines[0].lstrip("#").split()
    params = {head[i]: float(head[i + 1]) for i in range(0, len(head), 2)}
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return params, data[:, 0], data[:, 1]


