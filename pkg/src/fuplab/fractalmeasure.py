"""Finite-level fractal measures and their Fourier-side statistics.

A WeightedCover is a disjoint interval family with probability weights:
|I_w|^delta weights on a Schottky word tree approximate the conformal
measure on the limit set; uniform weights on middle-third pieces give the
Cantor measure.  On top of these live the measure Fourier transform, its
block-max envelope, log-log decay fits, the explicit middle-third kernel,
and the Schur bound on localized transform norms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .covers import IntervalCover, middle_third_cover
from .errors import InputError
from .schottky import WordTree

LOG3_2 = float(np.log(2.0) / np.log(3.0))

__all__ = [
    "WeightedCover",
    "FourierSamples",
    "DecayFit",
    "ps_weights",
    "cantor_measure_cover",
    "fourier_transform_measure",
    "envelope",
    "cantor_kernel_KX",
    "kernel_KX_cover",
    "schur_fup_bound",
    "decay_slope",
    "fourier_fup_exponent",
]


@dataclass
class WeightedCover:
    """Disjoint intervals with probability weights (one per interval)."""

    intervals: np.ndarray
    weights: np.ndarray
    level: int
    delta: float
    first_letters: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=np.float64).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=np.float64)
        if len(iv) != len(w):
            raise InputError(f"{len(w)} weights for {len(iv)} intervals")
        if len(iv) == 0:
            raise InputError("weighted cover must be nonempty")
        if np.any(w < 0):
            raise InputError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InputError(f"weights sum to {w.sum()!r}, expected 1 within 1e-12")
        self.intervals = iv
        self.weights = w

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.intervals[:, 0] + self.intervals[:, 1])

    @property
    def max_length(self) -> float:
        return float(np.max(self.intervals[:, 1] - self.intervals[:, 0]))


@dataclass
class FourierSamples:
    """mu-hat sampled on an increasing grid, optionally with an envelope."""

    xi: np.ndarray
    values: np.ndarray
    envelope_window: Optional[int] = None
    truncation_warning: Optional[str] = None

    def __post_init__(self):
        self.xi = np.asarray(self.xi, dtype=np.float64)
        self.values = np.asarray(self.values)
        if len(self.xi) != len(self.values):
            raise InputError("grid and values must have equal length")
        if len(self.xi) > 1 and np.any(np.diff(self.xi) <= 0):
            raise InputError("xi grid must be strictly increasing")


@dataclass
class DecayFit:
    exponent: float
    fit_range: tuple[float, float]
    residual: float
    n_points: int


def ps_weights(tree: WordTree, delta: float) -> WeightedCover:
    """|I_w|^delta weights on a word tree, normalized to total mass 1."""
    if not 0.0 < delta < 1.0:
        warnings.warn(f"delta={delta:g} outside (0,1); weights are still formed")
    w = tree.lengths ** delta
    w = w / w.sum()
    return WeightedCover(
        intervals=tree.intervals,
        weights=w,
        level=tree.depth,
        delta=delta,
        first_letters=tree.first_letters,
    )


def cantor_measure_cover(level: int) -> WeightedCover:
    """Middle-third pieces with the uniform (Cantor) weights."""
    cover = middle_third_cover(level, style="pieces")
    n = len(cover)
    return WeightedCover(
        intervals=cover.intervals,
        weights=np.full(n, 1.0 / n),
        level=level,
        delta=LOG3_2,
    )


def fourier_transform_measure(wc: WeightedCover, xi_grid) -> FourierSamples:
    """mu-hat(xi) = sum_w weight_w exp(i xi x_w) with midpoint atoms.

    Midpoint placement makes the quadrature error second order in
    |I_w| * xi; when max |xi| * max |I_w| exceeds 0.5 the samples carry a
    truncation warning instead of failing.
    """
    xi = np.asarray(xi_grid, dtype=np.float64)
    if len(xi) == 0:
        raise InputError("empty xi grid")
    warn = None
    budget = float(np.max(np.abs(xi))) * wc.max_length
    if budget > 0.5:
        warn = (
            f"max |xi| * max interval length = {budget:.3g} > 0.5; "
            "midpoint-atom phase error may be significant"
        )
    vals = kernels.measure_ft(wc.midpoints, wc.weights, xi)
    return FourierSamples(xi=xi, values=vals, truncation_warning=warn)


def envelope(samples: FourierSamples, window: int) -> FourierSamples:
    """Block maximum of |mu-hat| over consecutive windows of samples."""
    if window < 1:
        raise InputError(f"envelope window must be >= 1, got {window}")
    absv = np.abs(samples.values)
    n = len(absv)
    m = (n + window - 1) // window
    env = np.empty(m)
    xi = np.empty(m)
    for b in range(m):
        chunk = slice(b * window, min((b + 1) * window, n))
        env[b] = absv[chunk].max()
        xi[b] = samples.xi[chunk].mean()
    return FourierSamples(xi=xi, values=env, envelope_window=window)


def cantor_kernel_KX(k: int, y) -> np.ndarray:
    """|K_X(y)| for X the h/2-neighborhood of the middle-third set, h=3^-k:

        h^{-log_3 2} |sin(2y) / (2 pi y)| prod_{j=1}^{k-1} |cos(3^j y)|,

    with the y -> 0 limit 1/pi substituted analytically for |y| < 1e-8.
    """
    if k < 1:
        raise InputError(f"level must be >= 1, got {k}")
    yarr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    h = 3.0 ** -k
    small = np.abs(yarr) < 1e-8
    safe = np.where(small, 1.0, yarr)
    out = np.where(small, 1.0 / np.pi, np.abs(np.sin(2.0 * safe) / (2.0 * np.pi * safe)))
    out = out * h ** (-LOG3_2)
    for j in range(1, k):
        out = out * np.abs(np.cos(3.0 ** j * yarr))
    if np.asarray(y).ndim == 0:
        return float(out[0])
    return out


def kernel_KX_cover(intervals, h: float, t) -> np.ndarray:
    """K_X(t) = (2 pi h)^{-1} int_X e^{i x t / h} dx as an exact sum of
    per-interval integrals of the cover X.

    Per interval the integral is (e^{i b t/h} - e^{i a t/h}) h/(i t), so
    the whole sum is a +-1-weighted exponential sum over the endpoints,
    evaluated with the accelerated measure_ft kernel.
    """
    iv = np.asarray(intervals, dtype=np.float64).reshape(-1, 2)
    tarr = np.atleast_1d(np.asarray(t, dtype=np.float64)).ravel()
    out = np.zeros(tarr.shape, dtype=np.complex128)
    small = np.abs(tarr) < 1e-14
    ts = tarr[~small]
    if len(ts):
        endpoints = np.concatenate([iv[:, 1], iv[:, 0]]) / h
        signs = np.concatenate([np.ones(len(iv)), -np.ones(len(iv))])
        s = kernels.measure_ft(endpoints, signs, ts)
        out[~small] = s / (1j * ts) / (2.0 * np.pi)
    out[small] = np.sum(iv[:, 1] - iv[:, 0]) / (2.0 * np.pi * h)
    if np.asarray(t).ndim == 0:
        return complex(out[0])
    return out


def _quadrature_nodes(intervals: np.ndarray, step: float):
    """Composite midpoint nodes: each interval split into ceil(len/step)
    equal cells; returns (nodes, cell_widths)."""
    nodes = []
    widths = []
    for a, b in intervals:
        n_cells = max(1, int(np.ceil((b - a) / step)))
        w = (b - a) / n_cells
        nodes.append(a + (np.arange(n_cells) + 0.5) * w)
        widths.append(np.full(n_cells, w))
    return np.concatenate(nodes), np.concatenate(widths)


def schur_fup_bound(
    cover_x: IntervalCover,
    delta: float,
    cover_y: IntervalCover,
    h: float,
    quadrature_step: float,
) -> dict:
    """Schur bound on ||1_X F_h 1_Y||^2:  sup_{y'} int_Y |K_X(y - y')| dy.

    The sup runs over the composite-midpoint sample points of Y and the
    integral over the same nodes.  Also reports the baseline obtained
    from sup |K_X| <= vol(X) / (2 pi h), which scales like h^(1-2 delta)
    for delta-regular covers.
    """
    if h <= 0:
        raise InputError("h must be positive")
    ivy = cover_y.intervals
    min_len = float(np.min(ivy[:, 1] - ivy[:, 0]))
    if quadrature_step > min_len:
        raise InputError(
            f"quadrature step {quadrature_step:g} exceeds the smallest "
            f"Y interval {min_len:g}"
        )
    nodes, widths = _quadrature_nodes(ivy, quadrature_step)
    ivx = cover_x.intervals
    best = 0.0
    chunk = max(1, int(2e6 // max(1, len(nodes))))
    for i in range(0, len(nodes), chunk):
        diffs = nodes[None, i:i + chunk] - nodes[:, None]
        kvals = np.abs(kernel_KX_cover(ivx, h, diffs.ravel())).reshape(diffs.shape)
        col = (kvals * widths[:, None]).sum(axis=0)
        best = max(best, float(col.max()))
    vol_x = float(np.sum(ivx[:, 1] - ivx[:, 0]))
    vol_y = float(np.sum(ivy[:, 1] - ivy[:, 0]))
    sup_k = vol_x / (2.0 * np.pi * h)
    return {
        "bound": best,
        "baseline": sup_k * vol_y,
        "sup_kernel_bound": sup_k,
        "h_scaling_reference": h ** (1.0 - 2.0 * delta),
        "nodes": int(len(nodes)),
    }


def decay_slope(samples: FourierSamples, fit_range: tuple[float, float]) -> DecayFit:
    """Least-squares slope of log|values| against log xi on the range.

    The reported exponent is minus the slope, so positive means decay.
    """
    lo, hi = fit_range
    vals = np.abs(samples.values)
    mask = (samples.xi >= lo) & (samples.xi <= hi) & (vals > 0) & (samples.xi > 0)
    n = int(mask.sum())
    if n < 8:
        raise InputError(f"fit range contains {n} usable points; need at least 8")
    x = np.log(samples.xi[mask])
    y = np.log(vals[mask])
    design = np.stack([x, np.ones(n)], axis=1)
    coef, res, _rank, _sv = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(res[0] / n)) if len(res) else 0.0
    return DecayFit(
        exponent=float(-coef[0]),
        fit_range=(float(lo), float(hi)),
        residual=rms,
        n_points=n,
    )


def fourier_fup_exponent(delta: float, beta_f: float) -> float:
    """Uncertainty exponent from a Fourier-decay exponent: 1/2 - delta + beta_f/4."""
    return 0.5 - delta + beta_f / 4.0
