"""Additive energy of discrete sets and the projected-measure statistic.

The discrete energy counts quadruples a+b = c+d (integer, non-modular
addition) via the squared autocorrelation of the indicator.  The measure
statistic bins stereographic images of the atoms of a weighted cover and
measures the near-diagonal mass of the pair-sum distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cantor1d import CantorSpec1D, build_cantor, dimension
from .errors import InputError
from .fractalmeasure import WeightedCover

__all__ = [
    "EnergyReport",
    "additive_energy_discrete",
    "energy_exponent",
    "stereographic",
    "ps_additive_energy",
    "ae_fup_exponent",
]


@dataclass
class EnergyReport:
    """Fitted additive-energy improvement with its raw table."""

    beta_a: float
    slope: float
    delta: float
    residual: float
    table: list  # (k, N, E)


def additive_energy_discrete(s) -> int:
    """Exact count of (a,b,c,d) in S^4 with a + b = c + d over Z.

    Computed as sum_s r(s)^2 where r is the integer convolution of the
    indicator with itself (r(s) = #{(a,b): a + b = s}).
    """
    arr = np.asarray(sorted(set(int(x) for x in np.asarray(s).ravel())), dtype=np.int64)
    if len(arr) == 0:
        raise InputError("set must be nonempty")
    if arr[0] < 0:
        raise InputError("set elements must be nonnegative")
    ind = np.zeros(int(arr[-1]) + 1, dtype=np.int64)
    ind[arr] = 1
    conv = np.convolve(ind, ind)
    return int(np.sum(conv.astype(object) ** 2))


def energy_exponent(M: int, alphabet, k_range) -> EnergyReport:
    """beta_A from the fit log E(C_k) = (3 delta - beta_A) log N + c.

    Requires at least three orders; rejects degenerate (constant-energy)
    tables.  Sanity asserts: no anti-improvement (beta_A >= -0.01) and
    beta_A <= min(delta, 1-delta) + 0.05, the ceiling that any set of
    full Cantor cardinality must respect.
    """
    ks = sorted(set(int(k) for k in k_range))
    if len(ks) < 3:
        raise InputError(f"need at least 3 orders for the fit, got {ks}")
    delta = dimension(M, alphabet)
    table = []
    for k in ks:
        c = build_cantor(CantorSpec1D(M, alphabet, k))
        e = additive_energy_discrete(c)
        table.append((k, M ** k, e))
    energies = np.array([float(e) for (_, _, e) in table])
    if np.allclose(energies, energies[0]):
        raise InputError("degenerate energy range: E is constant over k_range")
    log_n = np.array([k * np.log(M) for k in ks])
    log_e = np.log(energies)
    design = np.stack([log_n, np.ones(len(ks))], axis=1)
    coef, res, _rank, _sv = np.linalg.lstsq(design, log_e, rcond=None)
    slope = float(coef[0])
    beta_a = 3.0 * delta - slope
    rms = float(np.sqrt(res[0] / len(ks))) if len(res) else 0.0
    if beta_a < -0.01:
        raise InputError(f"anti-improvement: fitted beta_A = {beta_a:.4f} < -0.01")
    ceiling = min(delta, 1.0 - delta) + 0.05
    if beta_a > ceiling:
        raise InputError(
            f"fitted beta_A = {beta_a:.4f} exceeds the ceiling "
            f"min(delta, 1-delta) + 0.05 = {ceiling:.4f}"
        )
    return EnergyReport(
        beta_a=beta_a, slope=slope, delta=delta, residual=rms, table=table
    )


def stereographic(y: float, x):
    """gamma_y(x) = (1 + x y) / (y - x); monotone in x on each side of the pole."""
    xarr = np.asarray(x, dtype=np.float64)
    den = y - xarr
    if np.any(den == 0.0):
        raise InputError(f"stereographic pole: x = y = {y}")
    out = (1.0 + xarr * y) / den
    if np.asarray(x).ndim == 0:
        return float(out)
    return out


def ps_additive_energy(
    wc: WeightedCover,
    y: float,
    w: int,
    h,
    bin_fraction: float = 0.25,
) -> np.ndarray:
    """Near-diagonal pair-sum mass of the projected measure.

    Atoms are the interval midpoints outside the base interval I_w
    (weights renormalized there); images t_v = gamma_y(x_v) are binned,
    the pair-sum distribution S is the discrete self-convolution of the
    binned single-atom distribution, and the result for each h is the
    (S x S)-mass of the band |s - s'| <= h read off prefix sums.

    Binning resolution is bin_fraction * min(h) / 2, so placement plus
    band rounding err by at most one h/4 bin.  A single shared grid
    serves the whole h array, which makes the returned masses exactly
    monotone in h.  Returns an array shaped like h with values in [0,1].
    """
    if wc.first_letters is None:
        raise InputError("weighted cover carries no base-letter provenance")
    hs = np.atleast_1d(np.asarray(h, dtype=np.float64))
    if np.any(hs <= 0):
        raise InputError("h must be positive")
    sel = wc.first_letters == w
    if not np.any(sel):
        raise InputError(f"no intervals with base letter {w}")
    lo = float(wc.intervals[sel, 0].min())
    hi = float(wc.intervals[sel, 1].max())
    if not lo <= y <= hi:
        raise InputError(f"y = {y} is not inside base interval {w} = [{lo}, {hi}]")
    keep = ~sel
    xs = wc.midpoints[keep]
    ws = wc.weights[keep]
    total = ws.sum()
    if total <= 0:
        raise InputError("no mass outside the excluded interval")
    ws = ws / total
    t = stereographic(y, xs)
    width = bin_fraction * float(hs.min()) / 2.0
    t0 = float(t.min())
    idx = np.floor((t - t0) / width).astype(np.int64)
    n_bins = int(idx.max()) + 1
    if n_bins > 200_000_000:
        if len(t) ** 2 <= 16_000_000:
            return _ps_energy_exact(t, ws, hs, np.asarray(h).ndim == 0)
        raise InputError(
            f"binned range needs {n_bins} bins and {len(t)}^2 pair sums "
            "exceed the exact-path budget; raise h or bin_fraction"
        )
    single = np.bincount(idx, weights=ws, minlength=n_bins)
    if n_bins <= 4096:
        pair = np.convolve(single, single)
    else:
        m = 1 << int(np.ceil(np.log2(2 * n_bins)))
        fft = np.fft.rfft(single, m)
        pair = np.fft.irfft(fft * fft, m)[: 2 * n_bins - 1]
    pair = np.maximum(pair, 0.0)
    prefix = np.concatenate([[0.0], np.cumsum(pair)])
    i = np.arange(len(pair))
    out = np.empty(len(hs))
    for m_idx, hv in enumerate(hs):
        band = int(round(hv / width))
        hi_i = np.minimum(i + band, len(pair) - 1)
        lo_i = np.maximum(i - band, 0)
        out[m_idx] = float(np.sum(pair * (prefix[hi_i + 1] - prefix[lo_i])))
    out = np.clip(out, 0.0, 1.0)
    if np.asarray(h).ndim == 0:
        return float(out[0])
    return out


def _ps_energy_exact(t, ws, hs, scalar: bool):
    """Tiny-h path: enumerate all pair sums and band-count them exactly."""
    sums = (t[:, None] + t[None, :]).ravel()
    wprod = (ws[:, None] * ws[None, :]).ravel()
    order = np.argsort(sums, kind="stable")
    sums = sums[order]
    prefix = np.concatenate([[0.0], np.cumsum(wprod[order])])
    out = np.empty(len(hs))
    for i, hv in enumerate(hs):
        lo = np.searchsorted(sums, sums - hv, side="left")
        hi = np.searchsorted(sums, sums + hv, side="right")
        out[i] = float(np.sum(wprod[order] * (prefix[hi] - prefix[lo])))
    out = np.clip(out, 0.0, 1.0)
    if scalar:
        return float(out[0])
    return out


def ae_fup_exponent(delta: float, beta_a: float) -> float:
    """Uncertainty exponent from an additive-energy improvement:
    (3/4)(1/2 - delta) + beta_a / 8."""
    return 0.75 * (0.5 - delta) + beta_a / 8.0
