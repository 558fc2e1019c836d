"""Interval covers and executable regularity / porosity checkers.

The regularity and porosity definitions quantify over all intervals in a
scale range; on finite covers we test a geometric grid of scales (default
8 per octave) with translates aligned to cover endpoints plus a uniform
offset grid.  That makes both checkers decidable, sound up to a constant
factor in C_R or nu, which is the regime the theory cares about.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError

POINT_WIDTH = 1e-12  # degenerate [a, a] intervals are widened to this

__all__ = [
    "IntervalCover",
    "RegularityParams",
    "PorosityParams",
    "check_porosity",
    "check_regularity",
    "neighborhood",
    "porous_to_regular_cover",
    "volume",
    "check_volume_bound",
    "middle_third_cover",
]


@dataclass(frozen=True)
class IntervalCover:
    """Sorted, pairwise disjoint closed intervals."""

    intervals: np.ndarray

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=np.float64).reshape(-1, 2).copy()
        if len(iv) == 0:
            object.__setattr__(self, "intervals", iv)
            return
        degenerate = iv[:, 1] - iv[:, 0] <= 0.0
        if np.any(iv[:, 1] < iv[:, 0]):
            raise InputError("interval with negative length")
        iv[degenerate, 1] = iv[degenerate, 0] + POINT_WIDTH
        iv = iv[np.argsort(iv[:, 0])]
        if np.any(iv[1:, 0] <= iv[:-1, 1]):
            raise InputError("intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", iv)

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def hull(self) -> tuple[float, float]:
        return float(self.intervals[0, 0]), float(self.intervals[-1, 1])

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.intervals[:, 0] + self.intervals[:, 1])

    def to_json(self, weights=None) -> str:
        obj = {"intervals": self.intervals.tolist()}
        if weights is not None:
            obj["weights"] = list(map(float, weights))
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str):
        obj = json.loads(text)
        cover = cls(np.asarray(obj["intervals"], dtype=np.float64))
        return cover, obj.get("weights")


@dataclass(frozen=True)
class RegularityParams:
    delta: float
    c_reg: float
    alpha_min: float
    alpha_max: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise InputError(f"delta must be in [0,1], got {self.delta}")
        if self.c_reg < 1.0:
            raise InputError(f"regularity constant must be >= 1, got {self.c_reg}")
        if not 0.0 <= self.alpha_min <= self.alpha_max:
            raise InputError("need 0 <= alpha_min <= alpha_max")


@dataclass(frozen=True)
class PorosityParams:
    nu: float
    alpha_min: float
    alpha_max: float

    def __post_init__(self):
        if not 0.0 < self.nu < 1.0:
            raise InputError(f"nu must be in (0,1), got {self.nu}")
        if not 0.0 <= self.alpha_min <= self.alpha_max:
            raise InputError("need 0 <= alpha_min <= alpha_max")


def _scale_grid(alpha_min: float, alpha_max: float, density: int) -> np.ndarray:
    lo = max(alpha_min, 1e-14)
    hi = max(alpha_max, lo)
    n_steps = int(np.floor(np.log2(hi / lo) * density))
    scales = lo * 2.0 ** (np.arange(n_steps + 1) / density)
    return np.unique(np.append(scales, hi))


def check_porosity(
    cover: IntervalCover, params: PorosityParams, scale_grid_density: int = 8
):
    """Search every gridded interval for a pore of relative size nu.

    Returns (ok, witness): witness is the (left, length) of the first
    tested interval containing no gap of length nu * |I| disjoint from
    the cover; empty covers pass vacuously with witness "empty".
    """
    if len(cover) == 0:
        return True, "empty"
    iv = cover.intervals
    gap_left = np.concatenate([[-np.inf], iv[:, 1]])
    gap_right = np.concatenate([iv[:, 0], [np.inf]])
    ends = np.unique(np.concatenate([iv[:, 0], iv[:, 1]]))
    h0, h1 = cover.hull
    for scale in _scale_grid(params.alpha_min, params.alpha_max, scale_grid_density):
        offsets = np.arange(h0 - scale, h1 + scale / 4, scale / 4)
        xs = np.unique(np.concatenate([ends, ends - scale, offsets]))
        # largest pore inside [x, x+scale]: best overlap with a complement gap
        for lo_chunk in range(0, len(xs), 4096):
            x = xs[lo_chunk:lo_chunk + 4096]
            ov_lo = np.maximum(gap_left[None, :], x[:, None])
            ov_hi = np.minimum(gap_right[None, :], (x + scale)[:, None])
            pore = np.maximum(ov_hi - ov_lo, 0.0).max(axis=1)
            bad = pore < params.nu * scale - 1e-15
            if np.any(bad):
                x_bad = float(x[np.argmax(bad)])
                return False, (x_bad, float(scale))
    return True, None


def check_regularity(
    intervals,
    weights,
    params: RegularityParams,
    grid_density: int = 8,
    mode: str = "atoms",
):
    """Test C_R^{-1} |I|^delta <= mass(I) <= C_R |I|^delta on a grid of
    intervals centered at cover points.

    mode="atoms" places each interval's weight at its midpoint (finite-level
    fractal measures); mode="density" spreads it uniformly (length-like
    measures, with degenerate intervals acting as atoms).  Returns
    (ok, witness) where a witness is (center, length, mass).
    """
    iv = np.asarray(intervals, dtype=np.float64).reshape(-1, 2)
    w = np.asarray(weights, dtype=np.float64)
    if len(w) != len(iv):
        raise InputError(f"{len(w)} weights for {len(iv)} intervals")
    if mode not in ("atoms", "density"):
        raise InputError(f"unknown mode {mode!r}")
    if len(iv) == 0:
        return True, None
    mids = 0.5 * (iv[:, 0] + iv[:, 1])
    lens = iv[:, 1] - iv[:, 0]
    order = np.argsort(mids)
    sorted_mids = mids[order]
    cumw = np.concatenate([[0.0], np.cumsum(w[order])])

    def mass(center: np.ndarray, half: float) -> np.ndarray:
        lo = center - half
        hi = center + half
        if mode == "atoms":
            i_lo = np.searchsorted(sorted_mids, lo, side="left")
            i_hi = np.searchsorted(sorted_mids, hi, side="right")
            return cumw[i_hi] - cumw[i_lo]
        out = np.empty(len(center))
        chunk = max(1, int(4e6 // max(1, len(iv))))
        for i in range(0, len(center), chunk):
            ov = np.minimum(hi[i:i + chunk, None], iv[None, :, 1]) - np.maximum(
                lo[i:i + chunk, None], iv[None, :, 0]
            )
            frac = np.clip(ov, 0.0, None) / np.maximum(lens[None, :], POINT_WIDTH)
            out[i:i + chunk] = np.minimum(frac, 1.0) @ w
        return out

    # centers must be points of the represented set: the atoms themselves
    # in atoms mode; endpoints and midpoints of the solid pieces otherwise
    if mode == "atoms":
        centers = np.unique(mids)
    else:
        centers = np.unique(np.concatenate([iv[:, 0], iv[:, 1], mids]))
    for scale in _scale_grid(params.alpha_min, params.alpha_max, grid_density):
        m = mass(centers, scale / 2.0)
        lo_bound = scale ** params.delta / params.c_reg - 1e-13
        hi_bound = params.c_reg * scale ** params.delta + 1e-13
        bad = (m < lo_bound) | (m > hi_bound)
        if np.any(bad):
            i = int(np.argmax(bad))
            return False, (float(centers[i]), float(scale), float(m[i]))
    return True, None


def neighborhood(cover: IntervalCover, h: float) -> IntervalCover:
    """Minkowski sum with [-h, h], re-merged to disjoint intervals."""
    if h <= 0:
        raise InputError(f"neighborhood radius must be positive, got {h}")
    if len(cover) == 0:
        return cover
    iv = cover.intervals
    grown = np.stack([iv[:, 0] - h, iv[:, 1] + h], axis=1)
    merged = [grown[0].copy()]
    for a, b in grown[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append(np.array([a, b]))
    return IntervalCover(np.stack(merged))


def porous_to_regular_cover(cover: IntervalCover, nu: float, L: int, depth: int):
    """Constructive cover of a porous set by a log_L(L-1)-regular one.

    Starting from [0,1], each level splits every surviving interval into
    L equal children and removes the lowest-index child disjoint from the
    input cover.  Returns the list of levels, each an (m, 2) array of
    touching intervals of exact length L^-j.
    """
    if L <= 2.0 / nu:
        raise InputError(f"need L > 2/nu = {2.0 / nu:.3f}, got L={L}")
    if depth < 1:
        raise InputError("depth must be >= 1")
    h0, h1 = cover.hull
    if h0 < 0.0 or h1 > 1.0:
        raise InputError("input cover must lie inside [0, 1]")
    iv = cover.intervals
    levels = []
    current = [(0.0, 1.0)]
    for level in range(1, depth + 1):
        nxt = []
        for (a, b) in current:
            step = (b - a) / L
            kids = [(a + i * step, a + (i + 1) * step) for i in range(L)]
            removed = None
            for i, (ka, kb) in enumerate(kids):
                intersects = np.any((iv[:, 1] > ka + 1e-15) & (iv[:, 0] < kb - 1e-15))
                if not intersects:
                    removed = i
                    break
            if removed is None:
                raise InputError(
                    f"porosity hypothesis violated: no removable child of "
                    f"[{a}, {b}] at level {level}"
                )
            nxt.extend(kids[:removed] + kids[removed + 1:])
        current = nxt
        levels.append(np.array(current))
    return levels


def volume(cover: IntervalCover) -> float:
    """Total length of the cover."""
    if len(cover) == 0:
        return 0.0
    return float(np.sum(cover.intervals[:, 1] - cover.intervals[:, 0]))


def check_volume_bound(cover: IntervalCover, delta: float, h: float, c: float) -> bool:
    """vol(X) <= C h^(1-delta) for a cover claimed delta-regular at scales h..1."""
    if h <= 0 or not 0.0 <= delta <= 1.0:
        raise InputError("need h > 0 and delta in [0,1]")
    return volume(cover) <= c * h ** (1.0 - delta)


def middle_third_cover(level: int, style: str = "points") -> IntervalCover:
    """Finite-level middle-third Cantor cover.

    style="points": the 2^level left endpoints { sum a_j 3^-j }, widened
    to degenerate intervals (a point sample of the limit set, porous at
    every scale).  style="pieces": the closed level intervals
    [x, x + 3^-level] (carries the Cantor measure; has volume (2/3)^level).
    """
    if level < 1:
        raise InputError("level must be >= 1")
    if style not in ("points", "pieces"):
        raise InputError(f"unknown style {style!r}")
    pts = np.array([0.0])
    for j in range(1, level + 1):
        pts = (pts[:, None] + np.array([0.0, 2.0])[None, :] * 3.0 ** -j).ravel()
    pts.sort()
    if style == "points":
        return IntervalCover(np.stack([pts, pts], axis=1))
    return IntervalCover(np.stack([pts, pts + 3.0 ** -level], axis=1))
