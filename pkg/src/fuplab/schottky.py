"""Schottky data, word trees, limit-set refinement and dimension estimates.

A Schottky datum is 2r pairwise disjoint closed intervals I_1..I_{2r} and
matrices g_1..g_{2r} in SL(2,R) with g_{w+r} = g_w^{-1} and g_w mapping the
complement of I_{wbar} onto the interior of I_w.  Words avoid letter
followed by its inverse; refining the base intervals along words converges
to the limit set.  Letters are 0-based here: the inverse of w is (w+r) mod 2r.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar
from scipy.special import logsumexp

from . import kernels
from .errors import BudgetError, InputError

__all__ = [
    "SchottkyData",
    "WordTree",
    "mobius_apply",
    "validate_schottky",
    "enumerate_words",
    "word_count",
    "refine",
    "estimate_dimension",
    "three_funnel_schottky",
    "fig_sch1",
    "builtin_schottky",
    "BUILTIN_NAMES",
]

_MAX_WORDS_DEFAULT = 4_000_000


@dataclass(frozen=True)
class SchottkyData:
    """Generator count r, base intervals (2r, 2) and matrices (2r, 2, 2)."""

    r: int
    intervals: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=np.float64)
        gen = np.asarray(self.generators, dtype=np.float64)
        if self.r < 2:
            raise InputError(f"generator count must be >= 2, got {self.r}")
        if iv.shape != (2 * self.r, 2):
            raise InputError(f"need {2 * self.r} intervals, got shape {iv.shape}")
        if gen.shape != (2 * self.r, 2, 2):
            raise InputError(f"need {2 * self.r} generators, got shape {gen.shape}")
        object.__setattr__(self, "intervals", iv)
        object.__setattr__(self, "generators", gen)

    def bar(self, w: int) -> int:
        return (w + self.r) % (2 * self.r)

    def to_json(self) -> str:
        return json.dumps(
            {
                "r": self.r,
                "intervals": self.intervals.tolist(),
                "generators": self.generators.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SchottkyData":
        obj = json.loads(text)
        return cls(
            r=int(obj["r"]),
            intervals=np.asarray(obj["intervals"], dtype=np.float64),
            generators=np.asarray(obj["generators"], dtype=np.float64),
        )


@dataclass
class WordTree:
    """Words of a fixed depth with their refined intervals.

    words[i] is the letter sequence w_1..w_n; intervals[i] the endpoints
    of I_{w} = g_{w_1}..g_{w_{n-1}}(I_{w_n}); lengths[i] the interval
    length computed multiplicatively (cancellation-free).
    """

    depth: int
    words: np.ndarray       # (n_words, depth) int16
    intervals: np.ndarray   # (n_words, 2) float
    lengths: np.ndarray     # (n_words,) float

    @property
    def first_letters(self) -> np.ndarray:
        return self.words[:, 0].astype(np.int64)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.intervals[:, 0] + self.intervals[:, 1])


def mobius_apply(gamma, x: float) -> float:
    """(a x + b) / (c x + d) on the extended reals; det must be 1."""
    g = np.asarray(gamma, dtype=np.float64)
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1.0) > 1e-12:
        raise InputError(f"matrix determinant {det} != 1")
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    if math.isinf(x):
        return math.inf if c == 0.0 else a / c
    den = c * x + d
    if den == 0.0:
        return math.inf
    return (a * x + b) / den


def _mat_inv(g: np.ndarray) -> np.ndarray:
    return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])


def validate_schottky(data: SchottkyData, tol: float = 1e-9) -> dict:
    """Check disjointness, exact inverses and the interval mapping property.

    Returns {"ok": bool, "violations": [str, ...]}; never raises on
    invalid data.  The mapping property is certified by endpoint
    transport plus g_w(inf) landing inside the open interval I_w.
    """
    violations = []
    iv = data.intervals
    gen = data.generators
    two_r = 2 * data.r
    if np.any(iv[:, 0] >= iv[:, 1]):
        violations.append("some interval has nonpositive length")
    order = np.argsort(iv[:, 0])
    s = iv[order]
    for i in range(two_r - 1):
        if s[i, 1] >= s[i + 1, 0]:
            violations.append(
                f"intervals {order[i]} and {order[i + 1]} are not disjoint"
            )
    for w in range(two_r):
        det = gen[w, 0, 0] * gen[w, 1, 1] - gen[w, 0, 1] * gen[w, 1, 0]
        if abs(det - 1.0) > 1e-12:
            violations.append(f"generator {w} has determinant {det:.3e} != 1")
    for w in range(two_r):
        wb = data.bar(w)
        if np.max(np.abs(gen[wb] - _mat_inv(gen[w]))) > 1e-12 and np.max(
            np.abs(gen[wb] + _mat_inv(gen[w]))
        ) > 1e-12:
            violations.append(f"generator {wb} is not the inverse of {w}")
    if violations:
        return {"ok": False, "violations": violations}
    for w in range(two_r):
        wb = data.bar(w)
        try:
            images = sorted(
                (mobius_apply(gen[w], iv[wb, 0]), mobius_apply(gen[w], iv[wb, 1]))
            )
        except InputError:
            violations.append(f"generator {w} not in SL(2,R)")
            continue
        if abs(images[0] - iv[w, 0]) > tol or abs(images[1] - iv[w, 1]) > tol:
            violations.append(
                f"generator {w} maps endpoints of interval {wb} to {images}, "
                f"expected {iv[w].tolist()}"
            )
        ginf = mobius_apply(gen[w], math.inf)
        if not (iv[w, 0] < ginf < iv[w, 1]):
            violations.append(
                f"generator {w} sends infinity to {ginf}, outside interval {w}"
            )
    return {"ok": not violations, "violations": violations}


def word_count(r: int, n: int) -> int:
    """|W_n| = 2r (2r-1)^(n-1)."""
    return 2 * r * (2 * r - 1) ** (n - 1)


def enumerate_words(data: SchottkyData, n: int, max_words: int = _MAX_WORDS_DEFAULT) -> np.ndarray:
    """All reduced words of length n, lexicographically ordered, as an
    (|W_n|, n) array of 0-based letters."""
    if n < 1:
        raise InputError(f"word length must be >= 1, got {n}")
    total = word_count(data.r, n)
    if total > max_words:
        raise BudgetError(f"|W_{n}| = {total} exceeds the word budget {max_words}")
    two_r = 2 * data.r
    words = np.arange(two_r, dtype=np.int16).reshape(-1, 1)
    allowed = _allowed_table(data)
    for _ in range(1, n):
        last = words[:, -1].astype(np.int64)
        nxt = allowed[last]
        words = np.hstack(
            [np.repeat(words, two_r - 1, axis=0), nxt.reshape(-1, 1).astype(np.int16)]
        )
    return words


def _allowed_table(data: SchottkyData) -> np.ndarray:
    two_r = 2 * data.r
    return np.stack(
        [
            np.array([l for l in range(two_r) if l != data.bar(w)], dtype=np.int64)
            for w in range(two_r)
        ]
    )


def _level_iter(data: SchottkyData, n_max: int):
    """Yield (depth, prefixes, last_letters, lo, hi, lengths) per level.

    Level 1 is the base intervals themselves; each later level applies
    the accumulated prefix map to the endpoints of the last letter's
    base interval, with lengths computed multiplicatively.
    """
    two_r = 2 * data.r
    base = data.intervals
    gens = data.generators
    allowed = _allowed_table(data)
    letters = np.arange(two_r, dtype=np.int64)
    pref = np.broadcast_to(np.eye(2), (two_r, 2, 2)).copy()
    lo = base[:, 0].copy()
    hi = base[:, 1].copy()
    lengths = hi - lo
    yield 1, pref, letters, lo, hi, lengths
    for depth in range(2, n_max + 1):
        pref, letters, lo, hi, lengths = kernels.refine_expand(
            pref, letters, gens, base, allowed
        )
        yield depth, pref, letters, lo, hi, lengths


def refine(data: SchottkyData, n: int, max_words: int = _MAX_WORDS_DEFAULT) -> WordTree:
    """The word tree at depth n with exact endpoint transport."""
    if n < 1:
        raise InputError(f"depth must be >= 1, got {n}")
    total = word_count(data.r, n)
    if total > max_words:
        raise BudgetError(f"|W_{n}| = {total} exceeds the word budget {max_words}")
    words = enumerate_words(data, n, max_words=max_words)
    for depth, _pref, letters, lo, hi, lengths in _level_iter(data, n):
        if depth == n:
            # level iteration and lexicographic word enumeration expand
            # children in the same ascending-letter order
            assert np.array_equal(words[:, -1].astype(np.int64), letters)
            return WordTree(
                depth=n,
                words=words,
                intervals=np.stack([lo, hi], axis=1),
                lengths=lengths,
            )
    raise AssertionError("unreachable")


def estimate_dimension(
    data: SchottkyData,
    n_max: int = 14,
    tol: float = 5e-4,
    bisect_tol: float = 1e-10,
    max_words: int = 8_000_000,
) -> dict:
    """Limit-set dimension via the two-level ratio equation.

    For each depth n >= 2, delta_n is the root in (0,1) of
        sum_{W_n} |I_w|^s = sum_{W_{n-1}} |I_w|^s,
    found by bisection on the log of the ratio.  Returns the first
    delta_n with |delta_n - delta_{n-1}| < tol, else the deepest value
    flagged unconverged.  Levels stream so only log-lengths persist.
    """
    report = validate_schottky(data)
    if not report["ok"]:
        raise InputError("invalid Schottky data: " + "; ".join(report["violations"]))
    prev_logs = None
    prev_delta = None
    levels = []
    result = None
    for depth, _pref, _letters, _lo, _hi, lengths in _level_iter(data, n_max):
        if word_count(data.r, depth) > max_words:
            break
        logs = np.log(lengths)
        if prev_logs is not None:
            def gap(s):
                return logsumexp(s * logs) - logsumexp(s * prev_logs)

            if gap(1.0) >= 0.0:
                raise InputError(
                    "total refined length is not decreasing; dimension "
                    "ratio equation has no root in (0,1)"
                )
            lo_s, hi_s = 0.0, 1.0
            while hi_s - lo_s > bisect_tol:
                mid = 0.5 * (lo_s + hi_s)
                if gap(mid) > 0.0:
                    lo_s = mid
                else:
                    hi_s = mid
            delta = 0.5 * (lo_s + hi_s)
            levels.append(
                {
                    "n": depth,
                    "words": int(len(lengths)),
                    "delta_n": float(delta),
                    "max_length": float(lengths.max()),
                }
            )
            if prev_delta is not None and abs(delta - prev_delta) < tol:
                result = {
                    "delta": float(delta),
                    "converged": True,
                    "n_star": depth,
                    "levels": levels,
                }
                break
            prev_delta = delta
        prev_logs = logs
    if result is None:
        result = {
            "delta": float(prev_delta) if prev_delta is not None else float("nan"),
            "converged": False,
            "n_star": levels[-1]["n"] if levels else None,
            "levels": levels,
        }
    return result


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _hyperbolic(p: float, q: float, ell: float) -> np.ndarray:
    """SL(2,R) map with repelling fixed point p, attracting q, length ell."""
    e = math.exp(ell / 2.0)
    ei = 1.0 / e
    return np.array(
        [
            [q * e - p * ei, -p * q * (e - ei)],
            [e - ei, q * ei - p * e],
        ]
    ) / (q - p)


def three_funnel_schottky(
    ell1: float, ell2: float, ell3: float, gap_floor: float = 1e-3
) -> SchottkyData:
    """Rank-2 Schottky data for a surface with three funnel ends.

    The two generator axes are placed symmetrically about the imaginary
    axis as (-E, -1/E) and (E, 1/E); E is fixed by requiring
    |trace(g1 g2^{-1})| = 2 cosh(ell3 / 2) on the branch where the trace
    decreases with separation.  Base intervals are then chosen around
    the repelling fixed points by a deterministic max-min-gap search
    (the image intervals are forced by exact endpoint transport).
    """
    if min(ell1, ell2, ell3) <= 0:
        raise InputError("neck lengths must be positive")
    target = 2.0 * math.cosh(ell3 / 2.0)

    def third_trace(d):
        E = math.exp(d)
        g1 = _hyperbolic(-E, -1.0 / E, ell1)
        g2 = _hyperbolic(E, 1.0 / E, ell2)
        return abs(np.trace(g1 @ _mat_inv(g2)))

    dip = minimize_scalar(
        third_trace, bounds=(1e-4, 25.0), method="bounded", options={"xatol": 1e-12}
    )
    if third_trace(dip.x) > target:
        raise InputError(
            f"no three-funnel configuration: minimal third trace "
            f"{third_trace(dip.x):.6f} exceeds target {target:.6f}"
        )
    d = brentq(lambda x: third_trace(x) - target, 1e-9, dip.x, xtol=1e-15)
    E = math.exp(d)
    g1 = _hyperbolic(-E, -1.0 / E, ell1)
    g2 = _hyperbolic(E, 1.0 / E, ell2)
    gens = np.stack([g1, g2, _mat_inv(g1), _mat_inv(g2)])

    def intervals_from(params):
        x3, y3, x4, y4 = params
        i3 = (x3, y3)
        i4 = (x4, y4)
        i1 = tuple(sorted((mobius_apply(g1, x3), mobius_apply(g1, y3))))
        i2 = tuple(sorted((mobius_apply(g2, x4), mobius_apply(g2, y4))))
        return np.array([i1, i2, i3, i4])

    def neg_min_gap(params):
        x3, y3, x4, y4 = params
        if not (x3 < -E < y3 and x4 < E < y4):
            return 1.0
        iv = intervals_from(params)
        s = iv[np.argsort(iv[:, 0])]
        return -min(s[i + 1, 0] - s[i, 1] for i in range(3))

    start = np.array([-E - 1.5, -E + 1.5, E - 1.5, E + 1.5])
    best = minimize(
        neg_min_gap,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 20000, "maxfev": 20000},
    )
    if -best.fun < gap_floor:
        raise InputError(
            f"no disjoint interval configuration found for neck lengths "
            f"({ell1}, {ell2}, {ell3}); best gap {-best.fun:.3e}"
        )
    data = SchottkyData(r=2, intervals=intervals_from(best.x), generators=gens)
    report = validate_schottky(data)
    if not report["ok"]:
        raise InputError(
            "three-funnel construction failed validation: "
            + "; ".join(report["violations"])
        )
    return data


def fig_sch1() -> SchottkyData:
    """The reference rank-2 datum with integer generator matrices."""
    g1 = np.array([[7.0, -3.0], [-2.0, 1.0]])
    g2 = np.array([[3.0, -7.0], [-2.0, 5.0]])
    return SchottkyData(
        r=2,
        intervals=np.array([[-4.0, -3.0], [-2.0, -1.0], [0.0, 1.0], [2.0, 3.0]]),
        generators=np.stack([g1, g2, _mat_inv(g1), _mat_inv(g2)]),
    )


BUILTIN_NAMES = ("fig-sch1", "three-funnel-233")


def builtin_schottky(name: str) -> SchottkyData:
    if name == "fig-sch1":
        return fig_sch1()
    if name == "three-funnel-233":
        return three_funnel_schottky(2.0, 3.0, 3.0)
    raise InputError(f"unknown builtin {name!r}; have {BUILTIN_NAMES}")
