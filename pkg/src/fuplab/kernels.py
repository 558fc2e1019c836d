"""Hot numeric kernels with numba-accelerated and pure-numpy twins.

The active backend is selected once at import time from the environment
variable ``FUPLAB_BACKEND``:

* ``numba`` (default when numba imports cleanly) - `@njit(parallel=True)`
  kernels.  Parallelism is always over independent *output* elements with
  sequential inner reductions, so results are bit-identical regardless of
  thread count.
* ``numpy`` - chunked vectorized fallbacks with identical semantics.

``active_backend()`` reports which one won; ``benchmarks/bench_kernels.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("FUPLAB_BACKEND", "numba").strip().lower()
if _REQUESTED not in ("numba", "numpy"):
    raise ValueError(f"FUPLAB_BACKEND must be 'numba' or 'numpy', got {_REQUESTED!r}")

_HAVE_NUMBA = False
if _REQUESTED == "numba":
    try:
        from numba import njit, prange

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False


def active_backend() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# measure_ft: Fourier transform of an atomic measure,
#   out[i] = sum_j w[j] * exp(1j * xi[i] * x[j])
# ---------------------------------------------------------------------------

def _measure_ft_numpy(xs: np.ndarray, ws: np.ndarray, xi: np.ndarray) -> np.ndarray:
    out = np.empty(len(xi), dtype=np.complex128)
    # chunk the xi axis to bound the (chunk x atoms) phase matrix
    chunk = max(1, int(4e6 // max(1, len(xs))))
    for i in range(0, len(xi), chunk):
        out[i:i + chunk] = np.exp(1j * np.outer(xi[i:i + chunk], xs)) @ ws
    return out


if _HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _measure_ft_numba(xs, ws, xi):  # pragma: no cover - jitted
        out = np.empty(len(xi), dtype=np.complex128)
        for i in prange(len(xi)):
            re = 0.0
            im = 0.0
            for j in range(len(xs)):
                ph = xi[i] * xs[j]
                re += ws[j] * np.cos(ph)
                im += ws[j] * np.sin(ph)
            out[i] = complex(re, im)
        return out


def measure_ft(xs: np.ndarray, ws: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """sum_j w_j exp(i xi x_j) evaluated on the whole xi grid."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ws = np.ascontiguousarray(ws, dtype=np.float64)
    xi = np.ascontiguousarray(xi, dtype=np.float64)
    if _HAVE_NUMBA:
        return _measure_ft_numba(xs, ws, xi)
    return _measure_ft_numpy(xs, ws, xi)


# ---------------------------------------------------------------------------
# refine_expand: one level of Schottky word-tree expansion.
# Inputs per parent word w1..w_{n-1}: prefix matrix P = g_{w1}...g_{w_{n-2}},
# last letter.  Outputs per child (one per allowed next letter, ascending):
# new prefix P' = P @ g_{last}, child letter, child interval endpoints and a
# cancellation-free child length  |I| / (|c e0 + d| |c e1 + d|).
# ---------------------------------------------------------------------------

def _refine_expand_numpy(pref, letters, gens, base, allowed):
    nb = allowed.shape[1]
    newp = np.einsum("nij,njk->nik", pref, gens[letters])
    child_letters = allowed[letters].reshape(-1)
    child_pref = np.repeat(newp, nb, axis=0)
    e = base[child_letters]
    a = child_pref[:, 0, 0]
    b = child_pref[:, 0, 1]
    c = child_pref[:, 1, 0]
    d = child_pref[:, 1, 1]
    den0 = c * e[:, 0] + d
    den1 = c * e[:, 1] + d
    x0 = (a * e[:, 0] + b) / den0
    x1 = (a * e[:, 1] + b) / den1
    lo = np.minimum(x0, x1)
    hi = np.maximum(x0, x1)
    lengths = (e[:, 1] - e[:, 0]) / np.abs(den0 * den1)
    return child_pref, child_letters, lo, hi, lengths


if _HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _refine_expand_numba(pref, letters, gens, base, allowed):  # pragma: no cover
        n = len(letters)
        nb = allowed.shape[1]
        m = n * nb
        child_pref = np.empty((m, 2, 2))
        child_letters = np.empty(m, dtype=np.int64)
        lo = np.empty(m)
        hi = np.empty(m)
        lengths = np.empty(m)
        for p in prange(n):
            g = gens[letters[p]]
            pa = pref[p, 0, 0] * g[0, 0] + pref[p, 0, 1] * g[1, 0]
            pb = pref[p, 0, 0] * g[0, 1] + pref[p, 0, 1] * g[1, 1]
            pc = pref[p, 1, 0] * g[0, 0] + pref[p, 1, 1] * g[1, 0]
            pd = pref[p, 1, 0] * g[0, 1] + pref[p, 1, 1] * g[1, 1]
            for t in range(nb):
                i = p * nb + t
                let = allowed[letters[p], t]
                child_letters[i] = let
                child_pref[i, 0, 0] = pa
                child_pref[i, 0, 1] = pb
                child_pref[i, 1, 0] = pc
                child_pref[i, 1, 1] = pd
                e0 = base[let, 0]
                e1 = base[let, 1]
                den0 = pc * e0 + pd
                den1 = pc * e1 + pd
                x0 = (pa * e0 + pb) / den0
                x1 = (pa * e1 + pb) / den1
                if x0 <= x1:
                    lo[i] = x0
                    hi[i] = x1
                else:
                    lo[i] = x1
                    hi[i] = x0
                lengths[i] = (e1 - e0) / abs(den0 * den1)
        return child_pref, child_letters, lo, hi, lengths


def refine_expand(pref, letters, gens, base, allowed):
    """Expand one word-tree level; see module docstring for the contract."""
    if _HAVE_NUMBA:
        return _refine_expand_numba(
            np.ascontiguousarray(pref),
            np.ascontiguousarray(letters, dtype=np.int64),
            np.ascontiguousarray(gens),
            np.ascontiguousarray(base),
            np.ascontiguousarray(allowed, dtype=np.int64),
        )
    return _refine_expand_numpy(pref, letters, gens, base, allowed)
