"""Exact discrete Fourier transforms: unitary 1D/2D and dilated variants.

The unitary transform maps v to (1/sqrt(N)) sum_l exp(-2 pi i j l / N) v(l);
the 2D version acts on N x N arrays with normalization 1/N.  The dilated
transform inserts a real factor alpha in the phase and is computed by direct
summation (no fast factorization exists for irrational alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

_DIRECT_MAX = 1024  # direct O(N^2) path used below this size


@dataclass(frozen=True)
class TransformSpec:
    """Size, dilation and dimensionality of a discrete Fourier transform."""

    size: int
    alpha: float = 1.0
    ndim: int = 1

    def __post_init__(self):
        if self.size < 1:
            raise InputError(f"transform size must be >= 1, got {self.size}")
        if self.alpha < 0:
            raise InputError(f"dilation must be >= 0, got {self.alpha}")
        if self.ndim not in (1, 2):
            raise InputError(f"dimensionality must be 1 or 2, got {self.ndim}")


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def _dft_direct(x: np.ndarray, sign: float) -> np.ndarray:
    """Unnormalized DFT along the last axis by explicit summation."""
    n = x.shape[-1]
    j = np.arange(n)
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / n)
    return x @ kernel.T


def _dft_radix(x: np.ndarray, sign: float) -> np.ndarray:
    """Unnormalized mixed-radix Cooley-Tukey along the last axis.

    Splits off the smallest prime factor p at each level (decimation in
    time), so for N = M^k this is radix-M throughout, mirroring the
    row-transform / twist / column-transform factorization used on
    restricted Cantor transforms.
    """
    n = x.shape[-1]
    p = _smallest_factor(n)
    if n <= 32 or p == n:
        return _dft_direct(x, sign)
    m = n // p
    # sub-transforms of the p decimated sequences, shape (..., p, m)
    sub = np.stack([_dft_radix(x[..., r::p], sign) for r in range(p)], axis=-2)
    k = np.arange(n)
    twiddle = np.exp(sign * 2j * np.pi * np.outer(np.arange(p), k) / n)
    out = np.zeros(x.shape, dtype=np.complex128)
    idx = k % m
    for r in range(p):
        out += twiddle[r] * sub[..., r, idx]
    return out


def _dft_1d(x: np.ndarray, sign: float) -> np.ndarray:
    n = x.shape[-1]
    if n <= _DIRECT_MAX:
        return _dft_direct(x, sign)
    return _dft_radix(x, sign)


def dft_apply(v: np.ndarray) -> np.ndarray:
    """Unitary DFT of a vector (or of the last axis of a batch)."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[-1] < 1:
        raise InputError("dft_apply needs a nonempty vector")
    n = v.shape[-1]
    return _dft_1d(v, -1.0) / np.sqrt(n)


def idft_apply(v: np.ndarray) -> np.ndarray:
    """Inverse (conjugate-kernel) unitary DFT."""
    v = np.asarray(v, dtype=np.complex128)
    n = v.shape[-1]
    return _dft_1d(v, +1.0) / np.sqrt(n)


def dft2_apply(u: np.ndarray) -> np.ndarray:
    """Unitary 2D DFT of an N x N array: 1D transform on rows then columns."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputError(f"dft2_apply needs a square array, got shape {u.shape}")
    rows = dft_apply(u)            # along last axis (rows)
    return dft_apply(rows.T).T     # then along columns


def idft2_apply(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputError(f"idft2_apply needs a square array, got shape {u.shape}")
    rows = idft_apply(u)
    return idft_apply(rows.T).T


def _dilated_phase(alpha: float, jl: np.ndarray, n: int) -> np.ndarray:
    """alpha * jl mod n in extended precision, returned as float64.

    jl holds exact integer products; reducing mod n before the trig call
    keeps the phase error ~1e-14 even when alpha*jl is ~1e10.
    """
    a = np.longdouble(alpha)
    red = np.mod(a * jl.astype(np.longdouble), np.longdouble(n))
    return red.astype(np.float64)


def dilated_dft_apply(v: np.ndarray, alpha: float) -> np.ndarray:
    """Dilated transform (1/sqrt(N)) sum_l exp(-2 pi i alpha j l / N) v(l).

    Direct summation with numpy's pairwise accumulation, chunked over
    output rows so no N x N kernel is ever materialized.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or len(v) < 1:
        raise InputError("dilated_dft_apply needs a nonempty 1D vector")
    n = len(v)
    if alpha == 1.0:
        return dft_apply(v)
    ell = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    chunk = max(1, int(2e6 // n))
    for i in range(0, n, chunk):
        j = np.arange(i, min(i + chunk, n), dtype=np.int64)
        ph = _dilated_phase(alpha, np.multiply.outer(j, ell), n)
        out[i:i + chunk] = np.exp(-2j * np.pi * ph / n) @ v
    return out / np.sqrt(n)


def kernel_F(M: int, alphabet, k: int, alpha: float, j) -> np.ndarray:
    """F_{k,alpha}(j) = (1/N) sum_{r in C_k} exp(-2 pi i alpha r j / N).

    Because every element of C_k has a unique digit expansion, the sum
    factorizes over digit positions into a product of k alphabet sums,
    which is what makes whole dilated-exponent curves affordable.  The
    direct summation over C_k is kept in the tests as the oracle.

    Each factor's phase (alpha * a * M^q * j / N) is reduced mod 1 in
    extended precision; a*M^q*j is carried as an exact integer.
    """
    digits = sorted(set(int(a) for a in alphabet))
    if not digits:
        raise InputError("alphabet must be nonempty")
    if digits[0] < 0 or digits[-1] >= M:
        raise InputError(f"alphabet {digits} out of range for base {M}")
    if k < 1:
        raise InputError(f"order must be >= 1, got {k}")
    n_ld = np.longdouble(M) ** k
    a_ld = np.longdouble(alpha)
    jarr = np.atleast_1d(np.asarray(j, dtype=np.int64))
    out = np.full(jarr.shape, 1.0 / float(M) ** k, dtype=np.complex128)
    for q in range(k):
        scale = M ** q
        acc = np.zeros(jarr.shape, dtype=np.complex128)
        for a in digits:
            t = (a * scale) * jarr  # exact in int64 at desk scale
            frac = np.mod(a_ld * t.astype(np.longdouble) / n_ld, np.longdouble(1.0))
            acc += np.exp(-2j * np.pi * frac.astype(np.float64))
        out *= acc
    if np.asarray(j).ndim == 0:
        return out[0]
    return out
