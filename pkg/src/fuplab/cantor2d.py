"""Two-dimensional discrete Cantor sets and their uncertainty norms.

The sets live in Z_N^2 with N = M^k and digit pairs drawn from alphabets
A, B in Z_M^2.  The norm of interest is that of 1_{C_{k,A}} F_{NxN}
1_{C_{k,B}} on N x N arrays, together with the structural classifiers
that decide when the easy Hilbert-Schmidt exponent is sharp or beatable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from .cantor1d import NormReport, _power_iteration
from .dft import dft2_apply, idft2_apply
from .errors import InputError

DENSE_MAX_2D = 2048  # dense matrix route when both restricted sizes fit

__all__ = [
    "CantorSpec2D",
    "build_cantor2",
    "fup_norm2",
    "check_nondegenerate_pairing",
    "classify_exceptional",
    "check_column_criterion",
    "check_cross_criterion",
    "thin_count",
]


def _normalize_alphabet2(M: int, alphabet) -> tuple[tuple[int, int], ...]:
    pts = tuple(sorted(set((int(p[0]), int(p[1])) for p in alphabet)))
    if not pts:
        raise InputError("2D alphabet must be nonempty")
    for x, y in pts:
        if not (0 <= x < M and 0 <= y < M):
            raise InputError(f"digit pair {(x, y)} outside Z_{M}^2")
    return pts


@dataclass(frozen=True)
class CantorSpec2D:
    """Base, two digit-pair alphabets, and order of a 2D discrete Cantor set."""

    M: int
    alphabet_a: tuple[tuple[int, int], ...]
    alphabet_b: tuple[tuple[int, int], ...]
    k: int

    def __post_init__(self):
        if self.M < 2:
            raise InputError(f"base must be >= 2, got {self.M}")
        if self.k < 1:
            raise InputError(f"order must be >= 1, got {self.k}")
        object.__setattr__(self, "alphabet_a", _normalize_alphabet2(self.M, self.alphabet_a))
        object.__setattr__(self, "alphabet_b", _normalize_alphabet2(self.M, self.alphabet_b))

    @property
    def N(self) -> int:
        return self.M ** self.k

    @property
    def delta_a(self) -> float:
        return float(np.log(len(self.alphabet_a)) / np.log(self.M))

    @property
    def delta_b(self) -> float:
        return float(np.log(len(self.alphabet_b)) / np.log(self.M))


def build_cantor2(M: int, alphabet, k: int) -> np.ndarray:
    """Points a_0 + M a_1 + ... + M^{k-1} a_{k-1} with componentwise digits.

    Returns an (n, 2) integer array in lexicographic order.
    """
    pts = np.array(_normalize_alphabet2(M, alphabet), dtype=np.int64)
    c = pts.copy()
    for j in range(1, k):
        c = (c[:, None, :] + pts[None, :, :] * M ** j).reshape(-1, 2)
    order = np.lexsort((c[:, 1], c[:, 0]))
    return c[order]


def _restricted_matrix2(ca: np.ndarray, cb: np.ndarray, n: int) -> np.ndarray:
    ph = np.mod(ca @ cb.T, n).astype(np.float64)
    return np.exp(-2j * np.pi * ph / n) / n


class _MaskedApply2D:
    """Matrix-free T*T with T = 1_A F_{NxN} 1_B acting on N x N arrays."""

    def __init__(self, spec: CantorSpec2D):
        n = spec.N
        ca = build_cantor2(spec.M, spec.alphabet_a, spec.k)
        cb = build_cantor2(spec.M, spec.alphabet_b, spec.k)
        self.mask_a = np.zeros((n, n), dtype=bool)
        self.mask_a[ca[:, 0], ca[:, 1]] = True
        self.mask_b = np.zeros((n, n), dtype=bool)
        self.mask_b[cb[:, 0], cb[:, 1]] = True
        self.n = n
        self.size = int(self.mask_b.sum())
        self.cb = cb

    def apply_gram(self, u: np.ndarray) -> np.ndarray:
        # u is the restriction to C_B in lexicographic order
        full = np.zeros((self.n, self.n), dtype=np.complex128)
        full[self.cb[:, 0], self.cb[:, 1]] = u
        w = dft2_apply(full)
        w[~self.mask_a] = 0.0
        w = idft2_apply(w)
        return w[self.cb[:, 0], self.cb[:, 1]]


def fup_norm2(spec: CantorSpec2D, tol: float = 1e-10, method: str = "auto") -> NormReport:
    """Largest singular value of ( exp(-2 pi i <j,l>/N) / N ) over C_A x C_B.

    Dense SVD when both restricted sizes fit the 2048^2 budget, else
    power iteration on the masked-array operator.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    n = spec.N
    size_a = len(spec.alphabet_a) ** spec.k
    size_b = len(spec.alphabet_b) ** spec.k
    dense_ok = size_a * size_b <= DENSE_MAX_2D ** 2
    use_dense = method == "dense-svd" or (method == "auto" and dense_ok)
    if use_dense:
        ca = build_cantor2(spec.M, spec.alphabet_a, spec.k)
        cb = build_cantor2(spec.M, spec.alphabet_b, spec.k)
        g = _restricted_matrix2(ca, cb, n)
        if max(g.shape) <= DENSE_MAX_2D:
            r = float(np.linalg.svd(g, compute_uv=False)[0])
        else:
            small = g @ g.conj().T if g.shape[0] <= g.shape[1] else g.conj().T @ g
            r = float(np.sqrt(max(np.linalg.eigvalsh(small)[-1], 0.0)))
        return NormReport(
            r_k=r,
            beta_k=float(-np.log(max(r, 1e-300)) / np.log(n)),
            method="dense-svd",
        )
    op = _MaskedApply2D(spec)
    lam, iters, resid = _power_iteration(op, tol)
    r = float(np.sqrt(max(lam, 0.0)))
    return NormReport(
        r_k=r,
        beta_k=float(-np.log(max(r, 1e-300)) / np.log(n)),
        method="power-iteration",
        iterations=iters,
        residual=resid,
    )


def check_nondegenerate_pairing(alphabet_a, alphabet_b, M: Optional[int] = None):
    """True iff some a,a' in A, b,b' in B have <a-a', b-b'> != 0 over Z.

    When false, the restricted norm equals N^{-(1-(dA+dB)/2)} exactly.
    Returns (flag, witness) with witness = (a, a', b, b') or None.
    """
    m = M if M is not None else 1 + max(
        max(max(p) for p in alphabet_a), max(max(p) for p in alphabet_b)
    )
    pa = np.array(_normalize_alphabet2(m, alphabet_a), dtype=np.int64)
    pb = np.array(_normalize_alphabet2(m, alphabet_b), dtype=np.int64)
    da = (pa[:, None, :] - pa[None, :, :]).reshape(-1, 2)
    db = (pb[:, None, :] - pb[None, :, :]).reshape(-1, 2)
    inner = da @ db.T
    hit = np.argwhere(inner != 0)
    if len(hit) == 0:
        return False, None
    ia, ib = hit[0]
    a, ap = pa[ia // len(pa)], pa[ia % len(pa)]
    b, bp = pb[ib // len(pb)], pb[ib % len(pb)]
    return True, (tuple(a), tuple(ap), tuple(b), tuple(bp))


def _alphabet_lines(M: int, pts: set) -> dict:
    horizontal = [s for s in range(M) if all((j, s) in pts for j in range(M))]
    vertical = [s for s in range(M) if all((s, j) in pts for j in range(M))]
    return {"horizontal": horizontal, "vertical": vertical}


def _diag_offsets(cset: set, n: int, anti: bool) -> list[int]:
    """Offsets s for which the (anti)diagonal {(j, (s -+ j)) mod N} lies in cset."""
    out = []
    for s in range(n):
        ok = True
        for j in range(n):
            second = (s - j) % n if anti else (j + s) % n
            if (j, second) not in cset:
                ok = False
                break
        if ok:
            out.append(s)
    return out


def classify_exceptional(spec: CantorSpec2D) -> dict:
    """Detect the two exceptional configurations that force norm 1.

    case1: one alphabet contains a full horizontal line of Z_M^2 and the
    other a full vertical line.  case2: at this order, one of the Cantor
    sets contains a full diagonal of Z_N^2 and the other a full
    antidiagonal (exact membership scan over all N offsets).  Both kinds
    of witnesses are always reported; the case label follows the
    enumeration order (case1 wins when both configurations hold, as for
    the discrete Sierpinski carpet).
    """
    m = spec.M
    pa = set(spec.alphabet_a)
    pb = set(spec.alphabet_b)
    la = _alphabet_lines(m, pa)
    lb = _alphabet_lines(m, pb)
    n = spec.N
    ca = set(map(tuple, build_cantor2(m, spec.alphabet_a, spec.k)))
    cb = set(map(tuple, build_cantor2(m, spec.alphabet_b, spec.k)))
    diagonals = {
        "diagonal_in_a": _diag_offsets(ca, n, anti=False),
        "antidiagonal_in_a": _diag_offsets(ca, n, anti=True),
        "diagonal_in_b": _diag_offsets(cb, n, anti=False),
        "antidiagonal_in_b": _diag_offsets(cb, n, anti=True),
    }
    witness = {"a_lines": la, "b_lines": lb, "diagonals": diagonals}
    case1 = (la["horizontal"] and lb["vertical"]) or (
        la["vertical"] and lb["horizontal"]
    )
    case2 = (diagonals["diagonal_in_a"] and diagonals["antidiagonal_in_b"]) or (
        diagonals["diagonal_in_b"] and diagonals["antidiagonal_in_a"]
    )
    if case1:
        return {"case": "case1_lines", "witness": witness}
    if case2:
        return {"case": "case2_diagonals", "witness": witness}
    return {"case": "none", "witness": witness}


def check_column_criterion(M: int, alphabet_a, alphabet_b):
    """Empty-column / no-full-row criterion, sufficient for a positive
    uncertainty exponent: exists s with column {(s,j)} disjoint from A,
    and for every t the row slice { l : (l,t) in B } is not all of Z_M.

    Returns (flag, detail) where detail carries the witness columns and
    any offending rows of B.
    """
    pa = set(_normalize_alphabet2(M, alphabet_a))
    pb = set(_normalize_alphabet2(M, alphabet_b))
    empty_cols = [s for s in range(M) if all((s, j) not in pa for j in range(M))]
    full_rows = [
        t for t in range(M) if all((l, t) in pb for l in range(M))
    ]
    ok = bool(empty_cols) and not full_rows
    return ok, {"empty_columns_in_a": empty_cols, "full_rows_in_b": full_rows}


def check_cross_criterion(M: int, alphabet_a, alphabet_b):
    """Empty-cross criterion, also sufficient for a positive exponent:
    exists s, t with column s and row t both disjoint from A, and
    B != Z_M^2.  Returns (flag, detail)."""
    pa = set(_normalize_alphabet2(M, alphabet_a))
    pb = set(_normalize_alphabet2(M, alphabet_b))
    empty_cols = [s for s in range(M) if all((s, j) not in pa for j in range(M))]
    empty_rows = [t for t in range(M) if all((j, t) not in pa for j in range(M))]
    b_proper = len(pb) < M * M
    ok = bool(empty_cols) and bool(empty_rows) and b_proper
    detail = {
        "empty_columns_in_a": empty_cols,
        "empty_rows_in_a": empty_rows,
        "b_is_proper": b_proper,
    }
    return ok, detail


def thin_count(M: int, k: int, k0: int, t_prime: int = 0) -> int:
    """Exact number of b in Z_{M^k} with at most k0 base-M digits equal
    to t_prime: sum_{j<=k0} C(k,j) (M-1)^(k-j).

    In the regime k0 <= k (M-1)/M the count is also checked against the
    binomial envelope C(k,k0) M^k0 (M-1)^(k-k0).
    """
    if not 0 <= t_prime < M:
        raise InputError(f"digit value {t_prime} outside 0..{M - 1}")
    if k0 > k:
        raise InputError(f"k0={k0} exceeds k={k}")
    if k0 < 0:
        raise InputError("k0 must be >= 0")
    count = sum(comb(k, j) * (M - 1) ** (k - j) for j in range(k0 + 1))
    if k0 <= k * (M - 1) / M:
        envelope = comb(k, k0) * M ** k0 * (M - 1) ** (k - k0)
        assert count <= envelope, (count, envelope)
    return count
