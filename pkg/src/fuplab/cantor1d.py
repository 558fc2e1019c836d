"""Discrete Cantor sets in one dimension and their uncertainty norms.

C_k is the set of base-M integers of length k with digits in the alphabet;
r_k is the operator norm of the unitary DFT restricted to C_k on both sides,
and beta_k = -log r_k / log N is a certified lower bound for the limiting
uncertainty exponent (Fekete, via submultiplicativity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .dft import kernel_F
from .errors import BudgetError, ConvergenceError, InputError

DENSE_MAX = 2048          # dense SVD at or below this restricted size
POWER_CAP_FACTOR = 10     # power-iteration cap = factor * |C_k|
_RESTART_SEED = 12345

__all__ = [
    "CantorSpec1D",
    "NormReport",
    "build_cantor",
    "dimension",
    "fup_norm",
    "submultiplicativity_check",
    "fup_exponent",
    "strictness_witness",
    "schur_dilated_bound",
    "alphabet_scan",
    "dilated_exponent_curve",
    "enumerate_alphabets",
    "alphabet_mask",
]


def _normalize_alphabet(M: int, alphabet) -> tuple[int, ...]:
    digits = tuple(sorted(set(int(a) for a in alphabet)))
    if not digits:
        raise InputError("alphabet must be nonempty")
    if digits[0] < 0 or digits[-1] >= M:
        raise InputError(f"alphabet {digits} has digits outside 0..{M - 1}")
    return digits


@dataclass(frozen=True)
class CantorSpec1D:
    """Base, alphabet and order of a one-dimensional discrete Cantor set."""

    M: int
    alphabet: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.M < 3:
            raise InputError(f"base must be >= 3, got {self.M}")
        if self.k < 1:
            raise InputError(f"order must be >= 1, got {self.k}")
        object.__setattr__(self, "alphabet", _normalize_alphabet(self.M, self.alphabet))

    @property
    def N(self) -> int:
        return self.M ** self.k

    @property
    def delta(self) -> float:
        return dimension(self.M, self.alphabet)

    @property
    def set_size(self) -> int:
        return len(self.alphabet) ** self.k


@dataclass
class NormReport:
    """Operator norm r_k with its per-k exponent and solver metadata."""

    r_k: float
    beta_k: float
    method: str                      # "dense-svd" or "power-iteration"
    iterations: int = 0
    residual: float = 0.0
    schur_bound: Optional[float] = None
    alpha: float = 1.0
    spec: Optional[CantorSpec1D] = field(default=None, repr=False)


def build_cantor(spec: CantorSpec1D) -> np.ndarray:
    """Sorted elements of C_k = { sum a_i M^i : a_i in alphabet }."""
    base = np.array(spec.alphabet, dtype=np.int64)
    c = base.copy()
    for j in range(1, spec.k):
        c = (c[:, None] + base[None, :] * spec.M ** j).ravel()
    c.sort()
    return c


def dimension(M: int, alphabet) -> float:
    """log |A| / log M."""
    digits = _normalize_alphabet(M, alphabet)
    return float(np.log(len(digits)) / np.log(M))


def _restricted_matrix(c: np.ndarray, n: int, alpha: float) -> np.ndarray:
    """The |C| x |C| matrix ( exp(-2 pi i alpha j l / N) / sqrt(N) )."""
    if alpha == 1.0:
        ph = np.mod(np.multiply.outer(c, c), n).astype(np.float64)
    else:
        a_ld = np.longdouble(alpha)
        prod = np.multiply.outer(c, c).astype(np.longdouble)
        ph = np.mod(a_ld * prod, np.longdouble(n)).astype(np.float64)
    return np.exp(-2j * np.pi * ph / n) / np.sqrt(n)


class _FactorizedApply:
    """Fast apply of G_k via the row-transform / twist / column-transform
    factorization (alpha = 1 only).

    Splitting k = k1 + k2, a vector on C_k is reshaped to a C_{k1} x C_{k2}
    matrix U_{ab} = u(N1 b + a); then
        V = G1 @ ( twist * (U @ G2^T) ),   v(N2 a + b) = V_{ab},
    where G1, G2 are the dense restricted transforms of orders k1, k2 and
    twist[a, b] = exp(-2 pi i a b / N).
    """

    def __init__(self, spec: CantorSpec1D):
        k1 = spec.k // 2
        k2 = spec.k - k1
        self.k1, self.k2 = k1, k2
        m = spec.M
        n = spec.N
        n1, n2 = m ** k1, m ** k2
        c1 = build_cantor(CantorSpec1D(m, spec.alphabet, k1))
        c2 = build_cantor(CantorSpec1D(m, spec.alphabet, k2))
        ck = build_cantor(spec)
        self.g1 = _restricted_matrix(c1, n1, 1.0)
        self.g2 = _restricted_matrix(c2, n2, 1.0)
        tw = np.mod(np.multiply.outer(c1, c2), n).astype(np.float64)
        self.twist = np.exp(-2j * np.pi * tw / n)
        self.idx_in = np.searchsorted(ck, n1 * c2[None, :] + c1[:, None])
        self.idx_out = np.searchsorted(ck, n2 * c1[:, None] + c2[None, :])
        self.size = len(ck)

    def apply(self, u: np.ndarray) -> np.ndarray:
        mat = u[self.idx_in]
        mat = mat @ self.g2.T
        mat = self.twist * mat
        mat = self.g1 @ mat
        out = np.empty(self.size, dtype=np.complex128)
        out[self.idx_out] = mat
        return out

    def apply_gram(self, u: np.ndarray) -> np.ndarray:
        # G is symmetric, so G* G u = conj(G(conj(G u))).
        return np.conj(self.apply(np.conj(self.apply(u))))


class _DenseApply:
    def __init__(self, g: np.ndarray):
        self.g = g
        self.size = g.shape[0]

    def apply_gram(self, u: np.ndarray) -> np.ndarray:
        return self.g.conj().T @ (self.g @ u)


class _ChunkedDilatedApply:
    """Matrix-free G*G for dilated restricted transforms too large to
    materialize: kernel rows are rebuilt per block on every apply."""

    def __init__(self, c: np.ndarray, n: int, alpha: float, block: int = 1024):
        self.c = c
        self.n = n
        self.alpha = alpha
        self.block = block
        self.size = len(c)

    def _apply(self, u: np.ndarray) -> np.ndarray:
        out = np.empty(self.size, dtype=np.complex128)
        for i in range(0, self.size, self.block):
            rows = _restricted_matrix_rows(
                self.c[i:i + self.block], self.c, self.n, self.alpha
            )
            out[i:i + self.block] = rows @ u
        return out

    def apply_gram(self, u: np.ndarray) -> np.ndarray:
        # the kernel is symmetric, so G*G u = conj(G(conj(G u)))
        return np.conj(self._apply(np.conj(self._apply(u))))


def _restricted_matrix_rows(rows: np.ndarray, cols: np.ndarray, n: int, alpha: float) -> np.ndarray:
    a_ld = np.longdouble(alpha)
    prod = np.multiply.outer(rows, cols).astype(np.longdouble)
    ph = np.mod(a_ld * prod, np.longdouble(n)).astype(np.float64)
    return np.exp(-2j * np.pi * ph / n) / np.sqrt(n)


def _power_iteration(op, tol: float, restart_seed: int = _RESTART_SEED) -> tuple[float, int, float]:
    """Largest eigenvalue of the Gram operator by power iteration.

    Starts from the normalized all-ones vector; restarts once from a
    fixed-seed pseudo-random vector if the Rayleigh quotient stagnates
    while the residual is still above tolerance.
    """
    n = op.size
    cap = POWER_CAP_FACTOR * n
    x = np.ones(n, dtype=np.complex128) / np.sqrt(n)
    lam_prev = 0.0
    restarted = False
    stagnant = 0
    lam = 0.0
    residual = np.inf
    for it in range(1, cap + 1):
        y = op.apply_gram(x)
        lam = float(np.real(np.vdot(x, y)))
        residual = float(np.linalg.norm(y - lam * x) / max(lam, 1e-300))
        if residual <= tol:
            return lam, it, residual
        if abs(lam - lam_prev) <= 0.1 * tol * max(lam, 1e-300):
            stagnant += 1
        else:
            stagnant = 0
        lam_prev = lam
        if stagnant >= 8 and not restarted:
            rng = np.random.default_rng(restart_seed)
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x /= np.linalg.norm(x)
            restarted = True
            stagnant = 0
            continue
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0, it, 0.0
        x = y / nrm
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {cap} iterations",
        last_value=float(np.sqrt(max(lam, 0.0))),
        iterations=cap,
        residual=residual,
    )


def fup_norm(
    spec: CantorSpec1D,
    alpha: float = 1.0,
    tol: float = 1e-10,
    method: str = "auto",
    compute_schur: bool = False,
    restart_seed: int = _RESTART_SEED,
) -> NormReport:
    """Operator norm r_k of the restricted (possibly dilated) transform.

    Dense SVD at |C_k| <= 2048 (a Hermitian eigensolve of G*G for larger
    sets when the dense route is forced); otherwise power iteration on
    G*G, using the factorized fast apply when alpha = 1.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if method not in ("auto", "dense-svd", "power-iteration"):
        raise InputError(f"unknown method {method!r}")
    size = spec.set_size
    use_dense = method == "dense-svd" or (method == "auto" and size <= DENSE_MAX)
    n = spec.N

    if use_dense:
        c = build_cantor(spec)
        g = _restricted_matrix(c, n, alpha)
        if size <= DENSE_MAX:
            r = float(np.linalg.svd(g, compute_uv=False)[0])
        else:
            # full Hermitian solve: accurate for near-degenerate tops
            r = float(np.sqrt(max(np.linalg.eigvalsh(g.conj().T @ g)[-1], 0.0)))
        report = NormReport(
            r_k=r,
            beta_k=float(-np.log(max(r, 1e-300)) / np.log(n)),
            method="dense-svd",
            iterations=0,
            residual=0.0,
            alpha=alpha,
            spec=spec,
        )
    else:
        if alpha == 1.0:
            op = _FactorizedApply(spec)
        else:
            c = build_cantor(spec)
            if size > 16384:
                raise BudgetError(
                    f"dilated norm at |C_k|={size} exceeds the matvec budget"
                )
            if size <= 4096:
                op = _DenseApply(_restricted_matrix(c, n, alpha))
            else:
                op = _ChunkedDilatedApply(c, n, alpha)
        lam, iters, resid = _power_iteration(op, tol, restart_seed=restart_seed)
        r = float(np.sqrt(max(lam, 0.0)))
        report = NormReport(
            r_k=r,
            beta_k=float(-np.log(max(r, 1e-300)) / np.log(n)),
            method="power-iteration",
            iterations=iters,
            residual=resid,
            alpha=alpha,
            spec=spec,
        )
    if compute_schur or alpha != 1.0:
        report.schur_bound = schur_dilated_bound(spec.M, spec.alphabet, spec.k, alpha)
    return report


def submultiplicativity_check(
    M: int, alphabet, k1: int, k2: int, tol: float = 1e-9
) -> tuple[bool, float, float, float]:
    """Check r_{k1+k2} <= r_{k1} r_{k2} + tol (alpha = 1)."""
    r1 = fup_norm(CantorSpec1D(M, alphabet, k1)).r_k
    r2 = fup_norm(CantorSpec1D(M, alphabet, k2)).r_k
    r12 = fup_norm(CantorSpec1D(M, alphabet, k1 + k2)).r_k
    return r12 <= r1 * r2 + tol, r1, r2, r12


def fup_exponent(
    M: int,
    alphabet,
    k_max: int,
    tol: float = 1e-10,
    max_set_size: int = 8192,
) -> dict:
    """Table of (k, r_k, beta_k) for k = 1..k_max and the best certified
    lower bound max_k beta_k.

    Truncates (with a flag) instead of failing when |C_k| outruns the
    budget; by Fekete each finite-k beta_k is already a rigorous
    one-sided bound.
    """
    digits = _normalize_alphabet(M, alphabet)
    delta = dimension(M, digits)
    if not 0.0 < delta < 1.0:
        import warnings

        warnings.warn(f"delta={delta:g} is outside (0,1); exponents are trivial")
    rows = []
    truncated = False
    for k in range(1, k_max + 1):
        if len(digits) ** k > max_set_size:
            truncated = True
            break
        rep = fup_norm(CantorSpec1D(M, digits, k), tol=tol)
        rows.append((k, rep.r_k, rep.beta_k))
    best = max((b for _, _, b in rows), default=float("nan"))
    return {
        "M": M,
        "alphabet": digits,
        "delta": delta,
        "rows": rows,
        "best": best,
        "truncated": truncated,
    }


def strictness_witness(M: int, alphabet, k_cap: int) -> Optional[int]:
    """Smallest k <= k_cap with r_k < min(1, N^(delta - 1/2)) - 1e-10.

    Returns None when no order up to the cap certifies strictness; that
    is a legitimate outcome (the improvement can be far below 1e-10 at
    small k, e.g. M=5 with a 4-digit alphabet).
    """
    digits = _normalize_alphabet(M, alphabet)
    delta = dimension(M, digits)
    if not 0.0 < delta < 1.0:
        raise InputError("strictness witness needs 0 < delta < 1")
    for k in range(1, k_cap + 1):
        n = M ** k
        size = len(digits) ** k
        # a dense route keeps near-degenerate tops resolvable to ~1e-12
        method = "dense-svd" if size <= 4096 else "auto"
        rep = fup_norm(CantorSpec1D(M, digits, k), method=method)
        if rep.r_k < min(1.0, n ** (delta - 0.5)) - 1e-10:
            return k
    return None


def schur_dilated_bound(M: int, alphabet, k: int, alpha: float) -> float:
    """Schur upper bound r~_{k,alpha} on the dilated restricted norm:
    r~^2 = max_{j in C_k} sum_{l in C_k} |F_{k,alpha}(j - l)|."""
    digits = _normalize_alphabet(M, alphabet)
    base = np.array(digits, dtype=np.int64)
    c = base.copy()
    for j in range(1, k):
        c = (c[:, None] + base[None, :] * M ** j).ravel()
    c.sort()
    diffs = (c[:, None] - c[None, :]).ravel()
    uniq, inv = np.unique(diffs, return_inverse=True)
    abs_f = np.abs(kernel_F(M, digits, k, alpha, uniq))
    row_sums = abs_f[inv].reshape(len(c), len(c)).sum(axis=1)
    return float(np.sqrt(row_sums.max()))


def alphabet_mask(alphabet) -> int:
    """Bitmask sum(2^a) used as the deterministic alphabet sort key."""
    return int(sum(1 << int(a) for a in set(alphabet)))


def enumerate_alphabets(M_max: int, include_trivial: bool = False):
    """All (M, alphabet) with 3 <= M <= M_max, by (M asc, bitmask asc).

    Skips delta in {0, 1} (singleton and full alphabets) unless asked.
    """
    out = []
    for M in range(3, M_max + 1):
        sizes = range(1, M + 1) if include_trivial else range(2, M)
        pairs = []
        for sz in sizes:
            for comb in combinations(range(M), sz):
                pairs.append((alphabet_mask(comb), comb))
        pairs.sort()
        out.extend((M, comb) for _, comb in pairs)
    return out


def alphabet_scan(
    M_max: int,
    k: int,
    alpha: float = 1.0,
    include_trivial: bool = False,
    tol: float = 1e-10,
    max_set_size: int = 8192,
) -> list[dict]:
    """One row per (M, alphabet): the per-k exponent of the (possibly
    dilated) restricted transform.  Row order is fixed: M ascending then
    alphabet bitmask ascending."""
    rows = []
    for M, alph in enumerate_alphabets(M_max, include_trivial=include_trivial):
        if len(alph) ** k > max_set_size:
            raise BudgetError(
                f"alphabet scan at k={k} needs |C_k|={len(alph) ** k} for "
                f"M={M} A={alph}; lower k or raise max_set_size"
            )
        rep = fup_norm(CantorSpec1D(M, alph, k), alpha=alpha, tol=tol)
        rows.append(
            {
                "M": M,
                "alphabet_mask": alphabet_mask(alph),
                "delta": dimension(M, alph),
                "k": k,
                "r_k": rep.r_k,
                "beta_k": rep.beta_k,
            }
        )
    return rows


def dilated_exponent_curve(M: int, alphabet, k: int, alpha_grid) -> list[dict]:
    """Schur bounds r~_{k,alpha} and exponents beta~ on a grid of dilations."""
    digits = _normalize_alphabet(M, alphabet)
    n = M ** k
    rows = []
    for alpha in np.asarray(alpha_grid, dtype=np.float64):
        rt = schur_dilated_bound(M, digits, k, float(alpha))
        rows.append(
            {
                "alpha": float(alpha),
                "schur_bound": rt,
                "beta_tilde": float(-np.log(max(rt, 1e-300)) / np.log(n)),
            }
        )
    return rows
