"""Partial-transpose spectrum of the damped state, block by block.

rho^PT conserves the total photon number, and the sector with m photons is
represented by the (m+1)x(m+1) block M^(m). Each block is built twice: in
the monomial basis of the Bargmann functions (``entries``, the textbook form)
and in the orthonormal Fock basis (``hermitian``), which differs by the
diagonal similarity diag(sqrt((m-l)! l!)) and is real symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import gammaln

from .errors import InvalidArgument, NumericalError, TruncationError
from .params import DerivedCoefficients

IMAG_NOISE = 1e-8


@dataclass(frozen=True)
class SpectralBlock:
    m: int
    entries: np.ndarray
    hermitian: np.ndarray | None = None
    eigenvalues: tuple[float, ...] | None = None

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    log_negativity: float
    blocks_used: int
    trace_accumulated: float
    tail_bound: float


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _logpow(logx: float, e: np.ndarray) -> np.ndarray:
    """e * log(x) with the convention 0**0 = 1."""
    with np.errstate(invalid="ignore"):
        out = e * logx
    return np.where(e == 0, 0.0, out)


def _log_binom(n: np.ndarray, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _block_sum(d: DerivedCoefficients, m: int, log_shift: np.ndarray | None = None) -> np.ndarray:
    """sum over k of the M^(m) summands, optionally times exp(log_shift[l, n])."""
    l, n = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    logC2, logC1, logD = _log(max(d.C2, 0.0)), _log(max(d.C1, 0.0)), _log(d.absD)
    base = -d.gbt * (n - l) ** 2 + (0.0 if log_shift is None else log_shift)
    out = np.zeros((m + 1, m + 1))
    for k in range(m + 1):
        lk = l - k
        valid = (lk >= 0) & (lk <= m - n) & (k <= n)
        if not valid.any():
            continue
        lkc = np.clip(lk, 0, None)
        with np.errstate(invalid="ignore"):  # masked entries may hold inf - inf
            logterm = (
                _log_binom(m - n, np.minimum(lkc, m - n)) + _log_binom(n, np.minimum(k, n))
                + _logpow(logC2, np.clip(m - n - lkc, 0, None))
                + _logpow(logC1, np.full_like(l, k))
                + _logpow(logD, l + n - 2 * k)
                + base
            )
        out += np.where(valid, np.exp(np.where(valid, logterm, -np.inf)), 0.0)
    return out


def build_M_block(d: DerivedCoefficients, m: int) -> SpectralBlock:
    """M^(m)_ln = K^-1 sum_k C(m-n,l-k) C(n,k) C2^(m-n-l+k) C1^k |D|^(l+n-2k) e^(-gbt (n-l)^2).

    K = A1 A2 - |B|^2. Powers are accumulated as exponents first, so the
    pure-state limit C_i = 0 needs no special casing.
    """
    if m < 0:
        raise InvalidArgument("block index must be non-negative")
    if d.C1 < -1e-12 or d.C2 < -1e-12:
        raise InvalidArgument("C1 and C2 must be non-negative")
    idx = np.arange(m + 1)
    log_s = 0.5 * (gammaln(m - idx + 1) + gammaln(idx + 1))
    entries = _block_sum(d, m) / d.det_AB
    herm = _block_sum(d, m, log_s[:, None] - log_s[None, :]) / d.det_AB
    herm = 0.5 * (herm + herm.T)
    return SpectralBlock(m=m, entries=entries, hermitian=herm)


def block_eigenvalues(b: SpectralBlock, method: str = "hermitian") -> np.ndarray:
    """Sorted real spectrum of a block.

    ``hermitian`` uses the symmetric Fock-basis form; ``general`` balances
    the textbook matrix and runs a non-symmetric eigensolver, then checks the
    imaginary parts are noise.
    """
    if method == "hermitian" and b.hermitian is not None:
        if not np.all(np.isfinite(b.hermitian)):
            raise NumericalError(f"non-finite entries in block m={b.m}")
        return np.sort(linalg.eigvalsh(b.hermitian))
    if not np.all(np.isfinite(b.entries)):
        raise NumericalError(f"non-finite entries in block m={b.m}")
    balanced, _ = linalg.matrix_balance(b.entries, permute=False)
    ev = linalg.eigvals(balanced)
    scale = float(np.max(np.abs(ev))) if ev.size else 0.0
    worst = float(np.max(np.abs(ev.imag))) if ev.size else 0.0
    if worst > IMAG_NOISE * max(scale, 1e-300):
        bad = ev[np.argmax(np.abs(ev.imag))]
        raise NumericalError(f"block m={b.m} has complex eigenvalue {bad}")
    return np.sort(ev.real)


def with_eigenvalues(b: SpectralBlock, method: str = "hermitian") -> SpectralBlock:
    return SpectralBlock(b.m, b.entries, b.hermitian, tuple(block_eigenvalues(b, method)))


def _negative_part(ev: np.ndarray) -> float:
    if ev.size == 0:
        return 0.0
    thresh = 64 * np.finfo(float).eps * float(np.max(np.abs(ev)))
    neg = ev[ev < -thresh]
    return float(-neg.sum())


def _geometric_tail(hist: list[float]) -> float:
    if len(hist) < 2 or hist[-2] <= 0:
        return math.inf
    q = min(hist[-1] / hist[-2], 0.999)
    return hist[-1] * q / (1 - q)


def negativity(d: DerivedCoefficients, eps: float = 1e-10, m_cap: int = 1500) -> NegativityResult:
    """Sum of |negative eigenvalues| over all blocks, each block counted once."""
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    total_neg = 0.0
    trace_acc = 0.0
    abs_hist: list[float] = []
    for m in range(m_cap + 1):
        blk = build_M_block(d, m)
        ev = block_eigenvalues(blk)
        total_neg += _negative_part(ev)
        trace_acc += float(ev.sum())
        abs_hist.append(float(np.abs(ev).sum()))
        tail = _geometric_tail(abs_hist)
        # positive and negative tails cancel in the trace, so also bound the absolute mass left
        if trace_acc >= 1 - eps and abs_hist[-1] + tail < eps:
            break
    else:
        raise TruncationError("negativity did not converge within the block cap",
                              blocks=m_cap + 1, trace=trace_acc)
    return NegativityResult(
        negativity=total_neg,
        log_negativity=math.log2(1 + 2 * total_neg),
        blocks_used=len(abs_hist),
        trace_accumulated=trace_acc,
        tail_bound=tail,
    )


def log_negativity(d: DerivedCoefficients, eps: float = 1e-10) -> float:
    return negativity(d, eps).log_negativity


def _sym_cd(d: DerivedCoefficients) -> tuple[float, float]:
    return math.sqrt(max(d.C1, 0.0) * max(d.C2, 0.0)), d.absD


def closed_form_eigs(d: DerivedCoefficients) -> tuple[float, float, float]:
    """(lambda^(0), lambda_0^(1), lambda_0^(2)).

    Exact for A1 = A2. Otherwise C -> sqrt(C1 C2), D -> |D| is substituted;
    lambda_0^(1) then keeps the sign of the true smallest M^(1) eigenvalue
    (see :func:`block1_eigs` for the exact pair) while lambda_0^(2) is only
    indicative.
    """
    C, D = _sym_cd(d)
    k = 1.0 / d.det_AB
    return k, k * (C - D * math.exp(-d.gbt)), k * (C * C - D * D * math.exp(-4 * d.gbt))


def block1_eigs(d: DerivedCoefficients) -> tuple[float, float]:
    """Both eigenvalues of M^(1) in closed form, ascending."""
    k = 1.0 / d.det_AB
    mean = 0.5 * (d.C1 + d.C2)
    rad = math.hypot(0.5 * (d.C2 - d.C1), d.absD * math.exp(-d.gbt))
    return k * (mean - rad), k * (mean + rad)


# Trigonometric polynomials are stored as coefficient arrays over Fourier
# modes -K..K (index K is the constant term).

def _tmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def _tpow(a: np.ndarray, e: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(e):
        out = _tmul(out, a)
    return out


def _gauss_average(a: np.ndarray, gbt: float) -> complex:
    K = (len(a) - 1) // 2
    modes = np.arange(-K, K + 1)
    return complex(np.sum(a * np.exp(-gbt * modes ** 2)))


def build_Mprime_block(d: DerivedCoefficients, m: int) -> np.ndarray:
    """The rotated-basis block M'^(m) (symmetric case), similar to M^(m)."""
    C, D = _sym_cd(d)
    plus = np.array([D / 2, C, D / 2], dtype=complex)
    minus = np.array([-D / 2, C, -D / 2], dtype=complex)
    isin = np.array([-D / 2, 0, D / 2], dtype=complex)  # i D sin x
    out = np.zeros((m + 1, m + 1))
    for l in range(m + 1):
        for n in range(m + 1):
            acc = 0j
            for k in range(max(0, l - m + n), min(n, l) + 1):
                poly = _tmul(_tmul(_tpow(plus, m - n - l + k), _tpow(minus, k)), _tpow(isin, l + n - 2 * k))
                acc += math.comb(m - n, l - k) * math.comb(n, k) * (-1) ** (l - k) * _gauss_average(poly, d.gbt)
            out[l, n] = acc.real
    return out / d.det_AB


def perturb_diag(d: DerivedCoefficients, m: int, n: int) -> float:
    """M'^(m)_nn, the first-order estimate of the n-th eigenvalue of M^(m)."""
    if not 0 <= n <= m:
        raise InvalidArgument("need 0 <= n <= m")
    C, D = _sym_cd(d)
    plus = np.array([D / 2, C, D / 2], dtype=complex)
    minus = np.array([-D / 2, C, -D / 2], dtype=complex)
    dsin2 = np.array([-D * D / 4, 0, D * D / 2, 0, -D * D / 4], dtype=complex)  # (D sin x)^2
    acc = 0j
    for k in range(max(0, 2 * n - m), n + 1):
        poly = _tmul(_tmul(_tpow(plus, m - 2 * n + k), _tpow(minus, k)), _tpow(dsin2, n - k))
        acc += math.comb(m - n, n - k) * math.comb(n, k) * _gauss_average(poly, d.gbt)
    return acc.real / d.det_AB


def f_factor(m: int, n: int, C: float, D: float, gt: float) -> float:
    """First-order dephasing correction f(m, n) to the Gaussian eigenvalues."""
    if D == C or D == -C:
        raise InvalidArgument("f(m, n) is singular at D = +-C")
    return 1 - gt * (D / (D + C) * (m - n) + D / (D - C) * n + 2 * D * D / ((D + C) * (D - C)) * (m - n) * n)


def negativity_estimate(d: DerivedCoefficients) -> float:
    """Small-dephasing negativity, to first order in gbt."""
    C, D = _sym_cd(d)
    g = d.gbt
    return (D - C) / (1 + C - D) - g * D * (1 - C + D) / ((1 - C - D) * (1 + C - D) ** 2)


def negativity_estimate_AB(A: float, B: float, gbt: float) -> float:
    """The same estimate written in terms of A and B."""
    s = 2 * (A - B) - 1
    return (1 - A + B) / s - gbt * B / s ** 2
