"""Spectrum of the damped state itself, entropy and coherent information.

rho conserves the photon-number difference n1 - n2. The sector with
difference m >= 0 is spanned by |m + l, l>, l = 0, 1, ..., and is represented
by the (infinite, here truncated) block L^(m). For m < 0 the roles of the two
modes are exchanged; with identical modes both signs give the same block,
which is where the factor 2 in the entropy sum comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import gammaln

from .errors import InvalidArgument, NumericalError, TruncationError
from .params import DerivedCoefficients
from .ppt import IMAG_NOISE, _log, _logpow


@dataclass(frozen=True)
class DensityBlock:
    m: int
    size: int
    entries: np.ndarray
    hermitian: np.ndarray
    eigenvalues: tuple[float, ...] | None = None

    @property
    def trace(self) -> float:
        return float(np.trace(self.hermitian))


def _sector_coeffs(d: DerivedCoefficients, m: int) -> tuple[float, float, int]:
    # C2 pairs with the mode carrying the extra m photons (mode 1 for m >= 0).
    if m >= 0:
        return max(d.C2, 0.0), max(d.C1, 0.0), m
    return max(d.C1, 0.0), max(d.C2, 0.0), -m


def _L_sum(d: DerivedCoefficients, m: int, size: int, fock: bool) -> np.ndarray:
    Ca, Cb, mm = _sector_coeffs(d, m)
    l, n = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    logCa, logCb, logD = _log(Ca), _log(Cb), _log(d.absD)
    out = np.zeros((size, size))
    if fock:
        base = 0.5 * (gammaln(mm + n + 1) + gammaln(mm + l + 1) + gammaln(n + 1) + gammaln(l + 1))
    else:
        base = gammaln(mm + n + 1) + gammaln(l + 1)
    base = base - d.gbt * (n - l) ** 2
    for k in range(size):
        valid = (k <= l) & (k <= n)
        if not valid.any():
            break
        nk = np.clip(n - k, 0, None)
        lk = np.clip(l - k, 0, None)
        if fock:
            denom = gammaln(mm + k + 1) + gammaln(k + 1) + gammaln(nk + 1) + gammaln(lk + 1)
        else:
            denom = gammaln(nk + 1) + gammaln(mm + k + 1) + gammaln(k + 1) + gammaln(lk + 1)
        logterm = (base - denom + _logpow(logCa, np.full_like(l, mm + k))
                   + _logpow(logCb, np.full_like(l, k)) + _logpow(logD, l + n - 2 * k))
        term = np.exp(np.where(valid, logterm, -np.inf))
        if not fock:
            term = term * np.where((l + n) % 2 == 0, 1.0, -1.0)
        out += term
    return out / d.det_AB


def build_L_block(d: DerivedCoefficients, m: int, size: int) -> DensityBlock:
    """L^(m)_ln = K^-1 sum_k C(m+n, n-k) C(l, k) Ca^(m+k) Cb^k (-|D|)^(l+n-2k) e^(-gbt (n-l)^2).

    Ca = C2, Cb = C1 for m >= 0 and swapped for m < 0; with C1 = C2 = C this
    is the familiar C^m C^(2k) form. ``hermitian`` is the same operator in
    the orthonormal Fock basis.
    """
    if size < 1:
        raise InvalidArgument("size must be at least 1")
    entries = _L_sum(d, m, size, fock=False)
    herm = _L_sum(d, m, size, fock=True)
    herm = 0.5 * (herm + herm.T)
    return DensityBlock(m=m, size=size, entries=entries, hermitian=herm)


def density_block_eigenvalues(b: DensityBlock, method: str = "hermitian") -> np.ndarray:
    if method == "hermitian":
        if not np.all(np.isfinite(b.hermitian)):
            raise NumericalError(f"non-finite entries in L block m={b.m}")
        return np.sort(linalg.eigvalsh(b.hermitian))
    balanced, _ = linalg.matrix_balance(b.entries, permute=False)
    ev = linalg.eigvals(balanced)
    scale = float(np.max(np.abs(ev)))
    if np.max(np.abs(ev.imag)) > IMAG_NOISE * max(scale, 1e-300):
        raise NumericalError(f"L block m={b.m} has complex eigenvalues")
    return np.sort(ev.real)


def adaptive_L_block(d: DerivedCoefficients, m: int, eps: float = 1e-10,
                     start: int = 12, size_cap: int = 4096) -> DensityBlock:
    """Grow the truncation until the trailing diagonal entry is below eps * max diagonal."""
    size = start
    while True:
        blk = build_L_block(d, m, size)
        diag = np.diag(blk.hermitian)
        top = float(np.max(diag)) if diag.size else 0.0
        if top <= 0 or diag[-1] < eps * top:
            return blk
        if size >= size_cap:
            raise TruncationError("L block truncation did not converge", m=m, size=size)
        size *= 2


def sector_spectra(d: DerivedCoefficients, eps: float = 1e-10, m_cap: int = 2000):
    """Yield (weight, eigenvalues) per sector until the remaining mass is below eps."""
    sym = d.symmetric
    trace_acc = 0.0
    for m in range(m_cap + 1):
        signs = (m,) if (m == 0 or sym) else (m, -m)
        weight = 2 if (m > 0 and sym) else 1
        block_trace = 0.0
        for s in signs:
            blk = adaptive_L_block(d, s, eps)
            ev = density_block_eigenvalues(blk)
            if ev.min() < -1e-10 * max(1.0, ev.max()):
                raise NumericalError(f"L block m={s} has a negative eigenvalue {ev.min():.3g}")
            block_trace += weight * blk.trace
            yield weight, ev
        trace_acc += block_trace
        if trace_acc >= 1 - eps and block_trace < eps:
            return
    raise TruncationError("entropy sum did not converge within the sector cap",
                          sectors=m_cap + 1, trace=trace_acc)


def normalization(d: DerivedCoefficients, eps: float = 1e-10) -> float:
    """Tr L^(0) + 2 sum_m Tr L^(m) (both signs summed separately if asymmetric)."""
    return float(sum(w * ev.sum() for w, ev in sector_spectra(d, eps)))


def _plogp(ev: np.ndarray) -> float:
    ev = ev[ev > 1e-14]
    return float(-np.sum(ev * np.log(ev)))


def entropy(d: DerivedCoefficients, eps: float = 1e-10, bits: bool = False) -> float:
    """von Neumann entropy of the damped state (nats unless ``bits``)."""
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    S = sum(w * _plogp(ev) for w, ev in sector_spectra(d, eps))
    return S / math.log(2) if bits else S


def reduced_entropy(A: float, bits: bool = False) -> float:
    """Entropy of a thermal mode with mean occupation A - 1."""
    if A < 1:
        if A > 1 - 1e-12:
            A = 1.0
        else:
            raise InvalidArgument(f"A = {A} < 1")
    S = A * math.log(A) - ((A - 1) * math.log(A - 1) if A > 1 else 0.0)
    return S / math.log(2) if bits else S


def coherent_info(d: DerivedCoefficients, eps: float = 1e-10, bits: bool = False) -> tuple[float, float]:
    S = entropy(d, eps, bits)
    return (max(0.0, reduced_entropy(d.A1, bits) - S), max(0.0, reduced_entropy(d.A2, bits) - S))


def coherent_info_raw(d: DerivedCoefficients, eps: float = 1e-10) -> tuple[float, float]:
    """S(rho_i) - S(rho) without the clamp, for locating zero crossings."""
    S = entropy(d, eps)
    return reduced_entropy(d.A1) - S, reduced_entropy(d.A2) - S
