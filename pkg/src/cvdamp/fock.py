"""Brute-force reference: the damped two-mode state in a truncated Fock basis.

Nothing here imports the analytic modules. The master equation is integrated
directly, and every measure is read off a dense eigendecomposition.

Density matrices are stored as arrays ``rho[n1, n2, m1, m2]`` standing for
|n1 n2><m1 m2|. Truncated ladder operators are used inside the Lindblad
terms, which keeps the generator trace preserving; the price is a reflecting
boundary at the top Fock level, so the population there is reported as the
truncation diagnostic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffTooSmall, InvalidArgument, NumericalWarning
from .params import ChannelParams


@dataclass(frozen=True)
class FockDensity:
    cutoff: int
    elements: np.ndarray
    deficit: float = 0.0

    def matrix(self) -> np.ndarray:
        n = self.cutoff
        return self.elements.reshape(n * n, n * n)

    @property
    def trace(self) -> float:
        return float(np.real(np.einsum("abab->", self.elements)))

    def edge_population(self) -> float:
        """Population on the highest retained level of either mode."""
        pop = np.real(np.einsum("abab->ab", self.elements))
        return float(pop[-1, :].sum() + pop[:, -1].sum() - pop[-1, -1])

    def hermiticity_error(self) -> float:
        m = self.matrix()
        return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True)
class OracleMeasures:
    negativity: float
    log_negativity: float
    entropy: float
    reduced_entropies: tuple[float, float]
    coherent_infos: tuple[float, float]


def _from_matrix(mat: np.ndarray, cutoff: int, deficit: float = 0.0) -> FockDensity:
    return FockDensity(cutoff, mat.reshape(cutoff, cutoff, cutoff, cutoff), deficit)


def tmsv_fock(r: float, cutoff: int) -> FockDensity:
    """(1/cosh r) sum_n tanh(r)^n |n, n>, truncated and renormalized."""
    if cutoff < 2:
        raise InvalidArgument("cutoff must be at least 2")
    amps = np.tanh(r) ** np.arange(cutoff) / np.cosh(r)
    kept = float(np.sum(amps ** 2))
    deficit = 1.0 - kept
    if deficit > 1e-6:
        warnings.warn(f"tmsv_fock: truncation deficit {deficit:.3g} at cutoff {cutoff}", NumericalWarning)
    psi = np.zeros((cutoff, cutoff))
    psi[np.arange(cutoff), np.arange(cutoff)] = amps / math.sqrt(kept)
    vec = psi.reshape(-1)
    return _from_matrix(np.outer(vec, vec).astype(complex), cutoff, deficit)


def _ladder(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n)), 1)


def thermal_fock(nbar: float, cutoff: int) -> np.ndarray:
    """Single-mode thermal diagonal; nbar in (-1/2, 0) gives the formal, non-positive extension."""
    q = nbar / (nbar + 1)
    return np.diag((1 - q) * q ** np.arange(cutoff)).astype(complex)


def gaussian_fock(A1p: float, A2p: float, B: complex, cutoff: int, pad: int = 24) -> FockDensity:
    """Fock matrix of the Gaussian with chi = exp[-A1p|mu1|^2 - A2p|mu2|^2 + B mu1 mu2 + c.c.].

    Built as S(r) (tau_1 x tau_2) S(r)^+ with a two-mode squeezer S, thermal
    factors tau_i, and a phase rotation on mode 1 for arg B. Coefficients
    that violate the uncertainty relation give thermal factors with
    negative occupation, which is how unphysical chi show up here.
    """
    s = A1p + A2p
    disc = s * s - 4 * abs(B) ** 2
    if disc <= 0:
        raise InvalidArgument("coefficients do not define a normalizable Gaussian")
    ntot = math.sqrt(disc)
    r = 0.5 * math.acosh(s / ntot)
    n1 = 0.5 * (ntot - 1 + (A1p - A2p))
    n2 = 0.5 * (ntot - 1 - (A1p - A2p))
    big = cutoff + pad
    a = _ladder(big)
    eye = np.eye(big)
    a1, a2 = np.kron(a, eye), np.kron(eye, a)
    gen = r * (a1.T @ a2.T - a1 @ a2)
    S = linalg.expm(gen)
    tau = np.kron(thermal_fock(n1, big), thermal_fock(n2, big))
    rho = S @ tau @ S.T
    phase = np.exp(1j * np.angle(B) * np.arange(big)) if B != 0 else np.ones(big)
    U = np.kron(np.diag(phase), eye)
    rho = U.conj() @ rho @ U
    rho = rho.reshape(big, big, big, big)[:cutoff, :cutoff, :cutoff, :cutoff]
    return FockDensity(cutoff, np.ascontiguousarray(rho))


def displacement_matrix(mu: complex, cutoff: int) -> np.ndarray:
    """<m|D(mu)|n> from the Laguerre closed form."""
    x = abs(mu) ** 2
    out = np.zeros((cutoff, cutoff), dtype=complex)
    for m in range(cutoff):
        for n in range(cutoff):
            if m >= n:
                pref = math.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
                out[m, n] = pref * mu ** (m - n) * eval_genlaguerre(n, m - n, x)
            else:
                pref = math.exp(0.5 * (gammaln(m + 1) - gammaln(n + 1)))
                out[m, n] = pref * (-np.conj(mu)) ** (n - m) * eval_genlaguerre(m, n - m, x)
    return out * math.exp(-x / 2)


def chi_fock(rho: FockDensity, mu1: complex, mu2: complex) -> complex:
    """tr[rho D(mu1) x D(mu2)]."""
    n = rho.cutoff
    D = np.kron(displacement_matrix(mu1, n), displacement_matrix(mu2, n))
    return complex(np.trace(rho.matrix() @ D))


class _Lindblad:
    """Right-hand side of both damping processes on rho[n1, n2, m1, m2]."""

    def __init__(self, ch: ChannelParams, cutoff: int):
        self.ch = ch
        N = cutoff
        idx = np.arange(N, dtype=float)
        self.sq_lo = np.sqrt(idx + 1)      # x[n] <- sqrt(n+1) x[n+1]
        self.sq_lo[-1] = 0.0
        self.sq_hi = np.sqrt(idx)          # x[n] <- sqrt(n) x[n-1]
        self.num = idx
        self.aad = idx + 1                 # truncated a a^+ = diag(1, ..., N-1, 0)
        self.aad[-1] = 0.0
        n1, n2, m1, m2 = np.meshgrid(idx, idx, idx, idx, indexing="ij")
        self.n = (n1, n2, m1, m2)
        self.dephase = -0.5 * (ch.gamma_phase_1 * (n1 - m1) ** 2 + ch.gamma_phase_2 * (n2 - m2) ** 2)

    @staticmethod
    def _lower(x, ax, w):
        out = np.zeros_like(x)
        src = [slice(None)] * 4
        dst = [slice(None)] * 4
        src[ax] = slice(1, None)
        dst[ax] = slice(0, -1)
        shape = [1] * 4
        shape[ax] = -1
        out[tuple(dst)] = x[tuple(src)]
        return out * w[: x.shape[ax]].reshape(shape)

    @staticmethod
    def _raise(x, ax, w):
        out = np.zeros_like(x)
        src = [slice(None)] * 4
        dst = [slice(None)] * 4
        src[ax] = slice(0, -1)
        dst[ax] = slice(1, None)
        shape = [1] * 4
        shape[ax] = -1
        out[tuple(dst)] = x[tuple(src)]
        return out * w.reshape(shape)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        ch = self.ch
        out = self.dephase * rho
        for mode, (G, nb) in enumerate(((ch.gamma_amp_1, ch.nbar_1), (ch.gamma_amp_2, ch.nbar_2))):
            if G == 0:
                continue
            ket, bra = mode, mode + 2
            shape_k = [1] * 4
            shape_k[ket] = -1
            shape_b = [1] * 4
            shape_b[bra] = -1
            nk, nbr = self.num.reshape(shape_k), self.num.reshape(shape_b)
            down = self._lower(self._lower(rho, ket, self.sq_lo), bra, self.sq_lo)
            term = (nb + 1) * (2 * down - (nk + nbr) * rho)
            if nb > 0:
                up = self._raise(self._raise(rho, ket, self.sq_hi), bra, self.sq_hi)
                ak, ab = self.aad.reshape(shape_k), self.aad.reshape(shape_b)
                term = term + nb * (2 * up - (ak + ab) * rho)
            out = out + 0.5 * G * term
        return out


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_master(rho0: FockDensity, ch: ChannelParams, t: float, dt_max: float = 0.02,
                     tol: float = 1e-10, edge_limit: float = 1e-4) -> FockDensity:
    """Classical RK4 with step-doubling error control and Richardson correction."""
    if t < 0:
        raise InvalidArgument("t must be non-negative")
    f = _Lindblad(ch, rho0.cutoff)
    y = rho0.elements.astype(complex)
    now, h = 0.0, min(dt_max, t) if t > 0 else 0.0
    while now < t - 1e-15:
        h = min(h, t - now)
        full = _rk4(f, y, h)
        half = _rk4(f, _rk4(f, y, h / 2), h / 2)
        err = float(np.max(np.abs(full - half)))
        if err <= tol or h < 1e-8:
            y = half + (half - full) / 15
            m = y.reshape(rho0.cutoff ** 2, -1)
            y = (0.5 * (m + m.conj().T)).reshape(y.shape)
            now += h
            if err < tol / 32:
                h = min(2 * h, dt_max)
        else:
            h /= 2
    out = FockDensity(rho0.cutoff, y, rho0.deficit)
    edge = out.edge_population()
    if edge > edge_limit:
        raise CutoffTooSmall(f"edge population {edge:.3g} exceeds {edge_limit:g}",
                             edge_population=edge, cutoff=rho0.cutoff)
    return out


def dephase_exact(rho: FockDensity, ch: ChannelParams, t: float) -> FockDensity:
    """Pure phase damping is diagonal in the Fock basis and solvable elementwise."""
    idx = np.arange(rho.cutoff)
    n1, n2, m1, m2 = np.meshgrid(idx, idx, idx, idx, indexing="ij")
    fac = np.exp(-0.5 * t * (ch.gamma_phase_1 * (n1 - m1) ** 2 + ch.gamma_phase_2 * (n2 - m2) ** 2))
    return FockDensity(rho.cutoff, rho.elements * fac, rho.deficit)


def partial_transpose(rho: FockDensity) -> np.ndarray:
    """Transpose on mode 2: rho[n1, n2, m1, m2] -> rho[n1, m2, m1, n2]."""
    return np.ascontiguousarray(rho.elements.transpose(0, 3, 2, 1))


def reduced(rho: FockDensity, mode: int) -> np.ndarray:
    return np.einsum("abcb->ac", rho.elements) if mode == 1 else np.einsum("abad->bd", rho.elements)


def _vn(ev: np.ndarray) -> float:
    ev = ev[ev > 1e-14]
    return float(-np.sum(ev * np.log(ev)))


def oracle_measures(rho: FockDensity) -> OracleMeasures:
    n = rho.cutoff
    pt = partial_transpose(rho).reshape(n * n, n * n)
    ev_pt = linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    neg = float(-ev_pt[ev_pt < 0].sum())
    mat = rho.matrix()
    S = _vn(linalg.eigvalsh(0.5 * (mat + mat.conj().T)))
    S1 = _vn(linalg.eigvalsh(reduced(rho, 1)))
    S2 = _vn(linalg.eigvalsh(reduced(rho, 2)))
    return OracleMeasures(
        negativity=neg,
        log_negativity=math.log2(1 + 2 * neg),
        entropy=S,
        reduced_entropies=(S1, S2),
        coherent_infos=(max(0.0, S1 - S), max(0.0, S2 - S)),
    )


def pt_sector_spectra(rho: FockDensity, max_total: int) -> dict[int, np.ndarray]:
    """Eigenvalues of rho^PT restricted to each total-photon-number sector."""
    n = rho.cutoff
    pt = partial_transpose(rho)
    out = {}
    for m in range(min(max_total, n - 1) + 1):
        states = [(m - j, j) for j in range(m + 1) if m - j < n and j < n]
        sub = np.array([[pt[a, b, c, e] for (c, e) in states] for (a, b) in states])
        out[m] = np.sort(linalg.eigvalsh(0.5 * (sub + sub.conj().T)))
    return out


def rho_sector_spectrum(rho: FockDensity, diff: int) -> np.ndarray:
    """Eigenvalues of rho restricted to n1 - n2 = diff."""
    n = rho.cutoff
    states = [(j + diff, j) for j in range(n) if 0 <= j + diff < n]
    sub = np.array([[rho.elements[a, b, c, e] for (c, e) in states] for (a, b) in states])
    return np.sort(linalg.eigvalsh(0.5 * (sub + sub.conj().T)))
