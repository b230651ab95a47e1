"""Three separability criteria, their zero-crossing times, and the P-function.

Margins (non-negative means the corresponding condition holds):

* ``m_simon = sqrt((A1-1)(A2-1)) - |B| exp(-gbt)``   second-moment test
* ``m_ppt   = sqrt(C1 C2) - |D| exp(-gbt)``           positive partial transpose
* ``m_sep   = sqrt(C1 C2) - |D|``                     non-singular P-representation
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from .density import coherent_info_raw
from .errors import InvalidArgument, NumericalError, UnsupportedRegime
from .params import ChannelParams, DerivedCoefficients, GaussianStateParams, coefficients

TIE_TOL = 1e-12


class Region(str, enum.Enum):
    NPT_ENTANGLED = "NPT_ENTANGLED"
    PPT_UNDECIDED = "PPT_UNDECIDED"
    SEPARABLE = "SEPARABLE"


@dataclass(frozen=True)
class SeparabilityVerdict:
    region: Region
    margins: tuple[float, float, float]

    @property
    def m_simon(self) -> float:
        return self.margins[0]

    @property
    def m_ppt(self) -> float:
        return self.margins[1]

    @property
    def m_sep(self) -> float:
        return self.margins[2]


@dataclass(frozen=True)
class CrossingTimes:
    t0: float | None = None
    t1: float | None = None
    t2: float | None = None
    t3: float | None = None
    all_roots: dict[str, list[float]] = field(default_factory=dict)

    def ordered(self, tol: float = 1e-9) -> bool:
        ts = [self.t1, self.t2, self.t3]
        if any(t is None for t in ts):
            return False
        return ts[0] <= ts[1] + tol and ts[1] <= ts[2] + tol


def margins(d: DerivedCoefficients) -> tuple[float, float, float]:
    if d.C1 * d.C2 < -1e-15:
        raise InvalidArgument("C1*C2 < 0: unphysical coefficients")
    damp = math.exp(-d.gbt)
    root_c = math.sqrt(max(d.C1 * d.C2, 0.0))
    root_a = math.sqrt(max((d.A1 - 1) * (d.A2 - 1), 0.0))
    return (root_a - abs(d.B) * damp, root_c - d.absD * damp, root_c - d.absD)


def classify(d: DerivedCoefficients, tie: float = TIE_TOL) -> SeparabilityVerdict:
    """Ties within ``tie`` count as satisfying the (closed) inequality."""
    ms = margins(d)
    if ms[2] >= -tie:
        region = Region.SEPARABLE
    elif ms[1] >= -tie:
        region = Region.PPT_UNDECIDED
    else:
        region = Region.NPT_ENTANGLED
    return SeparabilityVerdict(region, ms)


def _roots(f: Callable[[float], float], ts: np.ndarray, values: np.ndarray, rtol: float) -> list[float]:
    out = []
    for a, b, fa, fb in zip(ts[:-1], ts[1:], values[:-1], values[1:]):
        if fa == 0:
            out.append(float(a))
        elif fa * fb < 0:
            out.append(float(brentq(f, a, b, xtol=1e-14, rtol=max(rtol, 4 * np.finfo(float).eps))))
    if values[-1] == 0:
        out.append(float(ts[-1]))
    return out


def crossing_times(p: GaussianStateParams, ch: ChannelParams, t_max: float, grid: int = 200,
                   rtol: float = 1e-10, with_ci: bool = True, eps: float = 1e-10) -> CrossingTimes:
    """Scan each margin (and the unclamped coherent information) on a grid, refine sign changes.

    t0 tracks max_i [S(rho_i) - S(rho)]; with identical modes both are equal.
    """
    if not t_max > 0 or grid < 2:
        raise InvalidArgument("need t_max > 0 and grid >= 2")
    ts = np.linspace(0.0, t_max, grid)

    def margin_fn(i):
        return lambda t: margins(coefficients(p, ch, t))[i]

    def ci_fn(t):
        return max(coherent_info_raw(coefficients(p, ch, t), eps))

    fns = {"t1": margin_fn(0), "t2": margin_fn(1), "t3": margin_fn(2)}
    if with_ci:
        fns["t0"] = ci_fn
    roots = {}
    for name, fn in fns.items():
        vals = np.array([fn(t) for t in ts])
        roots[name] = _roots(fn, ts, vals, rtol)
    first = {k: (v[0] if v else None) for k, v in roots.items()}
    return CrossingTimes(t0=first.get("t0"), t1=first["t1"], t2=first["t2"], t3=first["t3"], all_roots=roots)


def _require_p(d: DerivedCoefficients):
    if not d.p_defined:
        raise UnsupportedRegime("(A1-1)(A2-1) - |B|^2 = 0: P-function coefficients undefined")


def _binomial_weights(n: int) -> np.ndarray:
    l = np.arange(n + 1)
    return np.exp(gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1) - n * math.log(2))


def p_function(d: DerivedCoefficients, r1: float, r2: float, phi: float = 0.0,
               eps: float = 1e-16, n_cap: int = 100000) -> float:
    """Glauber P-function of the damped state at |alpha_i| = r_i and total phase phi."""
    _require_p(d)
    if d.det_P <= 0:
        raise UnsupportedRegime("P-representation does not exist: (A1-1)(A2-1) < |B|^2")
    if r1 < 0 or r2 < 0:
        raise InvalidArgument("radii must be non-negative")
    z = abs(d.F) * r1 * r2
    gauss = -d.E2 * r1 * r1 - d.E1 * r2 * r2
    if z == 0:
        return d.c * math.exp(gauss)
    log2z = math.log(2 * z)
    acc = 0j
    for n in range(n_cap):
        w = _binomial_weights(n)
        k = 2 * np.arange(n + 1) - n
        inner = np.sum(w * np.exp(-d.gbt * k * k + 1j * k * phi))
        term = math.exp(n * log2z - math.lgamma(n + 1) + gauss) * inner
        acc += term
        if n > 2 * z and abs(term) < eps * max(abs(acc), 1e-300):
            break
    if abs(acc.imag) > 1e-12 * max(abs(acc), 1e-300) + 1e-300:
        raise NumericalError(f"P-function has imaginary residue {acc.imag:.3g}")
    return d.c * acc.real


def p_singular(d: DerivedCoefficients, tie: float = TIE_TOL) -> bool:
    """sqrt(E1 E2) < |F|; cross-checked against the sign of m_sep."""
    _require_p(d)
    singular = math.sqrt(max(d.E1 * d.E2, 0.0)) < abs(d.F)
    m_sep = margins(d)[2]
    if abs(m_sep) > tie and singular != (m_sep < 0):
        raise NumericalError("singularity test disagrees with the separability margin")
    return singular


def p_positivity_scan(d: DerivedCoefficients, r_max: float = 3.0, n_r: int = 20, n_phi: int = 8) -> float:
    """Minimum of P over an (r1, r2, phi) grid; a diagnostic, not a theorem."""
    rs = np.linspace(0.0, r_max, n_r)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    return min(p_function(d, a, b, f) for a in rs for b in rs for f in phis)


def g_function(z: float, gbt: float, eps: float = 1e-16, n_cap: int = 100000) -> float:
    """sum_n (z/2)^n / n! sum_l C(n, l) exp(-gbt (2l - n)^2)."""
    if z < 0:
        raise InvalidArgument("z must be non-negative")
    if z == 0:
        return 1.0
    logz = math.log(z)
    acc = 0.0
    for n in range(n_cap):
        k = 2 * np.arange(n + 1) - n
        inner = float(np.sum(_binomial_weights(n) * np.exp(-gbt * k * k)))
        term = math.exp(n * logz - math.lgamma(n + 1)) * inner
        acc += term
        if n > z and term < eps * acc:
            break
    return acc
