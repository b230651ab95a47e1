"""The evolved characteristic function.

Two independent evaluations are provided. :func:`evolve_chi_general` applies
the damping transform to an arbitrary initial chi by Gauss-Hermite quadrature
over the two diffusing phases. :func:`gaussian_chi` handles the x-p
symmetric Gaussian family exactly: the phase average of
exp(w e^{ix} + w* e^{-ix}) is a Fourier-Bessel series in which mode k picks
up exp(-gbt k^2).
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy.special import ive

from .errors import InvalidArgument, NumericalWarning
from .params import ChannelParams, EvolvedParams, GaussianStateParams

ChiFunction = Callable[[complex, complex], complex]

SERIES_CAP = 10_000


def gaussian_chi(e: EvolvedParams, mu1: complex, mu2: complex) -> complex:
    envelope = -e.A1p * abs(mu1) ** 2 - e.A2p * abs(mu2) ** 2
    w = e.B * mu1 * mu2
    x = 2 * abs(w)
    if x == 0:
        return complex(math.exp(envelope))
    phi = np.angle(w)
    total = float(ive(0, x))
    for k in range(1, SERIES_CAP):
        term = 2 * math.exp(-e.gbt * k * k) * math.cos(k * phi) * float(ive(k, x))
        total += term
        if k > x and abs(term) < 1e-15 * abs(total):
            break
    else:
        warnings.warn(f"gaussian_chi: series hit the {SERIES_CAP}-term cap at |B mu1 mu2| = {abs(w):.3g}",
                      NumericalWarning)
    # ive carries a factor exp(-x); fold it back in together with the envelope
    return complex(total * math.exp(envelope + x))


def initial_gaussian_chi(p: GaussianStateParams) -> ChiFunction:
    """chi at t = 0 for the Gaussian family, usable as input to the general transform."""
    def chi0(mu1, mu2):
        return np.exp(-p.A10 * np.abs(mu1) ** 2 - p.A20 * np.abs(mu2) ** 2
                      + p.B0 * mu1 * mu2 + np.conj(p.B0 * mu1 * mu2))
    return chi0


def _call(chi0: ChiFunction, m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(chi0(m1, m2), dtype=complex)
        if out.shape == np.broadcast(m1, m2).shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda a, b: complex(chi0(a, b)), otypes=[complex])(m1, m2)


def evolve_chi_general(chi0: ChiFunction, ch: ChannelParams, t: float, mu1: complex, mu2: complex,
                       quad_order: int = 16, order_cap: int = 512, rtol: float = 1e-10) -> complex:
    """chi(mu, t) for any initial chi0 under both dampings.

    chi(mu, t) = exp[-sum_i (nbar_i + 1/2)(1 - e^{-G_i t})|mu_i|^2]
                 * E[chi0(mu_1 e^{-G_1 t/2 + i x_1}, mu_2 e^{-G_2 t/2 + i x_2})]
    with independent x_i ~ N(0, gamma_i t).
    """
    if t < 0:
        raise InvalidArgument("t must be non-negative")
    if quad_order < 1:
        raise InvalidArgument("quad_order must be >= 1")
    e1, e2 = math.exp(-ch.gamma_amp_1 * t), math.exp(-ch.gamma_amp_2 * t)
    thermal = math.exp(-(ch.nbar_1 + 0.5) * (1 - e1) * abs(mu1) ** 2
                       - (ch.nbar_2 + 0.5) * (1 - e2) * abs(mu2) ** 2)
    s1, s2 = math.sqrt(e1) * mu1, math.sqrt(e2) * mu2
    var = (ch.gamma_phase_1 * t, ch.gamma_phase_2 * t)
    if var[0] == 0 and var[1] == 0:
        return complex(thermal * complex(_call(chi0, np.array(s1), np.array(s2))))

    def rule(order: int, v: float):
        if v == 0:
            return np.zeros(1), np.ones(1)
        u, w = np.polynomial.hermite.hermgauss(order)
        return math.sqrt(2 * v) * u, w / math.sqrt(math.pi)

    def estimate(order: int) -> complex:
        x1, w1 = rule(order, var[0])
        x2, w2 = rule(order, var[1])
        vals = _call(chi0, s1 * np.exp(1j * x1)[:, None], s2 * np.exp(1j * x2)[None, :])
        return complex(w1 @ vals @ w2)

    order = quad_order
    prev = estimate(order)
    while 2 * order <= order_cap:
        order *= 2
        cur = estimate(order)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return thermal * cur
        older, prev = prev, cur
    last = (older, prev) if order > quad_order else (prev,)
    warnings.warn(f"evolve_chi_general: not converged at order {order}; last iterates {last}",
                  NumericalWarning)
    return thermal * prev
