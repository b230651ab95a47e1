"""State and channel parameters, closed-form Gaussian evolution, derived scalars.

Conventions: the characteristic function is chi(mu) = tr[rho D(mu)] with
D(mu) = exp(mu a^+ - mu* a), so the vacuum has chi = exp(-|mu|^2 / 2), i.e.
A' = 1/2. The shifted coefficient A = A' + 1/2 equals n + 1 for a thermal
mode of mean occupation n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidArgument

PHYS_TOL = 1e-12


def _finite_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise InvalidArgument(f"{name} must be finite and non-negative, got {value}")
    return value


@dataclass(frozen=True)
class GaussianStateParams:
    """Initial coefficients of chi = exp[-A10|mu1|^2 - A20|mu2|^2 + B0 mu1 mu2 + c.c.]."""

    A10: float
    A20: float
    B0: complex = 0j

    def __post_init__(self):
        for name in ("A10", "A20"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"{name} must be finite")
        object.__setattr__(self, "B0", complex(self.B0))
        if not (math.isfinite(self.B0.real) and math.isfinite(self.B0.imag)):
            raise InvalidArgument("B0 must be finite")


@dataclass(frozen=True)
class ChannelParams:
    """Amplitude damping rates, phase damping rates and bath occupations."""

    gamma_amp_1: float = 0.0
    gamma_amp_2: float = 0.0
    gamma_phase_1: float = 0.0
    gamma_phase_2: float = 0.0
    nbar_1: float = 0.0
    nbar_2: float = 0.0

    def __post_init__(self):
        for f in ("gamma_amp_1", "gamma_amp_2", "gamma_phase_1", "gamma_phase_2", "nbar_1", "nbar_2"):
            object.__setattr__(self, f, _finite_nonneg(f, getattr(self, f)))

    @classmethod
    def symmetric(cls, gamma_amp: float = 0.0, gamma_phase: float = 0.0, nbar: float = 0.0) -> "ChannelParams":
        return cls(gamma_amp, gamma_amp, gamma_phase, gamma_phase, nbar, nbar)

    @property
    def gamma_phase_mean(self) -> float:
        return 0.5 * (self.gamma_phase_1 + self.gamma_phase_2)


@dataclass(frozen=True)
class EvolvedParams:
    A1p: float
    A2p: float
    B: complex
    gbt: float


@dataclass(frozen=True)
class DerivedCoefficients:
    """Everything the spectral and separability formulas consume.

    ``E1``, ``E2``, ``F`` and ``c`` are ``None`` when
    (A1 - 1)(A2 - 1) - |B|^2 vanishes, where the P-function normalization
    diverges.
    """

    A1: float
    A2: float
    B: complex
    C1: float
    C2: float
    D: complex
    gbt: float
    E1: float | None = None
    E2: float | None = None
    F: complex | None = None
    c: float | None = None
    det_AB: float = field(default=float("nan"))   # A1 A2 - |B|^2
    det_P: float = field(default=float("nan"))    # (A1-1)(A2-1) - |B|^2

    @property
    def symmetric(self) -> bool:
        return math.isclose(self.C1, self.C2, rel_tol=1e-14, abs_tol=1e-300)

    @property
    def p_defined(self) -> bool:
        return self.c is not None

    @property
    def absD(self) -> float:
        return abs(self.D)

    def rebuild_A(self) -> tuple[float, float, complex]:
        """Recover (A1, A2, B) from (C1, C2, D) alone."""
        # 1 - C2 = A2/K, 1 - C1 = A1/K and K^2 ((1-C1)(1-C2) - |D|^2) = K
        K = 1.0 / ((1 - self.C1) * (1 - self.C2) - abs(self.D) ** 2)
        return (1 - self.C1) * K, (1 - self.C2) * K, self.D * K


def preset_squeezed_vacuum(r: float) -> GaussianStateParams:
    r = _finite_nonneg("r", r)
    return GaussianStateParams(0.5 * math.cosh(2 * r), 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r))


def preset_squeezed_thermal(r: float, n0: float) -> GaussianStateParams:
    r = _finite_nonneg("r", r)
    n0 = _finite_nonneg("n0", n0)
    s = n0 + 0.5
    return GaussianStateParams(s * math.cosh(2 * r), s * math.cosh(2 * r), s * math.sinh(2 * r))


def validate_state(p: GaussianStateParams, tol: float = PHYS_TOL) -> list[str]:
    """Return the violated physicality conditions; an empty list means physical.

    The state is physical iff the smaller symplectic eigenvalue is >= 1/2,
    which for this family reads A10 A20 - |B0|^2 >= 1/4 + |A10 - A20|/2.
    """
    problems = []
    for name in ("A10", "A20"):
        v = getattr(p, name)
        if v < 0.5 - tol * max(1.0, abs(v)):
            problems.append(f"{name} = {v!r} < 1/2")
    det = p.A10 * p.A20 - abs(p.B0) ** 2
    bound = 0.25 + 0.5 * abs(p.A10 - p.A20)
    scale = max(1.0, p.A10 * p.A20, abs(p.B0) ** 2)
    if det < bound - tol * scale:
        problems.append(f"A10*A20 - |B0|^2 = {det!r} < 1/4 + |A10-A20|/2 = {bound!r}")
    return problems


def require_physical(p: GaussianStateParams) -> None:
    problems = validate_state(p)
    if problems:
        raise InvalidArgument("unphysical state: " + "; ".join(problems))


def evolve_params(p: GaussianStateParams, ch: ChannelParams, t: float) -> EvolvedParams:
    require_physical(p)
    t = _finite_nonneg("t", t)
    e1 = math.exp(-ch.gamma_amp_1 * t)
    e2 = math.exp(-ch.gamma_amp_2 * t)
    A1p = e1 * p.A10 + (ch.nbar_1 + 0.5) * (1 - e1)
    A2p = e2 * p.A20 + (ch.nbar_2 + 0.5) * (1 - e2)
    B = math.exp(-0.5 * (ch.gamma_amp_1 + ch.gamma_amp_2) * t) * p.B0
    return EvolvedParams(A1p, A2p, B, ch.gamma_phase_mean * t)


def derive_coefficients(e: EvolvedParams, p_tol: float = 1e-14) -> DerivedCoefficients:
    A1, A2 = e.A1p + 0.5, e.A2p + 0.5
    b2 = abs(e.B) ** 2
    K = A1 * A2 - b2
    if not K > 0:
        raise InvalidArgument(f"A1*A2 - |B|^2 = {K!r} must be positive")
    C1 = 1 - A1 / K
    C2 = 1 - A2 / K
    # both vanish for pure states; clamp rounding noise below zero
    C1 = 0.0 if abs(C1) < 1e-15 else C1
    C2 = 0.0 if abs(C2) < 1e-15 else C2
    D = e.B / K
    den = (A1 - 1) * (A2 - 1) - b2
    extras = {}
    if abs(den) > p_tol * max(1.0, A1 * A2):
        extras = dict(E1=(A1 - 1) / den, E2=(A2 - 1) / den, F=e.B / den, c=1 / den)
    return DerivedCoefficients(A1=A1, A2=A2, B=complex(e.B), C1=C1, C2=C2, D=complex(D),
                               gbt=e.gbt, det_AB=K, det_P=den, **extras)


def coefficients(p: GaussianStateParams, ch: ChannelParams, t: float) -> DerivedCoefficients:
    """Shorthand for derive_coefficients(evolve_params(p, ch, t))."""
    return derive_coefficients(evolve_params(p, ch, t))


def with_gbt(d: DerivedCoefficients, gbt: float) -> DerivedCoefficients:
    """Same Gaussian envelope, different dephasing strength."""
    return DerivedCoefficients(**{**d.__dict__, "gbt": float(gbt)})
