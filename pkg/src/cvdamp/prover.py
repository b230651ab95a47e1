"""Exact determinant checks for the partial-transpose blocks at the PPT boundary.

On the boundary the dephasing factor and the ratio D/C collapse into a single
variable d = exp(gbt) >= 1, and every entry of the normalized block N^(m)
becomes an integer Laurent polynomial in d. The leading principal minors
are expected to factor as d**(-p) * (d - 1)**(j(j+1)/2) * P(d) with P having
non-negative integer coefficients; this module computes them exactly and
checks that structure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

from .laurent import LaurentPoly


@dataclass(frozen=True)
class MinorReport:
    m: int
    j: int
    p: int
    cofactor_multiplicity: int
    residual_coeffs_nonneg: bool
    residual: LaurentPoly
    determinant: LaurentPoly
    exact_multiplicity: bool
    identically_zero: bool
    wall_time: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.residual_coeffs_nonneg and self.cofactor_multiplicity >= self.expected_multiplicity

    @property
    def expected_multiplicity(self) -> int:
        return self.j * (self.j + 1) // 2

    def reconstruct(self) -> LaurentPoly:
        if self.identically_zero:
            return LaurentPoly()
        base = LaurentPoly([-1, 1]) ** self.cofactor_multiplicity
        return (base * self.residual).shift(-self.p)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "j": self.j,
            "p": self.p,
            "multiplicity": self.cofactor_multiplicity,
            "expected_multiplicity": self.expected_multiplicity,
            "exact_multiplicity": self.exact_multiplicity,
            "identically_zero": self.identically_zero,
            "residual_coeffs_nonneg": self.residual_coeffs_nonneg,
            "residual_degree": (self.residual.max_exp if not self.residual.is_zero() else None),
            "max_coeff_bits": self.residual.max_coeff_bits(),
            "wall_time": self.wall_time,
            "ok": self.ok,
        }


class StructureViolation(Exception):
    """A minor failed the factorization or sign test."""

    def __init__(self, report: MinorReport, reason: str):
        super().__init__(f"m={report.m}, j={report.j}: {reason}")
        self.report = report
        self.reason = reason


def exact_N_matrix(m: int) -> list[list[LaurentPoly]]:
    """N^(m) at the boundary D/C = d, exp(-gbt) = 1/d.

    N_ln = sum_k C(m-n, l-k) C(n, k) d**(l + n - 2k - (n - l)**2).
    """
    if m < 0:
        raise ValueError("block index must be non-negative")
    rows = []
    for l in range(m + 1):
        row = []
        for n in range(m + 1):
            terms: dict[int, int] = {}
            for k in range(max(0, l - m + n), min(n, l) + 1):
                e = l + n - 2 * k - (n - l) ** 2
                terms[e] = terms.get(e, 0) + comb(m - n, l - k) * comb(n, k)
            row.append(LaurentPoly.from_terms(terms))
        rows.append(row)
    return rows


def _determinant(mat: list[list[LaurentPoly]]) -> LaurentPoly:
    """Bareiss with row pivoting on the zero pattern; exact over Z[d, 1/d]."""
    n = len(mat)
    if n == 0:
        return LaurentPoly.one()
    a = [row[:] for row in mat]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def principal_minors(m: int, matrix: list[list[LaurentPoly]] | None = None) -> list[LaurentPoly]:
    """Exact determinants of the leading j+1 by j+1 submatrices, j = 0..m.

    One Bareiss sweep without pivoting yields every leading minor as a
    pivot. If some intermediate minor vanishes the sweep cannot continue and
    the remaining minors are computed one by one with pivoting.
    """
    n_mat = matrix if matrix is not None else exact_N_matrix(m)
    size = len(n_mat)
    # Clear negative exponents row by row; minor j picks up d**(-sum shifts).
    shifts = [max(0, -min(e.min_exp for e in row if not e.is_zero())) for row in n_mat]
    a = [[e.shift(s) for e in row] for row, s in zip(n_mat, shifts)]

    minors: list[LaurentPoly] = [a[0][0]]
    prev = LaurentPoly.one()
    broken_at = None
    for k in range(size - 1):
        if a[k][k].is_zero():
            broken_at = k + 1
            break
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
        minors.append(a[k + 1][k + 1])
    if broken_at is not None:
        shifted = [[e.shift(s) for e in row] for row, s in zip(n_mat, shifts)]
        for j in range(broken_at, size):
            minors.append(_determinant([row[: j + 1] for row in shifted[: j + 1]]))

    out = []
    acc = 0
    for j, det in enumerate(minors):
        acc += shifts[j]
        out.append(det.shift(-acc))
    return out


def analyze_minor(m: int, j: int, det: LaurentPoly) -> MinorReport:
    """Factor d**(-p) and (d - 1)**(j(j+1)/2) out of ``det``, check the rest."""
    expected = j * (j + 1) // 2
    if det.is_zero():
        return MinorReport(
            m=m, j=j, p=0, cofactor_multiplicity=expected, residual_coeffs_nonneg=True,
            residual=LaurentPoly(), determinant=det, exact_multiplicity=False,
            identically_zero=True,
        )
    p = -det.min_exp
    poly = det.shift(p)
    mult = 0
    for _ in range(expected):
        q, rem = poly.div_linear(1)
        if rem != 0:
            break
        poly = q
        mult += 1
    _, rem_next = poly.div_linear(1) if not poly.is_zero() else (None, 0)
    return MinorReport(
        m=m, j=j, p=p, cofactor_multiplicity=mult,
        residual_coeffs_nonneg=all(c >= 0 for c in poly.coeffs),
        residual=poly, determinant=det,
        exact_multiplicity=(mult == expected and rem_next != 0),
        identically_zero=False,
    )


def verify_structure(m: int, strict: bool = False) -> list[MinorReport]:
    """Check every leading minor of N^(m); optionally raise on the first failure.

    Wall time is measured for the whole block and apportioned to the minors
    in proportion to their index, since one elimination produces all of them.
    """
    start = time.perf_counter()
    minors = principal_minors(m)
    elapsed = time.perf_counter() - start
    reports = []
    for j, det in enumerate(minors):
        t0 = time.perf_counter()
        rep = analyze_minor(m, j, det)
        share = elapsed * (j + 1) / sum(range(1, m + 2))
        rep = MinorReport(**{**rep.__dict__, "wall_time": share + time.perf_counter() - t0})
        if strict and not rep.ok:
            reason = ("negative residual coefficient" if not rep.residual_coeffs_nonneg
                      else f"(d-1) multiplicity {rep.cofactor_multiplicity} < {rep.expected_multiplicity}")
            raise StructureViolation(rep, reason)
        reports.append(rep)
    return reports
