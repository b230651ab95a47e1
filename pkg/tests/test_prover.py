from fractions import Fraction

import numpy as np
import pytest

from cvdamp.laurent import LaurentPoly
from cvdamp.prover import (StructureViolation, analyze_minor, exact_N_matrix, principal_minors,
                           verify_structure)

# d-exponent offsets observed for the leading minors; they depend only on j
OBSERVED_P = [0, 0, 4, 12, 28, 52, 88, 136, 200, 280, 380, 500, 644]


def float_matrix(m: int, d: float) -> np.ndarray:
    return np.array([[float(e(d)) for e in row] for row in exact_N_matrix(m)])


@pytest.mark.parametrize("m", [2, 3, 5])
def test_minors_match_float_determinants(m):
    d = 0.83
    mat = float_matrix(m, d)
    for j, det in enumerate(principal_minors(m)):
        want = np.linalg.det(mat[: j + 1, : j + 1])
        assert float(det(d)) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_exact_evaluation_at_rational_point():
    m = 4
    d = Fraction(3, 7)
    mat = [[e(d) for e in row] for row in exact_N_matrix(m)]
    # Fraction-exact Gaussian elimination for the full determinant
    n = len(mat)
    det = Fraction(1)
    for c in range(n):
        piv = next(r for r in range(c, n) if mat[r][c] != 0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        for r in range(c + 1, n):
            f = mat[r][c] / mat[c][c]
            mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
    assert principal_minors(m)[-1](d) == det


@pytest.mark.parametrize("m", range(1, 10))
def test_structure_holds(m):
    reports = verify_structure(m, strict=True)
    assert len(reports) == m + 1
    for rep in reports:
        assert rep.ok
        assert rep.reconstruct() == rep.determinant
        if not rep.identically_zero:
            assert rep.exact_multiplicity
            assert rep.p == OBSERVED_P[rep.j]


def test_two_by_two_minor_of_first_block_vanishes():
    rep = verify_structure(1)[1]
    assert rep.identically_zero and rep.ok


def test_negative_residual_is_a_violation():
    fake = LaurentPoly([-1, 1]) * LaurentPoly([1, -3, 1])
    rep = analyze_minor(3, 1, fake)
    assert rep.cofactor_multiplicity == 1
    assert not rep.residual_coeffs_nonneg and not rep.ok
    with pytest.raises(StructureViolation):
        raise StructureViolation(rep, "negative residual coefficient")


def test_report_dict_fields():
    row = verify_structure(3)[2].as_dict()
    assert set(row) >= {"p", "multiplicity", "residual_degree", "max_coeff_bits", "wall_time"}
    assert row["multiplicity"] == 3
