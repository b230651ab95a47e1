import math

import numpy as np
import pytest

from cvdamp import ChannelParams, InvalidArgument, coefficients, entropy, preset_squeezed_vacuum
from cvdamp.density import (adaptive_L_block, build_L_block, coherent_info, density_block_eigenvalues,
                            normalization, reduced_entropy)
from cvdamp.fock import dephase_exact, gaussian_fock, rho_sector_spectrum


@pytest.fixture
def ref():
    return coefficients(preset_squeezed_vacuum(0.4), ChannelParams.symmetric(0.5, 0.3, 0.1), 0.5)


def test_frozen_entropy(ref):
    assert entropy(ref) == pytest.approx(0.542265238485608, abs=1e-10)
    assert entropy(ref, bits=True) == pytest.approx(0.542265238485608 / math.log(2), abs=1e-10)


def test_asymmetric_sectors_match_fock(asym_coeffs):
    _, _, d = asym_coeffs
    rho = gaussian_fock(d.A1 - 0.5, d.A2 - 0.5, d.B, 22)
    rho = dephase_exact(rho, ChannelParams.symmetric(gamma_phase=d.gbt), 1.0)
    for m in (-3, -1, 0, 2):
        ev = density_block_eigenvalues(adaptive_L_block(d, m, 1e-14))
        ref_ev = rho_sector_spectrum(rho, m)
        top = np.sort(ev)[-5:]
        assert np.max(np.abs(top - np.sort(ref_ev)[-5:])) < 1e-8
    assert entropy(d) == pytest.approx(1.3393898355465685, abs=1e-9)


def test_general_and_hermitian_paths(asym_coeffs):
    _, _, d = asym_coeffs
    b = build_L_block(d, 2, 16)
    assert np.allclose(density_block_eigenvalues(b), density_block_eigenvalues(b, "general"), atol=1e-12)


def test_normalization(ref):
    assert abs(normalization(ref) - 1) < 1e-9


def test_pure_state_has_zero_entropy():
    d = coefficients(preset_squeezed_vacuum(0.6), ChannelParams(), 0.0)
    assert abs(entropy(d)) < 1e-9
    ci = coherent_info(d)
    assert ci[0] == pytest.approx(reduced_entropy(d.A1), abs=1e-9)


def test_reduced_entropy_edges():
    assert reduced_entropy(1.0) == 0.0
    assert reduced_entropy(2.0, bits=True) == pytest.approx(2.0)
    with pytest.raises(InvalidArgument):
        reduced_entropy(0.9)
    with pytest.raises(InvalidArgument):
        entropy(coefficients(preset_squeezed_vacuum(0.1), ChannelParams(), 0.0), eps=0)
