import numpy as np
import pytest

from cvdamp import ChannelParams, CutoffTooSmall, preset_squeezed_vacuum
from cvdamp.fock import (dephase_exact, gaussian_fock, integrate_master, oracle_measures,
                         partial_transpose, thermal_fock, tmsv_fock)


def test_tmsv_matches_gaussian_construction():
    p = preset_squeezed_vacuum(0.3)
    a = tmsv_fock(0.3, 12).matrix()
    b = gaussian_fock(p.A10, p.A20, p.B0, 12).matrix()
    assert np.max(np.abs(a - b)) < 1e-9


def test_integration_preserves_trace_and_hermiticity():
    rho = integrate_master(tmsv_fock(0.3, 8), ChannelParams(0.4, 0.2, 0.3, 0.1, 0.2, 0.0), 0.4)
    assert rho.trace == pytest.approx(1.0, abs=1e-10)
    assert rho.hermiticity_error() < 1e-12


def test_pure_dephasing_matches_exact_solution():
    rho0 = tmsv_fock(0.3, 8)
    ch = ChannelParams(gamma_phase_1=0.3, gamma_phase_2=0.5)
    a = integrate_master(rho0, ch, 0.6).elements
    b = dephase_exact(rho0, ch, 0.6).elements
    assert np.max(np.abs(a - b)) < 1e-9


def test_thermalizes_to_bath():
    vac = gaussian_fock(0.5, 0.5, 0, 10)
    rho = integrate_master(vac, ChannelParams.symmetric(gamma_amp=1.0, nbar=0.1), 4.0, dt_max=0.05)
    target = np.kron(thermal_fock(0.1 * (1 - np.exp(-4.0)), 10), thermal_fock(0.1 * (1 - np.exp(-4.0)), 10))
    assert np.max(np.abs(rho.matrix() - target)) < 1e-6


@pytest.mark.filterwarnings("ignore::cvdamp.NumericalWarning")
def test_edge_population_guard():
    with pytest.raises(CutoffTooSmall):
        integrate_master(tmsv_fock(1.0, 6), ChannelParams.symmetric(0.1, 0.0, 2.0), 0.3)


def test_partial_transpose_is_an_involution():
    rho = tmsv_fock(0.4, 10)
    twice = partial_transpose(type(rho)(10, partial_transpose(rho)))
    assert np.array_equal(twice, rho.elements)
    assert oracle_measures(rho).entropy == pytest.approx(0.0, abs=1e-10)
