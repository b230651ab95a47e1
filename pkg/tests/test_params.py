import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvdamp import (ChannelParams, GaussianStateParams, InvalidArgument, coefficients, evolve_params,
                    preset_squeezed_thermal, preset_squeezed_vacuum, validate_state)
from cvdamp.params import derive_coefficients, require_physical

rates = st.floats(0, 2)


def test_presets_are_physical_and_pure_when_expected():
    p = preset_squeezed_vacuum(0.7)
    assert validate_state(p) == []
    assert p.A10 * p.A20 - abs(p.B0) ** 2 == pytest.approx(0.25)
    assert validate_state(preset_squeezed_thermal(0.3, 0.4)) == []


def test_unphysical_states_are_reported():
    assert validate_state(GaussianStateParams(0.4, 0.6, 0))
    # passes the symmetric-mode bound A10 A20 - |B0|^2 >= 1/4 but not the general one
    bad = GaussianStateParams(1.0, 0.6, math.sqrt(0.3))
    assert bad.A10 * bad.A20 - abs(bad.B0) ** 2 >= 0.25
    assert validate_state(bad)
    with pytest.raises(InvalidArgument):
        require_physical(bad)


def test_channel_rejects_negative_rates():
    with pytest.raises(InvalidArgument):
        ChannelParams(gamma_amp_1=-0.1)
    with pytest.raises(InvalidArgument):
        ChannelParams(nbar_2=float("nan"))


def test_evolution_limits():
    p = preset_squeezed_vacuum(0.5)
    ch = ChannelParams.symmetric(0.5, 0.5, 0.5)
    e0 = evolve_params(p, ch, 0.0)
    assert (e0.A1p, e0.A2p, e0.B, e0.gbt) == (p.A10, p.A20, p.B0, 0.0)
    e = evolve_params(p, ch, 60.0)
    assert e.A1p == pytest.approx(1.0) and abs(e.B) < 1e-12
    with pytest.raises(InvalidArgument):
        evolve_params(p, ch, -1.0)


@given(st.floats(0, 1.5), st.floats(0, 1), rates, rates, st.floats(0, 1), st.floats(0, 3))
@settings(max_examples=80, deadline=None)
def test_derived_identities(r, n0, G, g, nb, t):
    d = coefficients(preset_squeezed_thermal(r, n0), ChannelParams.symmetric(G, g, nb), t)
    assert d.det_AB > 0
    assert d.C1 * d.C2 - d.absD ** 2 == pytest.approx(d.det_P / d.det_AB, abs=1e-12)
    A1, A2, B = d.rebuild_A()
    assert A1 == pytest.approx(d.A1, rel=1e-8) and abs(B - d.B) < 1e-8 * max(1, abs(d.B))
    assert d.gbt == pytest.approx(g * t)


def test_asymmetric_dephasing_uses_mean_rate():
    ch = ChannelParams(0.3, 0.6, 0.2, 0.5, 0.1, 0.3)
    assert evolve_params(preset_squeezed_vacuum(0.2), ch, 2.0).gbt == pytest.approx(0.7)


def test_p_coefficients_undefined_only_on_the_boundary():
    vac = coefficients(preset_squeezed_vacuum(0.0), ChannelParams(), 0.0)
    assert not vac.p_defined
    tmsv = coefficients(preset_squeezed_vacuum(0.5), ChannelParams(), 0.0)
    assert tmsv.p_defined and tmsv.det_P == pytest.approx(-math.sinh(0.5) ** 2)


def test_nonpositive_determinant_rejected():
    from cvdamp.params import EvolvedParams
    with pytest.raises(InvalidArgument):
        derive_coefficients(EvolvedParams(-0.5, 0.5, 0.0, 0.0))
