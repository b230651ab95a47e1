import math

import pytest

from cvdamp import ChannelParams, Region, UnsupportedRegime, classify, coefficients, crossing_times, margins
from cvdamp import preset_squeezed_vacuum
from cvdamp.separability import g_function, p_function, p_singular


def test_figure_crossings(figure_state, figure_channel):
    ct = crossing_times(figure_state, figure_channel, 3.0, grid=40, with_ci=False)
    assert ct.t1 == pytest.approx(0.57987, abs=2e-5)
    assert ct.t2 == pytest.approx(0.71568, abs=2e-5)
    assert ct.t3 == pytest.approx(0.97976, abs=2e-5)
    assert ct.ordered()
    for t, i in ((ct.t1, 0), (ct.t2, 1), (ct.t3, 2)):
        assert abs(margins(coefficients(figure_state, figure_channel, t))[i]) < 1e-10


def test_no_dephasing_collapses_the_criteria(figure_state):
    ct = crossing_times(figure_state, ChannelParams.symmetric(0.5, 0.0, 0.5), 3.0, grid=40, with_ci=False)
    assert ct.t2 - ct.t1 == pytest.approx(0, abs=1e-9) and ct.t3 - ct.t2 == pytest.approx(0, abs=1e-9)


def test_regions_along_the_figure_path(figure_state, figure_channel):
    def region(t):
        return classify(coefficients(figure_state, figure_channel, t)).region
    assert region(0.0) is Region.NPT_ENTANGLED
    assert region(0.85) is Region.PPT_UNDECIDED
    assert region(1.5) is Region.SEPARABLE


def test_ties_go_to_the_weaker_region(figure_state, figure_channel):
    ct = crossing_times(figure_state, figure_channel, 3.0, grid=40, with_ci=False)
    assert classify(coefficients(figure_state, figure_channel, ct.t3)).region is Region.SEPARABLE


def test_p_function_regimes(figure_state, figure_channel):
    with pytest.raises(UnsupportedRegime):
        p_function(coefficients(preset_squeezed_vacuum(0.0), ChannelParams(), 0.0), 0.1, 0.1)
    tmsv = coefficients(figure_state, ChannelParams(), 0.0)
    assert p_singular(tmsv)
    with pytest.raises(UnsupportedRegime):
        p_function(tmsv, 0.1, 0.1)
    late = coefficients(figure_state, figure_channel, 2.0)
    assert not p_singular(late)
    assert p_function(late, 0.3, 0.4, 1.0) > 0


def test_p_function_without_correlations_is_product_gaussian():
    d = coefficients(preset_squeezed_vacuum(0.0), ChannelParams.symmetric(1.0, 0.0, 0.5), 3.0)
    n = d.A1 - 1
    want = math.exp(-(0.2 ** 2 + 0.7 ** 2) / n) / n ** 2
    assert p_function(d, 0.2, 0.7) == pytest.approx(want, rel=1e-12)


def test_g_function_bounds():
    assert g_function(0, 0.5) == 1
    assert g_function(3.0, 0.0) == pytest.approx(math.exp(3.0), rel=1e-13)
    assert math.log(g_function(50, 0.3)) / 50 < 1
