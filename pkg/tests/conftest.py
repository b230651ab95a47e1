import pytest

from cvdamp import ChannelParams, coefficients, preset_squeezed_vacuum

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def figure_channel():
    return ChannelParams.symmetric(gamma_amp=0.5, gamma_phase=0.5, nbar=0.5)


@pytest.fixture
def figure_state():
    return preset_squeezed_vacuum(0.5)


@pytest.fixture
def asym_coeffs():
    from cvdamp import GaussianStateParams
    p = GaussianStateParams(1.0, 0.8, 0.5 + 0.3j)
    ch = ChannelParams(0.3, 0.6, 0.2, 0.5, 0.1, 0.3)
    return p, ch, coefficients(p, ch, 0.6)
