"""Two-mode Gaussian states under amplitude and phase damping.

Exact block spectra of the damped state and its partial transpose,
separability margins, a truncated-Fock reference integrator and an exact
determinant checker.
"""

__version__ = "0.1.0"

from .errors import (CutoffTooSmall, CvDampError, InvalidArgument, NumericalError,  # noqa: E402
                     NumericalWarning, TruncationError, UnsupportedRegime)
from .params import (ChannelParams, DerivedCoefficients, EvolvedParams, GaussianStateParams,  # noqa: E402
                     coefficients, derive_coefficients, evolve_params, preset_squeezed_thermal,
                     preset_squeezed_vacuum, validate_state)
from .ppt import build_M_block, block_eigenvalues, log_negativity, negativity  # noqa: E402
from .density import build_L_block, coherent_info, entropy  # noqa: E402
from .separability import Region, classify, crossing_times, margins  # noqa: E402

__all__ = [
    "__version__", "CutoffTooSmall", "CvDampError", "InvalidArgument", "NumericalError",
    "NumericalWarning", "TruncationError", "UnsupportedRegime", "ChannelParams",
    "DerivedCoefficients", "EvolvedParams", "GaussianStateParams", "coefficients",
    "derive_coefficients", "evolve_params", "preset_squeezed_thermal", "preset_squeezed_vacuum",
    "validate_state", "build_M_block", "block_eigenvalues", "log_negativity", "negativity",
    "build_L_block", "coherent_info", "entropy", "Region", "classify", "crossing_times", "margins",
]
