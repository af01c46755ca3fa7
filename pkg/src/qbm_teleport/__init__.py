"""Continuous-variable teleportation through a non-Markovian quantum Brownian
motion channel, in the Gaussian covariance-matrix picture."""

from .channel import (ChannelPair, CoefficientGrid, QbmParams, apply_channel_mode2,
                      build_coefficient_grid, channel_pair, delta_coeff, gamma_coeff,
                      pi_coeff, rotation, spectral_density)
from .errors import (ConfigError, GridRangeError, NumericError, QbmError,
                     QuadratureError, ValidationError)
from .gaussian import (TwoModeBlocks, gaussian_fidelity_coherent, is_physical,
                       log_negativity, pt_symplectic_eig_min, tmsv_covariance)
from .non_markovianity import (IntermediateMap, cp_matrix, intermediate_map,
                               np_closed_form, np_from_eigenvalues, np_spectral)
from .numerics import (UniformGrid, cumulative_integral, eig_hermitian_2x2,
                       integrate_adaptive)
from .sweep import SweepConfig, parse_config, run_sweep
from .teleportation import (ProtocolParams, fidelity_closed_form, fidelity_det,
                            optimal_phase, optimize_phase_numeric, output_covariance,
                            resource_entanglement)

__version__ = "0.1.0"
