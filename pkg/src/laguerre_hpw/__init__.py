"""Fourier-Laguerre analysis on the Laguerre hypergroup and numerical checks
of its L^p Heisenberg-Pauli-Weyl inequalities."""

__version__ = "0.1.0"

from .catalog import CatalogEntry, default_catalog, get_entry
from .config import SweepConfig, load_config, parse_config
from .core import (DualPoint, HypergroupContext, SpacePoint, as_context, dual_ball_volume, dual_norm,
                   dual_tail_integral, homogeneous_norm, laguerre_zeta, plancherel_weight,
                   series_constant, space_ball_moment, space_density, unit_ball_volume)
from .errors import (ConfigError, CostGuardError, DivergentIntegralError, GridResolutionError,
                     HypothesisError, SingularTermError, TailWarning, TruncationWarning)
from .estimators import FourierLaguerreTransformer, HpwRatioTransformer, SubLaplacianMultiplier
from .grids import (DualGrid, SampledFunction, SpaceGrid, SpectralFunction, build_dual_grid,
                    build_space_grid, lp_norm_dual, lp_norm_space)
from .operators import convolve, dilate, sublaplacian_fd, sublaplacian_spectral, translate
from .special import eigen_residual, laguerre_function, laguerre_poly, phi
from .sweep import SweepReport, run_sweep
from .transform import (dilation_identity_defect, forward, hausdorff_young_ratio, inverse,
                        l1_preservation_defect, plancherel_defect)
from .uncertainty import (THEOREMS, HpwRecord, case1_constant, case2_constant, gs_norm, hpw_ratio,
                          is_admissible, scale_invariance_defect)
