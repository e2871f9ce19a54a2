"""Regular n-gon rotating equilibria with logarithmic interaction: spectra and stability."""

from .model import (BodySet, CollisionError, PhaseState, RingParams, accelerations,
                    newtonian_re_omega, re_angular_velocity, re_configuration,
                    re_residual)
from .spectral import (ModeFactor, SpectralConstants, biquadratic_roots,
                       c_sum_bruteforce, c_sum_closed, mode_factor, mode_factor_central,
                       mode_factor_free, mode_factors, product_formula_central,
                       product_formula_free, spectral_constants, trig_identity_sums)
from .stability import (MuBounds, StabilityVerdict, Status, classify_spectral,
                        classify_theorem, cross_check, theorem_bounds)
from .linmat import (LinearizationMatrix, assemble, det_at, full_spectrum_check,
                     mode_eigenvector)
from .dynamics import (ConservedQuantities, GrowthEstimate, IntegratorConfig,
                       conserved, growth_rate, integrate, perturb_along_mode)

__version__ = "0.1.0"
