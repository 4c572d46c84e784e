"""Shannon entropy and subentropy as functions of elementary symmetric polynomials."""

from .contour import ContourSpec, entropy_contour, subentropy_contour
from .direct import entropy_direct, entropy_pair, subentropy_direct
from .errors import (ContourViolation, ConvergenceFailure, DivergentIntegral, DomainViolation,
                     NoiseFloorExceeded, NotComparable, QuadratureFailure, SymEntropyError)
from .haar import HaarConfig, HaarEstimate, estimate_Q, sample_haar_basis
from .halfaxis import dH, dQ, entropy_e, entropy_e_complex, entropy_e_log_form, subentropy_e, \
    subentropy_e_complex
from .identities import (VerificationReport, canonical_majorant, hq_difference_bound,
                         hq_upper_bounds)
from .bernstein import lk_reconstruct_H, lk_reconstruct_Q, pick_sweep
from .quadrature import QuadratureConfig
from .suites import run_suite
from .sympoly import elementary_symmetric, roots_from_symmetric

__version__ = "0.1.0"
