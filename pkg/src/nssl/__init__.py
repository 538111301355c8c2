"""Singular non-selfadjoint Sturm-Liouville eigenvalue computations.

Interval truncation with an artificial boundary condition makes singular
problems computable but can manufacture convergent sequences of spurious
eigenvalues.  This package locates eigenvalues of the truncated operators
by winding-number counting on the shooting miss-distance, certifies limits
by re-running with the complementary boundary condition at the regular
endpoint (coincident limits are suspect), and wraps the machinery for
complex-scaling resonance searches.
"""

from ._kernels import NUMBA_ENABLED
from .exactness import ExactnessReport, run_boundary_swap
from .locate import ComplexBox, EigenvalueEstimate, LocateOptions, find_eigenvalues, winding_number
from .mfunc import MissDistance, MValue, compute_miss_distance, compute_mn, continuation_check
from .ode import SLState, Trajectory, propagate, propagate_pair
from .problem import (Angle, Dirichlet, Problem, ReferenceSolution,
                      default_schedule, left_init, right_bc_coefficients, swap_alpha)
from .resonance import ResonanceCandidate, find_resonances, scale_problem, theta_invariance_filter
from .sims import admissible_pair, case_diagnostic, sample_hull

__version__ = "0.1.0"
