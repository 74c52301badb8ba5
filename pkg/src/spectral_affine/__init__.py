"""Spectrality of planar self-affine measures with four-element digit sets.

Decides whether ``mu_{M,D}`` admits an exponential orthonormal basis for an
expansive integer ``M`` and ``D = {0, a, b, -a-b}`` with ``a``, ``b``
non-collinear, and backs every verdict with exact certificates.
"""

from .clique import orthogonal_clique_search
from .decision import (
    Certificate,
    Decision,
    Verdict,
    Violation,
    construct_admissible,
    decide,
    find_hadamard_set,
    is_admissible,
    spectrum_pullback,
)
from .digits import CanonicalForm, DigitSet4, ThetaParams, canonicalize, canonicalize_any, normalize
from .errors import *  # noqa: F401,F403
from .lattice import bezout, is_expansive
from .spectra import (
    FiniteMeasure,
    FrequencySet,
    LambdaSplit,
    ResidueSystem,
    base_hadamard,
    finite_measure,
    gamma_build,
    lambda_split,
    moran_finite,
    muhat_truncated,
    parseval_check,
    q_function,
    residue_systems,
    tower_spectrum,
    verify_complete_residues,
)
from .zeros import Theta, ThetaClass, mask_eval, mask_zero, min_zero_norm, muhat_zero, theta_classify, zero_enumerate

__version__ = "0.1.0"
