"""Numerical toolkit for composition operators C_a f = f o phi_a on the Hardy space H^2.

Modules: moebius (disk automorphisms), hardy (truncated H^2 and Toeplitz
matrices), compose (C_a and related operators), polar (polar factor and
symmetries), spectral (quadrature for the spectral measure of |C_a|^2),
subspaces (principal angles and geodesics between eigenspaces), cli.
"""
from .compose import berkson_gap, c_matrix, gram_cstarc, reliable_width
from .errors import (
    HardyReflError,
    IdentityCheckFailure,
    InputError,
    NumericalFailure,
)
from .hardy import HardyVector, szego
from .moebius import MoebiusMap, a_seq, bullet, equal_projective, fixed_point, phi
from .polar import range_symmetry, null_symmetry, rho_matrix
from .spectral import QuadratureBudget, SpectralProfile, spectral_form
from .subspaces import direct_rotation, eigenbasis, geodesic_condition, principal_angles

__version__ = "0.1.0"
