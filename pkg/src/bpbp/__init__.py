"""Exact-arithmetic corrections for almost norm-attaining operators from l_inf^n into l1."""

from .ahsp import auxiliar_w, correct_convex, correct_for_functional, correct_positive, truncation_lift
from .bpbp import DomainIsometry, ahsp_from_bpbp, bpbp_correct, face_project, normalize_to_O
from .certificates import BpbCertificate, Clause, CorrectionCertificate, verify, verify_bpb
from .errors import CorrectionError, HypothesisError
from .linf import (
    DomainVector,
    basis,
    basis_decompose,
    basis_vector,
    enumerate_even_tuples,
    enumerate_odd_tuples,
    extreme_points_E1,
    in_convex_hull_B,
    in_E1,
    in_O,
    recompose,
)
from .moduli import eta, gamma, gamma_prime, modulus_chain, nu, rho
from .operators import OperatorTuple, alternating_sum, apply, in_M, operator_norm, tau, tau_inverse, tau_power
from .sequence import L1, DualFunctional, TargetVector, norm, sign_functional, u_star, unit

__version__ = "0.1.0"
