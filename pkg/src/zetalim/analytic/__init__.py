"""Special functions, L-functions of quadratic fields, archimedean terms."""

from .lfunctions import (
    chebyshev_psi,
    dirichlet_l,
    l_at_one,
    prime_ideals,
    z_nf,
    z_nf_prime_sum,
    z_nf_regularized,
    z_nf_with_error,
    zeta_k,
)
from .special import CATALAN, EULER_GAMMA, EMParams, digamma, hurwitz_regular, hurwitz_with_error, hurwitz_zeta
from .weil import (
    TestFunctionFNeps,
    archimedean_integrals,
    cosh_integral,
    i_closed,
    j_closed,
    sech_integral,
    sech_integral_closed,
    theorem2_envelope,
    theorem2_residual,
    truncated_prime_sum,
    weil_prime_term,
    weil_rhs_terms,
)

__all__ = [
    "chebyshev_psi", "dirichlet_l", "l_at_one", "prime_ideals", "z_nf", "z_nf_prime_sum",
    "z_nf_regularized", "z_nf_with_error", "zeta_k", "CATALAN", "EULER_GAMMA", "EMParams",
    "digamma", "hurwitz_regular", "hurwitz_with_error", "hurwitz_zeta", "TestFunctionFNeps",
    "archimedean_integrals", "cosh_integral", "i_closed", "j_closed", "sech_integral", "sech_integral_closed",
    "theorem2_envelope", "theorem2_residual", "truncated_prime_sum", "weil_prime_term",
    "weil_rhs_terms",
]
