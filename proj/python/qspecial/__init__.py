"""q-special functions: q-gamma, q-psi, Hahn-Exton q-Bessel, q-Neumann."""

from ._core import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    Evaluation,
    NearIntegerError,
    PoleError,
    PreconditionError,
    bessel_j,
    log_q_gamma,
    neumann_n,
    psi_over_gamma_limit,
    q_euler_constant,
    q_gamma,
    q_gamma_residue,
    q_psi,
    q_psi_residue,
    verify_suite,
    verify_suite_names,
)

__all__ = [
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "Evaluation",
    "NearIntegerError",
    "PoleError",
    "PreconditionError",
    "bessel_j",
    "log_q_gamma",
    "neumann_n",
    "psi_over_gamma_limit",
    "q_euler_constant",
    "q_gamma",
    "q_gamma_residue",
    "q_psi",
    "q_psi_residue",
    "verify_suite",
    "verify_suite_names",
]

__version__ = "0.1.0"
