#pragma once

// q-gamma, q-psi, the q-Euler constant, and the closed-form residues and
// limits at the nonpositive-integer poles.

#include "qsf/types.hpp"

namespace qsf {

/// log Gamma_q(nu), standard convention (Gamma_q(1) = 1, Gamma_q(n+1) = [n]_q!).
/// Throws PoleError near nonpositive integers and DomainError where
/// Gamma_q(nu) < 0 (negative noninteger nu with an odd number of sign flips).
Evaluation log_q_gamma(double nu, const QParam& q, const TruncationPolicy& policy = {});

/// Gamma_q(nu); valid for any real nu away from the poles, including negative
/// noninteger orders where the value may be negative.
Evaluation q_gamma(double nu, const QParam& q, const TruncationPolicy& policy = {});

/// psi_q(nu) = d/dnu log Gamma_q(nu).
Evaluation q_psi(double nu, const QParam& q, const TruncationPolicy& policy = {});

/// C_q = -psi_q(1); tends to the Euler-Mascheroni constant as q -> 1^-.
Evaluation q_euler_constant(const QParam& q, const TruncationPolicy& policy = {});

/// Residue of Gamma_q at nu = -n:
///   (-1)^n q^{n(n+1)/2} (q-1) / (log q * Gamma_q(n+1))
double q_gamma_residue(int n, const QParam& q);

/// Residue of psi_q at nu = -n; identically -1.
double q_psi_residue(int n, const QParam& q);

/// lim_{nu->-n} psi_q(nu)/Gamma_q(nu)
///   = (-1)^n q^{-n(n+1)/2} (log q/(1-q)) Gamma_q(n+1)
/// Equals q_psi_residue / q_gamma_residue in closed form.
double psi_over_gamma_limit(int n, const QParam& q);

} // namespace qsf
