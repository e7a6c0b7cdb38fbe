#pragma once

// Hahn-Exton q-Bessel function, its negative-integer-order reflection, and
// the three-point q-difference-equation residual.

#include <functional>

#include "qsf/types.hpp"

namespace qsf {

/// Evaluation capability x -> f(x) for a fixed (nu, q); realized by J and N.
using SolutionEvaluator = std::function<double(double)>;

/// J_nu(x;q) = sum_k (-1)^k q^{k(k+1)/2} x^{2k+nu} / (Gamma_q(k+1) Gamma_q(k+nu+1)).
/// Negative integer orders are routed through the reflection formula; x = 0
/// is allowed only for nu >= 0.
Evaluation hahn_exton_j(double nu, double x, const QParam& q,
                        const TruncationPolicy& policy = {});

/// J_{-n}(x;q) = (-1)^n q^{n/2} J_n(q^{n/2} x; q), n >= 1.
Evaluation j_negative_int(int n, double x, const QParam& q,
                          const TruncationPolicy& policy = {});

/// Residual of f(q^{1/2}x) + f(q^{-1/2}x) + q^{-nu/2}((1-q)^2 x^2 - q^nu - 1) f(x),
/// normalized by the largest-magnitude summand.
double diff_eq_residual(const SolutionEvaluator& f, double nu, double x,
                        const QParam& q);

} // namespace qsf
