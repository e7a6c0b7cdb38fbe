#pragma once

// Independent referee implementations used by tests, the verify sweeps and
// the acceptance runs. These deliberately share no series code with the main
// modules: a referee that shares bugs referees nothing.

#include <functional>
#include <vector>

#include "qsf/types.hpp"

namespace qsf::oracle {

/// Result of a near-pole residue extrapolation.
struct ResidueEstimate {
    double value = 0.0;
    std::vector<double> eps_sequence; // strictly decreasing, >= 1e-7
    int extrapolation_order = 0;
};

/// Classical digamma, psi(nu) = -C + sum_{l>=0} (1/(l+1) - 1/(nu+l)), nu > 0.
double classical_digamma(double nu);

/// Euler-Mascheroni constant from the defining limit at n = 10^7 with the
/// 1/(2n) midpoint correction.
double classical_euler_constant();

/// Classical Bessel J_n(z), power series, n >= 0, z >= 0.
double classical_bessel_j(int n, double z);

/// Classical Bessel function of the second kind Y_n(z), log-series form,
/// n >= 0, z > 0.
double classical_neumann_y(int n, double z);

/// Central finite difference (f(at+step) - f(at-step)) / (2 step).
double finite_difference(const std::function<double(double)>& f, double at,
                         double step);

/// Richardson-extrapolated lim eps * f(pole + eps) over the given strictly
/// decreasing offset sequence.
ResidueEstimate estimate_residue(const std::function<double(double)>& f,
                                 double pole, std::vector<double> eps_sequence);

} // namespace qsf::oracle
