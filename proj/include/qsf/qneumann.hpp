#pragma once

// q-Neumann function: the second, x = 0-singular solution of the q-Bessel
// difference equation. Noninteger order uses the cos/sin combination of
// J_{+-nu}; integer order uses two independent logarithmic closed forms
// (the C_q form and the psi_q form) that are cross-checked against each
// other; negative integer order uses the reflection relation.

#include "qsf/types.hpp"

namespace qsf {

/// Classification of an order into integer vs generic, with a warning zone.
struct OrderClass {
    double raw = 0.0;
    bool is_integer = false;
    long n = 0;            // meaningful when is_integer
    double eps_int = 1e-8; // |nu - n| <= eps_int => integer kind
    double near_int = 1e-4; // warning zone boundary

    static OrderClass classify(double nu, double eps_int = 1e-8,
                               double near_int = 1e-4);
    bool in_warning_zone() const;
};

/// N_nu for noninteger nu:
///   [cos(pi nu) J_nu(x;q) - q^{-nu/2} J_{-nu}(q^{-nu/2} x;q)] / sin(pi nu)
/// Throws NearIntegerError when nu is within eps_int of an integer.
Evaluation q_neumann_generic(double nu, double x, const QParam& q,
                             const TruncationPolicy& policy = {});

/// N_n for integer n >= 1, C_q closed form.
Evaluation q_neumann_int(int n, double x, const QParam& q,
                         const TruncationPolicy& policy = {});

/// N_0, C_q closed form (its inner sum differs from the n >= 1 case).
Evaluation q_neumann_zero(double x, const QParam& q,
                          const TruncationPolicy& policy = {});

/// N_n for integer n >= 0 via the psi_q form; independent referee path for
/// q_neumann_int / q_neumann_zero.
Evaluation q_neumann_int_psi_form(int n, double x, const QParam& q,
                                  const TruncationPolicy& policy = {});

/// N_{-n}(x;q) = (-1)^n q^{n/2} N_n(q^{n/2} x; q), n >= 1.
Evaluation q_neumann_negative(int n, double x, const QParam& q,
                              const TruncationPolicy& policy = {});

/// Dispatcher over OrderClass: integer orders route to the closed forms,
/// everything else to the generic path; sets CancellationRisk in the
/// warning zone.
Evaluation q_neumann(double nu, double x, const QParam& q,
                     const TruncationPolicy& policy = {});

} // namespace qsf
