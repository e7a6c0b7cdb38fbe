#include "qsf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "detail/qseries.hpp"
#include "qsf/oracle.hpp"
#include "qsf/qbessel.hpp"
#include "qsf/qcore.hpp"
#include "qsf/qneumann.hpp"

namespace qsf::verify {

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

IdentityResidual make_record(IdentityId id, double q, double nu, double x,
                             std::string extras, double residual, double scale,
                             double tol) {
    IdentityResidual r;
    r.identity = id;
    r.q = q;
    r.nu = nu;
    r.x = x;
    r.extras = std::move(extras);
    r.residual = residual;
    r.scale = scale;
    r.tol = tol;
    r.pass = std::isfinite(residual) && residual <= tol * scale;
    return r;
}

IdentityResidual make_failure(IdentityId id, double q, double nu, double x,
                              std::string extras, double tol,
                              const std::exception& e) {
    IdentityResidual r;
    r.identity = id;
    r.q = q;
    r.nu = nu;
    r.x = x;
    r.extras = std::move(extras);
    r.residual = kNaN;
    r.scale = 1.0;
    r.tol = tol;
    r.pass = false;
    r.diagnostic = e.what();
    return r;
}

// Neville polynomial extrapolation of (xs, ys) to x = 0; xs strictly
// decreasing. Same scheme the oracle uses for residues, here applied to a
// plain function limit.
double neville_to_zero(const std::vector<double>& xs, std::vector<double> ys) {
    for (std::size_t m = 1; m < ys.size(); ++m)
        for (std::size_t i = 0; i + m < ys.size(); ++i)
            ys[i] = (xs[i] * ys[i + 1] - xs[i + m] * ys[i]) / (xs[i] - xs[i + m]);
    return ys[0];
}

double max3(double a, double b, double c) {
    return std::max(a, std::max(b, c));
}

// ---------------------------------------------------------------------------
// difference equation sweeps

void sweep_diffeq(IdentityId id, const SweepConfig& cfg,
                  std::vector<IdentityResidual>& out) {
    double tol = cfg.tol_for(id);
    for (double qv : cfg.q_grid)
        for (double nu : cfg.nu_grid)
            for (double x : cfg.x_grid) {
                try {
                    QParam qp(qv);
                    SolutionEvaluator f;
                    if (id == IdentityId::DiffEqJ)
                        f = [&](double t) {
                            return hahn_exton_j(nu, t, qp, cfg.policy).value;
                        };
                    else
                        f = [&](double t) {
                            return q_neumann(nu, t, qp, cfg.policy).value;
                        };
                    double r = std::fabs(diff_eq_residual(f, nu, x, qp));
                    out.push_back(make_record(id, qv, nu, x, "", r, 1.0, tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, nu, x, "", tol, e));
                }
            }
}

// ---------------------------------------------------------------------------
// psi recurrences / asymptote / derivative / gamma functional equation

void sweep_psi_rec_forward(const SweepConfig& cfg,
                           std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::PsiRecForward;
    double tol = cfg.tol_for(id);
    const long steps[] = {1, 5, 10};
    for (double qv : cfg.q_grid)
        for (double nu : cfg.nu_grid) {
            if (detail::pole_distance(nu) < 1e-6)
                continue;
            for (long n : steps) {
                std::string extras = "n=" + std::to_string(n);
                try {
                    QParam qp(qv);
                    auto c = detail::make_ctx<double>(qp);
                    double lhs = q_psi(nu + n, qp, cfg.policy).value;
                    detail::NeumaierSum<double> s;
                    for (long l = 0; l < n; ++l)
                        s.add(detail::q_ratio(c, nu + static_cast<double>(l)));
                    double rhs = q_psi(nu, qp, cfg.policy).value -
                                 c.log_q * s.value();
                    out.push_back(make_record(id, qv, nu, 0.0, extras,
                                              std::fabs(lhs - rhs),
                                              std::max(std::fabs(lhs), std::fabs(rhs)),
                                              tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, nu, 0.0, extras, tol, e));
                }
            }
        }
}

void sweep_psi_rec_backward(const SweepConfig& cfg,
                            std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::PsiRecBackward;
    double tol = cfg.tol_for(id);
    const long steps[] = {1, 3};
    for (double qv : cfg.q_grid)
        for (double nu : cfg.nu_grid)
            for (long n : steps) {
                // every summand index nu-l and the endpoint nu-n must stay off
                // the poles
                bool ok = detail::pole_distance(nu) > 1e-6 &&
                          detail::pole_distance(nu - static_cast<double>(n)) > 1e-6;
                for (long l = 1; ok && l <= n; ++l)
                    ok = std::fabs(nu - static_cast<double>(l)) > 1e-6 ||
                         nu - static_cast<double>(l) > 0.5;
                if (!ok)
                    continue;
                std::string extras = "n=" + std::to_string(n);
                try {
                    QParam qp(qv);
                    auto c = detail::make_ctx<double>(qp);
                    double lhs = q_psi(nu - n, qp, cfg.policy).value;
                    detail::NeumaierSum<double> s;
                    for (long l = 1; l <= n; ++l)
                        s.add(detail::q_ratio(c, nu - static_cast<double>(l)));
                    double rhs = q_psi(nu, qp, cfg.policy).value +
                                 c.log_q * s.value();
                    out.push_back(make_record(id, qv, nu, 0.0, extras,
                                              std::fabs(lhs - rhs),
                                              std::max(std::fabs(lhs), std::fabs(rhs)),
                                              tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, nu, 0.0, extras, tol, e));
                }
            }
}

void sweep_psi_asymptote(const SweepConfig& cfg,
                         std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::PsiAsymptote;
    const double orders[] = {10.0, 20.0, 50.0};
    for (double qv : cfg.q_grid)
        for (double nu : orders) {
            // |psi_q(nu) + log(1-q)| <= |log q| q^nu / ((1-q)(1-q^nu))
            double bound = std::fabs(std::log(qv)) * std::pow(qv, nu) /
                               ((1.0 - qv) * (1.0 - std::pow(qv, nu))) +
                           1e-13;
            try {
                QParam qp(qv);
                double r = std::fabs(q_psi(nu, qp, cfg.policy).value +
                                     std::log1p(-qv));
                out.push_back(make_record(id, qv, nu, 0.0, "", r, 1.0, bound));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, nu, 0.0, "", bound, e));
            }
        }
}

void sweep_psi_is_derivative(const SweepConfig& cfg,
                             std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::PsiIsDerivative;
    double tol = cfg.tol_for(id);
    const double h = 1e-6;
    // truncation error in log Gamma_q is amplified by 1/(2h); evaluate well
    // below the comparison tolerance
    TruncationPolicy tight = cfg.policy;
    tight.rel_tol = std::min(cfg.policy.rel_tol, 1e-17);
    for (double qv : cfg.q_grid)
        for (double nu : cfg.nu_grid) {
            if (nu < 0.25)
                continue; // keep the stencil on the positive axis
            try {
                QParam qp(qv);
                double fd = oracle::finite_difference(
                    [&](double t) { return log_q_gamma(t, qp, tight).value; },
                    nu, h);
                double psi = q_psi(nu, qp, tight).value;
                out.push_back(make_record(id, qv, nu, 0.0, "",
                                          std::fabs(fd - psi),
                                          std::max(1.0, std::fabs(psi)), tol));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, nu, 0.0, "", tol, e));
            }
        }
}

void sweep_gamma_functional(const SweepConfig& cfg,
                            std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::GammaFunctional;
    double tol = cfg.tol_for(id);
    for (double qv : cfg.q_grid)
        for (double nu : cfg.nu_grid) {
            if (detail::pole_distance(nu) < 1e-6)
                continue;
            try {
                QParam qp(qv);
                double lhs = q_gamma(nu + 1.0, qp, cfg.policy).value;
                double bracket = (1.0 - std::pow(qv, nu)) / (1.0 - qv);
                double rhs = bracket * q_gamma(nu, qp, cfg.policy).value;
                out.push_back(make_record(id, qv, nu, 0.0, "",
                                          std::fabs(lhs - rhs), std::fabs(lhs),
                                          tol));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, nu, 0.0, "", tol, e));
            }
        }
}

// ---------------------------------------------------------------------------
// negative-order reflections

void sweep_j_neg_order(const SweepConfig& cfg,
                       std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::JNegOrder;
    double tol = cfg.tol_for(id);
    const int orders[] = {1, 2, 3};
    for (double qv : cfg.q_grid)
        for (int n : orders)
            for (double x : cfg.x_grid) {
                try {
                    QParam qp(qv);
                    auto c = detail::make_ctx<double>(qp);
                    // direct limit-convention series vs reflection formula
                    double lhs =
                        detail::bessel_j_neg_int_series<double>(n, x, c,
                                                                cfg.policy)
                            .value;
                    double rhs = j_negative_int(n, x, qp, cfg.policy).value;
                    out.push_back(make_record(id, qv, -n, x, "",
                                              std::fabs(lhs - rhs),
                                              std::fabs(rhs) + 1e-300, tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, -n, x, "", tol, e));
                }
            }
}

// Descends from the integer closed forms with the lowering recurrence
//   N_nu(x) = [q^{(nu+1)/2} N_{nu+1}(q^{1/2}x) - N_{nu+1}(x)] / ((q-1)x);
// an evaluation route for negative integer order that never touches the
// reflection formula under test. Runs in quad with a tightened truncation:
// each descent level divides by (q-1)x, amplifying evaluation error, and the
// referee must stay well below the 1e-12 comparison tolerance.
quad neumann_descent(long order, const quad& x, const detail::Ctx<quad>& c,
                     const TruncationPolicy& pol) {
    using std::exp;
    using std::sqrt;
    if (order >= 0)
        return detail::neumann_int_cq_pi<quad>(order, x, c, pol).value /
               detail::pi_g<quad>();
    quad rq = sqrt(c.q);
    quad pref = exp(quad(order + 1) / 2 * c.log_q);
    quad up_scaled = neumann_descent(order + 1, rq * x, c, pol);
    quad up = neumann_descent(order + 1, x, c, pol);
    return (pref * up_scaled - up) / ((c.q - 1) * x);
}

void sweep_n_neg_order(const SweepConfig& cfg,
                       std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::NNegOrder;
    double tol = cfg.tol_for(id);
    const int orders[] = {1, 2, 3};
    for (double qv : cfg.q_grid)
        for (int n : orders)
            for (double x : cfg.x_grid) {
                try {
                    QParam qp(qv);
                    auto c = detail::make_ctx<quad>(qp);
                    TruncationPolicy tight = cfg.policy;
                    tight.rel_tol = std::min(cfg.policy.rel_tol, 1e-25);
                    double lhs = detail::to_double(
                        neumann_descent(-n, quad(x), c, tight));
                    double rhs = q_neumann_negative(n, x, qp, cfg.policy).value;
                    // the positive-order value at the same x keeps the scale
                    // honest near zeros of the reflected value
                    double ref = q_neumann_int(n, x, qp, cfg.policy).value;
                    out.push_back(make_record(id, qv, -n, x, "",
                                              std::fabs(lhs - rhs),
                                              max3(std::fabs(rhs),
                                                   std::fabs(ref), 1e-300),
                                              tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, -n, x, "", tol, e));
                }
            }
}

// ---------------------------------------------------------------------------
// recurrence relations, shared by J and N

void sweep_recurrence(IdentityId id, const SweepConfig& cfg,
                      std::vector<IdentityResidual>& out) {
    double tol = cfg.tol_for(id);
    for (const char* family : {"J", "N"})
        for (double qv : cfg.q_grid)
            for (double nu : cfg.nu_grid)
                for (double x : cfg.x_grid) {
                    std::string extras = std::string("family=") + family;
                    try {
                        QParam qp(qv);
                        bool is_j = family[0] == 'J';
                        auto f = [&](double order, double t) {
                            return is_j
                                       ? hahn_exton_j(order, t, qp, cfg.policy).value
                                       : q_neumann(order, t, qp, cfg.policy).value;
                        };
                        double rq = std::sqrt(qv);
                        double a, b, cterm;
                        if (id == IdentityId::RecurrenceUp) {
                            a = std::exp(0.5 * (nu + 1.0) * qp.log_value) *
                                f(nu + 1.0, rq * x);
                            b = -f(nu + 1.0, x);
                            cterm = -(qv - 1.0) * x * f(nu, x);
                        } else {
                            a = std::exp(0.5 * nu * qp.log_value) *
                                f(nu, x / rq);
                            b = -f(nu, x);
                            cterm = -(qv - 1.0) * x * f(nu + 1.0, x);
                        }
                        double r = std::fabs(a + b + cterm);
                        double scale = max3(std::fabs(a), std::fabs(b),
                                            std::fabs(cterm));
                        out.push_back(make_record(id, qv, nu, x, extras, r,
                                                  std::max(scale, 1e-300), tol));
                    } catch (const std::exception& e) {
                        out.push_back(make_failure(id, qv, nu, x, extras, tol, e));
                    }
                }
}

// ---------------------------------------------------------------------------
// dual-path and near-integer checks

void sweep_dual_path(const SweepConfig& cfg,
                     std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::DualPathN;
    double tol = cfg.tol_for(id);
    const int orders[] = {0, 1, 2, 3};
    const double xs[] = {0.1, 0.5, 1.0, 2.0};
    for (double qv : cfg.q_grid)
        for (int n : orders)
            for (double x : xs) {
                try {
                    QParam qp(qv);
                    double a = (n == 0 ? q_neumann_zero(x, qp, cfg.policy)
                                       : q_neumann_int(n, x, qp, cfg.policy))
                                   .value;
                    double b = q_neumann_int_psi_form(n, x, qp, cfg.policy).value;
                    out.push_back(make_record(id, qv, n, x, "",
                                              std::fabs(a - b),
                                              std::max(std::fabs(a),
                                                       std::fabs(b)),
                                              tol));
                } catch (const std::exception& e) {
                    out.push_back(make_failure(id, qv, n, x, "", tol, e));
                }
            }
}

void sweep_near_integer(const SweepConfig& cfg,
                        std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::NearIntegerLimit;
    double tol = cfg.tol_for(id);
    const double qv = 0.5, x = 1.0;
    const double deltas[] = {1e-2, 1e-3, 1e-4};
    for (int n : {0, 1, 2}) {
        try {
            QParam qp(qv);
            double target = q_neumann(static_cast<double>(n), x, qp, cfg.policy).value;
            double d[3];
            std::string extras;
            for (int i = 0; i < 3; ++i) {
                double v = q_neumann_generic(n + deltas[i], x, qp, cfg.policy).value;
                d[i] = std::fabs(v - target);
                extras += (i ? ",d" : "d") + std::to_string(i + 1) + "=" + fmt(d[i]);
            }
            // each refinement must shrink the gap; residual is the worst ratio
            double worst = std::max(d[1] / d[0], d[2] / d[1]);
            out.push_back(make_record(id, qv, n, x, extras, worst, 1.0, tol));
        } catch (const std::exception& e) {
            out.push_back(make_failure(id, qv, n, x, "", tol, e));
        }
    }
}

// ---------------------------------------------------------------------------
// residues and pole limits, referee'd by near-pole extrapolation

void sweep_residue_gamma(const SweepConfig& cfg,
                         std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ResidueGamma;
    double tol = cfg.tol_for(id);
    const std::vector<double> eps{1e-3, 1e-4, 1e-5};
    for (double qv : cfg.q_grid)
        for (int n : {0, 1, 2}) {
            try {
                QParam qp(qv);
                auto est = oracle::estimate_residue(
                    [&](double t) { return q_gamma(t, qp, cfg.policy).value; },
                    -static_cast<double>(n), eps);
                double closed = q_gamma_residue(n, qp);
                out.push_back(make_record(id, qv, -n, 0.0, "",
                                          std::fabs(est.value - closed),
                                          std::fabs(closed), tol));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, -n, 0.0, "", tol, e));
            }
        }
}

void sweep_residue_psi(const SweepConfig& cfg,
                       std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ResiduePsi;
    double tol = cfg.tol_for(id);
    const std::vector<double> eps{1e-3, 1e-4, 1e-5};
    for (double qv : cfg.q_grid)
        for (int n : {0, 1, 2}) {
            try {
                QParam qp(qv);
                auto est = oracle::estimate_residue(
                    [&](double t) { return q_psi(t, qp, cfg.policy).value; },
                    -static_cast<double>(n), eps);
                double closed = q_psi_residue(n, qp);
                out.push_back(make_record(id, qv, -n, 0.0, "",
                                          std::fabs(est.value - closed), 1.0,
                                          tol));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, -n, 0.0, "", tol, e));
            }
        }
}

void sweep_psi_over_gamma(const SweepConfig& cfg,
                          std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::PsiOverGamma;
    double tol = cfg.tol_for(id);
    const std::vector<double> eps{1e-3, 1e-4, 1e-5};
    for (double qv : cfg.q_grid)
        for (int n : {0, 1, 2}) {
            try {
                QParam qp(qv);
                std::vector<double> ys;
                for (double e : eps) {
                    double t = -static_cast<double>(n) + e;
                    ys.push_back(q_psi(t, qp, cfg.policy).value /
                                 q_gamma(t, qp, cfg.policy).value);
                }
                double est = neville_to_zero(eps, ys);
                double closed = psi_over_gamma_limit(n, qp);
                out.push_back(make_record(id, qv, -n, 0.0, "",
                                          std::fabs(est - closed),
                                          std::fabs(closed), tol));
                // the limit must also equal the ratio of the two residues
                double ratio = q_psi_residue(n, qp) / q_gamma_residue(n, qp);
                out.push_back(make_record(id, qv, -n, 0.0, "residue-ratio",
                                          std::fabs(closed - ratio),
                                          std::fabs(closed), 1e-14));
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, qv, -n, 0.0, "", tol, e));
            }
        }
}

// ---------------------------------------------------------------------------
// classical q -> 1 limits

const double kLimitQ[] = {0.9, 0.99, 0.999};

void push_limit_records(IdentityId id, double nu, double x, double d[3],
                        double tol, std::vector<IdentityResidual>& out,
                        const std::string& tag) {
    std::string extras = tag;
    for (int i = 0; i < 3; ++i)
        extras += (extras.empty() ? "d" : ",d") + std::to_string(i + 1) + "=" +
                  fmt(d[i]);
    out.push_back(make_record(id, kLimitQ[2], nu, x, extras, d[2], 1.0, tol));
    double worst = std::max(d[1] / d[0], d[2] / d[1]);
    std::string mono = tag.empty() ? "monotone" : tag + ",monotone";
    out.push_back(make_record(id, kLimitQ[2], nu, x, mono, worst, 1.0, 1.0));
}

void sweep_classical_psi(const SweepConfig& cfg,
                         std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ClassicalPsiLimit;
    double tol = cfg.tol_for(id);
    for (double nu : {0.5, 1.0, 2.5}) {
        try {
            double ref = oracle::classical_digamma(nu);
            double d[3];
            for (int i = 0; i < 3; ++i) {
                QParam qp(kLimitQ[i]);
                d[i] = std::fabs(q_psi(nu, qp, cfg.policy).value - ref);
            }
            push_limit_records(id, nu, 0.0, d, tol, out, "");
        } catch (const std::exception& e) {
            out.push_back(make_failure(id, kLimitQ[2], nu, 0.0, "", tol, e));
        }
    }
    try {
        // C_q -> Euler-Mascheroni constant; a looser tolerance, the constant
        // converges more slowly than psi at fixed positive order
        double ref = oracle::classical_euler_constant();
        double d[3];
        for (int i = 0; i < 3; ++i) {
            QParam qp(kLimitQ[i]);
            d[i] = std::fabs(q_euler_constant(qp, cfg.policy).value - ref);
        }
        push_limit_records(id, 1.0, 0.0, d, 1e-2, out, "euler");
    } catch (const std::exception& e) {
        out.push_back(make_failure(id, kLimitQ[2], 1.0, 0.0, "euler", 1e-2, e));
    }
}

void sweep_classical_j(const SweepConfig& cfg,
                       std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ClassicalJLimit;
    double tol = cfg.tol_for(id);
    for (int n : {0, 1})
        for (double x : {0.25, 0.5, 1.0}) {
            try {
                double ref = oracle::classical_bessel_j(n, 2.0 * x);
                double d[3];
                for (int i = 0; i < 3; ++i) {
                    QParam qp(kLimitQ[i]);
                    d[i] = std::fabs(
                        hahn_exton_j(n, x, qp, cfg.policy).value - ref);
                }
                push_limit_records(id, n, x, d, tol, out, "");
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, kLimitQ[2], n, x, "", tol, e));
            }
        }
}

void sweep_classical_n(const SweepConfig& cfg,
                       std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ClassicalNLimit;
    double tol = cfg.tol_for(id);
    for (int n : {0, 1})
        for (double x : {0.25, 0.5, 1.0}) {
            try {
                double ref = oracle::classical_neumann_y(n, 2.0 * x);
                double d[3];
                for (int i = 0; i < 3; ++i) {
                    QParam qp(kLimitQ[i]);
                    d[i] = std::fabs(
                        q_neumann(n, x, qp, cfg.policy).value - ref);
                }
                push_limit_records(id, n, x, d, tol, out, "");
            } catch (const std::exception& e) {
                out.push_back(make_failure(id, kLimitQ[2], n, x, "", tol, e));
            }
        }
}

// ---------------------------------------------------------------------------
// bilateral product formulas

// J at any real order, quad-precision, with the negative-integer reflection
// handled by the limit-convention series.
detail::Series<quad> j_quad(double nu, const quad& x,
                            const detail::Ctx<quad>& c,
                            const TruncationPolicy& pol) {
    long n0 = std::llround(nu);
    if (nu < -0.5 && std::fabs(nu - static_cast<double>(n0)) <= 1e-9 && n0 <= -1)
        return detail::bessel_j_neg_int_series<quad>(-n0, x, c, pol);
    return detail::bessel_j_series<quad>(quad(nu), x, c, pol);
}

// A bilateral-sum term and the propagated error of its value.
struct BilTerm {
    quad value{0};
    quad err{0};
};

// Sums term(z) over z = 0..z_max and z = -1..z_min. On the negative side the
// inner series cancel catastrophically and eventually drown in rounding noise
// even at quad precision, so a term is treated as numerically zero (and the
// window closed after stop_run of them) once its propagated error reaches its
// magnitude. A term that grows past growth_guard times the accumulated sum
// while still carrying signal means q^z damping has lost: DivergenceError.
template <class TermFn>
Evaluation bilateral_sum(const TermFn& term, const SweepConfig& cfg) {
    using std::fabs;
    const TruncationPolicy& pol = cfg.policy;
    const quad stop_rel = quad(std::max(pol.rel_tol, 1e-12));

    detail::NeumaierSum<quad> acc;
    quad err_acc{0};
    long terms = 0;
    unsigned flags = 0;

    auto threshold = [&] { return stop_rel * fabs(acc.value()) + quad(1e-300); };

    for (int side = 0; side < 2; ++side) {
        int run = 0;
        bool closed = false;
        int z = (side == 0) ? 0 : -1;
        int step = (side == 0) ? 1 : -1;
        int limit = (side == 0) ? cfg.z_max : cfg.z_min;
        for (; (side == 0) ? z <= limit : z >= limit; z += step) {
            BilTerm t = term(z);
            quad mag = fabs(t.value);
            bool noise = mag <= t.err;
            if (!noise) {
                if (mag > quad(cfg.growth_guard) * (fabs(acc.value()) + quad(1)))
                    throw DivergenceError(
                        "bilateral sum: term at z=" + std::to_string(z) +
                        " grew past the divergence guard");
                acc.add(t.value);
                err_acc += t.err;
                ++terms;
            }
            if (noise || mag <= threshold()) {
                if (++run >= pol.stop_run) {
                    closed = true;
                    break;
                }
            } else {
                run = 0;
            }
        }
        if (!closed)
            flags |= SlowConvergence; // window exhausted before the stop fired
    }

    Evaluation out;
    out.value = detail::to_double(acc.value());
    out.est_error = detail::to_double(
        quad(pol.stop_run) * threshold() + err_acc +
        detail::eps_g<quad>() * acc.abs_sum);
    out.terms_used = terms;
    out.flags = flags;
    return out;
}

quad product_err(const quad& pref, const detail::Series<quad>& a,
                 const detail::Series<quad>& b, const detail::Series<quad>& c) {
    using std::fabs;
    return fabs(pref) * (a.est_error * fabs(b.value * c.value) +
                         fabs(a.value) * b.est_error * fabs(c.value) +
                         fabs(a.value * b.value) * c.est_error);
}

} // namespace

Evaluation product_lhs_J(double x, double y, double nu, double r,
                         const QParam& q, const SweepConfig& cfg) {
    cfg.validate();
    if (!(x > -1.0))
        throw PreconditionError("product_lhs_J: requires x > -1");
    if (!(r > 0.0))
        throw PreconditionError("product_lhs_J: requires r > 0");
    if (!(r * r * std::exp((1.0 + x + y) * q.log_value) < 1.0))
        throw PreconditionError("product_lhs_J: requires r^2 q^{1+x+y} < 1");

    auto c = detail::make_ctx<quad>(q);
    const TruncationPolicy& pol = cfg.policy;
    // the formula lives in the standard Hahn-Exton normalization; in this
    // library's Gamma_q-form series that means every argument carries a
    // 1/(1-q) factor
    quad s = 1 / c.one_minus_q;
    quad R = quad(r) * s;

    auto term = [&](int z) {
        using std::exp;
        quad zq(z);
        quad arg = s * exp(zq / 2 * c.log_q); // q^{z/2} / (1-q)
        auto ja = j_quad(x, arg, c, pol);
        auto jb = j_quad(x - nu, arg, c, pol);
        auto jc = j_quad(nu, R * exp((quad(y + nu) + zq) / 2 * c.log_q), c, pol);
        quad pref = exp(zq * c.log_q);
        return BilTerm{pref * ja.value * jb.value * jc.value,
                       product_err(pref, ja, jb, jc)};
    };
    return bilateral_sum(term, cfg);
}

Evaluation product_lhs_N(double nu, double r, const QParam& q,
                         const SweepConfig& cfg) {
    cfg.validate();
    // N_nu mixes J_nu and J_{-nu}; the underlying J formula applies to both
    // branches only when both nu/2 > -1 and -nu/2 > -1
    if (!(nu > -2.0 && nu < 2.0))
        throw PreconditionError("product_lhs_N: requires -2 < nu < 2");
    if (!(r > 0.0))
        throw PreconditionError("product_lhs_N: requires r > 0");
    if (!(r * r * q.value < 1.0))
        throw PreconditionError("product_lhs_N: requires r^2 q < 1");

    auto c = detail::make_ctx<quad>(q);
    const TruncationPolicy& pol = cfg.policy;
    quad s = 1 / c.one_minus_q; // Hahn-Exton normalization, as above
    quad R = quad(r) * s;
    OrderClass oc = OrderClass::classify(nu);

    auto term = [&](int z) {
        using std::exp;
        quad zq(z);
        quad arg = s * exp(zq / 2 * c.log_q);
        auto ja = j_quad(0.5 * nu, arg, c, pol);
        auto jb = j_quad(-0.5 * nu, arg, c, pol);
        auto nn = detail::neumann_any<quad>(
            quad(nu), R * exp((quad(nu) / 2 + zq) / 2 * c.log_q), c, pol,
            oc.eps_int, oc.near_int);
        quad pref = exp(zq * c.log_q);
        return BilTerm{pref * ja.value * jb.value * nn.value,
                       product_err(pref, ja, jb, nn)};
    };
    return bilateral_sum(term, cfg);
}

namespace {

void sweep_product_j(const SweepConfig& cfg,
                     std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ProductJ;
    double tol = cfg.tol_for(id);
    struct P {
        double q, x, y, nu, r;
    };
    const P points[] = {
        {0.5, 1.2, 0.3, 0.7, 0.4},
        {0.3, 0.5, 0.5, 0.5, 0.3},
        {0.5, 0.8, 0.1, 1.5, 0.35},
    };
    for (const P& p : points) {
        std::string extras = "x=" + fmt(p.x) + ",y=" + fmt(p.y) +
                             ",r=" + fmt(p.r);
        try {
            QParam qp(p.q);
            double lhs = product_lhs_J(p.x, p.y, p.nu, p.r, qp, cfg).value;
            auto c = detail::make_ctx<quad>(qp);
            using std::exp;
            quad R = quad(p.r) / c.one_minus_q;
            quad rhs = j_quad(0.0,
                              R * exp(quad(p.x + p.y) / 2 * c.log_q),
                              c, cfg.policy)
                           .value *
                       j_quad(p.nu,
                              R * exp(quad(p.nu + p.y) / 2 * c.log_q),
                              c, cfg.policy)
                           .value;
            double rd = detail::to_double(rhs);
            out.push_back(make_record(id, p.q, p.nu, p.r, extras,
                                      std::fabs(lhs - rd), std::fabs(rd), tol));
        } catch (const std::exception& e) {
            out.push_back(make_failure(id, p.q, p.nu, p.r, extras, tol, e));
        }
    }
    // outside the convergence region the evaluator must refuse, not emit a
    // number
    try {
        QParam qp(0.9);
        product_lhs_J(0.2, 0.2, 0.5, 2.0, qp, cfg);
        out.push_back(make_failure(id, 0.9, 0.5, 2.0, "expect-precondition",
                                   tol,
                                   DomainError("no PreconditionError thrown")));
    } catch (const PreconditionError&) {
        out.push_back(make_record(id, 0.9, 0.5, 2.0, "expect-precondition",
                                  0.0, 1.0, tol));
    } catch (const std::exception& e) {
        out.push_back(
            make_failure(id, 0.9, 0.5, 2.0, "expect-precondition", tol, e));
    }
}

void sweep_product_n(const SweepConfig& cfg,
                     std::vector<IdentityResidual>& out) {
    const IdentityId id = IdentityId::ProductN;
    double tol = cfg.tol_for(id);
    struct P {
        double q, nu, r;
    };
    const P points[] = {
        {0.5, 0.5, 0.3},
        {0.5, 1.0, 0.3},
        {0.3, 1.5, 0.4},
    };
    for (const P& p : points) {
        std::string extras = "r=" + fmt(p.r);
        try {
            QParam qp(p.q);
            double lhs = product_lhs_N(p.nu, p.r, qp, cfg).value;
            auto c = detail::make_ctx<quad>(qp);
            using std::exp;
            OrderClass oc = OrderClass::classify(p.nu);
            quad R = quad(p.r) / c.one_minus_q;
            quad rhs = j_quad(0.0, R, c, cfg.policy).value *
                       detail::neumann_any<quad>(
                           quad(p.nu),
                           R * exp(quad(p.nu) / 4 * c.log_q), c,
                           cfg.policy, oc.eps_int, oc.near_int)
                           .value;
            double rd = detail::to_double(rhs);
            out.push_back(make_record(id, p.q, p.nu, p.r, extras,
                                      std::fabs(lhs - rd), std::fabs(rd), tol));
        } catch (const std::exception& e) {
            out.push_back(make_failure(id, p.q, p.nu, p.r, extras, tol, e));
        }
    }
    for (double bad_nu : {-2.5, 2.5}) {
        try {
            QParam qp(0.5);
            product_lhs_N(bad_nu, 0.3, qp, cfg);
            out.push_back(make_failure(id, 0.5, bad_nu, 0.3,
                                       "expect-precondition", tol,
                                       DomainError("no PreconditionError thrown")));
        } catch (const PreconditionError&) {
            out.push_back(make_record(id, 0.5, bad_nu, 0.3,
                                      "expect-precondition", 0.0, 1.0, tol));
        } catch (const std::exception& e) {
            out.push_back(make_failure(id, 0.5, bad_nu, 0.3,
                                       "expect-precondition", tol, e));
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// public surface

const char* identity_name(IdentityId id) {
    switch (id) {
    case IdentityId::DiffEqJ: return "diffeq_j";
    case IdentityId::DiffEqN: return "diffeq_n";
    case IdentityId::PsiRecForward: return "psi_rec_forward";
    case IdentityId::PsiRecBackward: return "psi_rec_backward";
    case IdentityId::PsiAsymptote: return "psi_asymptote";
    case IdentityId::PsiIsDerivative: return "psi_is_derivative";
    case IdentityId::GammaFunctional: return "gamma_functional";
    case IdentityId::JNegOrder: return "j_neg_order";
    case IdentityId::NNegOrder: return "n_neg_order";
    case IdentityId::RecurrenceUp: return "recurrence_up";
    case IdentityId::RecurrenceDown: return "recurrence_down";
    case IdentityId::DualPathN: return "dual_path_n";
    case IdentityId::NearIntegerLimit: return "near_integer_limit";
    case IdentityId::ResidueGamma: return "residue_gamma";
    case IdentityId::ResiduePsi: return "residue_psi";
    case IdentityId::PsiOverGamma: return "psi_over_gamma";
    case IdentityId::ClassicalPsiLimit: return "classical_psi_limit";
    case IdentityId::ClassicalJLimit: return "classical_j_limit";
    case IdentityId::ClassicalNLimit: return "classical_n_limit";
    case IdentityId::ProductJ: return "product_j";
    case IdentityId::ProductN: return "product_n";
    }
    return "unknown";
}

std::vector<IdentityId> all_identities() {
    return {
        IdentityId::DiffEqJ,          IdentityId::DiffEqN,
        IdentityId::PsiRecForward,    IdentityId::PsiRecBackward,
        IdentityId::PsiAsymptote,     IdentityId::PsiIsDerivative,
        IdentityId::GammaFunctional,  IdentityId::JNegOrder,
        IdentityId::NNegOrder,        IdentityId::RecurrenceUp,
        IdentityId::RecurrenceDown,   IdentityId::DualPathN,
        IdentityId::NearIntegerLimit, IdentityId::ResidueGamma,
        IdentityId::ResiduePsi,       IdentityId::PsiOverGamma,
        IdentityId::ClassicalPsiLimit, IdentityId::ClassicalJLimit,
        IdentityId::ClassicalNLimit,  IdentityId::ProductJ,
        IdentityId::ProductN,
    };
}

std::vector<std::string> suite_names() {
    return {"all",    "diffeq",  "recurrence", "residue",
            "limits", "product", "dualpath"};
}

std::vector<IdentityId> suite_identities(const std::string& suite) {
    if (suite == "all")
        return all_identities();
    if (suite == "diffeq")
        return {IdentityId::DiffEqJ, IdentityId::DiffEqN};
    if (suite == "recurrence")
        return {IdentityId::PsiRecForward, IdentityId::PsiRecBackward,
                IdentityId::PsiAsymptote,  IdentityId::GammaFunctional,
                IdentityId::RecurrenceUp,  IdentityId::RecurrenceDown,
                IdentityId::JNegOrder,     IdentityId::NNegOrder};
    if (suite == "residue")
        return {IdentityId::ResidueGamma, IdentityId::ResiduePsi,
                IdentityId::PsiOverGamma};
    if (suite == "limits")
        return {IdentityId::ClassicalPsiLimit, IdentityId::ClassicalJLimit,
                IdentityId::ClassicalNLimit};
    if (suite == "product")
        return {IdentityId::ProductJ, IdentityId::ProductN};
    if (suite == "dualpath")
        return {IdentityId::DualPathN, IdentityId::NearIntegerLimit,
                IdentityId::PsiIsDerivative};
    throw DomainError("unknown verification suite: " + suite);
}

SweepConfig::SweepConfig() {
    const int n = 20;
    const double lo = std::log(0.01), hi = std::log(3.0);
    x_grid.reserve(n);
    for (int i = 0; i < n; ++i)
        x_grid.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));

    tol = {
        {IdentityId::DiffEqJ, 1e-10},
        {IdentityId::DiffEqN, 1e-9},
        {IdentityId::PsiRecForward, 1e-10},
        {IdentityId::PsiRecBackward, 1e-10},
        {IdentityId::PsiAsymptote, 1e-10}, // per-record bound overrides
        {IdentityId::PsiIsDerivative, 1e-8},
        {IdentityId::GammaFunctional, 1e-13},
        {IdentityId::JNegOrder, 1e-12},
        {IdentityId::NNegOrder, 1e-12},
        {IdentityId::RecurrenceUp, 1e-10},
        {IdentityId::RecurrenceDown, 1e-10},
        {IdentityId::DualPathN, 1e-10},
        {IdentityId::NearIntegerLimit, 1.0},
        {IdentityId::ResidueGamma, 1e-6},
        {IdentityId::ResiduePsi, 1e-5},
        {IdentityId::PsiOverGamma, 1e-6},
        {IdentityId::ClassicalPsiLimit, 5e-3},
        {IdentityId::ClassicalJLimit, 5e-3},
        {IdentityId::ClassicalNLimit, 2e-2},
        {IdentityId::ProductJ, 1e-8},
        {IdentityId::ProductN, 1e-8},
    };
}

double SweepConfig::tol_for(IdentityId id) const {
    auto it = tol.find(id);
    if (it == tol.end())
        throw DomainError(std::string("no tolerance configured for ") +
                          identity_name(id));
    return it->second;
}

void SweepConfig::validate() const {
    if (q_grid.empty() || nu_grid.empty() || x_grid.empty())
        throw DomainError("SweepConfig: grids must be nonempty");
    for (double qv : q_grid)
        if (!(qv > 0.0 && qv < 1.0))
            throw DomainError("SweepConfig: q grid values must lie in (0,1)");
    for (double x : x_grid)
        if (!(x > 0.0))
            throw DomainError("SweepConfig: x grid values must be positive");
    if (!(z_min < 0 && z_max > 0))
        throw DomainError("SweepConfig: window must straddle z=0");
    if (!(growth_guard > 1.0))
        throw DomainError("SweepConfig: growth_guard must exceed 1");
    policy.validate();
}

std::vector<IdentityResidual> run_identity(IdentityId id,
                                           const SweepConfig& cfg) {
    cfg.validate();
    std::vector<IdentityResidual> out;
    switch (id) {
    case IdentityId::DiffEqJ:
    case IdentityId::DiffEqN: sweep_diffeq(id, cfg, out); break;
    case IdentityId::PsiRecForward: sweep_psi_rec_forward(cfg, out); break;
    case IdentityId::PsiRecBackward: sweep_psi_rec_backward(cfg, out); break;
    case IdentityId::PsiAsymptote: sweep_psi_asymptote(cfg, out); break;
    case IdentityId::PsiIsDerivative: sweep_psi_is_derivative(cfg, out); break;
    case IdentityId::GammaFunctional: sweep_gamma_functional(cfg, out); break;
    case IdentityId::JNegOrder: sweep_j_neg_order(cfg, out); break;
    case IdentityId::NNegOrder: sweep_n_neg_order(cfg, out); break;
    case IdentityId::RecurrenceUp:
    case IdentityId::RecurrenceDown: sweep_recurrence(id, cfg, out); break;
    case IdentityId::DualPathN: sweep_dual_path(cfg, out); break;
    case IdentityId::NearIntegerLimit: sweep_near_integer(cfg, out); break;
    case IdentityId::ResidueGamma: sweep_residue_gamma(cfg, out); break;
    case IdentityId::ResiduePsi: sweep_residue_psi(cfg, out); break;
    case IdentityId::PsiOverGamma: sweep_psi_over_gamma(cfg, out); break;
    case IdentityId::ClassicalPsiLimit: sweep_classical_psi(cfg, out); break;
    case IdentityId::ClassicalJLimit: sweep_classical_j(cfg, out); break;
    case IdentityId::ClassicalNLimit: sweep_classical_n(cfg, out); break;
    case IdentityId::ProductJ: sweep_product_j(cfg, out); break;
    case IdentityId::ProductN: sweep_product_n(cfg, out); break;
    }
    return out;
}

std::vector<IdentityResidual> run_suite(const std::string& suite,
                                        const SweepConfig& cfg) {
    std::vector<IdentityResidual> out;
    for (IdentityId id : suite_identities(suite)) {
        auto part = run_identity(id, cfg);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace qsf::verify
