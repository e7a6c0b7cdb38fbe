#include "qsf/qcore.hpp"

#include <cmath>

#include "detail/qseries.hpp"

namespace qsf {

std::string flag_names(unsigned flags) {
    std::string out;
    auto append = [&out](const char* name) {
        if (!out.empty())
            out += '|';
        out += name;
    };
    if (flags & NearPole)
        append("NearPole");
    if (flags & SlowConvergence)
        append("SlowConvergence");
    if (flags & CancellationRisk)
        append("CancellationRisk");
    return out.empty() ? "-" : out;
}

namespace {

Evaluation to_eval(const detail::Series<double>& s) {
    return Evaluation{s.value, std::fabs(s.est_error), s.terms, s.flags};
}

// Gamma_q(n+1) for n >= 0, exact terminating product.
double gamma_int(int n, const QParam& q) {
    auto c = detail::make_ctx<double>(q);
    return detail::q_gamma_int<double>(n + 1, c);
}

} // namespace

Evaluation log_q_gamma(double nu, const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    auto c = detail::make_ctx<double>(q);
    auto lg = detail::log_q_gamma_series<double>(nu, c, policy);
    if (lg.sign < 0)
        throw DomainError("log_q_gamma: Gamma_q(nu) < 0 at nu=" + std::to_string(nu));
    return Evaluation{lg.log_abs, std::fabs(lg.est_error), lg.terms, lg.flags};
}

Evaluation q_gamma(double nu, const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    auto c = detail::make_ctx<double>(q);
    auto lg = detail::log_q_gamma_series<double>(nu, c, policy);
    double v = lg.sign * std::exp(lg.log_abs);
    // error on log scale propagates multiplicatively
    return Evaluation{v, std::fabs(v) * std::fabs(lg.est_error), lg.terms, lg.flags};
}

Evaluation q_psi(double nu, const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    auto c = detail::make_ctx<double>(q);
    return to_eval(detail::q_psi_series<double>(nu, c, policy));
}

Evaluation q_euler_constant(const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    auto c = detail::make_ctx<double>(q);
    auto s = detail::q_psi_series<double>(1.0, c, policy);
    s.value = -s.value;
    return to_eval(s);
}

double q_gamma_residue(int n, const QParam& q) {
    if (n < 0)
        throw DomainError("q_gamma_residue: n must be >= 0");
    double sign = (n % 2 ? -1.0 : 1.0);
    double qpow = std::exp(0.5 * n * (n + 1) * q.log_value);
    return sign * qpow * (q.value - 1.0) / (q.log_value * gamma_int(n, q));
}

double q_psi_residue(int n, const QParam& q) {
    if (n < 0)
        throw DomainError("q_psi_residue: n must be >= 0");
    (void)q;
    return -1.0;
}

double psi_over_gamma_limit(int n, const QParam& q) {
    if (n < 0)
        throw DomainError("psi_over_gamma_limit: n must be >= 0");
    double sign = (n % 2 ? -1.0 : 1.0);
    double qpow = std::exp(-0.5 * n * (n + 1) * q.log_value);
    return sign * qpow * q.log_value / (1.0 - q.value) * gamma_int(n, q);
}

} // namespace qsf
