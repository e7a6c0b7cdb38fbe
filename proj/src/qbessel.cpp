#include "qsf/qbessel.hpp"

#include <algorithm>
#include <cmath>

#include "detail/qseries.hpp"

namespace qsf {

namespace {

Evaluation to_eval(const detail::Series<double>& s) {
    return Evaluation{s.value, std::fabs(s.est_error), s.terms, s.flags};
}

bool is_negative_integer(double nu, long* n_out) {
    long n = std::llround(nu);
    if (n <= -1 && std::fabs(nu - static_cast<double>(n)) <= 1e-9) {
        *n_out = -n;
        return true;
    }
    return false;
}

} // namespace

Evaluation hahn_exton_j(double nu, double x, const QParam& q,
                        const TruncationPolicy& policy) {
    policy.validate();
    if (x < 0.0)
        throw DomainError("hahn_exton_j: x must be >= 0");
    if (x == 0.0) {
        if (nu < 0.0)
            throw DomainError("hahn_exton_j: x = 0 requires nu >= 0");
        return Evaluation{nu == 0.0 ? 1.0 : 0.0, 0.0, 1, 0};
    }
    long n = 0;
    if (is_negative_integer(nu, &n))
        return j_negative_int(static_cast<int>(n), x, q, policy);
    auto c = detail::make_ctx<double>(q);
    return to_eval(detail::bessel_j_series<double>(nu, x, c, policy));
}

Evaluation j_negative_int(int n, double x, const QParam& q,
                          const TruncationPolicy& policy) {
    policy.validate();
    if (n < 1)
        throw DomainError("j_negative_int: n must be >= 1");
    if (!(x > 0.0))
        throw DomainError("j_negative_int: x must be > 0");
    auto c = detail::make_ctx<double>(q);
    double scale = std::exp(0.5 * n * q.log_value);
    auto s = detail::bessel_j_series<double>(static_cast<double>(n), scale * x, c, policy);
    double factor = (n % 2 ? -1.0 : 1.0) * scale;
    return Evaluation{factor * s.value, scale * std::fabs(s.est_error), s.terms, s.flags};
}

double diff_eq_residual(const SolutionEvaluator& f, double nu, double x,
                        const QParam& q) {
    if (!(x > 0.0))
        throw DomainError("diff_eq_residual: x must be > 0");
    double rq = std::sqrt(q.value);
    double s1 = f(rq * x);
    double s2 = f(x / rq);
    double qnu = std::exp(nu * q.log_value);
    double one_minus_q = 1.0 - q.value;
    double s3 = std::exp(-0.5 * nu * q.log_value) *
                (one_minus_q * one_minus_q * x * x - qnu - 1.0) * f(x);
    double scale = std::max({std::fabs(s1), std::fabs(s2), std::fabs(s3)});
    if (scale == 0.0)
        return 0.0; // the zero solution satisfies the equation exactly
    return (s1 + s2 + s3) / scale;
}

} // namespace qsf
