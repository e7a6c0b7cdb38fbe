#include "qsf/qneumann.hpp"

#include <cmath>

#include "detail/qseries.hpp"

namespace qsf {

namespace {

Evaluation over_pi(detail::Series<double> s) {
    double pi = detail::pi_g<double>();
    return Evaluation{s.value / pi, std::fabs(s.est_error) / pi, s.terms, s.flags};
}

void require_positive_x(double x, const char* who) {
    if (!(x > 0.0))
        throw DomainError(std::string(who) + ": x must be > 0");
}

} // namespace

OrderClass OrderClass::classify(double nu, double eps_int, double near_int) {
    OrderClass oc;
    oc.raw = nu;
    oc.eps_int = eps_int;
    oc.near_int = near_int;
    oc.n = std::llround(nu);
    oc.is_integer = std::fabs(nu - static_cast<double>(oc.n)) <= eps_int;
    return oc;
}

bool OrderClass::in_warning_zone() const {
    double dist = std::fabs(raw - std::round(raw));
    return dist > eps_int && dist < near_int;
}

Evaluation q_neumann_generic(double nu, double x, const QParam& q,
                             const TruncationPolicy& policy) {
    policy.validate();
    require_positive_x(x, "q_neumann_generic");
    OrderClass oc = OrderClass::classify(nu);
    auto c = detail::make_ctx<double>(q);
    auto s = detail::neumann_generic_series<double>(nu, x, c, policy, oc.eps_int,
                                                    oc.near_int);
    return Evaluation{s.value, std::fabs(s.est_error), s.terms, s.flags};
}

Evaluation q_neumann_int(int n, double x, const QParam& q,
                         const TruncationPolicy& policy) {
    policy.validate();
    if (n < 1)
        throw DomainError("q_neumann_int: n must be >= 1 (use q_neumann_zero)");
    require_positive_x(x, "q_neumann_int");
    auto c = detail::make_ctx<double>(q);
    return over_pi(detail::neumann_int_cq_pi<double>(n, x, c, policy));
}

Evaluation q_neumann_zero(double x, const QParam& q,
                          const TruncationPolicy& policy) {
    policy.validate();
    require_positive_x(x, "q_neumann_zero");
    auto c = detail::make_ctx<double>(q);
    return over_pi(detail::neumann_int_cq_pi<double>(0, x, c, policy));
}

Evaluation q_neumann_int_psi_form(int n, double x, const QParam& q,
                                  const TruncationPolicy& policy) {
    policy.validate();
    if (n < 0)
        throw DomainError("q_neumann_int_psi_form: n must be >= 0");
    require_positive_x(x, "q_neumann_int_psi_form");
    auto c = detail::make_ctx<double>(q);
    return over_pi(detail::neumann_int_psi_pi<double>(n, x, c, policy));
}

Evaluation q_neumann_negative(int n, double x, const QParam& q,
                              const TruncationPolicy& policy) {
    policy.validate();
    if (n < 1)
        throw DomainError("q_neumann_negative: n must be >= 1");
    require_positive_x(x, "q_neumann_negative");
    double scale = std::exp(0.5 * n * q.log_value);
    Evaluation inner = (n >= 1)
                           ? q_neumann_int(n, scale * x, q, policy)
                           : Evaluation{};
    double factor = (n % 2 ? -1.0 : 1.0) * scale;
    return Evaluation{factor * inner.value, scale * inner.est_error,
                      inner.terms_used, inner.flags};
}

Evaluation q_neumann(double nu, double x, const QParam& q,
                     const TruncationPolicy& policy) {
    policy.validate();
    require_positive_x(x, "q_neumann");
    OrderClass oc = OrderClass::classify(nu);
    if (oc.is_integer) {
        if (oc.n == 0)
            return q_neumann_zero(x, q, policy);
        if (oc.n >= 1)
            return q_neumann_int(static_cast<int>(oc.n), x, q, policy);
        return q_neumann_negative(static_cast<int>(-oc.n), x, q, policy);
    }
    Evaluation e = q_neumann_generic(nu, x, q, policy);
    if (oc.in_warning_zone())
        e.flags |= CancellationRisk;
    return e;
}

} // namespace qsf
