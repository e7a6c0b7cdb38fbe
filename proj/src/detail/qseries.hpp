#pragma once

// Series evaluation kernels for the q-gamma, q-psi, Hahn-Exton q-Bessel and
// q-Neumann functions, templated on the working real type. The public API
// instantiates them with double; the bilateral product sums instantiate them
// with a quad type because their terms need J/N at arguments q^{z/2} where
// the alternating series cancels catastrophically.

#include <cmath>
#include <limits>

#include "qsf/types.hpp"
#include "real_ops.hpp"

namespace qsf::detail {

template <class Real>
struct Ctx {
    Real q;
    Real log_q;
    Real one_minus_q; // 1 - q
};

template <class Real>
Ctx<Real> make_ctx(const QParam& qp) {
    using std::log;
    Real q = Real(qp.value);
    return Ctx<Real>{q, log(q), Real(1) - q};
}

template <class Real>
Real pi_g() {
    using std::acos;
    return acos(Real(-1));
}

template <class Real>
Real qpow(const Ctx<Real>& c, const Real& t) {
    using std::exp;
    return exp(t * c.log_q);
}

// 1 - q^t, accurate for small t.
template <class Real>
Real one_minus_qpow(const Ctx<Real>& c, const Real& t) {
    return -expm1_g(t * c.log_q);
}

// q^t / (1 - q^t)
template <class Real>
Real q_ratio(const Ctx<Real>& c, const Real& t) {
    return qpow(c, t) / one_minus_qpow(c, t);
}

template <class Real>
double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
struct Series {
    Real value{0};
    Real est_error{0};
    long terms = 0;
    unsigned flags = 0;
};

template <class Real>
struct SignedLog {
    Real log_abs{0};
    int sign = 1;
    Real est_error{0};
    long terms = 0;
    unsigned flags = 0;
};

// Distance from nu to the nearest pole of Gamma_q / psi_q (the nonpositive
// integers); *pole receives that integer.
inline double pole_distance(double nu, long* pole = nullptr) {
    double m = std::min(std::round(nu), 0.0);
    if (pole)
        *pole = static_cast<long>(m);
    return std::fabs(nu - m);
}

inline void check_pole(double nu, const TruncationPolicy& pol) {
    long m = 0;
    if (pole_distance(nu, &m) < pol.pole_eps)
        throw PoleError("argument nu=" + std::to_string(nu) +
                        " within pole_eps of the pole at " + std::to_string(m));
}

inline unsigned slow_q_flag(double q) {
    return q > 0.999 ? SlowConvergence : 0u;
}

// log Gamma_q(nu) in the standard convention:
//   (1-nu) log(1-q) + sum_{l>=1} [log(1-q^l) - log(1-q^{nu+l-1})]
// For negative noninteger nu finitely many denominator factors are negative;
// the overall sign is returned separately.
template <class Real>
SignedLog<Real> log_q_gamma_series(const Real& nu, const Ctx<Real>& c,
                                   const TruncationPolicy& pol) {
    using std::fabs;
    using std::log;
    check_pole(to_double(nu), pol);

    SignedLog<Real> out;
    out.flags = slow_q_flag(to_double(c.q));
    NeumaierSum<Real> acc;
    acc.add((Real(1) - nu) * log1p_g(-c.q));

    int run = 0;
    long l = 1;
    Real last{0};
    for (; l <= pol.max_terms; ++l) {
        Real e2 = nu + Real(l - 1); // exponent of the denominator factor
        Real qa = qpow(c, Real(l));
        Real b = one_minus_qpow(c, e2);
        Real term;
        if (b < 0) {
            out.sign = -out.sign;
            term = log1p_g(-qa) - log(-b);
        } else {
            term = log1p_g(-qa) - log(b);
        }
        acc.add(term);
        last = fabs(term);
        // stop once the geometric tail bound, not just the last term, is small
        if (to_double(e2) > 0.0 && last * c.q / c.one_minus_q < Real(pol.rel_tol)) {
            if (++run >= pol.stop_run)
                break;
        } else {
            run = 0;
        }
    }
    if (l > pol.max_terms)
        throw ConvergenceError("log_q_gamma: max_terms reached");
    out.log_abs = acc.value();
    out.est_error = last * c.q / c.one_minus_q + Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = l;
    return out;
}

// psi_q(nu) = -log(1-q) + log q * sum_{l>=0} q^{nu+l}/(1-q^{nu+l})
template <class Real>
Series<Real> q_psi_series(const Real& nu, const Ctx<Real>& c,
                          const TruncationPolicy& pol) {
    using std::fabs;
    check_pole(to_double(nu), pol);

    Series<Real> out;
    out.flags = slow_q_flag(to_double(c.q));
    NeumaierSum<Real> acc;
    acc.add(-log1p_g(-c.q));

    int run = 0;
    long l = 0;
    for (; l < pol.max_terms; ++l) {
        Real e = nu + Real(l);
        Real term = c.log_q * q_ratio(c, e);
        acc.add(term);
        if (to_double(e) > 0.0 &&
            fabs(term) < Real(pol.rel_tol) * (fabs(acc.value()) + Real(1))) {
            if (++run >= pol.stop_run)
                break;
        } else {
            run = 0;
        }
    }
    if (l >= pol.max_terms)
        throw ConvergenceError("q_psi: max_terms reached");
    // geometric tail bound of the series
    Real tail = qpow(c, nu + Real(l + 1)) * fabs(c.log_q) /
                (c.one_minus_q * c.one_minus_q);
    out.value = acc.value();
    out.est_error = tail + Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = l + 1;
    return out;
}

// Gamma_q(n) for integer n >= 1, via the terminating product [n-1]_q!.
template <class Real>
Real q_gamma_int(long n, const Ctx<Real>& c) {
    Real g{1};
    for (long k = 1; k < n; ++k)
        g *= one_minus_qpow(c, Real(k)) / c.one_minus_q;
    return g;
}

// Multiplier taking the Hahn-Exton series term of index k-1 to index k.
template <class Real>
Real j_term_ratio(long k, const Real& nu, const Real& x2, const Ctx<Real>& c) {
    return -qpow(c, Real(k)) * x2 * c.one_minus_q * c.one_minus_q /
           (one_minus_qpow(c, Real(k)) * one_minus_qpow(c, nu + Real(k)));
}

// Hahn-Exton q-Bessel power series. Caller guarantees x > 0 and that
// nu is not a negative integer (negative integer orders are routed through
// the shifted series / the order-reflection form).
template <class Real>
Series<Real> bessel_j_series(const Real& nu, const Real& x, const Ctx<Real>& c,
                             const TruncationPolicy& pol) {
    using std::exp;
    using std::fabs;
    using std::log;

    Series<Real> out;
    out.flags = slow_q_flag(to_double(c.q));

    SignedLog<Real> lg = log_q_gamma_series(nu + Real(1), c, pol);
    Real term = Real(lg.sign) * exp(nu * log(x) - lg.log_abs);
    Real x2 = x * x;

    NeumaierSum<Real> acc;
    acc.add(term);
    int run = 0;
    long k = 1;
    for (; k <= pol.max_terms; ++k) {
        Real prev = fabs(term);
        term *= j_term_ratio(k, nu, x2, c);
        Real a = fabs(term);
        if (a < prev && a <= Real(pol.rel_tol) * fabs(acc.value()) + Real(1e-320)) {
            if (++run >= pol.stop_run)
                break; // term is the first omitted one
        } else {
            run = 0;
        }
        acc.add(term);
    }
    if (k > pol.max_terms)
        throw ConvergenceError("hahn_exton_j: max_terms reached");
    out.value = acc.value();
    // lg truncation scales every term uniformly => relative error lg.est_error
    out.est_error = fabs(term) + fabs(acc.value()) * lg.est_error +
                    Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = k;
    if (eps_g<Real>() * acc.abs_sum > Real(pol.rel_tol) * fabs(out.value))
        out.flags |= CancellationRisk;
    return out;
}

// J_{-n} by direct limit-convention summation: the terms with k < n vanish
// against the Gamma_q poles, so the series starts at k = n.
template <class Real>
Series<Real> bessel_j_neg_int_series(long n, const Real& x, const Ctx<Real>& c,
                                     const TruncationPolicy& pol) {
    using std::fabs;
    using std::pow;

    Series<Real> out;
    out.flags = slow_q_flag(to_double(c.q));
    // first surviving term, k = n:
    //   (-1)^n q^{n(n+1)/2} x^{n} / (Gamma_q(n+1) Gamma_q(1))
    Real term = (n % 2 ? Real(-1) : Real(1)) *
                qpow(c, Real(n) * Real(n + 1) / Real(2)) * pow(x, Real(n)) /
                q_gamma_int(n + 1, c);
    Real x2 = x * x;
    Real nnu = Real(-n);

    NeumaierSum<Real> acc;
    acc.add(term);
    int run = 0;
    long k = n + 1;
    for (; k <= pol.max_terms; ++k) {
        Real prev = fabs(term);
        term *= j_term_ratio(k, nnu, x2, c);
        Real a = fabs(term);
        if (a < prev && a <= Real(pol.rel_tol) * fabs(acc.value()) + Real(1e-320)) {
            if (++run >= pol.stop_run)
                break;
        } else {
            run = 0;
        }
        acc.add(term);
    }
    if (k > pol.max_terms)
        throw ConvergenceError("j_negative_int: max_terms reached");
    out.value = acc.value();
    out.est_error = fabs(term) + Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = k - n;
    return out;
}

// pi * N_n for integer n >= 0 via the C_q closed forms; the n = 0 and n >= 1
// cases differ in their inner harmonic-type sums.
template <class Real>
Series<Real> neumann_int_cq_pi(long n, const Real& x, const Ctx<Real>& c,
                               const TruncationPolicy& pol) {
    using std::fabs;
    using std::log;
    using std::pow;

    Series<Real> out;
    out.flags = slow_q_flag(to_double(c.q));

    Series<Real> jn = bessel_j_series(Real(n), x, c, pol);
    Series<Real> psi1 = q_psi_series(Real(1), c, pol);
    Real cq = -psi1.value;
    Real lq = c.log_q;
    Real log_arg = Real(0.25) * lq + log(x); // log(q^{1/4} x)

    NeumaierSum<Real> acc;
    acc.add(Real(2) * jn.value * (log_arg + cq));

    if (n >= 1) {
        for (long k = 0; k < n; ++k)
            acc.add(lq / c.one_minus_q * q_gamma_int(n - k, c) /
                    q_gamma_int(k + 1, c) * pow(x, Real(2 * k - n)));
        Real hq{0};
        for (long k = 1; k <= n; ++k)
            hq += q_ratio(c, Real(k));
        acc.add(lq * pow(x, Real(n)) / q_gamma_int(n + 1, c) * hq);
    }

    Real term = pow(x, Real(n)) / q_gamma_int(n + 1, c); // series term T_k at k=0
    Real x2 = x * x;
    Real nR = Real(n);
    Real s1{0}; // sum_{l<=k+n} q^l/(1-q^l), n>=1 path
    Real s2{0}; // sum_{l<=k} 1/(1-q^l)
    for (long l = 1; l <= n; ++l)
        s1 += q_ratio(c, Real(l));
    Real sb{0}; // sum_{l<=k} (1+q^l)/(1-q^l), n=0 path

    int run = 0;
    long k = 1;
    for (; k <= pol.max_terms; ++k) {
        term *= j_term_ratio(k, nR, x2, c);
        Real inner;
        if (n == 0) {
            Real qk = qpow(c, Real(k));
            sb += (Real(1) + qk) / (Real(1) - qk);
            inner = sb;
        } else {
            s1 += q_ratio(c, Real(k + n));
            s2 += Real(1) / one_minus_qpow(c, Real(k));
            inner = s1 + s2;
        }
        Real contrib = lq * term * inner;
        acc.add(contrib);
        if (fabs(contrib) <= Real(pol.rel_tol) * (fabs(acc.value()) + Real(1))) {
            if (++run >= pol.stop_run)
                break;
        } else {
            run = 0;
        }
    }
    if (k > pol.max_terms)
        throw ConvergenceError("q_neumann_int: max_terms reached");

    out.value = acc.value();
    out.est_error = fabs(lq * term) * (fabs(x2) + Real(1)) +
                    Real(2) * (jn.est_error * (fabs(log_arg) + fabs(cq)) +
                               fabs(jn.value) * psi1.est_error) +
                    Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = k + jn.terms + psi1.terms;
    out.flags |= jn.flags;
    return out;
}

// pi * N_n via the psi_q form (order-derivative construction). Independent
// referee path for the C_q form; the k log q term enters with a minus sign
// (the derivation's sign; see the recurrence ψ_q(m+1)=ψ_q(m)-log q·q^m/(1-q^m)).
template <class Real>
Series<Real> neumann_int_psi_pi(long n, const Real& x, const Ctx<Real>& c,
                                const TruncationPolicy& pol) {
    using std::fabs;
    using std::log;
    using std::pow;

    Series<Real> out;
    out.flags = slow_q_flag(to_double(c.q));

    Series<Real> jn = bessel_j_series(Real(n), x, c, pol);
    Series<Real> psi1 = q_psi_series(Real(1), c, pol);
    Real lq = c.log_q;
    Real log_arg = Real(0.25) * lq + log(x);

    NeumaierSum<Real> acc;
    acc.add(Real(2) * jn.value * log_arg);
    if (n >= 1) {
        for (long k = 0; k < n; ++k)
            acc.add(lq / c.one_minus_q * q_gamma_int(n - k, c) /
                    q_gamma_int(k + 1, c) * pow(x, Real(2 * k - n)));
    }

    Real psi_a = psi1.value; // psi_q(k+1)
    Real psi_b = psi1.value; // psi_q(k+n+1)
    for (long l = 1; l <= n; ++l)
        psi_b -= lq * q_ratio(c, Real(l));

    Real term = pow(x, Real(n)) / q_gamma_int(n + 1, c);
    Real x2 = x * x;
    Real nR = Real(n);

    acc.add(-term * (psi_b + psi_a)); // k = 0
    int run = 0;
    long k = 1;
    for (; k <= pol.max_terms; ++k) {
        term *= j_term_ratio(k, nR, x2, c);
        psi_a -= lq * q_ratio(c, Real(k));
        psi_b -= lq * q_ratio(c, Real(k + n));
        Real contrib = -term * (psi_b + psi_a - Real(k) * lq);
        acc.add(contrib);
        if (fabs(contrib) <= Real(pol.rel_tol) * (fabs(acc.value()) + Real(1))) {
            if (++run >= pol.stop_run)
                break;
        } else {
            run = 0;
        }
    }
    if (k > pol.max_terms)
        throw ConvergenceError("q_neumann_int_psi_form: max_terms reached");

    out.value = acc.value();
    out.est_error = fabs(term) * (fabs(psi_a) + fabs(psi_b) + fabs(Real(k) * lq)) +
                    Real(2) * fabs(jn.est_error * log_arg) +
                    Real(4) * eps_g<Real>() * acc.abs_sum;
    out.terms = k + jn.terms + psi1.terms;
    out.flags |= jn.flags;
    return out;
}

// N_nu for noninteger nu, cos/sin combination. frac is reduced so that sin/cos stay
// accurate arbitrarily close to integer order.
template <class Real>
Series<Real> neumann_generic_series(const Real& nu, const Real& x,
                                    const Ctx<Real>& c, const TruncationPolicy& pol,
                                    double eps_int, double near_int) {
    using std::cos;
    using std::fabs;
    using std::sin;

    double nd = to_double(nu);
    long n0 = std::llround(nd);
    double frac_d = nd - static_cast<double>(n0);
    if (std::fabs(frac_d) <= eps_int)
        throw NearIntegerError("q_neumann_generic: order within eps_int of integer " +
                               std::to_string(n0));

    Real frac = nu - Real(n0);
    Real pi = pi_g<Real>();
    Real sg = (n0 % 2 != 0) ? Real(-1) : Real(1);
    Real sin_pi_nu = sg * sin(pi * frac);
    Real cos_pi_nu = sg * cos(pi * frac);

    Series<Real> j_pos = bessel_j_series(nu, x, c, pol);
    Real scale = qpow(c, -nu / Real(2));
    Series<Real> j_neg = bessel_j_series(-nu, scale * x, c, pol);

    Series<Real> out;
    out.flags = j_pos.flags | j_neg.flags;
    out.value = (cos_pi_nu * j_pos.value - scale * j_neg.value) / sin_pi_nu;
    out.est_error = (j_pos.est_error + scale * j_neg.est_error +
                     eps_g<Real>() * (fabs(cos_pi_nu * j_pos.value) +
                                      fabs(scale * j_neg.value))) /
                    fabs(sin_pi_nu);
    out.terms = j_pos.terms + j_neg.terms;
    if (std::fabs(frac_d) < near_int)
        out.flags |= CancellationRisk;
    return out;
}

// Dispatcher over the order classification.
template <class Real>
Series<Real> neumann_any(const Real& nu, const Real& x, const Ctx<Real>& c,
                         const TruncationPolicy& pol, double eps_int,
                         double near_int) {
    double nd = to_double(nu);
    long n0 = std::llround(nd);
    double dist = std::fabs(nd - static_cast<double>(n0));
    if (dist <= eps_int) {
        if (n0 >= 0) {
            Series<Real> s = neumann_int_cq_pi(n0, x, c, pol);
            Real pi = pi_g<Real>();
            s.value /= pi;
            s.est_error /= pi;
            return s;
        }
        long m = -n0;
        Real arg = qpow(c, Real(m) / Real(2)) * x;
        Series<Real> s = neumann_int_cq_pi(m, arg, c, pol);
        Real pi = pi_g<Real>();
        Real factor = (m % 2 ? Real(-1) : Real(1)) * qpow(c, Real(m) / Real(2));
        s.value = factor * s.value / pi;
        s.est_error = qpow(c, Real(m) / Real(2)) * s.est_error / pi;
        return s;
    }
    Series<Real> s = neumann_generic_series(nu, x, c, pol, eps_int, near_int);
    if (dist < near_int)
        s.flags |= CancellationRisk;
    return s;
}

} // namespace qsf::detail
