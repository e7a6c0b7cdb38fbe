#include <doctest.h>

#include <cmath>
#include <vector>

#include "qsf/qcore.hpp"

using namespace qsf;

namespace {

// Referee: Gamma_q straight from the infinite product
//   Gamma_q(nu) = (1-q)^{1-nu} prod_{l>=0} (1-q^{l+1})/(1-q^{nu+l}),
// truncated once q^l is far below double precision. Shares nothing with the
// library's log-series path.
double gamma_product(double nu, double q) {
    long double acc = std::pow((long double)(1.0 - q), (long double)(1.0 - nu));
    for (int l = 0; l < 2500; ++l) {
        acc *= (1.0L - std::pow((long double)q, (long double)(l + 1))) /
               (1.0L - std::pow((long double)q, (long double)(nu + l)));
    }
    return static_cast<double>(acc);
}

double psi_direct(double nu, double q) {
    long double lq = std::log((long double)q);
    long double acc = -std::log1p(-(long double)q);
    for (int l = 0; l < 6000; ++l) {
        long double p = std::pow((long double)q, (long double)(nu + l));
        acc += lq * p / (1.0L - p);
    }
    return static_cast<double>(acc);
}

} // namespace

TEST_CASE("q-gamma matches the defining product on a grid") {
    for (double qv : {0.3, 0.5, 0.9}) {
        QParam q(qv);
        for (double nu : {0.3, 0.5, 1.7, 2.5, 4.25, -0.7, -1.3, -2.6}) {
            double got = q_gamma(nu, q).value;
            double want = gamma_product(nu, qv);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("q-gamma at small integers") {
    QParam q(0.5);
    CHECK(q_gamma(1.0, q).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_gamma(2.0, q).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_gamma(3.0, q).value == doctest::Approx(1.5).epsilon(1e-14));
    // [3]_q! = (1+q)(1+q+q^2)
    CHECK(q_gamma(4.0, q).value == doctest::Approx(1.5 * 1.75).epsilon(1e-14));
}

TEST_CASE("frozen q-gamma and q-psi values") {
    QParam q5(0.5), q3(0.3), q9(0.9);
    CHECK(log_q_gamma(0.5, q5).value ==
          doctest::Approx(0.45236951172055617771).epsilon(1e-13));
    CHECK(q_gamma(1.5, q9).value ==
          doctest::Approx(0.89197888302376402023).epsilon(1e-12));
    CHECK(q_gamma(2.5, q3).value ==
          doctest::Approx(1.123947629202301810973).epsilon(1e-13));
    CHECK(q_gamma(-0.5, q5).value ==
          doctest::Approx(-1.897611363543843929228).epsilon(1e-13));
    CHECK(q_gamma(-1.5, q5).value ==
          doctest::Approx(0.5189190583155611193181).epsilon(1e-13));
    CHECK(q_psi(0.5, q5).value ==
          doctest::Approx(-1.638546357699616311587).epsilon(1e-13));
    CHECK(q_psi(2.75, q3).value ==
          doctest::Approx(0.2921033812247298438922).epsilon(1e-13));
    CHECK(q_psi(-0.5, q5).value ==
          doctest::Approx(0.7280061468888214989612).epsilon(1e-13));
    CHECK(q_euler_constant(q5).value ==
          doctest::Approx(0.42052903435604577978).epsilon(1e-13));
}

TEST_CASE("q-psi matches the direct sum on a grid") {
    for (double qv : {0.3, 0.5, 0.9}) {
        QParam q(qv);
        for (double nu : {0.25, 1.0, 2.75, 5.5, -0.5, -1.75})
            CHECK(q_psi(nu, q).value ==
                  doctest::Approx(psi_direct(nu, qv)).epsilon(1e-12));
    }
}

TEST_CASE("negative noninteger q-gamma alternates sign like the classical one") {
    QParam q(0.5);
    CHECK(q_gamma(-0.5, q).value < 0.0);
    CHECK(q_gamma(-1.5, q).value > 0.0);
    CHECK(q_gamma(-2.5, q).value < 0.0);
    CHECK_THROWS_AS((void)log_q_gamma(-0.5, q), DomainError);
}

TEST_CASE("poles of q-gamma and q-psi are rejected") {
    QParam q(0.5);
    for (double nu : {0.0, -1.0, -2.0, -7.0}) {
        CHECK_THROWS_AS((void)q_gamma(nu, q), PoleError);
        CHECK_THROWS_AS((void)q_psi(nu, q), PoleError);
    }
    CHECK_THROWS_AS((void)q_gamma(-1.0 + 1e-9, q), PoleError);
    CHECK_NOTHROW((void)q_gamma(-1.0 + 1e-7, q));
}

TEST_CASE("QParam validates its range") {
    CHECK_THROWS_AS(QParam(0.0), DomainError);
    CHECK_THROWS_AS(QParam(1.0), DomainError);
    CHECK_THROWS_AS(QParam(-0.5), DomainError);
    CHECK_THROWS_AS(QParam(1.5), DomainError);
    CHECK_THROWS_AS(QParam(0.99995), DomainError);
    CHECK_NOTHROW(QParam(0.9999));
}

TEST_CASE("TruncationPolicy validates") {
    TruncationPolicy p;
    p.rel_tol = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = TruncationPolicy{};
    p.max_terms = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = TruncationPolicy{};
    p.stop_run = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("closed-form residues are mutually consistent") {
    for (double qv : {0.3, 0.5, 0.9}) {
        QParam q(qv);
        for (int n : {0, 1, 2, 3}) {
            CHECK(q_psi_residue(n, q) == -1.0);
            double ratio = q_psi_residue(n, q) / q_gamma_residue(n, q);
            CHECK(psi_over_gamma_limit(n, q) ==
                  doctest::Approx(ratio).epsilon(1e-14));
        }
    }
}

TEST_CASE("est_error bounds the distance to a tighter evaluation") {
    QParam q(0.9);
    TruncationPolicy loose;
    loose.rel_tol = 1e-8;
    TruncationPolicy tight;
    tight.rel_tol = 1e-16;
    for (double nu : {0.5, 1.7, 3.25}) {
        Evaluation a = q_gamma(nu, q, loose);
        Evaluation b = q_gamma(nu, q, tight);
        CHECK(std::fabs(a.value - b.value) <= a.est_error + 1e-15 * std::fabs(b.value));
        Evaluation c = q_psi(nu, q, loose);
        Evaluation d = q_psi(nu, q, tight);
        CHECK(std::fabs(c.value - d.value) <= c.est_error + 1e-15 * std::fabs(d.value));
    }
}

TEST_CASE("slow-convergence flag near q = 1") {
    QParam q(0.9995);
    CHECK((q_psi(1.5, q).flags & SlowConvergence) != 0);
    QParam q2(0.5);
    CHECK((q_psi(1.5, q2).flags & SlowConvergence) == 0);
}

TEST_CASE("flag_names formatting") {
    CHECK(flag_names(0) == "-");
    CHECK(flag_names(NearPole) == "NearPole");
    CHECK(flag_names(SlowConvergence | CancellationRisk) ==
          "SlowConvergence|CancellationRisk");
}
