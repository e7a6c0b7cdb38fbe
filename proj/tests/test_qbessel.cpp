#include <doctest.h>

#include <cmath>

#include "qsf/qbessel.hpp"

using namespace qsf;

namespace {

// Referee J: sums the series directly in long double with the q-gamma values
// taken from the defining product. Independent of the library's signed-log /
// ratio-recurrence evaluation.
long double gamma_product_l(long double nu, long double q) {
    long double acc = std::pow(1.0L - q, 1.0L - nu);
    for (int l = 0; l < 2500; ++l)
        acc *= (1.0L - std::pow(q, (long double)(l + 1))) /
               (1.0L - std::pow(q, nu + l));
    return acc;
}

double j_direct(double nu, double x, double q) {
    long double s = 0.0L;
    for (int k = 0; k < 80; ++k) {
        long double t = (k % 2 ? -1.0L : 1.0L) *
                        std::pow((long double)q, 0.5L * k * (k + 1)) *
                        std::pow((long double)x, 2.0L * k + nu) /
                        (gamma_product_l(k + 1.0L, q) *
                         gamma_product_l(k + nu + 1.0L, q));
        s += t;
        if (std::fabs((double)t) < 1e-22 * (std::fabs((double)s) + 1.0) && k > 8)
            break;
    }
    return static_cast<double>(s);
}

} // namespace

TEST_CASE("Hahn-Exton J matches the direct series") {
    for (double qv : {0.3, 0.5, 0.9}) {
        QParam q(qv);
        for (double nu : {0.0, 0.5, 1.0, 2.75})
            for (double x : {0.05, 0.4, 1.0, 2.5})
                CHECK(hahn_exton_j(nu, x, q).value ==
                      doctest::Approx(j_direct(nu, x, qv)).epsilon(1e-12));
    }
}

TEST_CASE("frozen J values") {
    QParam q5(0.5), q3(0.3), q9(0.9);
    CHECK(hahn_exton_j(0.0, 1.0, q5).value ==
          doctest::Approx(0.5533279600435536051).epsilon(1e-13));
    CHECK(hahn_exton_j(1.0, 1.0, q5).value ==
          doctest::Approx(0.697223962409098708261).epsilon(1e-13));
    CHECK(hahn_exton_j(0.5, 1.0, q5).value ==
          doctest::Approx(0.7068395414004046188395).epsilon(1e-13));
    CHECK(hahn_exton_j(2.75, 2.0, q3).value ==
          doctest::Approx(1.244524194631332987998).epsilon(1e-13));
    CHECK(hahn_exton_j(0.0, 2.0, q9).value ==
          doctest::Approx(-0.4036583751701989056644).epsilon(1e-12));
}

TEST_CASE("J at x = 0") {
    QParam q(0.5);
    CHECK(hahn_exton_j(0.0, 0.0, q).value == 1.0);
    CHECK(hahn_exton_j(2.0, 0.0, q).value == 0.0);
    CHECK(hahn_exton_j(0.5, 0.0, q).value == 0.0);
    CHECK_THROWS_AS((void)hahn_exton_j(-0.5, 0.0, q), DomainError);
    CHECK_THROWS_AS((void)hahn_exton_j(0.0, -1.0, q), DomainError);
}

TEST_CASE("negative integer orders route through the reflection") {
    QParam q(0.5);
    for (int n : {1, 2, 3})
        for (double x : {0.25, 1.0, 2.0}) {
            double via_dispatch = hahn_exton_j(-n, x, q).value;
            double direct = j_negative_int(n, x, q).value;
            CHECK(via_dispatch == direct);
            // reflection formula against the positive-order referee
            double scale = std::pow(0.5, 0.5 * n);
            double want = (n % 2 ? -1.0 : 1.0) * scale *
                          j_direct(n, scale * x, 0.5);
            CHECK(direct == doctest::Approx(want).epsilon(1e-12));
        }
    CHECK_THROWS_AS((void)j_negative_int(0, 1.0, q), DomainError);
    CHECK_THROWS_AS((void)j_negative_int(2, 0.0, q), DomainError);
}

TEST_CASE("J satisfies its q-difference equation") {
    for (double qv : {0.3, 0.5, 0.9}) {
        QParam q(qv);
        for (double nu : {0.0, 1.0, 0.5, 2.75})
            for (double x : {0.1, 0.7, 2.0}) {
                auto f = [&](double t) { return hahn_exton_j(nu, t, q).value; };
                CHECK(std::fabs(diff_eq_residual(f, nu, x, q)) < 1e-12);
            }
    }
}

TEST_CASE("diff_eq_residual accepts the zero solution and rejects junk") {
    QParam q(0.5);
    auto zero = [](double) { return 0.0; };
    CHECK(diff_eq_residual(zero, 1.0, 1.0, q) == 0.0);
    auto junk = [](double t) { return 1.0 + t; };
    CHECK(std::fabs(diff_eq_residual(junk, 1.0, 1.0, q)) > 1e-3);
    CHECK_THROWS_AS((void)diff_eq_residual(zero, 1.0, 0.0, q), DomainError);
}

TEST_CASE("J est_error bounds the distance to a tighter evaluation") {
    QParam q(0.9);
    TruncationPolicy loose;
    loose.rel_tol = 1e-8;
    TruncationPolicy tight;
    tight.rel_tol = 1e-16;
    for (double x : {0.5, 1.5, 3.0}) {
        Evaluation a = hahn_exton_j(1.0, x, q, loose);
        Evaluation b = hahn_exton_j(1.0, x, q, tight);
        CHECK(std::fabs(a.value - b.value) <=
              a.est_error + 1e-15 * std::fabs(b.value));
    }
}
