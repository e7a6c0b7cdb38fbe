#include "qsf/oracle.hpp"

#include <cmath>

#include "detail/real_ops.hpp"

namespace qsf::oracle {

namespace {

constexpr long kEulerN = 10000000;

} // namespace

double classical_euler_constant() {
    static const double value = [] {
        detail::NeumaierSum<double> h;
        for (long l = 1; l <= kEulerN; ++l)
            h.add(1.0 / static_cast<double>(l));
        // midpoint correction halves the leading 1/(2n) bias of the raw limit
        return h.value() - std::log(static_cast<double>(kEulerN)) -
               0.5 / static_cast<double>(kEulerN);
    }();
    return value;
}

double classical_digamma(double nu) {
    if (!(nu > 0.0))
        throw DomainError("classical_digamma: nu must be > 0");
    const long cutoff = 100000;
    detail::NeumaierSum<double> acc;
    for (long l = 0; l < cutoff; ++l)
        acc.add(1.0 / (l + 1.0) - 1.0 / (nu + l));
    // Euler-Maclaurin tail: integral + f(L)/2 - f'(L)/12
    double L = static_cast<double>(cutoff);
    double fL = 1.0 / (L + 1.0) - 1.0 / (nu + L);
    double dfL = -1.0 / ((L + 1.0) * (L + 1.0)) + 1.0 / ((nu + L) * (nu + L));
    double tail = std::log((nu + L) / (L + 1.0)) + 0.5 * fL - dfL / 12.0;
    return -classical_euler_constant() + acc.value() + tail;
}

double classical_bessel_j(int n, double z) {
    if (n < 0)
        throw DomainError("classical_bessel_j: n must be >= 0");
    if (z < 0.0)
        throw DomainError("classical_bessel_j: z must be >= 0");
    double h = 0.5 * z;
    double term = 1.0;
    for (int j = 1; j <= n; ++j)
        term *= h / j; // (z/2)^n / n!
    double sum = term;
    double h2 = h * h;
    for (int k = 1; k < 1000; ++k) {
        term *= -h2 / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::fabs(term) < 1e-15 * (std::fabs(sum) + 1e-300) &&
            std::fabs(term) < 1e-18)
            break;
    }
    return sum;
}

double classical_neumann_y(int n, double z) {
    if (n < 0)
        throw DomainError("classical_neumann_y: n must be >= 0");
    if (!(z > 0.0))
        throw DomainError("classical_neumann_y: z must be > 0");
    const double pi = std::acos(-1.0);
    double h = 0.5 * z;
    double h2 = h * h;
    double C = classical_euler_constant();

    double s = 2.0 / pi * classical_bessel_j(n, z) * (std::log(h) + C);

    if (n >= 1) {
        // finite singular sum: (n-k-1)!/k! (z/2)^{2k-n}
        double fact = 1.0; // (n-1)!
        for (int j = 2; j < n; ++j)
            fact *= j;
        double term = fact * std::pow(h, -n);
        for (int k = 0; k < n; ++k) {
            s -= term / pi;
            if (k + 1 < n)
                term *= h2 / ((k + 1.0) * (n - k - 1.0));
        }
    }

    // harmonic-weighted series
    double term = 1.0;
    for (int j = 1; j <= n; ++j)
        term *= h / j;
    double hk = 0.0, hkn = 0.0;
    for (int j = 1; j <= n; ++j)
        hkn += 1.0 / j;
    double acc = term * (hk + hkn);
    for (int k = 1; k < 1000; ++k) {
        term *= -h2 / (static_cast<double>(k) * (k + n));
        hk += 1.0 / k;
        hkn += 1.0 / (k + n);
        double contrib = term * (hk + hkn);
        acc += contrib;
        if (std::fabs(contrib) < 1e-16 * (std::fabs(acc) + 1.0))
            break;
    }
    return s - acc / pi;
}

double finite_difference(const std::function<double(double)>& f, double at,
                         double step) {
    if (!(step > 0.0))
        throw DomainError("finite_difference: step must be > 0");
    return (f(at + step) - f(at - step)) / (2.0 * step);
}

ResidueEstimate estimate_residue(const std::function<double(double)>& f,
                                 double pole, std::vector<double> eps_sequence) {
    if (eps_sequence.size() < 2)
        throw DomainError("estimate_residue: need at least two offsets");
    for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
        if (!(eps_sequence[i] >= 1e-7))
            throw DomainError("estimate_residue: offsets must be >= 1e-7");
        if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1]))
            throw DomainError("estimate_residue: offsets must be strictly decreasing");
    }

    // Neville polynomial extrapolation of g(eps) = eps * f(pole + eps) to eps = 0
    std::vector<double> g(eps_sequence.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = eps_sequence[i] * f(pole + eps_sequence[i]);
    for (std::size_t m = 1; m < g.size(); ++m) {
        for (std::size_t i = 0; i + m < g.size(); ++i) {
            double xi = eps_sequence[i];
            double xj = eps_sequence[i + m];
            g[i] = (xi * g[i + 1] - xj * g[i]) / (xi - xj);
        }
    }

    ResidueEstimate out;
    out.value = g[0];
    out.extrapolation_order = static_cast<int>(eps_sequence.size()) - 1;
    out.eps_sequence = std::move(eps_sequence);
    return out;
}

} // namespace qsf::oracle
