#pragma once

#include <cmath>
#include <type_traits>

namespace qsf::detail {

// expm1/log1p that stay accurate for double and degrade gracefully for
// wider types (where plain exp/log already carry enough guard digits).
template <class Real>
Real expm1_g(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::expm1(x);
    } else {
        using std::exp;
        return exp(x) - Real(1);
    }
}

template <class Real>
Real log1p_g(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::log1p(x);
    } else {
        using std::log;
        return log(Real(1) + x);
    }
}

template <class Real>
Real eps_g() {
    if constexpr (std::is_same_v<Real, double>) {
        return 2.2204460492503131e-16;
    } else {
        return Real(1e-33);
    }
}

// Neumaier compensated accumulator; also tracks sum of magnitudes so the
// caller can judge how much cancellation the sum suffered.
template <class Real>
struct NeumaierSum {
    Real s{0};
    Real c{0};
    Real abs_sum{0};

    void add(const Real& x) {
        using std::fabs;
        Real t = s + x;
        if (fabs(s) >= fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
        abs_sum += fabs(x);
    }

    Real value() const { return s + c; }
};

} // namespace qsf::detail
