#pragma once

// Identity sweep engine: evaluates every implemented identity over configurable
// grids, produces residual records, and implements the bilateral product
// formula checks.

#include <map>
#include <string>
#include <vector>

#include "qsf/types.hpp"

namespace qsf::verify {

enum class IdentityId {
    DiffEqJ,
    DiffEqN,
    PsiRecForward,
    PsiRecBackward,
    PsiAsymptote,
    PsiIsDerivative,
    GammaFunctional,
    JNegOrder,
    NNegOrder,
    RecurrenceUp,
    RecurrenceDown,
    DualPathN,
    NearIntegerLimit,
    ResidueGamma,
    ResiduePsi,
    PsiOverGamma,
    ClassicalPsiLimit,
    ClassicalJLimit,
    ClassicalNLimit,
    ProductJ,
    ProductN,
};

const char* identity_name(IdentityId id);
std::vector<IdentityId> all_identities();

/// Identities of a named CLI suite
/// (all|diffeq|recurrence|residue|limits|product|dualpath).
/// Throws DomainError for an unknown suite name.
std::vector<IdentityId> suite_identities(const std::string& suite);
std::vector<std::string> suite_names();

/// One grid point's residual for one identity.
struct IdentityResidual {
    IdentityId identity{};
    double q = 0.0;
    double nu = 0.0; // or n; meaning depends on the identity
    double x = 0.0;
    std::string extras;
    double residual = 0.0;
    double scale = 1.0;
    double tol = 0.0;
    bool pass = false;
    std::string diagnostic; // nonempty when the evaluation itself failed
};

/// Grids and tolerances driving the sweeps.
struct SweepConfig {
    std::vector<double> q_grid{0.3, 0.5, 0.9};
    std::vector<double> nu_grid{0.0, 1.0, 2.0, 5.0, 0.5, 2.75};
    std::vector<double> x_grid; // default: 20 log-spaced points in [0.01, 3]
    std::map<IdentityId, double> tol;
    int z_min = -40; // bilateral window hard limits
    int z_max = 80;
    double growth_guard = 1e6;
    TruncationPolicy policy{};

    SweepConfig();
    double tol_for(IdentityId id) const;
    void validate() const;
};

/// Runs one identity over the admissible part of the grid; one record per
/// point, ordered by (q, nu, x). Evaluation failures become failed records
/// with a diagnostic; the sweep never aborts.
std::vector<IdentityResidual> run_identity(IdentityId id, const SweepConfig& cfg);

/// All identities of a suite, concatenated in enumeration order.
std::vector<IdentityResidual> run_suite(const std::string& suite,
                                        const SweepConfig& cfg);

/// Bilateral sum of the J product formula:
///   sum_z q^z J_x(u q^{z/2}) J_{x-nu}(u q^{z/2}) J_nu(u r q^{(y+nu+z)/2}),
/// u = 1/(1-q): the formula is native to the standard Hahn-Exton
/// normalization, whose argument is (1-q) times this library's.
/// Preconditions: x > -1, r > 0, r^2 q^{1+x+y} < 1.
Evaluation product_lhs_J(double x, double y, double nu, double r,
                         const QParam& q, const SweepConfig& cfg = {});

/// Bilateral sum of the N product formula (x = -y = nu/2 specialization):
///   sum_z q^z J_{nu/2}(u q^{z/2}) J_{-nu/2}(u q^{z/2}) N_nu(u r q^{nu/4 + z/2})
/// with u = 1/(1-q) as above. Preconditions: -2 < nu < 2, r > 0, r^2 q < 1.
Evaluation product_lhs_N(double nu, double r, const QParam& q,
                         const SweepConfig& cfg = {});

} // namespace qsf::verify
