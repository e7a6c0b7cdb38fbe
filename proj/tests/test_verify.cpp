#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qsf/verify.hpp"

using namespace qsf;
using namespace qsf::verify;

TEST_CASE("suite names cover every identity exactly once") {
    std::set<IdentityId> seen;
    for (const auto& name : suite_names()) {
        if (name == "all")
            continue;
        for (IdentityId id : suite_identities(name)) {
            CHECK(seen.insert(id).second); // no identity in two suites
        }
    }
    auto all = all_identities();
    CHECK(seen.size() == all.size());
    CHECK_THROWS_AS((void)suite_identities("nosuch"), DomainError);
}

TEST_CASE("identity names are unique and non-empty") {
    std::set<std::string> names;
    for (IdentityId id : all_identities()) {
        std::string n = identity_name(id);
        CHECK(!n.empty());
        CHECK(names.insert(n).second);
    }
}

TEST_CASE("every identity yields at least one record and all pass") {
    SweepConfig cfg;
    cfg.x_grid = {0.25, 1.5}; // trimmed grid keeps this test quick
    for (IdentityId id : all_identities()) {
        auto recs = run_identity(id, cfg);
        CHECK(!recs.empty());
        for (const auto& r : recs) {
            INFO(identity_name(id) << " q=" << r.q << " nu=" << r.nu
                                   << " x=" << r.x << " " << r.extras << " "
                                   << r.diagnostic);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("sweeps are deterministic") {
    SweepConfig cfg;
    cfg.x_grid = {0.5, 1.5};
    auto a = run_suite("product", cfg);
    auto b = run_suite("product", cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].residual == b[i].residual); // bit-identical
        CHECK(a[i].scale == b[i].scale);
        CHECK(a[i].pass == b[i].pass);
    }
}

TEST_CASE("enlarging the bilateral window stays within est_error") {
    QParam q(0.5);
    SweepConfig cfg;
    Evaluation base = product_lhs_J(1.2, 0.3, 0.7, 0.4, q, cfg);
    SweepConfig wide = cfg;
    wide.z_min -= 10;
    wide.z_max += 20;
    Evaluation w = product_lhs_J(1.2, 0.3, 0.7, 0.4, q, wide);
    CHECK(std::fabs(base.value - w.value) <= base.est_error);
}

TEST_CASE("product preconditions are enforced") {
    QParam q(0.5);
    CHECK_THROWS_AS((void)product_lhs_J(-1.5, 0.3, 0.7, 0.4, q),
                    PreconditionError);
    CHECK_THROWS_AS((void)product_lhs_J(1.2, 0.3, 0.7, 0.0, q),
                    PreconditionError);
    QParam q9(0.9);
    CHECK_THROWS_AS((void)product_lhs_J(0.2, 0.2, 0.5, 2.0, q9),
                    PreconditionError);
    CHECK_THROWS_AS((void)product_lhs_N(-2.5, 0.3, q), PreconditionError);
    CHECK_THROWS_AS((void)product_lhs_N(2.5, 0.3, q), PreconditionError);
    CHECK_THROWS_AS((void)product_lhs_N(0.5, 0.0, q), PreconditionError);
}

TEST_CASE("SweepConfig validation") {
    SweepConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SweepConfig bad = cfg;
    bad.q_grid.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.q_grid = {1.5};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.x_grid = {-1.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.z_min = 5;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.growth_guard = 0.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.tol.erase(IdentityId::DiffEqJ);
    CHECK_THROWS_AS((void)bad.tol_for(IdentityId::DiffEqJ), DomainError);
}

TEST_CASE("default x grid is 20 log-spaced points in [0.01, 3]") {
    SweepConfig cfg;
    REQUIRE(cfg.x_grid.size() == 20);
    CHECK(cfg.x_grid.front() == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cfg.x_grid.back() == doctest::Approx(3.0).epsilon(1e-12));
    for (std::size_t i = 1; i + 1 < cfg.x_grid.size(); ++i) {
        double r1 = cfg.x_grid[i] / cfg.x_grid[i - 1];
        double r2 = cfg.x_grid[i + 1] / cfg.x_grid[i];
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
    }
}
