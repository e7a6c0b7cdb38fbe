// Command line front end: point evaluation, table generation and identity
// verification with machine-readable reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsf/qbessel.hpp"
#include "qsf/qcore.hpp"
#include "qsf/qneumann.hpp"
#include "qsf/verify.hpp"

namespace {

using nlohmann::json;

// 17 significant digits, exponent without sign padding: 1.5000000000000000e0
std::string fmt17(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    std::string s(buf);
    auto e = s.find('e');
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = exp[0] == '-';
    std::size_t i = (exp[0] == '+' || exp[0] == '-') ? 1 : 0;
    while (i + 1 < exp.size() && exp[i] == '0')
        ++i;
    return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

struct Range {
    double a = 0.0, b = 0.0;
    int steps = 1;

    std::vector<double> points() const {
        std::vector<double> out;
        if (steps == 1) {
            out.push_back(a);
            return out;
        }
        for (int i = 0; i < steps; ++i)
            out.push_back(a + (b - a) * i / (steps - 1));
        return out;
    }
};

Range parse_range(const std::string& text) {
    Range r;
    char trailing;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.a, &r.b, &r.steps,
                    &trailing) != 3 ||
        r.steps < 1)
        throw CLI::ValidationError("range", "malformed range '" + text +
                                                "', expected a:b:steps with steps >= 1");
    return r;
}

const std::vector<std::string> kFns{"qgamma", "qpsi", "ceuler", "jq", "nq"};

qsf::Evaluation eval_fn(const std::string& fn, const qsf::QParam& q, double nu,
                        double x, const qsf::TruncationPolicy& pol) {
    if (fn == "qgamma")
        return qsf::q_gamma(nu, q, pol);
    if (fn == "qpsi")
        return qsf::q_psi(nu, q, pol);
    if (fn == "ceuler")
        return qsf::q_euler_constant(q, pol);
    if (fn == "jq")
        return qsf::hahn_exton_j(nu, x, q, pol);
    if (fn == "nq")
        return qsf::q_neumann(nu, x, q, pol);
    throw qsf::DomainError("unknown function: " + fn);
}

int run_eval(const std::string& fn, double qv, double nu,
             std::optional<double> x, const qsf::TruncationPolicy& pol) {
    qsf::QParam q(qv);
    qsf::Evaluation e = eval_fn(fn, q, nu, x.value_or(0.0), pol);
    std::cout << fmt17(e.value) << " " << fmt17(e.est_error) << " "
              << e.terms_used << " " << qsf::flag_names(e.flags) << "\n";
    return 0;
}

int run_table(const std::string& fn, double qv, const Range& nu_range,
              const Range& x_range, const qsf::TruncationPolicy& pol) {
    qsf::QParam q(qv);
    std::cout << "q,nu,x,value,est_error,terms,flags\n";
    for (double nu : nu_range.points())
        for (double x : x_range.points()) {
            std::cout << fmt17(qv) << "," << fmt17(nu) << "," << fmt17(x)
                      << ",";
            try {
                qsf::Evaluation e = eval_fn(fn, q, nu, x, pol);
                std::cout << fmt17(e.value) << "," << fmt17(e.est_error) << ","
                          << e.terms_used << "," << qsf::flag_names(e.flags)
                          << "\n";
            } catch (const qsf::QError& err) {
                // keep the row; record the failure in the flags column
                std::string what = err.what();
                for (char& ch : what)
                    if (ch == ',' || ch == '\n')
                        ch = ';';
                std::cout << "nan,nan,0," << what << "\n";
            }
        }
    return 0;
}

int run_verify(const std::string& suite, const std::string& report,
               const qsf::TruncationPolicy& pol) {
    qsf::verify::SweepConfig cfg;
    cfg.policy = pol;
    auto records = qsf::verify::run_suite(suite, cfg);

    long passed = 0;
    for (const auto& r : records)
        if (r.pass)
            ++passed;
    long failed = static_cast<long>(records.size()) - passed;

    if (report == "json") {
        json cases = json::array();
        for (const auto& r : records) {
            std::string extras = r.extras;
            if (!r.diagnostic.empty())
                extras += (extras.empty() ? "" : ";") + r.diagnostic;
            cases.push_back({
                {"identity", qsf::verify::identity_name(r.identity)},
                {"params",
                 {{"q", r.q}, {"nu", r.nu}, {"x", r.x}, {"extras", extras}}},
                {"residual", r.residual},
                {"scale", r.scale},
                {"tol", r.tol},
                {"pass", r.pass},
            });
        }
        json doc{
            {"suite", suite},
            {"cases", std::move(cases)},
            {"summary",
             {{"total", static_cast<long>(records.size())},
              {"passed", passed},
              {"failed", failed}}},
        };
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& r : records)
            if (!r.pass)
                std::cout << "FAIL " << qsf::verify::identity_name(r.identity)
                          << " q=" << fmt17(r.q) << " nu=" << fmt17(r.nu)
                          << " x=" << fmt17(r.x)
                          << (r.extras.empty() ? "" : " " + r.extras)
                          << " residual=" << fmt17(r.residual)
                          << " scale=" << fmt17(r.scale)
                          << " tol=" << fmt17(r.tol)
                          << (r.diagnostic.empty() ? "" : " " + r.diagnostic)
                          << "\n";
        std::cout << "suite " << suite << ": " << records.size() << " cases, "
                  << passed << " passed, " << failed << " failed\n";
    }
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-special-function evaluator and identity verifier"};
    app.require_subcommand(1);

    qsf::TruncationPolicy pol;
    app.add_option("--rel-tol", pol.rel_tol, "series truncation tolerance");
    app.add_option("--max-terms", pol.max_terms, "series term budget");

    std::string fn, suite = "all", report = "text", nu_range_s, x_range_s;
    double qv = 0.5, nu = 0.0;
    std::optional<double> x;

    auto* eval = app.add_subcommand("eval", "evaluate one function at a point");
    eval->add_option("--fn", fn, "function")
        ->required()
        ->check(CLI::IsMember(kFns));
    eval->add_option("--q", qv, "deformation parameter")->required();
    eval->add_option("--nu", nu, "order");
    eval->add_option("--x", x, "argument (required for jq/nq)");

    auto* table = app.add_subcommand("table", "CSV table over a grid");
    table->add_option("--fn", fn, "function")
        ->required()
        ->check(CLI::IsMember(kFns));
    table->add_option("--q", qv, "deformation parameter")->required();
    table->add_option("--nu-range", nu_range_s, "a:b:steps")->required();
    table->add_option("--x-range", x_range_s, "a:b:steps")->required();
    std::string format = "csv";
    table->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv"}));

    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("--suite", suite, "suite name")
        ->check(CLI::IsMember(qsf::verify::suite_names()));
    verify->add_option("--report", report, "report format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
        if (eval->parsed() && (fn == "jq" || fn == "nq") && !x.has_value())
            throw CLI::ValidationError("--x", "required for jq/nq");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (eval->parsed())
            return run_eval(fn, qv, nu, x, pol);
        if (table->parsed()) {
            Range nr, xr;
            try {
                nr = parse_range(nu_range_s);
                xr = parse_range(x_range_s);
            } catch (const CLI::ParseError& e) {
                std::cerr << e.what() << "\n";
                return 2;
            }
            return run_table(fn, qv, nr, xr, pol);
        }
        return run_verify(suite, report, pol);
    } catch (const qsf::QError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
