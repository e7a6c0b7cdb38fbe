#include <doctest.h>

#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_runner.hpp"

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        out.push_back(line);
    return out;
}

// value est_error terms flags
const std::regex kEvalLine(
    R"(^-?\d\.\d{16}e-?\d+ -?\d\.\d{16}e-?\d+ \d+ \S+\n$)");

} // namespace

TEST_CASE("eval prints value est_error terms flags") {
    auto r = run_cli("eval --fn qgamma --q 0.5 --nu 3");
    CHECK(r.exit_code == 0);
    CHECK(std::regex_match(r.out, kEvalLine));
    CHECK(r.out.substr(0, 6) == "1.5000");
}

TEST_CASE("eval exit codes") {
    CHECK(run_cli("eval --fn jq --q 0.5 --nu 0 --x 0").exit_code == 0);
    CHECK(run_cli("eval --fn qgamma --q 0.5 --nu -2").exit_code == 1);
    CHECK(run_cli("eval --fn qgamma --q 1.5 --nu 1").exit_code == 1);
    CHECK(run_cli("eval --fn nosuch --q 0.5 --nu 1").exit_code == 2);
    CHECK(run_cli("eval --fn jq --q 0.5 --nu 1").exit_code == 2); // missing --x
    CHECK(run_cli("nosuchcommand").exit_code == 2);
}

TEST_CASE("pole diagnostics go to the error stream") {
    auto quiet = run_cli("eval --fn qgamma --q 0.5 --nu -2");
    CHECK(quiet.out.empty());
    auto loud = run_cli("eval --fn qgamma --q 0.5 --nu -2", true);
    CHECK(loud.out.find("pole") != std::string::npos);
}

TEST_CASE("table emits the pinned header and the right cardinality") {
    auto r = run_cli("table --fn nq --q 0.5 --nu-range 0:2:3 --x-range 0.5:1.5:3");
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "q,nu,x,value,est_error,terms,flags");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::count(rows[i].begin(), rows[i].end(), ',') == 6);
}

TEST_CASE("table rows reproduce eval at the same point") {
    auto t = run_cli("table --fn nq --q 0.5 --nu-range 1:1:1 --x-range 1:1:1");
    auto e = run_cli("eval --fn nq --q 0.5 --nu 1 --x 1");
    auto rows = lines_of(t.out);
    REQUIRE(rows.size() == 2);
    // row: q,nu,x,value,... / eval: value ...
    std::string row = rows[1];
    std::string value = row.substr(row.find(',', row.find(',', row.find(',') + 1) + 1) + 1);
    value = value.substr(0, value.find(','));
    CHECK(e.out.substr(0, e.out.find(' ')) == value);
}

TEST_CASE("table failure rows carry nan and a flag, not an abort") {
    auto r = run_cli("table --fn qgamma --q 0.5 --nu-range -2:-2:1 --x-range 1:1:1");
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].find("nan") != std::string::npos);
    CHECK(rows[1].find("pole") != std::string::npos);
}

TEST_CASE("malformed ranges exit 2") {
    CHECK(run_cli("table --fn nq --q 0.5 --nu-range 0:2 --x-range 1:1:1")
              .exit_code == 2);
    CHECK(run_cli("table --fn nq --q 0.5 --nu-range 0:2:0 --x-range 1:1:1")
              .exit_code == 2);
}

TEST_CASE("identical invocations are bit-identical") {
    auto a = run_cli("table --fn jq --q 0.9 --nu-range 0:3:4 --x-range 0.1:2:5");
    auto b = run_cli("table --fn jq --q 0.9 --nu-range 0:3:4 --x-range 0.1:2:5");
    CHECK(a.out == b.out);
    auto c = run_cli("verify --suite product --report json");
    auto d = run_cli("verify --suite product --report json");
    CHECK(c.out == d.out);
}

TEST_CASE("verify json schema and exit codes") {
    auto r = run_cli("verify --suite product --report json");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["suite"] == "product");
    REQUIRE(doc["cases"].is_array());
    CHECK(doc["cases"].size() >= 2);
    for (const auto& c : doc["cases"]) {
        CHECK(c.contains("identity"));
        CHECK(c["params"].contains("q"));
        CHECK(c["params"].contains("nu"));
        CHECK(c["params"].contains("x"));
        CHECK(c.contains("residual"));
        CHECK(c.contains("scale"));
        CHECK(c.contains("tol"));
        CHECK(c["pass"].is_boolean());
    }
    long total = doc["summary"]["total"].get<long>();
    long passed = doc["summary"]["passed"].get<long>();
    long failed = doc["summary"]["failed"].get<long>();
    CHECK(total == static_cast<long>(doc["cases"].size()));
    CHECK(total == passed + failed);
    CHECK(failed == 0);

    CHECK(run_cli("verify --suite nosuch").exit_code == 2);
}
