#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "report.hpp"

#ifndef LAMQ_CLI_PATH
#error "LAMQ_CLI_PATH must name the lamq executable"
#endif

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(LAMQ_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("verify") {
    const auto ok = run("verify --q 7 --limit 3000 --no-timestamp");
    CHECK(ok.status == 0);
    CHECK(contains(ok.out, "# result.all_passed=true"));
    CHECK(contains(ok.out, "q,check,passed,first_mismatch,lhs,rhs"));
    CHECK(run("verify --q 4").status == 2);
    CHECK(run("verify").status == 2);
    CHECK(run("verify --q 7 --limit 10 --bogus").status == 2);
}

TEST_CASE("constants") {
    const auto r = run("constants --q 7 --p-cutoff 1e6 --no-timestamp");
    CHECK(r.status == 0);
    CHECK(contains(r.out, "leading_coefficient,0.4541"));
    CHECK(contains(r.out, "bracket_constant,0.7838"));
    CHECK(run("constants --q 9").status == 2);
    CHECK(run("constants --q 7 --tol 1e-14 --p-cutoff 1000").status == 3);
}

TEST_CASE("trace columns") {
    const auto r = run("trace --q 7 --max 1e5 --p-cutoff 1e6 --no-timestamp --format json");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["columns"][0] == "x");
    CHECK(j["columns"][4] == "residual");
    CHECK(j["rows"].size() == 7);
    CHECK(j["rows"][0]["x"] == 1024);
    CHECK(run("trace --q 7 --max 1e5 --limit 1e4").status == 3);
}

TEST_CASE("short-interval and near-curve") {
    const auto zero = run("short-interval --x 1e6 --y 0 --no-timestamp");
    CHECK(zero.status == 0);
    CHECK(contains(zero.out, "# result.sum=0"));
    const auto scan = run("near-curve --x 1e6 --y 100 --no-timestamp");
    CHECK(scan.status == 0);
    CHECK(contains(scan.out, "N,range,R,delta"));
    CHECK(contains(scan.out, "# result.coverage_ok=true"));
    const auto single = run("near-curve --N 4 --X 32 --s 5/2 --delta 0.1 --no-timestamp");
    CHECK(single.status == 0);
    CHECK(contains(single.out, "N,count\n4,1"));
    CHECK(run("near-curve --N 1 --X 1.2 --s 1/1 --delta 0.2").status == 3);
    CHECK(run("short-interval --x 100 --y 1000").status == 2);
}

TEST_CASE("rh-diagnostic") {
    CHECK(run("rh-diagnostic --q 5 --max 1e5 --no-timestamp").status == 0);
    CHECK(run("rh-diagnostic --q 13 --max 1e5").status == 2);
}

TEST_CASE("JSON output round-trips") {
    const auto r = run("constants --q 23 --p-cutoff 1e5 --no-timestamp --format json");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["metadata"]["q"] == 23);
    CHECK(j["metadata"]["p_cutoff"].is_number_unsigned());
    const auto csv = run("constants --q 23 --p-cutoff 1e5 --no-timestamp");
    for (const auto& row : j["rows"]) {
        const double v = row["value"];
        CHECK(contains(csv.out, row["quantity"].get<std::string>() + "," + lamq::cli::format_double(v)));
    }
}

TEST_CASE("output is deterministic without the timestamp") {
    const std::string args = "short-interval --x 1e7 --y 2000 --no-timestamp";
    CHECK(run(args).out == run(args).out);
    const std::string j = "trace --q 13 --max 1e5 --r-cutoff 2e6 --tol 2e-3 --no-timestamp --format json";
    CHECK(run(j).out == run(j).out);
    CHECK(contains(run("verify --q 5 --limit 100").out, "# timestamp="));
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5e17})
        CHECK(std::stod(lamq::cli::format_double(v)) == v);
    CHECK(lamq::cli::format_cell(std::string("a,b")) == "\"a,b\"");
}
