#include <doctest.h>

#include <cmath>

#include "lamq/summatory.hpp"
#include "oracles.hpp"

using namespace lamq;

TEST_CASE("summatory examples") {
    CHECK(summatory_lambda_conv_one(3, 100) == 4);
    CHECK(summatory_liouville_conv_one(100) == 10);
    CHECK(summatory_lambda_conv_one(5, 10'000) == oracle::lambda5_identity(10'000));
    CHECK(lambda5_floor_identity(10'000) == oracle::lambda5_identity(10'000));
    CHECK(mertens(10) == -1);
    CHECK(mertens(1) == 1);
    CHECK(liouville_summatory(10) == 0);
}

TEST_CASE("streamed sums equal prefix sums of the brute-force convolution, x <= 1e4") {
    const std::uint64_t N = 10'000;
    std::vector<std::uint64_t> xs;
    for (std::uint64_t x = 1; x <= N; x += 37)
        xs.push_back(x);
    for (std::uint64_t q : {3ULL, 5ULL, 7ULL, 13ULL, 43ULL}) {
        const auto ref = oracle::lambda_q_conv_one(q, N);
        std::vector<Int> prefix(N + 1, 0);
        for (std::uint64_t n = 1; n <= N; ++n)
            prefix[n] = prefix[n - 1] + ref[n];
        SummatoryOptions opt;
        opt.segments.segment_size = 512;
        const auto got = summatory_lambda_conv_one(q, xs, opt);
        for (std::size_t k = 0; k < xs.size(); ++k)
            REQUIRE(got[k] == prefix[xs[k]]);
    }
}

TEST_CASE("Mertens and Liouville sums agree with brute force; threads do not change results") {
    const auto xs = dyadic_checkpoints(1, 1 << 17);
    SummatoryOptions one, four;
    one.segments.segment_size = four.segments.segment_size = 1 << 12;
    four.segments.threads = 4;
    const auto m1 = prefix_sums_at(mobius_profile(), xs, one);
    const auto m4 = prefix_sums_at(mobius_profile(), xs, four);
    const auto l1 = prefix_sums_at(liouville_profile(), xs, one);
    CHECK(m1 == m4);
    Int M = 0, L = 0;
    std::size_t k = 0;
    for (std::uint64_t n = 1; n <= xs.back(); ++n) {
        M += oracle::mobius(n);
        L += oracle::liouville(n);
        if (n == xs[k]) {
            REQUIRE(m1[k] == M);
            REQUIRE(l1[k] == L);
            ++k;
        }
    }
    CHECK(summatory_lambda_conv_one(11, xs, one) == summatory_lambda_conv_one(11, xs, four));
}

TEST_CASE("identity suite passes on a short range") {
    const auto suite = identity_suite(20'000);
    CHECK(suite.success());
    CHECK(suite.checks.size() == 5);
}

TEST_CASE("argument and resource errors") {
    SummatoryOptions small;
    small.limit = 1000;
    CHECK_THROWS_AS(summatory_lambda_conv_one(5, 1001, small), ResourceError);
    const std::vector<std::uint64_t> unsorted = {10, 5};
    CHECK_THROWS_AS(floor_weighted_sums(tau_profile(), unsorted), ArgumentError);
    CHECK_THROWS_AS(summatory_lambda_conv_one(9, 100), ArgumentError);
    const std::vector<std::uint64_t> tiny = {16, 1024};
    CHECK_THROWS_AS(trace(13, tiny), ArgumentError);
    CHECK_THROWS_AS(rh_diagnostic(13, tiny), ClassificationError);
}

TEST_CASE("dyadic checkpoints") {
    CHECK(dyadic_checkpoints(1000, 5000) == std::vector<std::uint64_t>{1024, 2048, 4096});
    CHECK(dyadic_checkpoints(1024, 1024) == std::vector<std::uint64_t>{1024});
    CHECK(dyadic_checkpoints(3, 3).empty());
}

TEST_CASE("default normalization exponents") {
    CHECK(default_alphas(classify(7))[0] == doctest::Approx(0.55));
    CHECK(default_alphas(classify(23))[0] == doctest::Approx(0.3649038461538));
    CHECK(default_alphas(classify(13))[0] == doctest::Approx(1.0 / 3 + 0.05));
    CHECK(default_alphas(classify(5))[0] == doctest::Approx(0.5));
}

TEST_CASE("trace for q = 13") {
    TraceOptions opt;
    opt.constants.r_cutoff = 2'000'000;
    opt.constants.tol = 2e-3L;
    const std::vector<std::uint64_t> xs = {1024, 1'000'000};
    const auto t = trace(13, xs, {}, opt);
    REQUIRE(t.rows.size() == 2);
    for (const auto& r : t.rows) {
        CHECK(std::fabs(r.residual - (static_cast<long double>(r.value) - r.main)) <= r.main_error + 1e-9L);
        CHECK(r.normalized.size() == 1);
        CHECK(r.normalized[0] == doctest::Approx(static_cast<double>(r.residual / std::pow(static_cast<long double>(r.x), 1.0L / 3 + 0.05L))));
    }
    CHECK(std::fabs(t.rows[1].residual) < std::pow(1e6L, 0.45L));
    CHECK(t.leading_coefficient.has_value());
    CHECK_FALSE(t.upper_bound_only);
    CHECK(t.fitted_exponent.has_value());
}

TEST_CASE("trace for q = 7 tracks the leading coefficient") {
    TraceOptions opt;
    opt.constants.p_cutoff = 1'000'000;
    const auto xs = dyadic_checkpoints(1 << 10, 1 << 22);
    const auto t = trace(7, xs, {0.55L, 0.6L}, opt);
    const long double lead = t.leading_coefficient->value;
    // S(x)/(x log x) approaches ζ(7)P_7(1) from the 1/log x correction
    long double previous = INFINITY;
    for (const auto& r : t.rows) {
        const long double x = static_cast<long double>(r.x);
        const long double ratio = static_cast<long double>(r.value) / (x * std::log(x));
        const long double gap = std::fabs(ratio - lead);
        CHECK(gap < previous * 1.05L);
        previous = gap;
        CHECK(r.normalized.size() == 2);
    }
    CHECK(previous < 0.15L * lead);
}

TEST_CASE("growth diagnostic for q = 5") {
    const std::vector<std::uint64_t> xs = {10'000, 1'000'000};
    const auto g = rh_diagnostic(5, xs);
    REQUIRE(g.rows.size() == 2);
    CHECK(g.rows[0].value == oracle::lambda5_identity(10'000));
    CHECK(g.rows[1].value == oracle::lambda5_identity(1'000'000));
    for (const auto& r : g.rows) {
        CHECK(r.over_quarter == doctest::Approx(std::fabs(static_cast<double>(r.value)) / std::pow(static_cast<double>(r.x), 0.25)));
        CHECK(r.over_rh_shape.has_value());
        CHECK(r.over_unconditional.has_value());
    }
    CHECK(g.c == doctest::Approx(0.2));
    CHECK(g.epsilon == doctest::Approx(0.01));
}

TEST_CASE("growth shapes") {
    for (long double x : {std::exp(4.0L), 1e4L, 1e8L}) {
        for (long double eps : {0.01L, 0.2L}) {
            const auto w = omega(x, eps);
            REQUIRE(w.has_value());
            CHECK(*w > 0);
        }
        const auto d = delta_c(x, 0.2L);
        REQUIRE(d.has_value());
        CHECK(*d > 0);
        CHECK(*d < 1);
    }
    CHECK_FALSE(delta_c(2.0L, 0.2L).has_value());
    CHECK_FALSE(omega(std::numbers::e_v<long double>, 0.01L).has_value());
    const long double lz = std::log(1e8L);
    CHECK(static_cast<double>(*delta_c(1e8L, 0.3L)) ==
          doctest::Approx(static_cast<double>(std::exp(-0.3L * std::pow(lz, 0.6L) / std::pow(std::log(lz), 0.2L)))));
}
