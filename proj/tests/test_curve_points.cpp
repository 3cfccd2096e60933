#include <doctest.h>

#include <cmath>
#include <random>

#include "lamq/curve_points.hpp"
#include "oracles.hpp"

using namespace lamq;

namespace {

// ‖√(x/n⁵)‖ < y/√(N⁵x) over n ∈ [N, 2N] in 113-bit arithmetic
Int near_curve_exact_oracle(std::uint64_t x, std::uint64_t y, std::uint64_t N) {
    using oracle::quad;
    const quad delta = quad(y) / boost::multiprecision::sqrt(quad(N) * N * N * N * N * x);
    Int count = 0;
    for (std::uint64_t n = N; n <= 2 * N; ++n) {
        const quad f = boost::multiprecision::sqrt(quad(x) / (quad(n) * n * n * n * n));
        if (boost::multiprecision::abs(f - boost::multiprecision::round(f)) < delta)
            ++count;
    }
    return count;
}

Int sieve_short_sum(std::uint64_t x, std::uint64_t y) {
    Int s = 0;
    for (std::uint64_t n = x + 1; n <= x + y; ++n)
        for (std::uint64_t d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                std::uint64_t t = 0;
                for (std::uint64_t m = 1; m * m <= d; ++m)
                    if (d % m == 0)
                        t += m * m == d ? 1 : 2;
                s += oracle::legendre(static_cast<oracle::i64>(t), 5);
                if (d * d != n) {
                    const std::uint64_t e = n / d;
                    t = 0;
                    for (std::uint64_t m = 1; m * m <= e; ++m)
                        if (e % m == 0)
                            t += m * m == e ? 1 : 2;
                    s += oracle::legendre(static_cast<oracle::i64>(t), 5);
                }
            }
    return s;
}

} // namespace

TEST_CASE("near-curve counting examples") {
    CurveConfig cfg;
    cfg.X = 32;
    cfg.N = 4;
    cfg.delta = 0.1L;
    CHECK(count_near_curve(cfg) == 1);
    cfg.delta = 0.2L;
    CHECK(count_near_curve(cfg) == 2);
    cfg.X = 1;
    cfg.N = 10;
    cfg.delta = 1e-9L;
    CHECK(count_near_curve(cfg) == 0);
    cfg.X = 1000;
    cfg.N = 8;
    cfg.delta = 0.1L;
    CHECK(count_near_curve(cfg) == oracle::near_curve_quad(1000, 5, 2, 8, 0.1L));
}

TEST_CASE("near-curve counting against the quad oracle on random configurations") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        CurveConfig cfg;
        cfg.X = std::exp(std::uniform_real_distribution<long double>(0, 12)(rng));
        cfg.s = Rational{static_cast<Int>(1 + rng() % 7), static_cast<Int>(1 + rng() % 3)};
        cfg.N = 1 + rng() % 2000;
        cfg.delta = std::uniform_real_distribution<long double>(0.001L, 0.249L)(rng);
        INFO("X=" << static_cast<double>(cfg.X) << " s=" << cfg.s.num << "/" << cfg.s.den << " N=" << cfg.N);
        CHECK(count_near_curve(cfg) == oracle::near_curve_quad(cfg.X, cfg.s.num, cfg.s.den, cfg.N, cfg.delta));
    }
}

TEST_CASE("near-curve counting refuses to guess") {
    CurveConfig cfg;
    cfg.X = 1.2L;
    cfg.s = Rational{1, 1};
    cfg.N = 1;
    cfg.delta = 0.2L;
    try {
        count_near_curve(cfg);
        FAIL("expected UndecidableError");
    } catch (const UndecidableError& e) {
        CHECK(e.points() == std::vector<std::uint64_t>{1});
    }
    cfg.delta = 0.25L;
    CHECK_THROWS_AS(count_near_curve(cfg), ArgumentError);
    cfg.delta = 0.1L;
    cfg.N = 0;
    CHECK_THROWS_AS(count_near_curve(cfg), ArgumentError);
    cfg.N = 1;
    cfg.s = Rational{1, 0};
    CHECK_THROWS_AS(count_near_curve(cfg), ArgumentError);
    cfg.s = Rational{1, 1};
    cfg.X = -1;
    CHECK_THROWS_AS(count_near_curve(cfg), ArgumentError);
}

TEST_CASE("exact near-curve counting") {
    for (std::uint64_t x : {1'000'000ULL, 123'456'789ULL, 100'000'000'000ULL}) {
        const std::uint64_t y = oracle::iroot(x, 2) / 4;
        for (std::uint64_t N = 1; N <= 40; ++N) {
            const unsigned __int128 lhs = static_cast<unsigned __int128>(16) * y * y;
            unsigned __int128 rhs = x;
            for (int k = 0; k < 5; ++k)
                rhs *= N;
            if (lhs >= rhs) {
                CHECK_THROWS_AS(count_near_curve_exact(x, y, N), ArgumentError);
                continue;
            }
            REQUIRE(count_near_curve_exact(x, y, N) == near_curve_exact_oracle(x, y, N));
        }
    }
    // x = n⁵ m² puts √(x/n⁵) on an integer
    CHECK(count_near_curve_exact(32ULL * 49, 1, 2) >= 1);
    CHECK_THROWS_AS(count_near_curve_exact(0, 1, 2), ArgumentError);
}

TEST_CASE("short-interval instances") {
    ShortIntervalInstance inst{1'000'000, 100};
    CHECK_NOTHROW(inst.validate());
    CHECK(inst.within_first_range());
    CHECK(inst.within_second_range());
    CHECK_THROWS_AS((ShortIntervalInstance{100, 101}.validate()), ArgumentError);
    CHECK_THROWS_AS((ShortIntervalInstance{100, 1, 0.3L}.validate()), ArgumentError);
    CHECK_FALSE((ShortIntervalInstance{1'000'000, 100'000}.within_first_range()));
}

TEST_CASE("short sums") {
    CHECK(short_interval_sum({1'000'000, 0}) == 0);
    CHECK(short_interval_sum({10'000, 1'000}) == sieve_short_sum(10'000, 1'000));
    CHECK(short_interval_sum({12'345, 678}) == oracle::lambda5_identity(13'023) - oracle::lambda5_identity(12'345));
    const Int a = short_interval_sum({50'000, 300}), b = short_interval_sum({50'300, 200});
    CHECK(a + b == short_interval_sum({50'000, 500}));
    Int tau_sum = 0;
    const auto tau = oracle::tau_table(10'500);
    for (std::uint64_t n = 10'001; n <= 10'500; ++n)
        tau_sum += tau[n];
    CHECK(divisor_sum_window(10'000, 500) == tau_sum);
}

TEST_CASE("per-n counts") {
    CHECK(per_n_count(1000, 1000, 1) == 0);
    const std::uint64_t x = 1'000'000, y = 5'000;
    for (std::uint64_t n = 2; n <= 20; ++n) {
        Int c = 0;
        for (std::uint64_t d = 1; d * d <= x + y; ++d) {
            const unsigned __int128 v = static_cast<unsigned __int128>(d) * d * n * n * n * n * n;
            if (v > x && v <= x + y)
                ++c;
        }
        CHECK(per_n_count(x, y, n) == c);
    }
}

TEST_CASE("decomposition of the short sum") {
    for (auto [x, y] : {std::pair<std::uint64_t, std::uint64_t>{1'000'000, 100}, {1'000'000, 1'000},
                        {10'000'000, 2'000}, {123'456, 77}}) {
        INFO("x=" << x << " y=" << y);
        const auto d = lemma6_decomposition({x, y});
        CHECK(d.identity_holds());
        CHECK(d.inequality_holds());
        CHECK(d.windows_match());
        CHECK(d.guards_hold());
        CHECK(d.windows_below_R());
        CHECK(d.double_count == oracle::double_count(x, y));
        CHECK(d.n_hi == oracle::iroot(2 * x, 5));
        for (const auto& w : d.windows) {
            CHECK(w.double_count <= w.R);
            CHECK(w.delta < 0.25L);
        }
        for (std::size_t i = 1; i < d.windows.size(); ++i)
            CHECK(d.windows[i].delta < d.windows[i - 1].delta);
    }
}

TEST_CASE("bound shapes") {
    const std::uint64_t x = 100'000'000, y = 200;
    const std::uint64_t N = 2 * oracle::iroot(x, 10);
    const auto b = bound_shapes(N, x, y);
    CHECK(std::isfinite(static_cast<double>(b.fifth_derivative)));
    CHECK(std::isfinite(static_cast<double>(b.filaseta_trifonov)));
    CHECK(std::isfinite(static_cast<double>(b.first_derivative)));
    CHECK(b.fifth_derivative > 0);
    CHECK(static_cast<double>(b.slope_at_N / b.slope_at_2N) == doctest::Approx(std::pow(2.0, 3.5)));
    CHECK(static_cast<double>(b.delta) == doctest::Approx(y / std::sqrt(std::pow(double(N), 5) * x)));
    CHECK(b.lemma5_condition == (static_cast<long double>(N) * N * b.delta <= 0.25L));
    CHECK(b.lemma5_domain);
    CHECK(to_string(BoundShape::FifthDerivative) == "fifth-derivative");
    CHECK(range_of(1, x) == 1);
    CHECK(range_of(12, x) == 1);
    CHECK(range_of(13, x) == 2);
    CHECK(range_of(43, x) == 2);
    CHECK(range_of(44, x) == 3);
    CHECK(range_of(5000, x) == 3);
}

TEST_CASE("three-range scan") {
    const std::uint64_t x = 100'000'000;
    const auto y = static_cast<std::uint64_t>(std::floor(0.25 * std::pow(1e8, 19.0 / 36)));
    const auto rep = theorem6_scan({x, y});
    CHECK(rep.within_second_range);
    CHECK(rep.coverage_ok);
    CHECK(rep.guards_ok);
    CHECK(rep.below_divisor_bound);
    REQUIRE_FALSE(rep.rows.empty());
    CHECK(rep.rows.front().N == rep.decomposition.n_lo);
    CHECK(rep.rows.back().N == rep.decomposition.n_hi);
    int last_range = 0;
    for (const auto& r : rep.rows) {
        CHECK(r.range >= last_range);
        CHECK(r.range == range_of(r.N, x));
        last_range = r.range;
    }
    for (const auto& s : rep.ranges)
        if (!s.empty)
            CHECK(s.max_R >= 0);
    CHECK(rep.short_sum == rep.decomposition.short_sum);
    CHECK(rep.theorem6_bound > 0);
}
