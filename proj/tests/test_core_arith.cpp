#include <doctest.h>

#include <numeric>
#include <random>

#include "lamq/core_arith.hpp"
#include "oracles.hpp"

using namespace lamq;

TEST_CASE("factor sieve: smallest prime factors") {
    const auto s10 = build_factor_sieve(10);
    CHECK(s10.spf(9) == 3);
    CHECK(s10.spf(7) == 7);
    CHECK(build_factor_sieve(12).spf(12) == 2);
    CHECK_THROWS_AS(build_factor_sieve(1), ArgumentError);
    CHECK_THROWS_AS(build_factor_sieve(1000, SieveBudget{100}), ResourceError);
}

TEST_CASE("factor sieve: spf is a prime divisor on random samples up to 1e7") {
    const auto s = build_factor_sieve(10'000'000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> pick(2, 10'000'000);
    for (int i = 0; i < 1000; ++i) {
        const auto n = pick(rng);
        const auto p = s.spf(n);
        CHECK(n % p == 0);
        CHECK(oracle::is_prime(p));
        for (std::uint64_t d = 2; d < p; ++d)
            CHECK(n % d != 0);
    }
}

TEST_CASE("tau, mu and Liouville tables against trial division") {
    const std::uint64_t N = 20'000;
    const auto tau = tau_sieve(N);
    const auto mu = mobius_sieve(N);
    const auto liou = liouville_sieve(N);
    const auto tau_ref = oracle::tau_table(N);
    CHECK(tau[1] == 1);
    CHECK(tau[12] == 6);
    CHECK(mu[1] == 1);
    CHECK(mu[4] == 0);
    CHECK(mu[6] == 1);
    CHECK(liou[1] == 1);
    CHECK(liou[8] == -1);
    for (std::uint64_t n = 1; n <= N; ++n) {
        REQUIRE(tau[n] == tau_ref[n]);
        REQUIRE(mu[n] == oracle::mobius(n));
        REQUIRE(liou[n] == oracle::liouville(n));
        if (oracle::is_prime(n))
            REQUIRE(tau[n] == 2);
        if (mu[n] != 0)
            REQUIRE(liou[n] == mu[n]);
    }
}

TEST_CASE("sum of mu over divisors is the unit, n <= 1e4") {
    const auto mu = mobius_sieve(10'000);
    for (std::uint64_t n = 1; n <= 10'000; ++n) {
        Int s = 0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0)
                s += mu[d];
        REQUIRE(s == (n == 1 ? 1 : 0));
    }
}

TEST_CASE("segmented and whole-table sieves agree across block boundaries") {
    const std::uint64_t N = 300'000;
    const auto chi = LegendreChar(11);
    const auto direct = lambda_q_sieve(chi, build_factor_sieve(N));
    SegmentOptions opt;
    opt.segment_size = 4096;
    std::vector<Int> seen(N + 1, 0);
    for_each_segment(1, N, lambda_q_profile(chi), opt, [&](unsigned, std::uint64_t lo, std::span<const Int> v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            seen[lo + i] = v[i];
    });
    for (std::uint64_t n = 1; n <= N; ++n)
        REQUIRE(seen[n] == direct[n]);

    // a window far from 1 takes the 64-bit kernel path
    const std::uint64_t lo = (1ULL << 31) + 12'345;
    for_each_segment(lo, lo + 2000, tau_profile(), opt, [&](unsigned, std::uint64_t b, std::span<const Int> v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::uint64_t n = b + i;
            Int t = 1;
            for (std::uint64_t p = 2; p * p <= n; ++p) {
                int e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                t *= e + 1;
            }
            if (n > 1)
                t *= 2;
            REQUIRE(v[i] == t);
        }
    });
}

TEST_CASE("threaded segments match the single-threaded table") {
    const std::uint64_t N = 200'000;
    SegmentOptions opt;
    opt.segment_size = 1 << 12;
    opt.threads = 4;
    std::vector<Int> seen(N + 1, 0);
    for_each_segment(1, N, mobius_profile(), opt, [&](unsigned w, std::uint64_t lo, std::span<const Int> v) {
        CHECK(w < 4);
        for (std::size_t i = 0; i < v.size(); ++i)
            seen[lo + i] = v[i];
    });
    const auto mu = mobius_sieve(N);
    for (std::uint64_t n = 1; n <= N; ++n)
        REQUIRE(seen[n] == mu[n]);
}

TEST_CASE("Legendre symbol") {
    for (std::uint64_t q = 3; q < 200; q += 2) {
        if (!oracle::is_prime(q))
            continue;
        const LegendreChar chi(q);
        std::vector<int> square(q, 0);
        for (std::uint64_t a = 1; a < q; ++a)
            square[a * a % q] = 1;
        CHECK(chi(1) == 1);
        CHECK(chi(static_cast<Int>(q)) == 0);
        for (Int a = -2 * static_cast<Int>(q); a < 3 * static_cast<Int>(q); ++a) {
            const std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<Int>(q)) + static_cast<Int>(q)) %
                                                               static_cast<Int>(q));
            const int want = r == 0 ? 0 : (square[r] ? 1 : -1);
            REQUIRE(legendre_symbol(a, chi) == want);
            REQUIRE(chi(a) == oracle::legendre(a, q));
        }
    }
    CHECK(LegendreChar(7)(3) == -1);
    CHECK_THROWS_AS(LegendreChar(9), ArgumentError);
    CHECK_THROWS_AS(LegendreChar(2), ArgumentError);
}

TEST_CASE("perfect power indicators") {
    CHECK_THROWS_AS(a_r_series(1, 10), ArgumentError);
    const auto a5 = a_r_series(5, 100);
    CHECK(a5[32] == 1);
    CHECK(a5[33] == 0);
    const auto a2 = a_r_series(2, 30);
    for (std::uint64_t n = 1; n <= 30; ++n)
        CHECK(a2[n] == ((n == 1 || n == 4 || n == 9 || n == 16 || n == 25) ? 1 : 0));
    for (unsigned r = 2; r <= 5; ++r) {
        const auto sums = a_r_series(r, 100'000).prefix_sums();
        for (std::uint64_t x = 1; x <= 100'000; ++x)
            REQUIRE(sums[x] == static_cast<Int>(oracle::iroot(x, r)));
    }
}

TEST_CASE("lambda_q values") {
    const std::uint64_t N = 50'000;
    const auto tau = oracle::tau_table(N);
    for (std::uint64_t q : {3ULL, 5ULL, 7ULL, 13ULL, 43ULL}) {
        const auto lam = lambda_q_sieve(LegendreChar(q), N);
        CHECK(lam[1] == 1);
        for (std::uint64_t n = 1; n <= N; ++n)
            REQUIRE(lam[n] == oracle::legendre(tau[n], q));
    }
    const auto l3 = lambda_q_sieve(LegendreChar(3), 10'000);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 97ULL})
        CHECK(l3[p * p] == 0);
    CHECK(lambda_q_sieve(LegendreChar(7), 20)[12] == -1);
}

TEST_CASE("multiplicativity on random coprime pairs") {
    const std::uint64_t N = 100'000;
    const auto sieve = build_factor_sieve(N);
    const auto tau = tau_sieve(sieve);
    const auto mu = mobius_sieve(sieve);
    const auto liou = liouville_sieve(sieve);
    const auto lam = lambda_q_sieve(LegendreChar(17), sieve);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> pick(1, 316);
    for (int i = 0; i < 5000; ++i) {
        const auto m = pick(rng), n = pick(rng);
        if (std::gcd(m, n) != 1)
            continue;
        REQUIRE(tau[m * n] == tau[m] * tau[n]);
        REQUIRE(mu[m * n] == mu[m] * mu[n]);
        REQUIRE(liou[m * n] == liou[m] * liou[n]);
        REQUIRE(lam[m * n] == lam[m] * lam[n]);
    }
}

TEST_CASE("integer helpers") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20'000; ++i) {
        const std::uint64_t n = rng() >> (rng() % 60);
        for (unsigned k : {2u, 3u, 5u})
            REQUIRE(iroot(n, k) == oracle::iroot(n, k));
    }
    for (std::uint64_t b = 1; b < 2000; ++b) // exact powers and their neighbours
        for (unsigned k : {2u, 5u}) {
            std::uint64_t p = 1;
            for (unsigned j = 0; j < k; ++j)
                p *= b;
            if (k == 5 && b > 6000)
                continue;
            REQUIRE(iroot(p, k) == b);
            REQUIRE(iroot(p - 1, k) == b - 1);
        }
    CHECK(pow_at_most(2, 62, 1ULL << 62));
    CHECK_FALSE(pow_at_most(2, 63, (1ULL << 62)));
    CHECK_THROWS_AS(checked_mul(INT64_MAX, 2), OverflowError);
    CHECK_THROWS_AS(checked_add(INT64_MAX, 1), OverflowError);
    const auto primes = primes_up_to(1000);
    CHECK(primes.size() == 168);
    std::uint64_t count = 0, last = 0;
    for_each_prime(
        2'000'000,
        [&](std::uint64_t p) {
            CHECK(p > last);
            last = p;
            ++count;
        },
        1 << 14);
    CHECK(count == 148'933);
}

TEST_CASE("CoeffSeries basics") {
    CHECK_THROWS_AS(CoeffSeries(5, std::vector<Int>(3, 0)), ArgumentError);
    const auto e = CoeffSeries::unit(10);
    CHECK(e[1] == 1);
    CHECK(e[2] == 0);
    CHECK_THROWS_AS(e.at(11), ArgumentError);
    const auto one = CoeffSeries::one(10);
    CHECK(one.prefix_sums()[10] == 10);
}
