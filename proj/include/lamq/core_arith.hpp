#pragma once

// Base arithmetic functions: smallest-prime-factor and segmented sieves for
// τ, μ, Liouville λ, the r-th power indicators a_r, the Legendre symbol and
// λ_q = (τ/q). Everything here is exact integer arithmetic.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lamq/errors.hpp"

namespace lamq {

using Int = std::int64_t;

// ---------------------------------------------------------------------------
// Checked integer helpers
// ---------------------------------------------------------------------------

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("int64 overflow in addition");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("int64 overflow in multiplication");
    return r;
}

/// floor(n^(1/k)) by a floating guess and an exact correction loop.
std::uint64_t iroot(std::uint64_t n, unsigned k);

/// true iff base^k <= bound, computed without overflow.
bool pow_at_most(std::uint64_t base, unsigned k, std::uint64_t bound);

/// Deterministic trial-division primality; intended for moduli and small inputs.
bool is_prime(std::uint64_t n);

/// All primes <= n (plain Eratosthenes, n must fit the default budget).
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

/// Visits primes p <= hi in ascending order, sieving in segments.
void for_each_prime(std::uint64_t hi, const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment_size = 1ULL << 20);

// ---------------------------------------------------------------------------
// CoeffSeries
// ---------------------------------------------------------------------------

/// Exact coefficients a(1..N) of an arithmetic function.
/// Slot 0 of the backing storage exists only so that indexing is 1-based; it is always 0.
class CoeffSeries {
public:
    CoeffSeries(std::uint64_t limit, std::vector<Int> values);

    static CoeffSeries zeros(std::uint64_t limit);
    /// e(n) = [n == 1]
    static CoeffSeries unit(std::uint64_t limit);
    /// 1(n) = 1
    static CoeffSeries one(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }

    Int operator[](std::uint64_t n) const noexcept { return values_[n]; }
    Int at(std::uint64_t n) const;

    /// Backing storage, size limit()+1, index 0 unused.
    std::span<const Int> raw() const noexcept { return values_; }

    /// P[x] = a(1) + ... + a(x), P[0] = 0.
    std::vector<Int> prefix_sums() const;

    bool operator==(const CoeffSeries&) const = default;

private:
    std::uint64_t limit_;
    std::vector<Int> values_;
};

// ---------------------------------------------------------------------------
// Legendre symbol
// ---------------------------------------------------------------------------

/// Jacobi symbol (a/n) for odd n >= 1, by quadratic reciprocity.
int jacobi_symbol(Int a, std::uint64_t n);

/// The quadratic character modulo an odd prime q.
class LegendreChar {
public:
    explicit LegendreChar(std::uint64_t q);

    std::uint64_t q() const noexcept { return q_; }
    int operator()(Int a) const { return jacobi_symbol(a, q_); }

private:
    std::uint64_t q_;
};

int legendre_symbol(Int a, const LegendreChar& chi);

// ---------------------------------------------------------------------------
// Sieves
// ---------------------------------------------------------------------------

struct SieveBudget {
    /// Largest table (in entries) a whole-range sieve may allocate.
    std::uint64_t max_entries = 1ULL << 27;
};

class FactorSieve {
public:
    std::uint64_t limit() const noexcept { return spf_.size() - 1; }
    std::uint32_t spf(std::uint64_t n) const noexcept { return spf_[n]; }
    bool is_prime(std::uint64_t n) const noexcept { return n >= 2 && spf_[n] == n; }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }

    /// Calls visit(p, e) for each p^e || n, p ascending.
    template <class Visit>
    void factorize(std::uint64_t n, Visit&& visit) const {
        while (n > 1) {
            const std::uint32_t p = spf_[n];
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            visit(p, e);
        }
    }

private:
    friend FactorSieve build_factor_sieve(std::uint64_t, const SieveBudget&);
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

FactorSieve build_factor_sieve(std::uint64_t limit, const SieveBudget& budget = {});

/// A multiplicative function whose value at p^e depends only on e: g[e], g[0] = 1.
/// n < 2^64 has every exponent below 64.
using ExponentProfile = std::array<Int, 64>;

ExponentProfile tau_profile();
ExponentProfile mobius_profile();
ExponentProfile liouville_profile();
/// λ_q(p^e) = χ_q(e + 1); λ_q is multiplicative because χ_q is completely multiplicative.
ExponentProfile lambda_q_profile(const LegendreChar& chi);
/// (λ_q ⋆ 1)(p^e) = χ_q(1) + ... + χ_q(e + 1).
ExponentProfile lambda_q_conv_one_profile(const LegendreChar& chi);
/// (λ ⋆ 1)(p^e) = [e even].
ExponentProfile liouville_conv_one_profile();

using ProgressFn = std::function<void(double fraction_done)>;

struct SegmentOptions {
    std::uint64_t segment_size = 1ULL << 20;
    unsigned threads = 1;
    ProgressFn progress;
};

/// Evaluates a profile on [lo, hi] segment by segment and hands each block to
/// consume(worker, block_lo, values) where values[i] = f(block_lo + i).
/// With threads > 1, consume runs concurrently; worker < threads identifies the caller.
using SegmentConsumer = std::function<void(unsigned worker, std::uint64_t block_lo, std::span<const Int> values)>;
void for_each_segment(std::uint64_t lo, std::uint64_t hi, const ExponentProfile& profile,
                      const SegmentOptions& options, const SegmentConsumer& consume);

/// Whole-range table of a profile, built with the segmented kernel.
CoeffSeries multiplicative_series(const ExponentProfile& profile, std::uint64_t limit,
                                  const SieveBudget& budget = {});
/// Whole-range table of a profile, one pass over a smallest-prime-factor sieve.
CoeffSeries multiplicative_series(const FactorSieve& sieve, const ExponentProfile& profile);

CoeffSeries tau_sieve(std::uint64_t limit, const SieveBudget& budget = {});
CoeffSeries mobius_sieve(std::uint64_t limit, const SieveBudget& budget = {});
CoeffSeries liouville_sieve(std::uint64_t limit, const SieveBudget& budget = {});
CoeffSeries lambda_q_sieve(const LegendreChar& chi, std::uint64_t limit, const SieveBudget& budget = {});

CoeffSeries tau_sieve(const FactorSieve& sieve);
CoeffSeries mobius_sieve(const FactorSieve& sieve);
CoeffSeries liouville_sieve(const FactorSieve& sieve);
CoeffSeries lambda_q_sieve(const LegendreChar& chi, const FactorSieve& sieve);

/// a_r(n) = 1 iff n is a perfect r-th power.
CoeffSeries a_r_series(unsigned r, std::uint64_t limit);

} // namespace lamq
