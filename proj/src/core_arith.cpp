#include "lamq/core_arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

namespace lamq {

bool pow_at_most(std::uint64_t base, unsigned k, std::uint64_t bound) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= base;
        if (acc > bound)
            return false;
    }
    return true;
}

std::uint64_t iroot(std::uint64_t n, unsigned k) {
    if (k == 0)
        throw ArgumentError("iroot: k must be positive");
    if (k == 1 || n < 2)
        return n;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
    while (r > 0 && !pow_at_most(r, k, n))
        --r;
    while (pow_at_most(r + 1, k, n))
        ++r;
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::uint64_t d = 3; d <= n / d; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    if (n > SieveBudget{}.max_entries)
        throw ResourceError("primes_up_to: " + std::to_string(n) + " exceeds the sieve budget of " +
                            std::to_string(SieveBudget{}.max_entries) + " entries");
    std::vector<std::uint32_t> out;
    if (n < 2)
        return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (composite[p])
            continue;
        out.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= n; m += p)
            composite[m] = true;
    }
    return out;
}

void for_each_prime(std::uint64_t hi, const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment_size) {
    if (hi < 2)
        return;
    const auto base = primes_up_to(iroot(hi, 2));
    std::vector<char> composite;
    for (std::uint64_t lo = 2; lo <= hi; lo += segment_size) {
        const std::uint64_t top = std::min(hi, lo + segment_size - 1);
        composite.assign(top - lo + 1, 0);
        for (std::uint64_t p : base) {
            if (p * p > top)
                break;
            std::uint64_t m = std::max(p * p, (lo + p - 1) / p * p);
            for (; m <= top; m += p)
                composite[m - lo] = 1;
        }
        for (std::uint64_t n = lo; n <= top; ++n)
            if (!composite[n - lo])
                visit(n);
    }
}

// ---------------------------------------------------------------------------

CoeffSeries::CoeffSeries(std::uint64_t limit, std::vector<Int> values)
    : limit_(limit), values_(std::move(values)) {
    if (limit_ < 1)
        throw ArgumentError("CoeffSeries: limit must be >= 1");
    if (values_.size() != limit_ + 1)
        throw ArgumentError("CoeffSeries: expected " + std::to_string(limit_ + 1) + " slots, got " +
                            std::to_string(values_.size()));
    values_[0] = 0;
}

CoeffSeries CoeffSeries::zeros(std::uint64_t limit) {
    return CoeffSeries(limit, std::vector<Int>(limit + 1, 0));
}

CoeffSeries CoeffSeries::unit(std::uint64_t limit) {
    std::vector<Int> v(limit + 1, 0);
    v[1] = 1;
    return CoeffSeries(limit, std::move(v));
}

CoeffSeries CoeffSeries::one(std::uint64_t limit) {
    return CoeffSeries(limit, std::vector<Int>(limit + 1, 1));
}

Int CoeffSeries::at(std::uint64_t n) const {
    if (n < 1 || n > limit_)
        throw ArgumentError("CoeffSeries::at: index " + std::to_string(n) + " outside [1, " +
                            std::to_string(limit_) + "]");
    return values_[n];
}

std::vector<Int> CoeffSeries::prefix_sums() const {
    std::vector<Int> out(limit_ + 1, 0);
    for (std::uint64_t n = 1; n <= limit_; ++n)
        out[n] = checked_add(out[n - 1], values_[n]);
    return out;
}

// ---------------------------------------------------------------------------

int jacobi_symbol(Int a, std::uint64_t n) {
    if (n == 0 || n % 2 == 0)
        throw ArgumentError("jacobi_symbol: modulus must be odd and positive");
    Int r = a % static_cast<Int>(n);
    std::uint64_t m = static_cast<std::uint64_t>(r < 0 ? r + static_cast<Int>(n) : r);
    int t = 1;
    while (m != 0) {
        while (m % 2 == 0) {
            m /= 2;
            const auto nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5)
                t = -t;
        }
        std::swap(m, n);
        if (m % 4 == 3 && n % 4 == 3)
            t = -t;
        m %= n;
    }
    return n == 1 ? t : 0;
}

LegendreChar::LegendreChar(std::uint64_t q) : q_(q) {
    if (q < 3 || !is_prime(q))
        throw ArgumentError("LegendreChar: q = " + std::to_string(q) + " is not an odd prime");
}

int legendre_symbol(Int a, const LegendreChar& chi) { return chi(a); }

// ---------------------------------------------------------------------------

FactorSieve build_factor_sieve(std::uint64_t limit, const SieveBudget& budget) {
    if (limit < 2)
        throw ArgumentError("build_factor_sieve: limit must be >= 2");
    if (limit > budget.max_entries || limit >= (1ULL << 32))
        throw ResourceError("build_factor_sieve: limit " + std::to_string(limit) +
                            " exceeds the sieve budget of " + std::to_string(budget.max_entries) +
                            " entries");
    FactorSieve s;
    s.spf_.assign(limit + 1, 0);
    // linear sieve: every composite is written exactly once, by its smallest prime
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (s.spf_[i] == 0) {
            s.spf_[i] = static_cast<std::uint32_t>(i);
            s.primes_.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : s.primes_) {
            if (p > s.spf_[i] || i * p > limit)
                break;
            s.spf_[i * p] = p;
        }
    }
    return s;
}

ExponentProfile tau_profile() {
    ExponentProfile g{};
    for (std::size_t e = 0; e < g.size(); ++e)
        g[e] = static_cast<Int>(e + 1);
    return g;
}

ExponentProfile mobius_profile() {
    ExponentProfile g{};
    g[0] = 1;
    g[1] = -1;
    return g;
}

ExponentProfile liouville_profile() {
    ExponentProfile g{};
    for (std::size_t e = 0; e < g.size(); ++e)
        g[e] = (e % 2 == 0) ? 1 : -1;
    return g;
}

ExponentProfile lambda_q_profile(const LegendreChar& chi) {
    ExponentProfile g{};
    for (std::size_t e = 0; e < g.size(); ++e)
        g[e] = chi(static_cast<Int>(e + 1));
    return g;
}

ExponentProfile lambda_q_conv_one_profile(const LegendreChar& chi) {
    ExponentProfile g{};
    Int acc = 0;
    for (std::size_t e = 0; e < g.size(); ++e) {
        acc += chi(static_cast<Int>(e + 1));
        g[e] = acc;
    }
    return g;
}

ExponentProfile liouville_conv_one_profile() {
    ExponentProfile g{};
    for (std::size_t e = 0; e < g.size(); ++e)
        g[e] = (e % 2 == 0) ? 1 : 0;
    return g;
}

namespace {

struct SegmentScratch {
    std::vector<Int> values;
    std::vector<std::uint64_t> found; // product of the prime powers extracted so far
    std::vector<std::uint8_t> exps;
};

// f(n) for n in [lo, hi). Every n < hi has at most one prime factor above
// sqrt(hi - 1); it survives as the cofactor n / found[i] and contributes g[1].
template <class U>
void evaluate_block(U lo, U hi, std::span<const std::uint32_t> base, const ExponentProfile& g,
                    SegmentScratch& s) {
    const std::size_t len = static_cast<std::size_t>(hi - lo);
    s.values.assign(len, 1);
    s.found.assign(len, 1);
    s.exps.assign(len, 0);
    for (const std::uint32_t p32 : base) {
        const U p = p32;
        if (p > (hi - 1) / p)
            break;
        U pk = p;
        for (;;) {
            for (U m = (lo + pk - 1) / pk * pk; m < hi; m += pk)
                ++s.exps[m - lo];
            if (pk > (hi - 1) / p)
                break;
            pk *= p;
        }
        for (U m = (lo + p - 1) / p * p; m < hi; m += p) {
            const std::size_t i = m - lo;
            const unsigned e = s.exps[i];
            s.exps[i] = 0;
            s.values[i] = checked_mul(s.values[i], g[e]);
            std::uint64_t pe = p;
            for (unsigned k = 1; k < e; ++k)
                pe *= p;
            s.found[i] *= pe;
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t n = static_cast<std::uint64_t>(lo) + i;
        if (n > 1 && s.found[i] != n)
            s.values[i] = checked_mul(s.values[i], g[1]);
    }
}

} // namespace

void for_each_segment(std::uint64_t lo, std::uint64_t hi, const ExponentProfile& profile,
                      const SegmentOptions& options, const SegmentConsumer& consume) {
    if (lo < 1)
        throw ArgumentError("for_each_segment: range must start at n >= 1");
    if (hi < lo)
        return;
    if (hi >= (1ULL << 62))
        throw ResourceError("for_each_segment: upper end beyond 2^62");
    if (profile[0] != 1)
        throw ArgumentError("for_each_segment: profile must have g[0] = 1");
    const std::uint64_t seg = std::max<std::uint64_t>(options.segment_size, 1024);
    const auto base = primes_up_to(iroot(hi, 2));
    const std::uint64_t blocks = (hi - lo) / seg + 1;
    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(blocks)));

    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex progress_mutex;

    auto run = [&](unsigned worker) {
        SegmentScratch scratch;
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= blocks)
                break;
            const std::uint64_t blo = lo + b * seg;
            const std::uint64_t bhi = std::min(hi, blo + seg - 1) + 1; // exclusive
            if (bhi <= (1ULL << 31))
                evaluate_block<std::uint32_t>(static_cast<std::uint32_t>(blo), static_cast<std::uint32_t>(bhi),
                                              base, profile, scratch);
            else
                evaluate_block<std::uint64_t>(blo, bhi, base, profile, scratch);
            consume(worker, blo, std::span<const Int>(scratch.values));
            const auto finished = done.fetch_add(1) + 1;
            if (options.progress) {
                std::lock_guard lock(progress_mutex);
                options.progress(static_cast<double>(finished) / static_cast<double>(blocks));
            }
        }
    };

    if (workers == 1) {
        run(0);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(run, w);
}

CoeffSeries multiplicative_series(const ExponentProfile& profile, std::uint64_t limit,
                                  const SieveBudget& budget) {
    if (limit < 1)
        throw ArgumentError("multiplicative_series: limit must be >= 1");
    if (limit > budget.max_entries)
        throw ResourceError("multiplicative_series: limit " + std::to_string(limit) +
                            " exceeds the sieve budget of " + std::to_string(budget.max_entries) +
                            " entries");
    std::vector<Int> v(limit + 1, 0);
    for_each_segment(1, limit, profile, {}, [&](unsigned, std::uint64_t blo, std::span<const Int> vals) {
        std::copy(vals.begin(), vals.end(), v.begin() + static_cast<std::ptrdiff_t>(blo));
    });
    return CoeffSeries(limit, std::move(v));
}

CoeffSeries multiplicative_series(const FactorSieve& sieve, const ExponentProfile& profile) {
    const std::uint64_t limit = sieve.limit();
    std::vector<Int> v(limit + 1, 0);
    v[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint32_t p = sieve.spf(n);
        std::uint64_t m = n;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        v[n] = checked_mul(v[m], profile[e]);
    }
    return CoeffSeries(limit, std::move(v));
}

CoeffSeries tau_sieve(std::uint64_t limit, const SieveBudget& budget) {
    return multiplicative_series(tau_profile(), limit, budget);
}
CoeffSeries mobius_sieve(std::uint64_t limit, const SieveBudget& budget) {
    return multiplicative_series(mobius_profile(), limit, budget);
}
CoeffSeries liouville_sieve(std::uint64_t limit, const SieveBudget& budget) {
    return multiplicative_series(liouville_profile(), limit, budget);
}
CoeffSeries lambda_q_sieve(const LegendreChar& chi, std::uint64_t limit, const SieveBudget& budget) {
    return multiplicative_series(lambda_q_profile(chi), limit, budget);
}

CoeffSeries tau_sieve(const FactorSieve& sieve) { return multiplicative_series(sieve, tau_profile()); }
CoeffSeries mobius_sieve(const FactorSieve& sieve) { return multiplicative_series(sieve, mobius_profile()); }
CoeffSeries liouville_sieve(const FactorSieve& sieve) {
    return multiplicative_series(sieve, liouville_profile());
}
CoeffSeries lambda_q_sieve(const LegendreChar& chi, const FactorSieve& sieve) {
    return multiplicative_series(sieve, lambda_q_profile(chi));
}

CoeffSeries a_r_series(unsigned r, std::uint64_t limit) {
    if (r < 2)
        throw ArgumentError("a_r_series: r must be >= 2, got " + std::to_string(r));
    std::vector<Int> v(limit + 1, 0);
    for (std::uint64_t m = 1; pow_at_most(m, r, limit); ++m) {
        std::uint64_t n = 1;
        for (unsigned i = 0; i < r; ++i)
            n *= m;
        v[n] = 1;
    }
    return CoeffSeries(limit, std::move(v));
}

} // namespace lamq
