#include "lamq/summatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lamq {

namespace {

void validate_checkpoints(std::span<const std::uint64_t> xs, const SummatoryOptions& options) {
    if (xs.empty())
        throw ArgumentError("no checkpoints given");
    if (xs.front() == 0)
        throw ArgumentError("checkpoints must be positive");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw ArgumentError("checkpoints must be ascending");
    if (xs.back() > options.limit)
        throw ResourceError("x = " + std::to_string(xs.back()) + " exceeds the configured limit " +
                            std::to_string(options.limit));
}

unsigned worker_count(const SummatoryOptions& options) { return std::max(1u, options.segments.threads); }

std::vector<Int> merge(const std::vector<std::vector<Int>>& partial) {
    std::vector<Int> out(partial.front().size(), 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = checked_add(out[k], p[k]);
    return out;
}

} // namespace

std::vector<Int> floor_weighted_sums(const ExponentProfile& f, std::span<const std::uint64_t> xs,
                                     const SummatoryOptions& options) {
    validate_checkpoints(xs, options);
    // |Σ f(d) floor(x/d)| <= max|f| · x (1 + log x) stays far below 2^63 for x <= 10^15.
    if (xs.back() > 1'000'000'000'000'000ULL)
        throw OverflowError("x beyond 10^15 is outside the exact int64 range of this sum");

    std::vector<std::vector<Int>> partial(worker_count(options), std::vector<Int>(xs.size(), 0));
    for_each_segment(1, xs.back(), f, options.segments,
                     [&](unsigned worker, std::uint64_t block_lo, std::span<const Int> values) {
                         auto& acc = partial[worker];
                         std::size_t first = static_cast<std::size_t>(
                             std::lower_bound(xs.begin(), xs.end(), block_lo) - xs.begin());
                         for (std::size_t i = 0; i < values.size(); ++i) {
                             const Int v = values[i];
                             const std::uint64_t d = block_lo + i;
                             while (first < xs.size() && xs[first] < d)
                                 ++first;
                             if (v == 0)
                                 continue;
                             for (std::size_t k = first; k < xs.size(); ++k)
                                 acc[k] += v * static_cast<Int>(xs[k] / d);
                         }
                     });
    return merge(partial);
}

std::vector<Int> prefix_sums_at(const ExponentProfile& f, std::span<const std::uint64_t> xs,
                                const SummatoryOptions& options) {
    validate_checkpoints(xs, options);
    // bucket k collects f(n) for xs[k-1] < n <= xs[k]
    std::vector<std::vector<Int>> partial(worker_count(options), std::vector<Int>(xs.size(), 0));
    for_each_segment(1, xs.back(), f, options.segments,
                     [&](unsigned worker, std::uint64_t block_lo, std::span<const Int> values) {
                         auto& acc = partial[worker];
                         std::size_t k = static_cast<std::size_t>(
                             std::lower_bound(xs.begin(), xs.end(), block_lo) - xs.begin());
                         for (std::size_t i = 0; i < values.size(); ++i) {
                             const std::uint64_t n = block_lo + i;
                             while (xs[k] < n)
                                 ++k;
                             acc[k] += values[i];
                         }
                     });
    auto out = merge(partial);
    for (std::size_t k = 1; k < out.size(); ++k)
        out[k] = checked_add(out[k], out[k - 1]);
    return out;
}

std::vector<Int> summatory_lambda_conv_one(std::uint64_t q, std::span<const std::uint64_t> xs,
                                           const SummatoryOptions& options) {
    return floor_weighted_sums(lambda_q_profile(LegendreChar(q)), xs, options);
}

Int summatory_lambda_conv_one(std::uint64_t q, std::uint64_t x, const SummatoryOptions& options) {
    const std::uint64_t xs[] = {x};
    return summatory_lambda_conv_one(q, std::span<const std::uint64_t>(xs), options).front();
}

Int summatory_liouville_conv_one(std::uint64_t x, const SummatoryOptions& options) {
    const std::uint64_t xs[] = {x};
    return floor_weighted_sums(liouville_profile(), xs, options).front();
}

Int mertens(std::uint64_t x, const SummatoryOptions& options) {
    const std::uint64_t xs[] = {x};
    return prefix_sums_at(mobius_profile(), xs, options).front();
}

Int liouville_summatory(std::uint64_t x, const SummatoryOptions& options) {
    const std::uint64_t xs[] = {x};
    return prefix_sums_at(liouville_profile(), xs, options).front();
}

Int lambda5_floor_identity(std::uint64_t x, const CoeffSeries& mu) {
    const std::uint64_t r = iroot(x, 2);
    if (mu.limit() < r)
        throw ArgumentError("Möbius table reaches " + std::to_string(mu.limit()) + ", need " + std::to_string(r));
    Int total = 0;
    for (std::uint64_t d = 1; d <= r; ++d) {
        if (mu[d] == 0)
            continue;
        total += mu[d] * static_cast<Int>(iroot(x / (d * d), 5));
    }
    return total;
}

Int lambda5_floor_identity(std::uint64_t x) {
    return lambda5_floor_identity(x, mobius_sieve(std::max<std::uint64_t>(1, iroot(x, 2))));
}

bool IdentitySuite::success() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

namespace {

template <class Expected>
IdentityCheck prefix_check(std::string name, const CoeffSeries& f, Expected&& expected) {
    IdentityCheck check;
    check.name = std::move(name);
    check.passed = true;
    const auto sums = f.prefix_sums();
    for (std::uint64_t x = 1; x <= f.limit(); ++x) {
        const Int want = expected(x);
        if (sums[x] != want) {
            check.passed = false;
            check.first_mismatch = x;
            check.lhs_at_mismatch = sums[x];
            check.rhs_at_mismatch = want;
            break;
        }
    }
    return check;
}

} // namespace

IdentitySuite identity_suite(std::uint64_t limit, const SummatoryOptions& options) {
    if (limit == 0)
        throw ArgumentError("limit must be positive");
    IdentitySuite suite;
    suite.limit = limit;
    const auto sieve = build_factor_sieve(limit);
    const auto one = CoeffSeries::one(limit);

    const auto liouville_one = dirichlet_convolve(liouville_sieve(sieve), one);
    suite.checks.push_back(prefix_check("sum (lambda*1) = floor(x^(1/2))", liouville_one,
                                        [](std::uint64_t x) { return static_cast<Int>(iroot(x, 2)); }));

    const auto cube_one = dirichlet_convolve(lambda_q_sieve(LegendreChar(3), sieve), one);
    suite.checks.push_back(prefix_check("sum (lambda_3*1) = floor(x^(1/3))", cube_one,
                                        [](std::uint64_t x) { return static_cast<Int>(iroot(x, 3)); }));

    const auto mu = mobius_sieve(sieve);
    const auto five_one = dirichlet_convolve(lambda_q_sieve(LegendreChar(5), sieve), one);
    suite.checks.push_back(prefix_check("sum (lambda_5*1) = sum_d mu(d) floor((x/d^2)^(1/5))", five_one,
                                        [&](std::uint64_t x) { return lambda5_floor_identity(x, mu); }));

    // the streamed sums against the same prefix sums
    auto xs = dyadic_checkpoints(1, limit);
    if (xs.back() != limit)
        xs.push_back(limit);
    for (const auto& [q, table] : {std::pair<std::uint64_t, const CoeffSeries*>{3, &cube_one}, {5, &five_one}}) {
        const auto streamed = summatory_lambda_conv_one(q, xs, options);
        const auto sums = table->prefix_sums();
        IdentityCheck check;
        check.name = "streamed floor sums, q = " + std::to_string(q);
        check.passed = true;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (streamed[k] != sums[xs[k]]) {
                check.passed = false;
                check.first_mismatch = xs[k];
                check.lhs_at_mismatch = streamed[k];
                check.rhs_at_mismatch = sums[xs[k]];
                break;
            }
        }
        suite.checks.push_back(check);
    }
    return suite;
}

std::vector<std::uint64_t> dyadic_checkpoints(std::uint64_t from, std::uint64_t max) {
    std::vector<std::uint64_t> out;
    for (unsigned k = 0; k < 64; ++k) {
        const std::uint64_t v = 1ULL << k;
        if (v > max)
            break;
        if (v >= from)
            out.push_back(v);
    }
    return out;
}

std::vector<long double> default_alphas(const CaseClass& cls) {
    switch (cls.branch) {
    case Branch::PM1Mod8:
        return {std::max(1.0L / static_cast<long double>(*cls.c_q), kTheta.value()) + 0.05L};
    case Branch::PM11Mod24:
        return {1.0L / 3 + 0.05L};
    case Branch::PM5Mod24:
        return {0.5L};
    case Branch::Cube:
        return {0.0L};
    }
    return {};
}

SummatoryTrace trace(std::uint64_t q, std::span<const std::uint64_t> checkpoints, std::vector<long double> alphas,
                     const TraceOptions& options) {
    SummatoryTrace out;
    out.cls = classify(q);
    out.alphas = alphas.empty() ? default_alphas(out.cls) : std::move(alphas);
    if (!checkpoints.empty() && static_cast<long double>(checkpoints.front()) < std::exp(4.0L))
        throw ArgumentError("trace checkpoints must be at least e^4");

    const auto values = summatory_lambda_conv_one(q, checkpoints, options.summatory);
    const MainTermParams params = main_term_params(q, options.constants);
    out.leading_coefficient = params.leading_coefficient();
    out.bracket_constant = params.bracket_constant();

    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t fitted = 0;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const long double x = static_cast<long double>(checkpoints[k]);
        const MainTerm m = main_term(params, x);
        out.upper_bound_only = m.upper_bound_only;
        TraceRow row;
        row.x = checkpoints[k];
        row.value = values[k];
        row.main = m.value;
        row.main_error = m.error;
        row.residual = static_cast<long double>(values[k]) - m.value;
        for (long double a : out.alphas)
            row.normalized.push_back(row.residual / std::pow(x, a));
        if (row.residual != 0) {
            const long double lx = std::log(x), ly = std::log(std::fabs(row.residual));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++fitted;
        }
        out.rows.push_back(std::move(row));
    }
    if (fitted >= 2) {
        const long double n = static_cast<long double>(fitted);
        const long double den = n * sxx - sx * sx;
        if (den > 0)
            out.fitted_exponent = (n * sxy - sx * sy) / den;
    }
    return out;
}

std::optional<long double> delta_c(long double z, long double c) {
    if (!(z > std::numbers::e_v<long double>))
        return std::nullopt;
    const long double lz = std::log(z);
    return std::exp(-c * std::pow(lz, 0.6L) * std::pow(std::log(lz), -0.2L));
}

std::optional<long double> omega(long double z, long double eps) {
    if (!(z > std::numbers::e_v<long double>))
        return std::nullopt;
    const long double lz = std::log(z);
    return std::exp(std::sqrt(lz) * std::pow(std::log(lz), 2.5L + eps));
}

GrowthDiagnostic rh_diagnostic(std::uint64_t q, std::span<const std::uint64_t> checkpoints, long double epsilon,
                               long double c, const SummatoryOptions& options) {
    GrowthDiagnostic out;
    out.cls = classify(q);
    if (out.cls.branch != Branch::PM5Mod24)
        throw ClassificationError("the growth diagnostic applies to q ≡ ±5 (mod 24) only; q = " + std::to_string(q) +
                                  " is " + to_string(out.cls.branch));
    if (!(epsilon > 0))
        throw ArgumentError("epsilon must be positive");
    if (!(c > 0))
        throw ArgumentError("c must be positive");
    out.epsilon = epsilon;
    out.c = c;

    const auto values = summatory_lambda_conv_one(q, checkpoints, options);
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const long double x = static_cast<long double>(checkpoints[k]);
        const long double s = std::fabs(static_cast<long double>(values[k]));
        GrowthRow row;
        row.x = checkpoints[k];
        row.value = values[k];
        row.over_quarter = s / std::pow(x, 0.25L);
        if (auto w = omega(std::sqrt(x), epsilon))
            row.over_rh_shape = s / (std::pow(x, 0.25L) * *w);
        if (auto d = delta_c(std::pow(x, 0.25L), c))
            row.over_unconditional = s / (std::sqrt(x) * *d);
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace lamq
