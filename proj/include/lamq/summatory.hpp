#pragma once

// Exact summatory functions S_q(x) = Σ_{n≤x} (λ_q ⋆ 1)(n), M(x), L(x), and
// their comparison against the asymptotic main terms.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lamq/analytic.hpp"
#include "lamq/core_arith.hpp"
#include "lamq/dirichlet.hpp"

namespace lamq {

struct SummatoryOptions {
    /// largest x accepted; the sieve needs O(segment) memory but O(x) time
    std::uint64_t limit = 100'000'000;
    SegmentOptions segments;
};

/// Σ_{d≤x} f(d)·floor(x/d) for every x in xs (ascending), in one sieve pass up to max(xs).
std::vector<Int> floor_weighted_sums(const ExponentProfile& f, std::span<const std::uint64_t> xs,
                                     const SummatoryOptions& options = {});

/// Σ_{n≤x} f(n) for every x in xs (ascending), in one sieve pass.
std::vector<Int> prefix_sums_at(const ExponentProfile& f, std::span<const std::uint64_t> xs,
                                const SummatoryOptions& options = {});

/// Σ_{d≤x} λ_q(d) floor(x/d).
Int summatory_lambda_conv_one(std::uint64_t q, std::uint64_t x, const SummatoryOptions& options = {});
std::vector<Int> summatory_lambda_conv_one(std::uint64_t q, std::span<const std::uint64_t> xs,
                                           const SummatoryOptions& options = {});
/// Σ_{d≤x} λ(d) floor(x/d), which equals floor(√x).
Int summatory_liouville_conv_one(std::uint64_t x, const SummatoryOptions& options = {});

Int mertens(std::uint64_t x, const SummatoryOptions& options = {});
Int liouville_summatory(std::uint64_t x, const SummatoryOptions& options = {});

/// Σ_{d≤√x} μ(d) floor((x/d²)^{1/5}) with integer fifth roots; mu must reach floor(√x).
Int lambda5_floor_identity(std::uint64_t x, const CoeffSeries& mu);
Int lambda5_floor_identity(std::uint64_t x);

struct IdentitySuite {
    std::uint64_t limit = 0;
    std::vector<IdentityCheck> checks;
    bool success() const;
};

/// For every x <= limit: Σ(λ⋆1) = floor(√x), Σ(λ_3⋆1) = floor(x^{1/3}), Σ(λ_5⋆1) = the μ-floor
/// identity; the prefix sums come from explicit convolution with 1. The streamed floor sums are
/// cross-checked at the dyadic points.
IdentitySuite identity_suite(std::uint64_t limit, const SummatoryOptions& options = {});

/// 2^k for from <= 2^k <= max.
std::vector<std::uint64_t> dyadic_checkpoints(std::uint64_t from, std::uint64_t max);

struct TraceRow {
    std::uint64_t x = 0;
    Int value = 0;
    long double main = 0;
    long double main_error = 0;
    long double residual = 0;
    /// residual / x^α, one entry per α of the trace
    std::vector<long double> normalized;
};

struct SummatoryTrace {
    CaseClass cls;
    std::vector<long double> alphas;
    std::vector<TraceRow> rows;
    bool upper_bound_only = false;
    std::optional<Bounded> leading_coefficient;
    std::optional<Bounded> bracket_constant;
    /// least-squares slope of log|residual| against log x (report only)
    std::optional<long double> fitted_exponent;
};

struct TraceOptions {
    SummatoryOptions summatory;
    ConstantsOptions constants;
};

/// PM1Mod8: max(1/c_q, 131/416) + 0.05; PM11Mod24: 1/3 + 0.05; PM5Mod24: 1/2; q = 3: 0.
std::vector<long double> default_alphas(const CaseClass& cls);

/// Checkpoints must be ascending and >= e^4; empty alphas selects the defaults.
SummatoryTrace trace(std::uint64_t q, std::span<const std::uint64_t> checkpoints,
                     std::vector<long double> alphas = {}, const TraceOptions& options = {});

/// δ_c(z) = exp(-c (log z)^{3/5} (log log z)^{-1/5}); empty when z <= e.
std::optional<long double> delta_c(long double z, long double c);
/// ω(z) = exp((log z)^{1/2} (log log z)^{5/2+ε}); empty when z <= e.
std::optional<long double> omega(long double z, long double eps);

struct GrowthRow {
    std::uint64_t x = 0;
    Int value = 0;
    long double over_quarter = 0;                  ///< |S(x)| / x^{1/4}
    std::optional<long double> over_rh_shape;      ///< |S(x)| / (x^{1/4} ω(√x))
    std::optional<long double> over_unconditional; ///< |S(x)| / (x^{1/2} δ_c(x^{1/4}))
};

struct GrowthDiagnostic {
    CaseClass cls;
    long double epsilon = 0.01L;
    long double c = 0.2L;
    std::vector<GrowthRow> rows;
};

/// PM5Mod24 only (including q = 5).
GrowthDiagnostic rh_diagnostic(std::uint64_t q, std::span<const std::uint64_t> checkpoints,
                               long double epsilon = 0.01L, long double c = 0.2L,
                               const SummatoryOptions& options = {});

} // namespace lamq
