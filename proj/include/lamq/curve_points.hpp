#pragma once

// Short sums of λ_5 ⋆ 1 and integer points near f(n) = √(x/n⁵):
// exact counting, the decomposition into per-n double counts, bound shapes
// and the three-range scan.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lamq/core_arith.hpp"

namespace lamq {

struct Rational {
    Int num = 1;
    Int den = 1;
    long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
};

/// R(f, N, δ) with f(n) = X / n^s.
struct CurveConfig {
    long double X = 1;
    Rational s{5, 2};
    std::uint64_t N = 1;
    long double delta = 0.1L;
};

/// #{n ∈ [N, 2N] : ‖X/n^s‖ < δ} in long double. Points within the guard band
/// max(1e-12, 64 ε |f(n)|) of δ throw UndecidableError listing every such n.
Int count_near_curve(const CurveConfig& cfg);

/// #{n ∈ [N, 2N] : ‖√(x/n⁵)‖ < y/√(N⁵x)}, decided exactly in rational arithmetic.
Int count_near_curve_exact(std::uint64_t x, std::uint64_t y, std::uint64_t N);

struct ShortIntervalInstance {
    std::uint64_t x = 1;
    std::uint64_t y = 0;
    long double c3 = 0.25L;

    /// Throws ArgumentError unless 0 <= y <= x, x >= 1 and 0 < c3 <= 1/4.
    void validate() const;
    /// y <= c3 x^{11/20}
    bool within_first_range() const;
    /// y <= c3 x^{19/36}
    bool within_second_range() const;
};

/// Σ_{x<n≤x+y} (λ_5 ⋆ 1)(n) from the μ-floor identity at both endpoints.
Int short_interval_sum(const ShortIntervalInstance& inst);

/// Σ_{x<n≤x+y} τ(n) by sieving the window.
Int divisor_sum_window(std::uint64_t x, std::uint64_t y, const SegmentOptions& options = {});

/// isqrt(floor((x+y)/n⁵)) - isqrt(floor(x/n⁵)) for n >= 2, 0 for n = 1 (d is capped at √x).
Int per_n_count(std::uint64_t x, std::uint64_t y, std::uint64_t n);

struct DyadicWindow {
    std::uint64_t k = 0;      ///< window base 2^k
    std::uint64_t lo = 0;     ///< [lo, hi] = [2^k, 2^{k+1}) ∩ [n_lo, n_hi]
    std::uint64_t hi = 0;
    Int double_count = 0;     ///< Σ_{lo≤n≤hi} per_n_count
    Int R = 0;                ///< count_near_curve_exact(x, y, lo), over [lo, 2 lo]
    long double delta = 0;    ///< y / √(lo⁵ x)
    bool delta_guard = false; ///< 16 y² < lo⁵ x, exactly
};

struct Lemma6Decomposition {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    Int short_sum = 0;
    Int mu_part = 0;        ///< Σ_{d≤√x} μ(d)(⌊((x+y)/d²)^{1/5}⌋ - ⌊(x/d²)^{1/5}⌋)
    Int boundary_mu = 0;    ///< Σ_{√x<d≤√(x+y)} μ(d)
    Int boundary_count = 0; ///< #{d : √x < d ≤ √(x+y)}
    Int double_count = 0;   ///< Σ_{d≤√x} #{n : x < d²n⁵ ≤ x+y}, summed by d
    std::uint64_t n_lo = 0; ///< least n with n⁵x > 16y²
    std::uint64_t n_hi = 0; ///< greatest n with n⁵ ≤ 2x
    Int low_part = 0;       ///< Σ_{n<n_lo} per_n_count
    std::vector<DyadicWindow> windows;

    bool identity_holds() const { return short_sum == mu_part + boundary_mu; }
    /// |short sum| <= double count + boundary count
    bool inequality_holds() const;
    /// low part plus window double counts equals the double count by d
    bool windows_match() const;
    bool guards_hold() const;
    /// each window's double count is at most its R count
    bool windows_below_R() const;
};

Lemma6Decomposition lemma6_decomposition(const ShortIntervalInstance& inst);

enum class BoundShape { FifthDerivative, FilasetaTrifonov, FirstDerivative };
std::string to_string(BoundShape s);

struct BoundShapes {
    std::uint64_t N = 0;
    long double delta = 0;
    long double lambda4 = 0, lambda5 = 0;
    long double fifth_derivative = 0;
    long double filaseta_trifonov = 0;
    bool lemma5_condition = false; ///< N² δ <= c3
    bool lemma5_domain = false;    ///< N <= X^{1/s} = x^{1/5}
    long double lambda1 = 0;       ///< √x N^{-7/2}
    long double slope_at_N = 0;    ///< |f'(N)|
    long double slope_at_2N = 0;   ///< |f'(2N)|
    long double first_derivative = 0;
};

/// All three shapes at N with implied constants 1 and δ = y/√(N⁵x).
BoundShapes bound_shapes(std::uint64_t N, std::uint64_t x, std::uint64_t y, long double c3 = 0.25L);

/// 1: N^10 <= 1024x, 2: N^6 <= 64x, otherwise 3 (exact integer tests).
int range_of(std::uint64_t N, std::uint64_t x);

struct ScanRow {
    std::uint64_t N = 0;
    int range = 0;
    Int R = 0;
    long double delta = 0;
    bool delta_guard = false;
    bool lemma5_condition = false;
    BoundShape shape = BoundShape::FifthDerivative;
    long double bound = 0;
    long double ratio = 0; ///< R / bound
};

struct RangeSummary {
    int range = 0;
    bool empty = true;
    std::uint64_t first = 0, last = 0;
    Int max_R = 0;
    std::uint64_t argmax = 0;
    long double range_bound = 0; ///< the per-range estimate of the three-range proof
    long double ratio = 0;
};

struct Theorem6Report {
    ShortIntervalInstance inst;
    bool within_first_range = false;
    bool within_second_range = false;
    Int short_sum = 0;
    Int divisor_bound = 0;
    bool below_divisor_bound = false;
    std::vector<ScanRow> rows; ///< every integer N in [n_lo, n_hi], ascending
    std::array<RangeSummary, 3> ranges{};
    long double lemma6_bound = 0;   ///< max R log x + y x^{-1/2} + x^{-1/5} y^{2/5}
    long double theorem6_bound = 0; ///< (x^{1/12} + y x^{-4/9}) log x
    long double ratio = 0;          ///< |short sum| / theorem6_bound
    bool coverage_ok = false;
    bool guards_ok = false;
    Lemma6Decomposition decomposition;
};

Theorem6Report theorem6_scan(const ShortIntervalInstance& inst, const SegmentOptions& options = {});

} // namespace lamq
