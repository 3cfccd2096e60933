#pragma once

// Exact Dirichlet-coefficient algebra: convolution, convolution inverse,
// truncated power series in u = p^{-s}, Euler-product expansion, and the
// coefficient-level check of the Dirichlet series factorizations of λ_q.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lamq/core_arith.hpp"

namespace lamq {

/// (a ⋆ b)(n) = Σ_{d|n} a(d) b(n/d), exact up to the common limit.
CoeffSeries dirichlet_convolve(const CoeffSeries& a, const CoeffSeries& b);

/// Convolution inverse; requires a(1) = ±1 so the inverse stays integral.
CoeffSeries dirichlet_inverse(const CoeffSeries& a);

/// Truncated power series with exact rational coefficients c_0 .. c_order.
class FormalPowerSeries {
public:
    using Coeff = boost::multiprecision::cpp_rational;

    explicit FormalPowerSeries(int order);
    FormalPowerSeries(int order, const std::vector<Int>& coefficients);

    static FormalPowerSeries one(int order);
    static FormalPowerSeries monomial(int exponent, Int coefficient, int order);

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const Coeff& operator[](int e) const { return c_.at(static_cast<std::size_t>(e)); }
    Coeff& operator[](int e) { return c_.at(static_cast<std::size_t>(e)); }

    FormalPowerSeries operator+(const FormalPowerSeries& o) const;
    FormalPowerSeries operator-(const FormalPowerSeries& o) const;
    FormalPowerSeries operator*(const FormalPowerSeries& o) const;
    /// Division by a series with nonzero constant term.
    FormalPowerSeries operator/(const FormalPowerSeries& o) const;

    FormalPowerSeries truncated(int order) const;

    /// The coefficients as int64; throws PrecisionError on a non-integer and OverflowError on range.
    std::vector<Int> to_integers() const;

private:
    void check_same_order(const FormalPowerSeries& o) const;
    std::vector<Coeff> c_;
};

/// Euler factor of a multiplicative function as a power series in u = p^{-s}.
class LocalFactor {
public:
    /// (p, order) -> coefficients of u^0..u^order
    using Generator = std::function<std::vector<Int>(std::uint64_t p, int order)>;
    /// order -> exact series, for factors that do not depend on p
    using UniformGenerator = std::function<FormalPowerSeries(int order)>;

    LocalFactor(std::string name, Generator generator);
    static LocalFactor uniform(std::string name, UniformGenerator generator);

    const std::string& name() const noexcept { return name_; }
    bool prime_independent() const noexcept { return uniform_ != nullptr; }

    /// Coefficients at p up to u^order; checks the constant term is 1.
    std::vector<Int> coefficients(std::uint64_t p, int order) const;

    /// Product of Euler factors (the factor of the Dirichlet product).
    friend LocalFactor operator*(const LocalFactor& a, const LocalFactor& b);

private:
    std::string name_;
    Generator generator_;
    UniformGenerator uniform_;
};

/// ζ(r s): 1 + u^r + u^{2r} + ...
LocalFactor zeta_local(unsigned r);
/// 1/ζ(r s): 1 - u^r
LocalFactor zeta_inverse_local(unsigned r);
/// L(s, λ_q) directly: coefficient of u^e is χ_q(e + 1).
LocalFactor lambda_q_local(const LegendreChar& chi);

/// Product families from the factorizations of L(s, λ_q). None includes the ζ(qs) factor.
enum class Family {
    P,       ///< 1 + Σ_{m=c_q}^{q-1} {χ(m+1) - χ(m)} u^m, q ≡ ±1 (mod 8)
    D,       ///< 1 + Σ_{m=d_q}^{q-1} {χ(m+1) + χ(m)} u^m, q ≡ ±3 (mod 8), including q = 3
    R,       ///< the D factor for q ≡ ±11 (mod 24), where it starts at u^3
    L,       ///< 1 + 2(u^5+u^6+u^7)/(1-u^2) + (1+u^2)/(1-u^2) Σ_{m≥6}{χ(m+1)+χ(m)} u^m, q ≡ ±19, ±29 (mod 120)
    ScriptL, ///< 1 - (2u^6 - u^8)/D + Σ_{m≥6}{χ(m+1)+χ(m)} u^m / D, D = (1-u^2)^3 (1+u^2), q ≡ ±43, ±53 (mod 120)
    K,       ///< 1 - u^4/(1-u^2)^2 + Σ_{m≥4}{χ(m+1)+χ(m)} u^m/(1-u^2)^2, q ≡ ±5 (mod 24)
};

std::string to_string(Family f);

/// The Euler factor of the requested family; throws ClassificationError when q is outside its class.
LocalFactor local_factor_for(std::uint64_t q, Family family);

/// values[n] = Π_{p^e || n} local(p)[e], computed in place over ascending primes.
CoeffSeries expand_euler_product(const LocalFactor& local, std::uint64_t limit);

/// Smallest e >= 1 with p^e > n, minus one: floor(log_p n), in integer arithmetic.
int max_exponent(std::uint64_t p, std::uint64_t n);

struct IdentityCheck {
    std::string name;
    bool passed = false;
    std::optional<std::uint64_t> first_mismatch;
    Int lhs_at_mismatch = 0;
    Int rhs_at_mismatch = 0;
};

struct FactorizationReport {
    std::uint64_t q = 0;
    std::uint64_t limit = 0;
    std::vector<IdentityCheck> checks;

    bool success() const;
    /// Smallest offending n over all checks.
    std::optional<std::uint64_t> first_mismatch() const;
};

/// Compares λ_q ⋆ 1 (sieve + convolution) with every factorization that applies to q.
FactorizationReport verify_factorization(std::uint64_t q, std::uint64_t limit);

/// Compares two series and records the first differing index.
IdentityCheck compare_series(std::string name, const CoeffSeries& lhs, const CoeffSeries& rhs);

} // namespace lamq
