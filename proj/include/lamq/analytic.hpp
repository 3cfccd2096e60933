#pragma once

// Residue-class classification of q and certified numerics for the
// main-term constants: ζ(s), ζ'(s) on the real axis, P_q(1), P_q'/P_q(1),
// R_q(1/2), with explicit absolute error bounds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lamq/core_arith.hpp"

namespace lamq {

enum class Branch {
    Cube,      ///< q = 3: L(s, λ_3) = ζ(3s)/ζ(s), the sum is exactly floor(x^{1/3})
    PM1Mod8,   ///< q ≡ ±1 (mod 8): main term x log x scale
    PM11Mod24, ///< q ≡ ±11 (mod 24): main term √x scale
    PM5Mod24,  ///< q ≡ ±5 (mod 24): no main term, upper bounds only
};

enum class SubBranch {
    None,
    PM7Mod24,      ///< under PM1Mod8, c_q = 2
    PM1Mod24,      ///< under PM1Mod8, 4 <= c_q < q
    QEquals5,      ///< under PM5Mod24
    PM19or29Mod120, ///< under PM5Mod24, K_q = ζ(4s) L_q
    PM43or53Mod120, ///< under PM5Mod24, K_q = ℒ_q / ζ(4s)
};

std::string to_string(Branch b);
std::string to_string(SubBranch s);

struct CaseClass {
    std::uint64_t q = 0;
    Branch branch = Branch::Cube;
    SubBranch sub = SubBranch::None;
    /// first m >= 2 with χ(m+1) ≠ χ(m); present iff branch == PM1Mod8
    std::optional<int> c_q;
    /// first m >= 2 with χ(m+1) + χ(m) ≠ 0; present iff q ≡ ±3 (mod 8)
    std::optional<int> d_q;
};

/// Throws ArgumentError unless q is an odd prime.
CaseClass classify(std::uint64_t q);

/// 131/416 and its lower companion 1/4, kept exact.
struct Exponent {
    Int num;
    Int den;
    long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
};
inline constexpr Exponent kTheta{131, 416};
inline constexpr Exponent kThetaLower{1, 4};

/// Euler–Mascheroni constant, 30 digits (OEIS A001620).
inline constexpr long double kEulerGamma = 0.577215664901532860606512090082L;

/// A value with a certified absolute error bound.
struct Bounded {
    long double value = 0;
    long double error = 0;
};

/// ζ(s) for real s > 1.1 with |result - ζ(s)| <= error <= tol.
Bounded zeta_real(long double s, long double tol);
/// ζ'(s) for real s > 1.1 with |result - ζ'(s)| <= error <= tol.
Bounded zeta_prime_real(long double s, long double tol);

struct PConstants {
    Bounded P1;         ///< P_q(1)
    Bounded logderiv;   ///< P_q'/P_q(1)
    std::uint64_t cutoff = 0;
    bool factors_in_range = true; ///< every local factor at p <= cutoff lies in (0, 2)
};

/// Product and log-derivative over p <= cutoff plus a certified tail; PM1Mod8 only.
PConstants P_q_constants(std::uint64_t q, std::uint64_t cutoff, long double tol);

struct RConstant {
    Bounded R_half;     ///< R_q(1/2)
    std::uint64_t cutoff = 0;
    bool factors_positive = true;
};

/// R_q(1/2) over p <= cutoff plus a certified tail; PM11Mod24 only.
RConstant R_q_at_half(std::uint64_t q, std::uint64_t cutoff, long double tol);

struct ConstantsOptions {
    long double tol = 5e-4L;
    std::uint64_t p_cutoff = 10'000'000;   ///< for P_q(1)
    std::uint64_t r_cutoff = 100'000'000;  ///< for R_q(1/2)
};

struct MainTermParams {
    CaseClass cls;
    Bounded zeta_q;
    Bounded zeta_prime_q;
    std::optional<Bounded> P1;
    std::optional<Bounded> logderiv_P1;
    std::optional<Bounded> R_half;
    std::optional<Bounded> zeta_q_half;
    long double euler_gamma = kEulerGamma;
    Exponent theta = kTheta;

    /// PM1Mod8: ζ(q)P_q(1). PM11Mod24: ζ(q/2)R_q(1/2).
    std::optional<Bounded> leading_coefficient() const;
    /// PM1Mod8: -1 + q ζ'(q)/ζ(q) + P_q'/P_q(1), the constant after log x + 2γ.
    std::optional<Bounded> bracket_constant() const;
};

MainTermParams main_term_params(std::uint64_t q, const ConstantsOptions& options = {});

struct MainTerm {
    long double value = 0;
    long double error = 0;
    /// set for PM5Mod24: no asymptotic main term, value is 0
    bool upper_bound_only = false;
};

/// x ≥ e^4.
MainTerm main_term(const MainTermParams& params, long double x);

} // namespace lamq
