#include "lamq/analytic.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "lamq/dirichlet.hpp"

namespace lamq {

std::string to_string(Branch b) {
    switch (b) {
    case Branch::Cube: return "Q_EQUALS_3";
    case Branch::PM1Mod8: return "PM1_MOD8";
    case Branch::PM11Mod24: return "PM11_MOD24";
    case Branch::PM5Mod24: return "PM5_MOD24";
    }
    return "?";
}

std::string to_string(SubBranch s) {
    switch (s) {
    case SubBranch::None: return "";
    case SubBranch::PM7Mod24: return "PM7_MOD24";
    case SubBranch::PM1Mod24: return "PM1_MOD24";
    case SubBranch::QEquals5: return "Q_EQUALS_5";
    case SubBranch::PM19or29Mod120: return "PM19_29_MOD120";
    case SubBranch::PM43or53Mod120: return "PM43_53_MOD120";
    }
    return "?";
}

CaseClass classify(std::uint64_t q) {
    if (q < 3 || !is_prime(q))
        throw ArgumentError("classify: q = " + std::to_string(q) + " is not an odd prime");
    const LegendreChar chi(q);
    const int top = static_cast<int>(q) - 1;
    auto first_m = [&](int sign) {
        for (int m = 2; m <= top; ++m)
            if (chi(m + 1) + sign * chi(m) != 0)
                return m;
        return top; // unreachable: χ(q) = 0 while χ(q-1) = ±1
    };

    CaseClass c;
    c.q = q;
    const auto r8 = q % 8;
    const auto r24 = q % 24;
    const auto r120 = q % 120;
    if (q == 3) {
        c.branch = Branch::Cube;
        c.d_q = first_m(+1);
    } else if (r8 == 1 || r8 == 7) {
        c.branch = Branch::PM1Mod8;
        c.sub = (r24 == 7 || r24 == 17) ? SubBranch::PM7Mod24 : SubBranch::PM1Mod24;
        c.c_q = first_m(-1);
    } else if (r24 == 11 || r24 == 13) {
        c.branch = Branch::PM11Mod24;
        c.d_q = first_m(+1);
    } else {
        c.branch = Branch::PM5Mod24;
        c.d_q = first_m(+1);
        if (q == 5)
            c.sub = SubBranch::QEquals5;
        else if (r120 == 19 || r120 == 101 || r120 == 29 || r120 == 91)
            c.sub = SubBranch::PM19or29Mod120;
        else
            c.sub = SubBranch::PM43or53Mod120;
    }
    return c;
}

namespace {

constexpr long double kMinZetaArg = 1.1L;
constexpr std::uint64_t kMaxZetaTerms = 200'000'000;

// Rosser–Schoenfeld (1962): π(t) < 1.25506 t / log t for t > 1, θ(t) < 1.01624 t for t > 0.
constexpr long double kPiConstant = 1.25506L;
constexpr long double kThetaConstant = 1.01624L;

void check_zeta_arg(long double s, long double tol) {
    if (!(s > kMinZetaArg))
        throw ArgumentError("zeta: s must exceed 1.1 (got " + std::to_string(static_cast<double>(s)) + ")");
    if (!(tol > 0))
        throw ArgumentError("zeta: tolerance must be positive");
}

long double rounding_allowance(std::uint64_t terms, long double magnitude) {
    return 4.0L * static_cast<long double>(terms + 1) * LDBL_EPSILON * magnitude;
}

// Σ_{n<T} term(n) by compensated summation, smallest first, plus the tail
// Σ_{n>=T} bracketed for a convex monotone summand: the trapezoid rule gives
// F(T) + f(T)/2 and the midpoint rule F(T - 1/2), where F(a) = ∫_a^∞ f.
template <class Term, class TailIntegral>
Bounded bracketed_sum(std::uint64_t T, Term term, TailIntegral tail_from) {
    long double sum = 0, comp = 0, mag = 0;
    for (std::uint64_t n = T - 1; n >= 1; --n) {
        const long double t = term(static_cast<long double>(n));
        const long double s = sum + t;
        comp += std::fabs(sum) >= std::fabs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
        mag += std::fabs(t);
    }
    const long double Tl = static_cast<long double>(T);
    const long double a = tail_from(Tl) + term(Tl) / 2;
    const long double b = tail_from(Tl - 0.5L);
    Bounded out;
    out.value = (sum + comp) + (a + b) / 2;
    const long double eps = LDBL_EPSILON;
    out.error = std::fabs(a - b) / 2 + 8 * eps * (mag + std::fabs(a) + std::fabs(b)) +
                4 * Tl * eps * eps * mag;
    return out;
}

// Least T >= 8 with bracket half-width below tol / 2, or 0 if beyond kMaxZetaTerms.
template <class Term, class TailIntegral>
std::uint64_t tail_cutoff(long double tol, Term term, TailIntegral tail_from) {
    auto width = [&](long double T) { return std::fabs(tail_from(T) + term(T) / 2 - tail_from(T - 0.5L)) / 2; };
    long double T = 8;
    while (width(T) > tol / 2) {
        T = std::ceil(T * 1.25L);
        if (T > static_cast<long double>(kMaxZetaTerms))
            return 0;
    }
    return static_cast<std::uint64_t>(T);
}

std::string achievable(const char* what, long double bound, std::uint64_t cutoff, long double tol) {
    std::ostringstream os;
    os << what << ": tolerance " << static_cast<double>(tol) << " not reachable at cutoff " << cutoff
       << "; achievable bound " << static_cast<double>(bound);
    return os.str();
}

// Local factor 1 + Σ_m b_m p^{-mσ} with b_m = coeff[m] (m >= c, c the first nonzero).
struct LocalTerms {
    std::vector<Int> coeff;
    int c = 0;
    long double sigma = 1;
};

// Σ_{p>P} |log f_p| with f_p = 1 + Σ b_m p^{-mσ}: for p > P,
// |f_p - 1| <= B p^{-cσ} where B = Σ|b_m| P^{-(m-c)σ}, and |log(1+t)| <= |t|/(1-|t|).
long double log_product_tail(const LocalTerms& t, std::uint64_t P) {
    const long double Pl = static_cast<long double>(P);
    const long double alpha = t.c * t.sigma;
    if (alpha <= 1)
        throw ArgumentError("log_product_tail: product does not converge absolutely");
    long double B = 0;
    for (std::size_t m = static_cast<std::size_t>(t.c); m < t.coeff.size(); ++m)
        B += std::fabs(static_cast<long double>(t.coeff[m])) * std::pow(Pl, -(static_cast<long double>(m) - t.c) * t.sigma);
    const long double shrink = 1 - B * std::pow(Pl, -alpha);
    if (shrink <= 0)
        throw PrecisionError("log_product_tail: cutoff too small for the tail estimate");
    // Σ_{p>P} p^{-α} <= α ∫_P^∞ π(t) t^{-α-1} dt <= 1.25506 α P^{1-α} / ((α-1) log P)
    const long double prime_sum = kPiConstant * alpha * std::pow(Pl, 1 - alpha) / ((alpha - 1) * std::log(Pl));
    return B / shrink * prime_sum;
}

} // namespace

Bounded zeta_real(long double s, long double tol) {
    check_zeta_arg(s, tol);
    auto term = [s](long double n) { return std::pow(n, -s); };
    auto tail = [s](long double a) { return std::pow(a, 1 - s) / (s - 1); };
    const std::uint64_t T = tail_cutoff(tol, term, tail);
    if (T == 0)
        throw PrecisionError(achievable("zeta_real", s * std::pow(static_cast<long double>(kMaxZetaTerms), -s - 1) / 4,
                                        kMaxZetaTerms, tol));
    Bounded b = bracketed_sum(T, term, tail);
    if (b.error > tol)
        throw PrecisionError(achievable("zeta_real", b.error, T, tol));
    return b;
}

Bounded zeta_prime_real(long double s, long double tol) {
    check_zeta_arg(s, tol);
    // log t · t^{-s} is decreasing and convex for t >= 8 whenever s > 1.1
    auto term = [s](long double n) { return -std::log(n) * std::pow(n, -s); };
    auto tail = [s](long double a) { return -std::pow(a, 1 - s) * (std::log(a) / (s - 1) + 1 / ((s - 1) * (s - 1))); };
    const std::uint64_t T = tail_cutoff(tol, term, tail);
    if (T == 0)
        throw PrecisionError(achievable("zeta_prime_real",
                                        s * std::log(static_cast<long double>(kMaxZetaTerms)) *
                                            std::pow(static_cast<long double>(kMaxZetaTerms), -s - 1) / 4,
                                        kMaxZetaTerms, tol));
    Bounded b = bracketed_sum(T, term, tail);
    if (b.error > tol)
        throw PrecisionError(achievable("zeta_prime_real", b.error, T, tol));
    return b;
}

PConstants P_q_constants(std::uint64_t q, std::uint64_t cutoff, long double tol) {
    const CaseClass cls = classify(q);
    if (cls.branch != Branch::PM1Mod8)
        throw ClassificationError("P_q_constants: q = " + std::to_string(q) + " is not ≡ ±1 (mod 8)");
    if (cutoff < 100)
        throw ArgumentError("P_q_constants: prime cutoff must be >= 100");

    LocalTerms t;
    t.coeff = local_factor_for(q, Family::P).coefficients(2, static_cast<int>(q) - 1);
    t.c = *cls.c_q;
    t.sigma = 1;

    PConstants out;
    out.cutoff = cutoff;
    long double sum_log = 0, sum_log_abs = 0;
    long double sum_ld = 0, sum_ld_abs = 0;
    std::uint64_t count = 0;
    for_each_prime(cutoff, [&](std::uint64_t p) {
        const long double x = 1.0L / static_cast<long double>(p);
        long double tp = 0, dp = 0;
        for (std::size_t m = t.coeff.size() - 1; m >= 1; --m) {
            tp = (tp + static_cast<long double>(t.coeff[m])) * x;
            dp = (dp + static_cast<long double>(t.coeff[m]) * static_cast<long double>(m)) * x;
        }
        const long double f = 1 + tp;
        if (!(f > 0 && f < 2))
            out.factors_in_range = false;
        const long double lg = std::log1p(tp);
        sum_log += lg;
        sum_log_abs += std::fabs(lg);
        const long double term = std::log(static_cast<long double>(p)) * dp / f;
        sum_ld += term;
        sum_ld_abs += std::fabs(term);
        ++count;
    });

    const long double Pl = static_cast<long double>(cutoff);
    const long double log_tail = log_product_tail(t, cutoff);

    // |log p · Σ b_m m p^{-m} / f_p| <= log p · B' p^{-c} / (1 - B P^{-c}) for p > P,
    // Σ_{p>P} log p · p^{-c} <= c ∫_P^∞ θ(t) t^{-c-1} dt <= 1.01624 c P^{1-c}/(c-1)
    long double B = 0, Bd = 0;
    for (std::size_t m = static_cast<std::size_t>(t.c); m < t.coeff.size(); ++m) {
        const long double w = std::fabs(static_cast<long double>(t.coeff[m])) * std::pow(Pl, -static_cast<long double>(m - t.c));
        B += w;
        Bd += w * static_cast<long double>(m);
    }
    const long double c = t.c;
    const long double shrink = 1 - B * std::pow(Pl, -c);
    const long double ld_tail = Bd / shrink * kThetaConstant * c * std::pow(Pl, 1 - c) / (c - 1);

    const long double round_log = rounding_allowance(count, sum_log_abs + 1);
    const long double round_ld = rounding_allowance(count, sum_ld_abs + 1);

    out.P1.value = std::exp(sum_log);
    out.P1.error = out.P1.value * std::expm1(log_tail + round_log) + rounding_allowance(1, out.P1.value);
    out.logderiv.value = -sum_ld;
    out.logderiv.error = ld_tail + round_ld;

    const long double worst = std::max(out.P1.error, out.logderiv.error);
    if (worst > tol)
        throw PrecisionError(achievable("P_q_constants", worst, cutoff, tol));
    return out;
}

RConstant R_q_at_half(std::uint64_t q, std::uint64_t cutoff, long double tol) {
    const CaseClass cls = classify(q);
    if (cls.branch != Branch::PM11Mod24)
        throw ClassificationError("R_q_at_half: q = " + std::to_string(q) + " is not ≡ ±11 (mod 24)");
    if (cutoff < 100)
        throw ArgumentError("R_q_at_half: prime cutoff must be >= 100");

    LocalTerms t;
    t.coeff = local_factor_for(q, Family::R).coefficients(2, static_cast<int>(q) - 1);
    t.c = *cls.d_q;
    t.sigma = 0.5L;

    RConstant out;
    out.cutoff = cutoff;
    long double sum_log = 0, sum_abs = 0;
    std::uint64_t count = 0;
    for_each_prime(cutoff, [&](std::uint64_t p) {
        const long double x = 1.0L / std::sqrt(static_cast<long double>(p));
        long double tp = 0;
        for (std::size_t m = t.coeff.size() - 1; m >= 1; --m)
            tp = (tp + static_cast<long double>(t.coeff[m])) * x;
        if (!(1 + tp > 0))
            out.factors_positive = false;
        const long double lg = std::log1p(tp);
        sum_log += lg;
        sum_abs += std::fabs(lg);
        ++count;
    });
    const long double log_err = log_product_tail(t, cutoff) + rounding_allowance(count, sum_abs + 1);
    out.R_half.value = std::exp(sum_log);
    out.R_half.error = out.R_half.value * std::expm1(log_err) + rounding_allowance(1, out.R_half.value);
    if (out.R_half.error > tol)
        throw PrecisionError(achievable("R_q_at_half", out.R_half.error, cutoff, tol));
    return out;
}

namespace {

Bounded product(const Bounded& a, const Bounded& b) {
    return {a.value * b.value,
            std::fabs(a.value) * b.error + std::fabs(b.value) * a.error + a.error * b.error};
}

} // namespace

std::optional<Bounded> MainTermParams::leading_coefficient() const {
    if (cls.branch == Branch::PM1Mod8 && P1)
        return product(zeta_q, *P1);
    if (cls.branch == Branch::PM11Mod24 && R_half && zeta_q_half)
        return product(*zeta_q_half, *R_half);
    return std::nullopt;
}

std::optional<Bounded> MainTermParams::bracket_constant() const {
    if (cls.branch != Branch::PM1Mod8 || !logderiv_P1)
        return std::nullopt;
    const long double ratio = zeta_prime_q.value / zeta_q.value;
    const long double ratio_err =
        (zeta_prime_q.error + std::fabs(ratio) * zeta_q.error) / (std::fabs(zeta_q.value) - zeta_q.error);
    const long double qd = static_cast<long double>(cls.q);
    Bounded k;
    k.value = -1 + qd * ratio + logderiv_P1->value;
    k.error = qd * ratio_err + logderiv_P1->error + rounding_allowance(4, std::fabs(k.value) + 1);
    return k;
}

MainTermParams main_term_params(std::uint64_t q, const ConstantsOptions& options) {
    MainTermParams mp;
    mp.cls = classify(q);
    const long double qd = static_cast<long double>(q);
    constexpr long double zeta_tol = 1e-15L;
    mp.zeta_q = zeta_real(qd, zeta_tol);
    mp.zeta_prime_q = zeta_prime_real(qd, zeta_tol);
    if (mp.cls.branch == Branch::PM1Mod8) {
        const PConstants pc = P_q_constants(q, options.p_cutoff, options.tol);
        mp.P1 = pc.P1;
        mp.logderiv_P1 = pc.logderiv;
    } else if (mp.cls.branch == Branch::PM11Mod24) {
        mp.R_half = R_q_at_half(q, options.r_cutoff, options.tol).R_half;
        mp.zeta_q_half = zeta_real(qd / 2, zeta_tol);
    }
    return mp;
}

MainTerm main_term(const MainTermParams& params, long double x) {
    if (!(x >= std::exp(4.0L) * (1 - 1e-15L)))
        throw ArgumentError("main_term: x must be >= e^4");
    MainTerm mt;
    switch (params.cls.branch) {
    case Branch::PM1Mod8: {
        const Bounded a = *params.leading_coefficient();
        const Bounded k = *params.bracket_constant();
        const long double bracket = std::log(x) + 2 * params.euler_gamma + k.value;
        mt.value = x * a.value * bracket;
        mt.error = x * (a.error * std::fabs(bracket) + std::fabs(a.value) * k.error + a.error * k.error) +
                   rounding_allowance(8, std::fabs(mt.value));
        break;
    }
    case Branch::PM11Mod24: {
        const Bounded a = *params.leading_coefficient();
        const long double r = std::sqrt(x);
        mt.value = r * a.value;
        mt.error = r * a.error + rounding_allowance(2, std::fabs(mt.value));
        break;
    }
    case Branch::Cube:
        mt.value = std::cbrt(x);
        mt.error = rounding_allowance(2, mt.value);
        break;
    case Branch::PM5Mod24:
        mt.upper_bound_only = true;
        break;
    }
    return mt;
}

} // namespace lamq
