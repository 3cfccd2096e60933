#include "lamq/dirichlet.hpp"

#include <algorithm>

#include "lamq/analytic.hpp"

namespace lamq {

CoeffSeries dirichlet_convolve(const CoeffSeries& a, const CoeffSeries& b) {
    if (a.limit() != b.limit())
        throw ArgumentError("dirichlet_convolve: limits differ (" + std::to_string(a.limit()) + " vs " +
                            std::to_string(b.limit()) + ")");
    const std::uint64_t n = a.limit();
    std::vector<Int> out(n + 1, 0);
    for (std::uint64_t d = 1; d <= n; ++d) {
        const Int ad = a[d];
        if (ad == 0)
            continue;
        for (std::uint64_t k = 1, m = d; m <= n; ++k, m += d) {
            const Int bk = b[k];
            if (bk != 0)
                out[m] = checked_add(out[m], checked_mul(ad, bk));
        }
    }
    return CoeffSeries(n, std::move(out));
}

CoeffSeries dirichlet_inverse(const CoeffSeries& a) {
    const Int a1 = a[1];
    if (a1 != 1 && a1 != -1)
        throw ArgumentError("dirichlet_inverse: a(1) = " + std::to_string(a1) +
                            " is not a unit, the inverse is not integral");
    const std::uint64_t n = a.limit();
    // acc[m] = Σ_{d|m, d>1} a(d) b(m/d) over the b values fixed so far
    std::vector<Int> b(n + 1, 0), acc(n + 1, 0);
    for (std::uint64_t i = 1; i <= n; ++i) {
        const Int target = (i == 1 ? 1 : 0);
        b[i] = checked_mul(checked_add(target, -acc[i]), a1); // 1/a1 == a1
        if (b[i] == 0)
            continue;
        for (std::uint64_t j = 2, m = 2 * i; m <= n; ++j, m += i) {
            const Int aj = a[j];
            if (aj != 0)
                acc[m] = checked_add(acc[m], checked_mul(b[i], aj));
        }
    }
    return CoeffSeries(n, std::move(b));
}

// ---------------------------------------------------------------------------

FormalPowerSeries::FormalPowerSeries(int order) {
    if (order < 0)
        throw ArgumentError("FormalPowerSeries: order must be >= 0");
    c_.assign(static_cast<std::size_t>(order) + 1, Coeff(0));
}

FormalPowerSeries::FormalPowerSeries(int order, const std::vector<Int>& coefficients) : FormalPowerSeries(order) {
    for (std::size_t e = 0; e < coefficients.size() && e < c_.size(); ++e)
        c_[e] = coefficients[e];
}

FormalPowerSeries FormalPowerSeries::one(int order) { return monomial(0, 1, order); }

FormalPowerSeries FormalPowerSeries::monomial(int exponent, Int coefficient, int order) {
    FormalPowerSeries s(order);
    if (exponent >= 0 && exponent <= order)
        s.c_[static_cast<std::size_t>(exponent)] = coefficient;
    return s;
}

void FormalPowerSeries::check_same_order(const FormalPowerSeries& o) const {
    if (o.order() != order())
        throw ArgumentError("FormalPowerSeries: truncation orders differ");
}

FormalPowerSeries FormalPowerSeries::operator+(const FormalPowerSeries& o) const {
    check_same_order(o);
    FormalPowerSeries r = *this;
    for (std::size_t e = 0; e < c_.size(); ++e)
        r.c_[e] += o.c_[e];
    return r;
}

FormalPowerSeries FormalPowerSeries::operator-(const FormalPowerSeries& o) const {
    check_same_order(o);
    FormalPowerSeries r = *this;
    for (std::size_t e = 0; e < c_.size(); ++e)
        r.c_[e] -= o.c_[e];
    return r;
}

FormalPowerSeries FormalPowerSeries::operator*(const FormalPowerSeries& o) const {
    check_same_order(o);
    FormalPowerSeries r(order());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        for (std::size_t j = 0; i + j < c_.size(); ++j)
            r.c_[i + j] += c_[i] * o.c_[j];
    }
    return r;
}

FormalPowerSeries FormalPowerSeries::operator/(const FormalPowerSeries& o) const {
    check_same_order(o);
    if (o.c_[0] == 0)
        throw ArgumentError("FormalPowerSeries: division by a series with zero constant term");
    FormalPowerSeries r(order());
    for (std::size_t e = 0; e < c_.size(); ++e) {
        Coeff acc = c_[e];
        for (std::size_t j = 1; j <= e; ++j)
            acc -= o.c_[j] * r.c_[e - j];
        r.c_[e] = acc / o.c_[0];
    }
    return r;
}

FormalPowerSeries FormalPowerSeries::truncated(int order) const {
    FormalPowerSeries r(order);
    for (std::size_t e = 0; e < r.c_.size() && e < c_.size(); ++e)
        r.c_[e] = c_[e];
    return r;
}

std::vector<Int> FormalPowerSeries::to_integers() const {
    using boost::multiprecision::cpp_int;
    std::vector<Int> out(c_.size());
    for (std::size_t e = 0; e < c_.size(); ++e) {
        if (denominator(c_[e]) != 1)
            throw PrecisionError("FormalPowerSeries: coefficient of u^" + std::to_string(e) + " is " +
                                 c_[e].str() + ", not an integer");
        const cpp_int v = numerator(c_[e]);
        if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
            throw OverflowError("FormalPowerSeries: coefficient of u^" + std::to_string(e) +
                                " exceeds int64");
        out[e] = static_cast<Int>(v);
    }
    return out;
}

// ---------------------------------------------------------------------------

LocalFactor::LocalFactor(std::string name, Generator generator)
    : name_(std::move(name)), generator_(std::move(generator)) {}

LocalFactor LocalFactor::uniform(std::string name, UniformGenerator generator) {
    auto shared = std::move(generator);
    LocalFactor f(std::move(name), [shared](std::uint64_t, int order) { return shared(order).to_integers(); });
    f.uniform_ = shared;
    return f;
}

std::vector<Int> LocalFactor::coefficients(std::uint64_t p, int order) const {
    auto c = generator_(p, order);
    c.resize(static_cast<std::size_t>(order) + 1, 0);
    if (c[0] != 1)
        throw ArgumentError("LocalFactor " + name_ + ": constant term is " + std::to_string(c[0]) + ", not 1");
    return c;
}

LocalFactor operator*(const LocalFactor& a, const LocalFactor& b) {
    const std::string name = a.name_ + " * " + b.name_;
    if (a.uniform_ && b.uniform_) {
        auto fa = a.uniform_;
        auto fb = b.uniform_;
        return LocalFactor::uniform(name, [fa, fb](int order) { return fa(order) * fb(order); });
    }
    auto ga = a.generator_;
    auto gb = b.generator_;
    return LocalFactor(name, [ga, gb](std::uint64_t p, int order) {
        auto x = ga(p, order);
        auto y = gb(p, order);
        x.resize(static_cast<std::size_t>(order) + 1, 0);
        y.resize(static_cast<std::size_t>(order) + 1, 0);
        std::vector<Int> r(static_cast<std::size_t>(order) + 1, 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; i + j < r.size(); ++j)
                r[i + j] = checked_add(r[i + j], checked_mul(x[i], y[j]));
        return r;
    });
}

LocalFactor zeta_local(unsigned r) {
    if (r < 1)
        throw ArgumentError("zeta_local: r must be >= 1");
    return LocalFactor::uniform("zeta(" + std::to_string(r) + "s)", [r](int order) {
        FormalPowerSeries s(order);
        for (int e = 0; e <= order; e += static_cast<int>(r))
            s[e] = 1;
        return s;
    });
}

LocalFactor zeta_inverse_local(unsigned r) {
    if (r < 1)
        throw ArgumentError("zeta_inverse_local: r must be >= 1");
    return LocalFactor::uniform("1/zeta(" + std::to_string(r) + "s)", [r](int order) {
        return FormalPowerSeries::one(order) - FormalPowerSeries::monomial(static_cast<int>(r), 1, order);
    });
}

LocalFactor lambda_q_local(const LegendreChar& chi) {
    return LocalFactor::uniform("L(s,lambda_" + std::to_string(chi.q()) + ")", [chi](int order) {
        FormalPowerSeries s(order);
        for (int e = 0; e <= order; ++e)
            s[e] = chi(e + 1);
        return s;
    });
}

std::string to_string(Family f) {
    switch (f) {
    case Family::P: return "P";
    case Family::D: return "D";
    case Family::R: return "R";
    case Family::L: return "L";
    case Family::ScriptL: return "ScriptL";
    case Family::K: return "K";
    }
    return "?";
}

namespace {

// Σ_{m=from}^{q-1} {χ(m+1) ± χ(m)} u^m
FormalPowerSeries character_tail(const LegendreChar& chi, int from, int sign, int order) {
    FormalPowerSeries s(order);
    const int q = static_cast<int>(chi.q());
    for (int m = from; m <= q - 1 && m <= order; ++m)
        s[m] = chi(m + 1) + sign * chi(m);
    return s;
}

void require(bool ok, std::uint64_t q, Family f, const char* cls) {
    if (!ok)
        throw ClassificationError("local_factor_for: family " + to_string(f) + " needs q " + cls + ", got q = " +
                                  std::to_string(q));
}

} // namespace

LocalFactor local_factor_for(std::uint64_t q, Family family) {
    const CaseClass cls = classify(q);
    const LegendreChar chi(q);
    const std::string name = to_string(family) + "_" + std::to_string(q);
    const auto mod8 = q % 8;
    switch (family) {
    case Family::P: {
        require(cls.branch == Branch::PM1Mod8, q, family, "≡ ±1 (mod 8)");
        const int c = *cls.c_q;
        return LocalFactor::uniform(name, [chi, c](int order) {
            return FormalPowerSeries::one(order) + character_tail(chi, c, -1, order);
        });
    }
    case Family::D:
    case Family::R: {
        if (family == Family::D)
            require(mod8 == 3 || mod8 == 5, q, family, "≡ ±3 (mod 8)");
        else
            require(cls.branch == Branch::PM11Mod24, q, family, "≡ ±11 (mod 24)");
        const int d = *cls.d_q;
        return LocalFactor::uniform(name, [chi, d](int order) {
            return FormalPowerSeries::one(order) + character_tail(chi, d, +1, order);
        });
    }
    case Family::L: {
        require(cls.sub == SubBranch::PM19or29Mod120, q, family, "≡ ±19, ±29 (mod 120)");
        return LocalFactor::uniform(name, [chi](int order) {
            using S = FormalPowerSeries;
            const S one = S::one(order);
            const S u2 = S::monomial(2, 1, order);
            const S head = S::monomial(5, 2, order) + S::monomial(6, 2, order) + S::monomial(7, 2, order);
            return one + head / (one - u2) + (one + u2) / (one - u2) * character_tail(chi, 6, +1, order);
        });
    }
    case Family::ScriptL: {
        require(cls.sub == SubBranch::PM43or53Mod120, q, family, "≡ ±43, ±53 (mod 120)");
        return LocalFactor::uniform(name, [chi](int order) {
            using S = FormalPowerSeries;
            const S one = S::one(order);
            const S u2 = S::monomial(2, 1, order);
            const S den = (one - u2) * (one - u2) * (one - u2) * (one + u2);
            const S head = S::monomial(6, 2, order) - S::monomial(8, 1, order);
            return one - head / den + character_tail(chi, 6, +1, order) / den;
        });
    }
    case Family::K: {
        require(cls.branch == Branch::PM5Mod24, q, family, "≡ ±5 (mod 24)");
        return LocalFactor::uniform(name, [chi](int order) {
            using S = FormalPowerSeries;
            const S one = S::one(order);
            const S u2 = S::monomial(2, 1, order);
            const S den = (one - u2) * (one - u2);
            return one - S::monomial(4, 1, order) / den + character_tail(chi, 4, +1, order) / den;
        });
    }
    }
    throw ArgumentError("local_factor_for: unknown family");
}

int max_exponent(std::uint64_t p, std::uint64_t n) {
    if (p < 2)
        throw ArgumentError("max_exponent: p must be >= 2");
    int e = 0;
    std::uint64_t pe = 1;
    while (pe <= n / p) {
        pe *= p;
        ++e;
    }
    return e;
}

CoeffSeries expand_euler_product(const LocalFactor& local, std::uint64_t limit) {
    std::vector<Int> v(limit + 1, 1);
    if (limit < 2)
        return CoeffSeries(limit, std::move(v));

    std::vector<Int> shared;
    if (local.prime_independent())
        shared = local.coefficients(2, max_exponent(2, limit));
    else
        local.coefficients(2, 1); // constant-term check up front

    for (const std::uint32_t p : primes_up_to(limit)) {
        const int top = max_exponent(p, limit);
        const std::vector<Int> c = local.prime_independent() ? shared : local.coefficients(p, top);
        std::uint64_t pe = 1;
        for (int e = 1; e <= top; ++e) {
            pe *= p;
            const Int ce = c[static_cast<std::size_t>(e)];
            if (ce == 1)
                continue;
            // n = pe * j with p ∤ j
            for (std::uint64_t j = 1, m = pe; m <= limit; ++j, m += pe) {
                if (j % p == 0)
                    continue;
                v[m] = checked_mul(v[m], ce);
            }
        }
    }
    return CoeffSeries(limit, std::move(v));
}

// ---------------------------------------------------------------------------

bool FactorizationReport::success() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

std::optional<std::uint64_t> FactorizationReport::first_mismatch() const {
    std::optional<std::uint64_t> best;
    for (const auto& c : checks)
        if (c.first_mismatch && (!best || *c.first_mismatch < *best))
            best = c.first_mismatch;
    return best;
}

IdentityCheck compare_series(std::string name, const CoeffSeries& lhs, const CoeffSeries& rhs) {
    IdentityCheck check;
    check.name = std::move(name);
    const std::uint64_t n = std::min(lhs.limit(), rhs.limit());
    for (std::uint64_t i = 1; i <= n; ++i) {
        if (lhs[i] != rhs[i]) {
            check.first_mismatch = i;
            check.lhs_at_mismatch = lhs[i];
            check.rhs_at_mismatch = rhs[i];
            return check;
        }
    }
    check.passed = lhs.limit() == rhs.limit();
    if (!check.passed)
        check.first_mismatch = n + 1;
    return check;
}

FactorizationReport verify_factorization(std::uint64_t q, std::uint64_t limit) {
    const CaseClass cls = classify(q);
    const LegendreChar chi(q);
    const std::uint64_t n = limit;

    FactorizationReport report;
    report.q = q;
    report.limit = n;

    const CoeffSeries lam = lambda_q_sieve(chi, n);
    const CoeffSeries lhs = dirichlet_convolve(lam, CoeffSeries::one(n));
    const CoeffSeries a2 = a_r_series(2, n);

    report.checks.push_back(compare_series("lambda_q = Euler product with factor chi(e+1)", lam,
                                           expand_euler_product(lambda_q_local(chi), n)));

    auto zq_times = [&](Family f) { return expand_euler_product(zeta_local(static_cast<unsigned>(q)) * local_factor_for(q, f), n); };

    switch (cls.branch) {
    case Branch::PM1Mod8: {
        const CoeffSeries g = zq_times(Family::P);
        report.checks.push_back(compare_series("lambda_q*1 = g_q*tau", lhs, dirichlet_convolve(g, tau_sieve(n))));
        break;
    }
    case Branch::Cube:
        // L(s, λ_3) = ζ(3s)/ζ(s): λ_3 itself is a_3 ⋆ μ, so λ_3 ⋆ 1 = a_3
        report.checks.push_back(
            compare_series("lambda_3 = a_3*mu", lam, dirichlet_convolve(a_r_series(3, n), mobius_sieve(n))));
        report.checks.push_back(compare_series("lambda_3*1 = a_3", lhs, a_r_series(3, n)));
        report.checks.push_back(
            compare_series("lambda_q*1 = h*a_2 (d_q form)", lhs, dirichlet_convolve(zq_times(Family::D), a2)));
        break;
    case Branch::PM11Mod24:
        report.checks.push_back(
            compare_series("lambda_q*1 = h_q*a_2", lhs, dirichlet_convolve(zq_times(Family::R), a2)));
        break;
    case Branch::PM5Mod24: {
        const CoeffSeries a2_inv = dirichlet_inverse(a2);
        report.checks.push_back(
            compare_series("lambda_q*1 = h*a_2 (d_q form)", lhs, dirichlet_convolve(zq_times(Family::D), a2)));
        report.checks.push_back(
            compare_series("lambda_q*1 = k_q*a_2^-1", lhs, dirichlet_convolve(zq_times(Family::K), a2_inv)));
        if (cls.sub == SubBranch::QEquals5) {
            report.checks.push_back(compare_series("lambda_5*1 = a_5*a_2^-1", lhs,
                                                   dirichlet_convolve(a_r_series(5, n), a2_inv)));
        } else if (cls.sub == SubBranch::PM19or29Mod120) {
            const CoeffSeries ell = zq_times(Family::L);
            report.checks.push_back(compare_series(
                "lambda_q*1 = l_q*a_4*a_2^-1", lhs,
                dirichlet_convolve(dirichlet_convolve(ell, a_r_series(4, n)), a2_inv)));
        } else {
            const CoeffSeries nu = zq_times(Family::ScriptL);
            const CoeffSeries a4_inv = dirichlet_inverse(a_r_series(4, n));
            report.checks.push_back(compare_series("lambda_q*1 = nu_q*a_4^-1*a_2^-1", lhs,
                                                   dirichlet_convolve(dirichlet_convolve(nu, a4_inv), a2_inv)));
        }
        break;
    }
    }
    return report;
}

} // namespace lamq
