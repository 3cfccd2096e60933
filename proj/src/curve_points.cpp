#include "lamq/curve_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "lamq/summatory.hpp"

namespace lamq {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// keeps n⁵ x and 16 y² comfortably inside the exact helpers and the μ table
constexpr std::uint64_t kMaxX = 1'000'000'000'000'000ULL;

cpp_int ipow(std::uint64_t base, unsigned k) {
    cpp_int r = 1;
    for (unsigned i = 0; i < k; ++i)
        r *= base;
    return r;
}

bool delta_guard(std::uint64_t x, std::uint64_t y, std::uint64_t N) {
    return cpp_int(16) * cpp_int(y) * cpp_int(y) < ipow(N, 5) * cpp_int(x);
}

long double delta_of(std::uint64_t x, std::uint64_t y, std::uint64_t N) {
    return static_cast<long double>(y) /
           std::sqrt(std::pow(static_cast<long double>(N), 5.0L) * static_cast<long double>(x));
}

// |√P - m| < √Q, for rationals P, Q >= 0 and an integer m >= 0
bool within(const cpp_rational& P, const cpp_rational& Q, const cpp_int& m) {
    // (√P - m)² < Q  ⟺  P + m² - Q < 2m√P
    const cpp_rational lhs = P + cpp_rational(m * m) - Q;
    if (lhs < 0)
        return true;
    if (m == 0)
        return false;
    return lhs * lhs < cpp_rational(4 * m * m) * P;
}

} // namespace

Int count_near_curve(const CurveConfig& cfg) {
    if (!(cfg.X > 0) || !std::isfinite(cfg.X))
        throw ArgumentError("X must be positive and finite");
    if (cfg.s.den <= 0 || cfg.s.num == 0)
        throw ArgumentError("exponent must be a nonzero rational with positive denominator");
    if (!(cfg.delta > 0 && cfg.delta < 0.25L))
        throw ArgumentError("delta must lie in (0, 1/4)");
    if (cfg.N == 0 || cfg.N > (1ULL << 40))
        throw ArgumentError("N must lie in [1, 2^40]");

    const long double s = cfg.s.value();
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    Int count = 0;
    std::vector<std::uint64_t> undecidable;
    for (std::uint64_t n = cfg.N; n <= 2 * cfg.N; ++n) {
        const long double f = cfg.X * std::pow(static_cast<long double>(n), -s);
        if (!std::isfinite(f))
            throw ArgumentError("f(" + std::to_string(n) + ") is not finite");
        const long double dist = std::fabs(f - std::nearbyint(f));
        const long double guard = std::max(1e-12L, 64 * eps * std::fabs(f));
        if (std::fabs(dist - cfg.delta) <= guard)
            undecidable.push_back(n);
        else if (dist < cfg.delta)
            ++count;
    }
    if (!undecidable.empty()) {
        const std::string what = std::to_string(undecidable.size()) +
                                 " point(s) lie within the guard band of delta, first n = " +
                                 std::to_string(undecidable.front());
        throw UndecidableError(what, std::move(undecidable));
    }
    return count;
}

Int count_near_curve_exact(std::uint64_t x, std::uint64_t y, std::uint64_t N) {
    if (x == 0 || x > kMaxX)
        throw ArgumentError("x must lie in [1, 10^15]");
    if (N == 0)
        throw ArgumentError("N must be positive");
    if (!delta_guard(x, y, N))
        throw ArgumentError("y/√(N⁵x) is not below 1/4 at N = " + std::to_string(N));

    const cpp_rational Q(cpp_int(y) * cpp_int(y), ipow(N, 5) * cpp_int(x));
    Int count = 0;
    for (std::uint64_t n = N; n <= 2 * N; ++n) {
        const cpp_int n5 = ipow(n, 5);
        const cpp_rational P(cpp_int(x), n5);
        const cpp_int fl = cpp_int(x) / n5;
        const cpp_int m0 = cpp_int(iroot(static_cast<std::uint64_t>(fl), 2));
        if (within(P, Q, m0) || within(P, Q, m0 + 1))
            ++count;
    }
    return count;
}

void ShortIntervalInstance::validate() const {
    if (x == 0 || x > kMaxX)
        throw ArgumentError("x must lie in [1, 10^15]");
    if (y > x)
        throw ArgumentError("y must not exceed x");
    if (!(c3 > 0 && c3 <= 0.25L))
        throw ArgumentError("c3 must lie in (0, 1/4]");
}

bool ShortIntervalInstance::within_first_range() const {
    return static_cast<long double>(y) <= c3 * std::pow(static_cast<long double>(x), 11.0L / 20);
}

bool ShortIntervalInstance::within_second_range() const {
    return static_cast<long double>(y) <= c3 * std::pow(static_cast<long double>(x), 19.0L / 36);
}

Int short_interval_sum(const ShortIntervalInstance& inst) {
    inst.validate();
    if (inst.y == 0)
        return 0;
    const auto mu = mobius_sieve(std::max<std::uint64_t>(1, iroot(inst.x + inst.y, 2)));
    return lambda5_floor_identity(inst.x + inst.y, mu) - lambda5_floor_identity(inst.x, mu);
}

Int divisor_sum_window(std::uint64_t x, std::uint64_t y, const SegmentOptions& options) {
    if (y == 0)
        return 0;
    std::vector<Int> partial(std::max(1u, options.threads), 0);
    for_each_segment(x + 1, x + y, tau_profile(), options,
                     [&](unsigned worker, std::uint64_t, std::span<const Int> values) {
                         for (Int v : values)
                             partial[worker] += v;
                     });
    Int total = 0;
    for (Int v : partial)
        total = checked_add(total, v);
    return total;
}

Int per_n_count(std::uint64_t x, std::uint64_t y, std::uint64_t n) {
    if (n <= 1 || !pow_at_most(n, 5, x + y))
        return 0;
    std::uint64_t n5 = 1;
    for (int i = 0; i < 5; ++i)
        n5 *= n;
    return static_cast<Int>(iroot((x + y) / n5, 2)) - static_cast<Int>(iroot(x / n5, 2));
}

bool Lemma6Decomposition::inequality_holds() const {
    return (short_sum < 0 ? -short_sum : short_sum) <= double_count + boundary_count;
}

bool Lemma6Decomposition::windows_match() const {
    Int total = low_part;
    for (const auto& w : windows)
        total += w.double_count;
    return total == double_count;
}

bool Lemma6Decomposition::guards_hold() const {
    return std::all_of(windows.begin(), windows.end(), [](const DyadicWindow& w) { return w.delta_guard; });
}

bool Lemma6Decomposition::windows_below_R() const {
    return std::all_of(windows.begin(), windows.end(), [](const DyadicWindow& w) { return w.double_count <= w.R; });
}

Lemma6Decomposition lemma6_decomposition(const ShortIntervalInstance& inst) {
    inst.validate();
    const std::uint64_t x = inst.x, y = inst.y;
    Lemma6Decomposition out;
    out.x = x;
    out.y = y;

    const std::uint64_t r = iroot(x, 2);
    const std::uint64_t r2 = iroot(x + y, 2);
    const auto mu = mobius_sieve(std::max<std::uint64_t>(1, r2));
    out.short_sum = short_interval_sum(inst);

    for (std::uint64_t d = 1; d <= r; ++d) {
        const std::uint64_t d2 = d * d;
        const Int diff = static_cast<Int>(iroot((x + y) / d2, 5)) - static_cast<Int>(iroot(x / d2, 5));
        out.double_count += diff;
        out.mu_part += mu[d] * diff;
    }
    for (std::uint64_t d = r + 1; d <= r2; ++d) {
        out.boundary_mu += mu[d];
        ++out.boundary_count;
    }

    out.n_hi = iroot(2 * x, 5);
    out.n_lo = 1;
    while (!delta_guard(x, y, out.n_lo))
        ++out.n_lo;

    for (std::uint64_t n = 1; n < out.n_lo && n <= out.n_hi; ++n)
        out.low_part += per_n_count(x, y, n);

    for (std::uint64_t k = 0; (1ULL << k) <= out.n_hi; ++k) {
        const std::uint64_t lo = std::max<std::uint64_t>(1ULL << k, out.n_lo);
        const std::uint64_t hi = std::min<std::uint64_t>((2ULL << k) - 1, out.n_hi);
        if (lo > hi)
            continue;
        DyadicWindow w;
        w.k = k;
        w.lo = lo;
        w.hi = hi;
        for (std::uint64_t n = lo; n <= hi; ++n)
            w.double_count += per_n_count(x, y, n);
        w.delta = delta_of(x, y, lo);
        w.delta_guard = delta_guard(x, y, lo);
        w.R = w.delta_guard ? count_near_curve_exact(x, y, lo) : 0;
        out.windows.push_back(w);
    }
    return out;
}

std::string to_string(BoundShape s) {
    switch (s) {
    case BoundShape::FifthDerivative: return "fifth-derivative";
    case BoundShape::FilasetaTrifonov: return "filaseta-trifonov";
    case BoundShape::FirstDerivative: return "first-derivative";
    }
    return "?";
}

BoundShapes bound_shapes(std::uint64_t N, std::uint64_t x, std::uint64_t y, long double c3) {
    if (N == 0 || x == 0 || y == 0)
        throw ArgumentError("N, x and y must be positive");
    const long double n = static_cast<long double>(N);
    const long double lx = static_cast<long double>(x);
    const long double X = std::sqrt(lx);
    BoundShapes b;
    b.N = N;
    b.delta = delta_of(x, y, N);

    b.lambda4 = std::sqrt(lx * std::pow(n, -13.0L));
    b.lambda5 = std::sqrt(lx * std::pow(n, -15.0L));
    b.fifth_derivative = n * std::pow(b.lambda5, 1.0L / 15) + n * std::pow(b.delta, 1.0L / 6) +
                         std::pow(b.delta / b.lambda4, 0.25L) + 1;

    constexpr long double s = 2.5L;
    b.filaseta_trifonov =
        std::pow(X * std::pow(n, 3 - s), 1.0L / 7) + b.delta * std::pow(X * std::pow(n, 59 - s), 1.0L / 21);
    b.lemma5_condition = n * n * b.delta <= c3;
    b.lemma5_domain = pow_at_most(N, 5, x);

    b.lambda1 = X * std::pow(n, -3.5L);
    b.slope_at_N = s * X * std::pow(n, -3.5L);
    b.slope_at_2N = s * X * std::pow(2 * n, -3.5L);
    b.first_derivative = n * b.lambda1 + n * b.delta + b.delta / b.lambda1 + 1;
    return b;
}

int range_of(std::uint64_t N, std::uint64_t x) {
    const cpp_int cx(x);
    if (ipow(N, 10) <= 1024 * cx)
        return 1;
    if (ipow(N, 6) <= 64 * cx)
        return 2;
    return 3;
}

Theorem6Report theorem6_scan(const ShortIntervalInstance& inst, const SegmentOptions& options) {
    inst.validate();
    Theorem6Report rep;
    rep.inst = inst;
    rep.within_first_range = inst.within_first_range();
    rep.within_second_range = inst.within_second_range();
    rep.decomposition = lemma6_decomposition(inst);
    rep.short_sum = rep.decomposition.short_sum;
    rep.divisor_bound = divisor_sum_window(inst.x, inst.y, options);
    rep.below_divisor_bound = (rep.short_sum < 0 ? -rep.short_sum : rep.short_sum) <= rep.divisor_bound;

    const long double x = static_cast<long double>(inst.x);
    const long double y = static_cast<long double>(inst.y);
    const long double lx = std::log(x);
    const long double x12 = std::pow(x, 1.0L / 12);
    const std::array<long double, 3> range_bounds = {
        x12 + std::pow(x, -1.0L / 40) * std::pow(y, 1.0L / 6) + std::pow(x, -3.0L / 20) * std::pow(y, 0.25L),
        x12 + y * std::pow(x, -4.0L / 9),
        x12 + y * std::pow(x, -0.75L),
    };
    for (int i = 0; i < 3; ++i) {
        rep.ranges[i].range = i + 1;
        rep.ranges[i].range_bound = range_bounds[i];
    }

    rep.coverage_ok = true;
    rep.guards_ok = rep.decomposition.guards_hold();
    Int max_R = 0;
    int previous_range = 1;
    if (inst.y > 0) {
        for (std::uint64_t N = rep.decomposition.n_lo; N <= rep.decomposition.n_hi; ++N) {
            ScanRow row;
            row.N = N;
            row.range = range_of(N, inst.x);
            row.delta_guard = delta_guard(inst.x, inst.y, N);
            if (!row.delta_guard) {
                rep.guards_ok = false;
                continue;
            }
            row.R = count_near_curve_exact(inst.x, inst.y, N);
            const BoundShapes b = bound_shapes(N, inst.x, inst.y, inst.c3);
            row.delta = b.delta;
            row.lemma5_condition = b.lemma5_condition;
            switch (row.range) {
            case 1:
                row.shape = BoundShape::FifthDerivative;
                row.bound = b.fifth_derivative;
                break;
            case 2:
                row.shape = BoundShape::FilasetaTrifonov;
                row.bound = b.filaseta_trifonov;
                break;
            default:
                row.shape = BoundShape::FirstDerivative;
                row.bound = b.first_derivative;
                break;
            }
            row.ratio = static_cast<long double>(row.R) / row.bound;
            if (row.range < previous_range)
                rep.coverage_ok = false;
            previous_range = row.range;

            RangeSummary& rs = rep.ranges[row.range - 1];
            if (rs.empty) {
                rs.empty = false;
                rs.first = N;
            } else if (rs.last + 1 != N) {
                rep.coverage_ok = false;
            }
            rs.last = N;
            if (row.R > rs.max_R || rs.argmax == 0) {
                rs.max_R = std::max(rs.max_R, row.R);
                if (rs.argmax == 0 || row.R >= rs.max_R)
                    rs.argmax = N;
            }
            max_R = std::max(max_R, row.R);
            rep.rows.push_back(row);
        }
        const std::uint64_t expected =
            rep.decomposition.n_hi >= rep.decomposition.n_lo ? rep.decomposition.n_hi - rep.decomposition.n_lo + 1 : 0;
        if (rep.rows.size() != expected)
            rep.coverage_ok = false;
    }
    for (auto& rs : rep.ranges)
        rs.ratio = static_cast<long double>(rs.max_R) / rs.range_bound;

    rep.lemma6_bound = static_cast<long double>(max_R) * lx + y / std::sqrt(x) +
                       std::pow(x, -0.2L) * std::pow(y, 0.4L);
    rep.theorem6_bound = (x12 + y * std::pow(x, -4.0L / 9)) * lx;
    rep.ratio = std::fabs(static_cast<long double>(rep.short_sum)) / rep.theorem6_bound;
    return rep;
}

} // namespace lamq
