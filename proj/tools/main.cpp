// lamq: command-line front end for the identity checks, constants, traces and
// the short-interval / near-curve reports.

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <boost/version.hpp>

#include "lamq/analytic.hpp"
#include "lamq/curve_points.hpp"
#include "lamq/dirichlet.hpp"
#include "lamq/summatory.hpp"
#include "report.hpp"

namespace {

using namespace lamq;
using cli::Cell;
using cli::Report;

constexpr const char* kVersion = "1.0.0";

enum Exit : int { kOk = 0, kMismatch = 1, kUsage = 2, kResource = 3 };

/// Accepts plain integers and exact scientific forms such as 1e7.
std::uint64_t parse_count(const std::string& text, const char* what) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec == std::errc() && p == end)
        return v;
    double d = 0;
    auto [p2, ec2] = std::from_chars(text.data(), end, d);
    if (ec2 != std::errc() || p2 != end || !std::isfinite(d) || d < 0 || d > 9.2e18 || d != std::floor(d))
        throw ArgumentError(std::string(what) + ": expected a nonnegative integer, got '" + text + "'");
    return static_cast<std::uint64_t>(d);
}

Rational parse_rational(const std::string& text) {
    Rational r;
    const auto slash = text.find('/');
    try {
        r.num = std::stoll(text.substr(0, slash));
        r.den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1));
    } catch (const std::exception&) {
        throw ArgumentError("exponent: expected p/q, got '" + text + "'");
    }
    if (r.den <= 0 || r.num == 0)
        throw ArgumentError("exponent: expected a nonzero p/q with q > 0");
    return r;
}

struct Common {
    std::string format = "csv";
    std::string output;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool no_timestamp = false;
};

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Machine-readable progress on stderr, at most once per second.
ProgressFn progress_printer(std::string command) {
    auto last = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::time_point{});
    auto lock = std::make_shared<std::mutex>();
    return [command = std::move(command), last, lock](double fraction) {
        std::lock_guard guard(*lock);
        const auto now = std::chrono::steady_clock::now();
        if (now - *last < std::chrono::seconds(1))
            return;
        *last = now;
        std::cerr << "progress " << command << ' ' << cli::format_double(fraction) << std::endl;
    };
}

void stamp(Report& r, const std::string& command, const Common& c) {
    r.meta("tool", std::string("lamq"));
    r.meta("version", std::string(kVersion));
    r.meta("boost", std::string(BOOST_LIB_VERSION));
    r.meta("command", command);
    r.meta("threads", static_cast<std::uint64_t>(c.threads));
    if (!c.no_timestamp)
        r.meta("timestamp", utc_timestamp());
}

Cell opt_cell(const std::optional<Bounded>& b, bool error) {
    if (!b)
        return std::monostate{};
    return static_cast<double>(error ? b->error : b->value);
}

template <class T>
Cell opt_cell(const std::optional<T>& v) {
    if (!v)
        return std::monostate{};
    if constexpr (std::is_floating_point_v<T>)
        return static_cast<double>(*v);
    else if constexpr (std::is_signed_v<T>)
        return static_cast<std::int64_t>(*v);
    else
        return static_cast<std::uint64_t>(*v);
}

void emit(const Report& r, const Common& c) {
    auto write = [&](std::ostream& out) {
        if (c.format == "json")
            r.write_json(out);
        else
            r.write_csv(out);
    };
    if (c.output.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out)
        throw ResourceError("cannot open " + c.output + " for writing");
    write(out);
    if (!out)
        throw ResourceError("write to " + c.output + " failed");
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::optional<std::uint64_t> q;
    std::optional<std::uint64_t> all_q;
    std::string limit = "10000";
};

int run_verify(const VerifyArgs& a, const Common& c) {
    const std::uint64_t limit = parse_count(a.limit, "--limit");
    if (limit < 1)
        throw ArgumentError("--limit must be positive");
    if (a.q.has_value() == a.all_q.has_value())
        throw ArgumentError("give exactly one of --q and --all-q");
    std::vector<std::uint64_t> qs;
    if (a.q) {
        if (*a.q < 3 || !is_prime(*a.q))
            throw ArgumentError("--q " + std::to_string(*a.q) + " is not an odd prime");
        qs.push_back(*a.q);
    } else {
        for (std::uint64_t q = 3; q <= *a.all_q; q += 2)
            if (is_prime(q))
                qs.push_back(q);
    }

    Report r;
    stamp(r, "verify", c);
    r.meta("limit", limit);
    r.meta(a.q ? "q" : "all_q", a.q ? *a.q : *a.all_q);
    r.columns = {"q", "check", "passed", "first_mismatch", "lhs", "rhs"};

    bool ok = true;
    SummatoryOptions so;
    so.limit = limit;
    so.segments.threads = c.threads;
    const IdentitySuite suite = identity_suite(limit, so);
    for (const auto& chk : suite.checks) {
        r.rows.push_back({std::monostate{}, chk.name, chk.passed, opt_cell(chk.first_mismatch),
                          chk.passed ? Cell{} : Cell{chk.lhs_at_mismatch}, chk.passed ? Cell{} : Cell{chk.rhs_at_mismatch}});
        ok = ok && chk.passed;
    }
    for (std::uint64_t q : qs) {
        const FactorizationReport rep = verify_factorization(q, limit);
        for (const auto& chk : rep.checks)
            r.rows.push_back({q, chk.name, chk.passed, opt_cell(chk.first_mismatch),
                              chk.passed ? Cell{} : Cell{chk.lhs_at_mismatch},
                              chk.passed ? Cell{} : Cell{chk.rhs_at_mismatch}});
        ok = ok && rep.success();
    }
    r.result("primes_checked", static_cast<std::uint64_t>(qs.size()));
    r.result("all_passed", ok);
    emit(r, c);
    return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

struct ConstantsArgs {
    std::uint64_t q = 0;
    double tol = 5e-4;
    std::string p_cutoff = "10000000";
    std::string r_cutoff = "100000000";
};

int run_constants(const ConstantsArgs& a, const Common& c) {
    ConstantsOptions opts;
    opts.tol = a.tol;
    opts.p_cutoff = parse_count(a.p_cutoff, "--p-cutoff");
    opts.r_cutoff = parse_count(a.r_cutoff, "--r-cutoff");
    if (!(a.tol > 0))
        throw ArgumentError("--tol must be positive");
    const CaseClass cls = classify(a.q);
    const MainTermParams p = main_term_params(a.q, opts);

    Report r;
    stamp(r, "constants", c);
    r.meta("q", a.q);
    r.meta("tol", a.tol);
    r.meta("p_cutoff", opts.p_cutoff);
    r.meta("r_cutoff", opts.r_cutoff);
    r.result("branch", to_string(cls.branch));
    r.result("sub_branch", to_string(cls.sub));
    r.result("c_q", opt_cell(cls.c_q));
    r.result("d_q", opt_cell(cls.d_q));
    r.columns = {"quantity", "value", "error"};
    auto row = [&](const std::string& name, const std::optional<Bounded>& b) {
        if (b)
            r.rows.push_back({name, static_cast<double>(b->value), static_cast<double>(b->error)});
    };
    row("zeta(q)", p.zeta_q);
    row("zeta'(q)", p.zeta_prime_q);
    row("P_q(1)", p.P1);
    row("P_q'/P_q(1)", p.logderiv_P1);
    row("zeta(q/2)", p.zeta_q_half);
    row("R_q(1/2)", p.R_half);
    row("leading_coefficient", p.leading_coefficient());
    row("bracket_constant", p.bracket_constant());
    r.result("euler_gamma", static_cast<double>(p.euler_gamma));
    emit(r, c);
    return kOk;
}

// ---------------------------------------------------------------------------

struct TraceArgs {
    std::uint64_t q = 0;
    std::string max;
    std::string min = "1024";
    std::vector<double> alphas;
    std::string limit = "100000000";
    double tol = 5e-4;
    std::string p_cutoff = "10000000";
    std::string r_cutoff = "100000000";
};

int run_trace(const TraceArgs& a, const Common& c) {
    TraceOptions opts;
    opts.summatory.limit = parse_count(a.limit, "--limit");
    opts.summatory.segments.threads = c.threads;
    opts.summatory.segments.progress = progress_printer("trace");
    opts.constants.tol = a.tol;
    opts.constants.p_cutoff = parse_count(a.p_cutoff, "--p-cutoff");
    opts.constants.r_cutoff = parse_count(a.r_cutoff, "--r-cutoff");
    const std::uint64_t max = parse_count(a.max, "--max");
    const std::uint64_t min = parse_count(a.min, "--min");
    classify(a.q);
    const auto xs = dyadic_checkpoints(min, max);
    if (xs.empty())
        throw ArgumentError("no power of two in [--min, --max]");
    if (max > opts.summatory.limit)
        throw ResourceError("--max exceeds --limit " + std::to_string(opts.summatory.limit));

    std::vector<long double> alphas(a.alphas.begin(), a.alphas.end());
    const SummatoryTrace t = trace(a.q, xs, alphas, opts);

    Report r;
    stamp(r, "trace", c);
    r.meta("q", a.q);
    r.meta("min", min);
    r.meta("max", max);
    r.meta("limit", opts.summatory.limit);
    r.meta("tol", a.tol);
    r.meta("p_cutoff", opts.constants.p_cutoff);
    r.meta("r_cutoff", opts.constants.r_cutoff);
    for (std::size_t i = 0; i < t.alphas.size(); ++i)
        r.meta(i == 0 ? "alpha" : "alpha_" + std::to_string(i + 1), static_cast<double>(t.alphas[i]));
    r.result("branch", to_string(t.cls.branch));
    r.result("upper_bound_only", t.upper_bound_only);
    r.result("leading_coefficient", opt_cell(t.leading_coefficient, false));
    r.result("leading_coefficient_error", opt_cell(t.leading_coefficient, true));
    r.result("bracket_constant", opt_cell(t.bracket_constant, false));
    r.result("bracket_constant_error", opt_cell(t.bracket_constant, true));
    r.result("fitted_exponent", opt_cell(t.fitted_exponent));

    r.columns = {"x", "value", "main", "main_error", "residual"};
    for (std::size_t i = 0; i < t.alphas.size(); ++i)
        r.columns.push_back(i == 0 ? "normalized" : "normalized_" + std::to_string(i + 1));
    for (const auto& row : t.rows) {
        std::vector<Cell> cells = {row.x, row.value, static_cast<double>(row.main),
                                   static_cast<double>(row.main_error), static_cast<double>(row.residual)};
        for (long double v : row.normalized)
            cells.emplace_back(static_cast<double>(v));
        r.rows.push_back(std::move(cells));
    }
    emit(r, c);
    return kOk;
}

// ---------------------------------------------------------------------------

struct IntervalArgs {
    std::string x;
    std::string y;
    double c3 = 0.25;
};

ShortIntervalInstance make_instance(const IntervalArgs& a) {
    ShortIntervalInstance inst;
    inst.x = parse_count(a.x, "--x");
    inst.y = parse_count(a.y, "--y");
    inst.c3 = a.c3;
    inst.validate();
    return inst;
}

void describe_instance(Report& r, const ShortIntervalInstance& inst) {
    r.meta("x", inst.x);
    r.meta("y", inst.y);
    r.meta("c3", static_cast<double>(inst.c3));
    r.result("y_within_c3_x^(11/20)", inst.within_first_range());
    r.result("y_within_c3_x^(19/36)", inst.within_second_range());
}

int run_short_interval(const IntervalArgs& a, const Common& c) {
    const ShortIntervalInstance inst = make_instance(a);
    const Lemma6Decomposition d = lemma6_decomposition(inst);

    Report r;
    stamp(r, "short-interval", c);
    describe_instance(r, inst);
    r.result("sum", d.short_sum);
    r.result("mu_part", d.mu_part);
    r.result("boundary_mu", d.boundary_mu);
    r.result("boundary_count", d.boundary_count);
    r.result("double_count", d.double_count);
    r.result("low_part", d.low_part);
    r.result("n_lo", d.n_lo);
    r.result("n_hi", d.n_hi);
    r.result("identity_holds", d.identity_holds());
    r.result("inequality_holds", d.inequality_holds());
    r.result("windows_match", d.windows_match());
    r.result("windows_below_R", d.windows_below_R());
    r.result("guards_hold", d.guards_hold());
    r.columns = {"k", "lo", "hi", "double_count", "R", "delta", "delta_guard"};
    for (const auto& w : d.windows)
        r.rows.push_back({w.k, w.lo, w.hi, w.double_count, w.R, static_cast<double>(w.delta), w.delta_guard});
    emit(r, c);
    const bool ok = d.identity_holds() && d.inequality_holds() && d.windows_match() && d.windows_below_R();
    return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

struct NearCurveArgs {
    IntervalArgs interval;
    std::optional<std::string> N;
    double X = 0;
    std::string s = "5/2";
    double delta = 0.1;
};

int run_near_curve(const NearCurveArgs& a, const Common& c) {
    Report r;
    stamp(r, "near-curve", c);
    if (a.N) {
        CurveConfig cfg;
        cfg.X = a.X;
        cfg.s = parse_rational(a.s);
        cfg.N = parse_count(*a.N, "--N");
        cfg.delta = a.delta;
        const Int count = count_near_curve(cfg);
        r.meta("X", a.X);
        r.meta("s", a.s);
        r.meta("N", cfg.N);
        r.meta("delta", a.delta);
        r.columns = {"N", "count"};
        r.rows.push_back({cfg.N, count});
        emit(r, c);
        return kOk;
    }

    const ShortIntervalInstance inst = make_instance(a.interval);
    SegmentOptions seg;
    seg.threads = c.threads;
    const Theorem6Report t = theorem6_scan(inst, seg);
    describe_instance(r, inst);
    r.result("sum", t.short_sum);
    r.result("divisor_bound", t.divisor_bound);
    r.result("below_divisor_bound", t.below_divisor_bound);
    r.result("n_lo", t.decomposition.n_lo);
    r.result("n_hi", t.decomposition.n_hi);
    for (const auto& rs : t.ranges) {
        const std::string p = "range" + std::to_string(rs.range) + "_";
        r.result(p + "first", rs.empty ? Cell{} : Cell{rs.first});
        r.result(p + "last", rs.empty ? Cell{} : Cell{rs.last});
        r.result(p + "max_R", rs.max_R);
        r.result(p + "range_bound", static_cast<double>(rs.range_bound));
        r.result(p + "ratio", static_cast<double>(rs.ratio));
    }
    r.result("lemma6_bound", static_cast<double>(t.lemma6_bound));
    r.result("theorem6_bound", static_cast<double>(t.theorem6_bound));
    r.result("ratio", static_cast<double>(t.ratio));
    r.result("coverage_ok", t.coverage_ok);
    r.result("guards_ok", t.guards_ok);
    r.columns = {"N", "range", "R", "delta", "delta_guard", "lemma5_condition", "shape", "bound", "ratio"};
    for (const auto& row : t.rows)
        r.rows.push_back({row.N, static_cast<std::int64_t>(row.range), row.R, static_cast<double>(row.delta),
                          row.delta_guard, row.lemma5_condition, to_string(row.shape), static_cast<double>(row.bound),
                          static_cast<double>(row.ratio)});
    auto windows = nlohmann::ordered_json::array();
    for (const auto& w : t.decomposition.windows)
        windows.push_back({{"k", w.k}, {"lo", w.lo}, {"hi", w.hi}, {"double_count", w.double_count},
                           {"R", w.R}, {"delta", static_cast<double>(w.delta)}, {"delta_guard", w.delta_guard}});
    r.extra["windows"] = std::move(windows);
    emit(r, c);
    return kOk;
}

// ---------------------------------------------------------------------------

struct RhArgs {
    std::uint64_t q = 5;
    std::string max;
    std::string min = "1024";
    double c = 0.2;
    double eps = 0.01;
    std::string limit = "100000000";
};

int run_rh(const RhArgs& a, const Common& c) {
    SummatoryOptions so;
    so.limit = parse_count(a.limit, "--limit");
    so.segments.threads = c.threads;
    so.segments.progress = progress_printer("rh-diagnostic");
    const auto xs = dyadic_checkpoints(parse_count(a.min, "--min"), parse_count(a.max, "--max"));
    if (xs.empty())
        throw ArgumentError("no power of two in [--min, --max]");
    const GrowthDiagnostic g = rh_diagnostic(a.q, xs, a.eps, a.c, so);

    Report r;
    stamp(r, "rh-diagnostic", c);
    r.meta("q", a.q);
    r.meta("min", xs.front());
    r.meta("max", xs.back());
    r.meta("c", a.c);
    r.meta("eps", a.eps);
    r.meta("limit", so.limit);
    r.result("branch", to_string(g.cls.branch));
    r.result("sub_branch", to_string(g.cls.sub));
    r.columns = {"x", "value", "over_quarter", "over_rh_shape", "over_unconditional"};
    for (const auto& row : g.rows)
        r.rows.push_back({row.x, row.value, static_cast<double>(row.over_quarter), opt_cell(row.over_rh_shape),
                          opt_cell(row.over_unconditional)});
    emit(r, c);
    return kOk;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "write to this file instead of stdout");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from the metadata");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for the summatory function of (tau(n)/q) * 1"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Common common;

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "exact identity suite and Dirichlet factorization checks");
    verify->add_option("--q", va.q, "odd prime q");
    verify->add_option("--all-q", va.all_q, "every odd prime up to this bound");
    verify->add_option("--limit", va.limit, "coefficient range N");
    add_common(verify, common);

    ConstantsArgs ca;
    auto* constants = app.add_subcommand("constants", "main-term constants with certified error bounds");
    constants->add_option("--q", ca.q, "odd prime q")->required();
    constants->add_option("--tol", ca.tol, "required absolute error bound");
    constants->add_option("--p-cutoff", ca.p_cutoff, "prime cutoff for P_q(1)");
    constants->add_option("--r-cutoff", ca.r_cutoff, "prime cutoff for R_q(1/2)");
    add_common(constants, common);

    TraceArgs ta;
    auto* tr = app.add_subcommand("trace", "S_q(x) against its main term at dyadic x");
    tr->add_option("--q", ta.q, "odd prime q")->required();
    tr->add_option("--max", ta.max, "largest x")->required();
    tr->add_option("--min", ta.min, "smallest x (at least e^4)");
    tr->add_option("--alpha", ta.alphas, "normalization exponents (default depends on the branch)");
    tr->add_option("--limit", ta.limit, "largest x accepted");
    tr->add_option("--tol", ta.tol, "required error bound on the constants");
    tr->add_option("--p-cutoff", ta.p_cutoff, "prime cutoff for P_q(1)");
    tr->add_option("--r-cutoff", ta.r_cutoff, "prime cutoff for R_q(1/2)");
    add_common(tr, common);

    IntervalArgs ia;
    auto* si = app.add_subcommand("short-interval", "exact short sum for q = 5 and its double-count decomposition");
    si->add_option("--x", ia.x, "x")->required();
    si->add_option("--y", ia.y, "y, 0 <= y <= x")->required();
    si->add_option("--c3", ia.c3, "c3 in (0, 1/4]");
    add_common(si, common);

    NearCurveArgs na;
    auto* nc = app.add_subcommand("near-curve", "three-range scan of R(sqrt(x/n^5), N, delta), or one count");
    nc->add_option("--x", na.interval.x, "x");
    nc->add_option("--y", na.interval.y, "y");
    nc->add_option("--c3", na.interval.c3, "c3 in (0, 1/4]");
    auto* n_opt = nc->add_option("--N", na.N, "count one window [N, 2N] of X/n^s instead of scanning");
    nc->add_option("--X", na.X, "X for --N")->needs(n_opt);
    nc->add_option("--s", na.s, "exponent p/q for --N")->needs(n_opt);
    nc->add_option("--delta", na.delta, "delta in (0, 1/4) for --N")->needs(n_opt);
    add_common(nc, common);

    RhArgs ra;
    auto* rh = app.add_subcommand("rh-diagnostic", "|S_q(x)| against the growth shapes for q = +-5 mod 24");
    rh->add_option("--q", ra.q, "odd prime q = +-5 mod 24");
    rh->add_option("--max", ra.max, "largest x")->required();
    rh->add_option("--min", ra.min, "smallest x");
    rh->add_option("--c", ra.c, "c in delta_c");
    rh->add_option("--eps", ra.eps, "epsilon in omega");
    rh->add_option("--limit", ra.limit, "largest x accepted");
    add_common(rh, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*verify)
            return run_verify(va, common);
        if (*constants)
            return run_constants(ca, common);
        if (*tr)
            return run_trace(ta, common);
        if (*si)
            return run_short_interval(ia, common);
        if (*nc) {
            if (!na.N && (na.interval.x.empty() || na.interval.y.empty()))
                throw ArgumentError("near-curve needs --x and --y, or --N with --X");
            return run_near_curve(na, common);
        }
        if (*rh)
            return run_rh(ra, common);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UndecidableError& e) {
        std::cerr << "error: " << e.what() << "; undecidable n:";
        for (auto n : e.points())
            std::cerr << ' ' << n;
        std::cerr << '\n';
        return kResource;
    } catch (const PrecisionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    }
    return kUsage;
}
