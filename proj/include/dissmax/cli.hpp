// Command-line front end: configuration, the verification suite, and the
// table/counting/field exports. Every command writes to a caller-supplied
// stream and returns a process exit code, so the whole surface is testable
// in-process.

#ifndef DISSMAX_CLI_HPP
#define DISSMAX_CLI_HPP

#include "dissmax/besselpoly.hpp"
#include "dissmax/exactpoly.hpp"
#include "dissmax/fields.hpp"
#include "dissmax/parallel.hpp"
#include "dissmax/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace dissmax {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_bad_input = 2,
    exit_certification_failure = 3,
    exit_range_not_certified = 4,
};

enum class OutputFormat { csv, json };

/// Largest table the counting commands will build while auto-extending.
inline constexpr unsigned kAutoExtendCap = 2000;

struct RunConfig {
    std::string gamma = "2";
    unsigned n_max = 50;
    std::string precision = "1e-30";
    double r_max = 0;  ///< 0 means unset
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    OutputFormat output_format = OutputFormat::csv;

    GammaParam gamma_param() const { return GammaParam::parse(gamma); }

    Rational precision_value() const {
        Rational eps = parse_rational(precision);
        if (sgn(eps) <= 0) throw std::invalid_argument("precision must be positive, got " + precision);
        return eps;
    }

    void validate() const {
        gamma_param();
        precision_value();
        if (n_max == 0) throw std::invalid_argument("n-max must be at least 1");
        if (r_max < 0 || !std::isfinite(r_max)) throw std::invalid_argument("r-max must be a nonnegative number");
        if (threads == 0) throw std::invalid_argument("threads must be at least 1");
    }
};

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Shortest round-trip representation.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

/// q rounded half away from zero to `digits` places after the point.
inline std::string format_decimal(const Rational& q, unsigned digits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    const Rational scaled = abs(q) * scale + Rational(1, 2);
    Integer units = scaled.get_num() / scaled.get_den();
    std::string body = units.get_str();
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    std::string out = sgn(q) < 0 && units != 0 ? "-" : "";
    out += body.substr(0, body.size() - digits);
    if (digits > 0) out += "." + body.substr(body.size() - digits);
    return out;
}

/// Decimal places that resolve an interval of width eps, plus two guard digits.
inline unsigned decimal_digits(const Rational& eps) {
    const double e = eps.get_d();
    const double d = e > 0 ? std::ceil(-std::log10(e)) + 2 : 40;
    return static_cast<unsigned>(std::clamp(d, 6.0, 60.0));
}

inline std::string rational_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    double statistic = 0;
    double threshold = 0;
    std::string relation = "<=";
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

class VerifyReport {
public:
    VerifyReport(std::string gamma, unsigned n_max, std::string precision)
        : gamma_(std::move(gamma)), n_max_(n_max), precision_(std::move(precision)) {}

    void add(CheckResult r) {
        for (const auto& c : checks_)
            if (c.name == r.name) throw std::logic_error("check '" + r.name + "' reported twice");
        checks_.push_back(std::move(r));
    }

    const std::vector<CheckResult>& checks() const noexcept { return checks_; }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks_)
            if (c.name == name) return &c;
        return nullptr;
    }

    bool all_pass() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; });
    }

    std::vector<std::string> failing() const {
        std::vector<std::string> out;
        for (const auto& c : checks_)
            if (!c.pass) out.push_back(c.name);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["gamma"] = gamma_;
        j["n_max"] = n_max_;
        j["precision"] = precision_;
        j["all_pass"] = all_pass();
        j["checks"] = nlohmann::ordered_json::object();
        for (const auto& c : checks_) {
            nlohmann::ordered_json e;
            e["pass"] = c.pass;
            e["statistic"] = c.statistic;
            e["threshold"] = c.threshold;
            e["relation"] = c.relation;
            e["details"] = c.details;
            j["checks"][c.name] = std::move(e);
        }
        return j;
    }

private:
    std::string gamma_;
    unsigned n_max_;
    std::string precision_;
    std::vector<CheckResult> checks_;
};

/// Descartes sign changes and the Sturm count on (0, Cauchy bound) must
/// both be exactly one for every n in [1, n_max].
inline CheckResult check_uniqueness(const GammaParam& gp, unsigned n_max, unsigned threads = 1) {
    std::vector<int> descartes(n_max), sturm(n_max);
    parallel_for(n_max, threads, [&](std::size_t i) {
        const RatPoly p = characteristic_poly_direct(static_cast<unsigned>(i + 1), gp);
        descartes[i] = descartes_sign_changes(p);
        sturm[i] = sturm_root_count(p, Rational(0), cauchy_positive_bound(p));
    });
    CheckResult r{"uniqueness"};
    unsigned failures = 0, first = 0;
    for (unsigned i = 0; i < n_max; ++i)
        if (descartes[i] != 1 || sturm[i] != 1) {
            if (failures++ == 0) first = i + 1;
        }
    r.statistic = failures;
    r.threshold = 0;
    r.pass = failures == 0;
    r.details["n_checked"] = n_max;
    if (failures) r.details["first_failure_n"] = first;
    return r;
}

/// Exact coefficient comparison of the two constructions.
inline CheckResult check_cross_construction(const GammaParam& gp, unsigned n_max, unsigned threads = 1) {
    std::vector<unsigned> mismatches(n_max);
    parallel_for(n_max, threads, [&](std::size_t i) {
        const unsigned n = static_cast<unsigned>(i + 1);
        const RatPoly a = characteristic_poly_direct(n, gp);
        const RatPoly b = characteristic_poly_bk(n, gp);
        const std::size_t len = std::max(a.coeffs().size(), b.coeffs().size());
        for (std::size_t k = 0; k < len; ++k)
            if (a.coeff(k) != b.coeff(k)) ++mismatches[i];
    });
    CheckResult r{"cross_construction"};
    unsigned total = 0;
    for (unsigned m : mismatches) total += m;
    r.statistic = total;
    r.pass = total == 0;
    r.details["n_checked"] = n_max;
    return r;
}

inline CheckResult check_monotonicity(const SpectrumTable& table) {
    const auto& m = table.modes();
    unsigned violations = 0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
        if (!(m[i + 1].lambda_hi < m[i].lambda_lo) || !(m[i].lambda_lo <= m[i].lambda_hi)) ++violations;
    CheckResult r{"monotonicity"};
    r.statistic = violations;
    r.pass = violations == 0;
    r.details["n_checked"] = table.n_max();
    return r;
}

/// Sample points lambda_k = -k/7, k = 1..count.
inline std::vector<Rational> prop31_lambdas(unsigned count = 200) {
    std::vector<Rational> out;
    for (unsigned k = 1; k <= count; ++k) out.emplace_back(-static_cast<long>(k), 7);
    for (auto& q : out) q.canonicalize();
    return out;
}

/// Exact sign of the log-derivative gap on a rational sample grid.
inline CheckResult check_prop31(unsigned n_max, unsigned samples = 200, unsigned threads = 1) {
    const auto lambdas = prop31_lambdas(samples);
    std::vector<unsigned> bad(n_max);
    parallel_for(n_max, threads, [&](std::size_t i) {
        for (const Rational& l : lambdas)
            if (sgn(log_derivative_gap(static_cast<unsigned>(i + 1), l)) <= 0) ++bad[i];
    });
    CheckResult r{"prop31"};
    unsigned total = 0;
    for (unsigned b : bad) total += b;
    r.statistic = total;
    r.pass = total == 0;
    r.details["n_checked"] = n_max;
    r.details["lambda_samples"] = samples;
    return r;
}

/// |g_oracle(n, lambda_mid)| against 1e-8 (1 + gamma0) wherever the float
/// recurrence stays in range.
inline CheckResult check_oracle(const SpectrumTable& table, unsigned n_limit = 100) {
    const GammaParam& gp = table.gamma_param();
    CheckResult r{"oracle"};
    r.threshold = 1e-8 * (1 + gp.gamma0().get_d());
    unsigned evaluated = 0, skipped = 0;
    for (const EigMode& m : table.modes()) {
        if (m.n > n_limit) break;
        try {
            r.statistic = std::max(r.statistic, std::abs(g_oracle(m.n, m.lambda_mid(), gp)));
            ++evaluated;
        } catch (const OverflowAtLargeN&) {
            ++skipped;
        }
    }
    r.pass = evaluated > 0 && r.statistic <= r.threshold;
    r.details["evaluated"] = evaluated;
    r.details["out_of_range"] = skipped;
    return r;
}

/// Windowed boundedness of |lambda_n - z_n|: the max over [split, upper]
/// may not exceed twice the max over [lower, split].
inline CheckResult check_localization(const SpectrumTable& table, unsigned lower, unsigned split, unsigned upper) {
    const LocalizationReport rep = localization_check(table);
    CheckResult r{"localization"};
    const double lo = rep.window_max(lower, split);
    const double hi = rep.window_max(split, upper);
    r.statistic = lo > 0 ? hi / lo : INFINITY;
    r.threshold = 2;
    r.pass = rep.bounded(lower, split, upper, 2.0);
    r.details["a_estimate"] = rep.max_gap;
    r.details["argmax_n"] = rep.argmax_n;
    r.details["lower_window_max"] = lo;
    r.details["upper_window_max"] = hi;
    r.details["window"] = {lower, split, upper};
    return r;
}

inline CheckResult check_localization(const SpectrumTable& table) {
    const unsigned n = table.n_max();
    return check_localization(table, std::max(1u, n / 50), n / 2, n);
}

/// Each mode entering the counting function raises N by exactly 2n + 1.
/// Radii are taken halfway between neighbouring certified intervals.
inline unsigned counting_jump_violations(const SpectrumTable& table) {
    const auto& m = table.modes();
    unsigned bad = 0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        const Rational before = i == 0 ? Rational(-m[0].lambda_hi / 2) : Rational(-(m[i - 1].lambda_lo + m[i].lambda_hi) / 2);
        const Rational after = -(m[i].lambda_lo + m[i + 1].lambda_hi) / 2;
        const std::uint64_t jump = counting(table, after) - counting(table, before);
        if (jump != 2ull * m[i].n + 1) ++bad;
    }
    return bad;
}

/// Weyl law surrogate on the grid [R/8, 0.95 R] (R the certified radius):
/// fitted coefficient within 5%, no growth of |residual|/r between grid
/// halves, and the 2n + 1 jump structure of N.
inline CheckResult check_weyl(const SpectrumTable& table, std::vector<double> grid = {}) {
    if (grid.empty()) {
        const double radius = table.certified_radius().get_d();
        const double lo = radius / 8, hi = 0.95 * radius;
        grid = linear_grid(lo, hi, (hi - lo) / 199);
    }
    const CountingReport rep = weyl_residual(table, grid);
    const unsigned jumps = counting_jump_violations(table);
    CheckResult r{"weyl"};
    r.statistic = std::abs(rep.fitted_coefficient / rep.weyl_coefficient - 1);
    r.threshold = 0.05;
    const bool no_growth = rep.upper_half_max <= 1.5 * rep.lower_half_max;
    r.pass = r.statistic <= r.threshold && no_growth && jumps == 0;
    r.details["fitted_coefficient"] = rep.fitted_coefficient;
    r.details["weyl_coefficient"] = rep.weyl_coefficient;
    r.details["max_residual_over_r"] = rep.max_residual_over_r;
    r.details["lower_half_max"] = rep.lower_half_max;
    r.details["upper_half_max"] = rep.upper_half_max;
    r.details["jump_violations"] = jumps;
    r.details["r_min"] = grid.front();
    r.details["r_max"] = grid.back();
    return r;
}

inline CheckResult check_exceptional(const SpectrumTable& table) {
    CheckResult r{"exceptional"};
    r.statistic = exceptional_count(table);
    r.threshold = 1;
    r.pass = r.statistic <= r.threshold;
    r.details["c0"] = table.gamma_param().c0();
    return r;
}

inline CheckResult check_reciprocal(const GammaParam& gp, unsigned n_max, const Rational& eps, unsigned threads = 1) {
    const ReciprocalReport rep = reciprocal_symmetry_check(gp.gamma(), n_max, eps, threads);
    CheckResult r{"reciprocal"};
    r.statistic = rep.interval_mismatches;
    r.pass = rep.ok();
    r.details["modes_compared"] = rep.modes_compared;
    r.details["branches_differ"] = rep.branches_differ;
    return r;
}

/// error(n, lambda) |lambda| over lambda in {-10, -20, -40, -80}; the max
/// may not exceed three times the value at -80.
inline CheckResult check_approx42(std::vector<unsigned> ns = {1, 5, 10, 20}) {
    const double lambdas[] = {-10, -20, -40, -80};
    CheckResult r{"approx42"};
    r.threshold = 3;
    nlohmann::ordered_json per_n = nlohmann::ordered_json::object();
    for (unsigned n : ns) {
        double mx = 0, last = 0;
        for (double l : lambdas) {
            last = logderiv_approx_error(n, l) * std::abs(l);
            mx = std::max(mx, last);
        }
        const double ratio = last > 0 ? mx / last : INFINITY;
        per_n[std::to_string(n)] = ratio;
        r.statistic = std::max(r.statistic, ratio);
    }
    r.pass = r.statistic <= r.threshold;
    r.details["ratio_by_n"] = per_n;
    return r;
}

struct FieldCase {
    int n;
    int m;
};

inline std::vector<FieldCase> default_field_cases() { return {{1, 0}, {2, 1}, {3, -2}}; }

/// Boundary residual <= 1e-8, Maxwell residual <= 1e-5 at fd_step and a
/// halving ratio in [3, 5] for each case with n inside the table.
inline CheckResult check_fields(const SpectrumTable& table, double fd_step = 1e-4,
                                std::vector<FieldCase> cases = default_field_cases()) {
    const GammaParam& gp = table.gamma_param();
    CheckResult r{"fields"};
    r.threshold = 1e-5;
    r.pass = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const FieldCase& c : cases) {
        if (static_cast<unsigned>(c.n) > table.n_max()) continue;
        const ModeField mode(c.n, c.m, table.mode(c.n).lambda_mid(), gp.branch(), gp.gamma().get_d());
        const FieldReport fr = field_report(mode, fd_step);
        const bool ok = fr.boundary <= 1e-8 && fr.maxwell <= 1e-5 && fr.convergence_ratio >= 3 && fr.convergence_ratio <= 5;
        r.pass = r.pass && ok;
        r.statistic = std::max(r.statistic, fr.maxwell);
        rows.push_back({{"n", c.n},
                        {"m", c.m},
                        {"boundary", fr.boundary},
                        {"maxwell", fr.maxwell},
                        {"convergence_ratio", fr.convergence_ratio},
                        {"pass", ok}});
    }
    r.details["cases"] = rows;
    return r;
}

/// Runs every check for the configuration. The localization window needs at
/// least four modes and is left out below that.
inline VerifyReport run_verify(const RunConfig& cfg) {
    const GammaParam gp = cfg.gamma_param();
    const Rational eps = cfg.precision_value();
    const unsigned n = cfg.n_max;
    VerifyReport rep(cfg.gamma, n, cfg.precision);
    rep.add(check_uniqueness(gp, n, cfg.threads));
    const SpectrumTable table = spectrum_table(gp, n, eps, cfg.threads, RootCertificate::descartes);
    rep.add(check_monotonicity(table));
    rep.add(check_prop31(std::min(n, 50u), 200, cfg.threads));
    rep.add(check_cross_construction(gp, std::min(n, 300u), cfg.threads));
    rep.add(check_oracle(table));
    if (n >= 4) rep.add(check_localization(table));
    rep.add(check_weyl(table));
    rep.add(check_exceptional(table));
    rep.add(check_reciprocal(gp, std::min(n, 50u), eps, cfg.threads));
    rep.add(check_approx42());
    rep.add(check_fields(table));
    return rep;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Smallest n_max whose last eigenvalue is expected beyond r, from
/// |lambda_n| ~ (n + 1/2)/sqrt(gamma0^2 - 1).
inline unsigned estimated_n_max(const GammaParam& gp, double r) {
    const double root = std::sqrt(gp.weyl_coefficient().get_d());
    const double est = std::ceil(root * (r + 1)) + 2;
    return est > kAutoExtendCap ? kAutoExtendCap + 1 : static_cast<unsigned>(est);
}

/// Builds tables of growing size until query(table) stops throwing
/// IncompleteTable, up to kAutoExtendCap modes.
template <class Query>
auto with_auto_extend(const RunConfig& cfg, double r, Query&& query) {
    const GammaParam gp = cfg.gamma_param();
    const Rational eps = cfg.precision_value();
    unsigned n_max = std::max(cfg.n_max, estimated_n_max(gp, r));
    for (;;) {
        if (n_max > kAutoExtendCap)
            throw IncompleteTable("radius " + format_double(r) + " needs more than " + std::to_string(kAutoExtendCap) +
                                      " modes",
                                  r, 0.0);
        const SpectrumTable table = spectrum_table(gp, n_max, eps, cfg.threads, RootCertificate::descartes);
        try {
            return query(table);
        } catch (const IncompleteTable&) {
            if (n_max == kAutoExtendCap) throw;
            n_max = std::min(kAutoExtendCap, 2 * n_max);
        }
    }
}

inline int cmd_eigs(const RunConfig& cfg, std::ostream& out) {
    const GammaParam gp = cfg.gamma_param();
    const Rational eps = cfg.precision_value();
    const SpectrumTable table = spectrum_table(gp, cfg.n_max, eps, cfg.threads, RootCertificate::both);
    const unsigned digits = decimal_digits(eps);
    if (cfg.output_format == OutputFormat::csv) {
        out << "n,multiplicity,lambda_lo,lambda_hi,lambda_mid,z_n,gap,branch\n";
        for (const EigMode& m : table.modes())
            out << m.n << ',' << m.multiplicity << ',' << rational_string(m.lambda_lo) << ','
                << rational_string(m.lambda_hi) << ',' << format_decimal(m.lambda_mid_exact(), digits) << ','
                << format_double(m.z_n) << ',' << format_double(m.gap()) << ',' << to_string(m.branch) << '\n';
        return exit_ok;
    }
    nlohmann::ordered_json j;
    j["gamma"] = cfg.gamma;
    j["precision"] = rational_string(eps);
    j["digits"] = digits;
    j["modes"] = nlohmann::ordered_json::array();
    for (const EigMode& m : table.modes())
        j["modes"].push_back({{"n", m.n},
                              {"multiplicity", m.multiplicity},
                              {"lambda_lo", rational_string(m.lambda_lo)},
                              {"lambda_hi", rational_string(m.lambda_hi)},
                              {"lambda_mid", format_decimal(m.lambda_mid_exact(), digits)},
                              {"z_n", m.z_n},
                              {"gap", m.gap()},
                              {"branch", to_string(m.branch)}});
    out << j.dump(2) << '\n';
    return exit_ok;
}

inline int cmd_count(const RunConfig& cfg, const std::string& r_text, std::ostream& out) {
    const GammaParam gp = cfg.gamma_param();
    const Rational r = parse_rational(r_text);
    if (sgn(r) <= 0) throw std::invalid_argument("r must be positive");
    const std::uint64_t n = with_auto_extend(cfg, r.get_d(), [&](const SpectrumTable& t) { return counting(t, r); });
    const double prediction = gp.weyl_coefficient().get_d() * r.get_d() * r.get_d();
    if (cfg.output_format == OutputFormat::csv) {
        out << "r,N,prediction\n" << r_text << ',' << n << ',' << format_double(prediction) << '\n';
    } else {
        nlohmann::ordered_json j{{"gamma", cfg.gamma}, {"r", r_text}, {"N", n}, {"prediction", prediction}};
        out << j.dump(2) << '\n';
    }
    return exit_ok;
}

inline int cmd_weyl(const RunConfig& cfg, std::optional<double> r_min, std::optional<double> r_step, std::ostream& out) {
    if (!(cfg.r_max > 0)) throw std::invalid_argument("weyl needs --r-max > 0");
    const double lo = r_min.value_or(cfg.r_max / 10);
    const double step = r_step.value_or((cfg.r_max - lo) / 200);
    if (!(lo > 0) || !(lo < cfg.r_max) || !(step > 0)) throw std::invalid_argument("weyl grid needs 0 < r-min < r-max and r-step > 0");
    const auto grid = linear_grid(lo, cfg.r_max, step);
    const CountingReport rep = with_auto_extend(cfg, cfg.r_max, [&](const SpectrumTable& t) { return weyl_residual(t, grid); });
    if (cfg.output_format == OutputFormat::csv) {
        out << "r,N,prediction,residual\n";
        for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
            const double r = rep.r_grid[i];
            out << format_double(r) << ',' << rep.n_values[i] << ',' << format_double(rep.weyl_coefficient * r * r) << ','
                << format_double(rep.residuals[i]) << '\n';
        }
        out << "# fitted_coefficient=" << format_double(rep.fitted_coefficient)
            << ",weyl_coefficient=" << format_double(rep.weyl_coefficient)
            << ",max_residual_over_r=" << format_double(rep.max_residual_over_r) << '\n';
        return exit_ok;
    }
    nlohmann::ordered_json j;
    j["gamma"] = cfg.gamma;
    j["rows"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
        const double r = rep.r_grid[i];
        j["rows"].push_back({{"r", r}, {"N", rep.n_values[i]}, {"prediction", rep.weyl_coefficient * r * r}, {"residual", rep.residuals[i]}});
    }
    j["fitted_coefficient"] = rep.fitted_coefficient;
    j["weyl_coefficient"] = rep.weyl_coefficient;
    j["max_residual_over_r"] = rep.max_residual_over_r;
    out << j.dump(2) << '\n';
    return exit_ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const VerifyReport rep = run_verify(cfg);
    if (cfg.output_format == OutputFormat::json) {
        out << rep.to_json().dump(2) << '\n';
    } else {
        out << "check,pass,statistic,threshold\n";
        for (const auto& c : rep.checks())
            out << c.name << ',' << (c.pass ? "true" : "false") << ',' << format_double(c.statistic) << ','
                << format_double(c.threshold) << '\n';
    }
    if (rep.all_pass()) return exit_ok;
    err << "failing checks:";
    for (const auto& name : rep.failing()) err << ' ' << name;
    err << '\n';
    return exit_verify_failed;
}

inline int cmd_field(const RunConfig& cfg, int n, int m, double fd_step, std::ostream& out) {
    const GammaParam gp = cfg.gamma_param();
    if (n < 1 || std::abs(m) > n) throw std::invalid_argument("field needs n >= 1 and |m| <= n");
    if (!(fd_step > 0)) throw std::invalid_argument("fd-step must be positive");
    const EigMode eig = eigenvalue(static_cast<unsigned>(n), gp, cfg.precision_value());
    const ModeField mode(n, m, eig.lambda_mid(), gp.branch(), gp.gamma().get_d());
    const FieldReport fr = field_report(mode, fd_step);
    if (cfg.output_format == OutputFormat::csv) {
        out << "n,m,lambda,branch,boundary_residual,maxwell_residual,maxwell_residual_half_step,convergence_ratio,"
               "divergence_residual\n"
            << n << ',' << m << ',' << format_double(mode.lambda) << ',' << to_string(mode.branch) << ','
            << format_double(fr.boundary) << ',' << format_double(fr.maxwell) << ',' << format_double(fr.maxwell_half) << ','
            << format_double(fr.convergence_ratio) << ',' << format_double(fr.divergence) << '\n';
    } else {
        nlohmann::ordered_json j{{"n", n},
                                 {"m", m},
                                 {"lambda", mode.lambda},
                                 {"branch", to_string(mode.branch)},
                                 {"boundary_residual", fr.boundary},
                                 {"maxwell_residual", fr.maxwell},
                                 {"maxwell_residual_half_step", fr.maxwell_half},
                                 {"convergence_ratio", fr.convergence_ratio},
                                 {"divergence_residual", fr.divergence}};
        out << j.dump(2) << '\n';
    }
    return exit_ok;
}

/// Maps library exceptions onto exit codes.
inline int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const IncompleteTable& e) {
        err << "error: range not certified: " << e.what() << '\n';
        return exit_range_not_certified;
    } catch (const EndpointIsRoot& e) {
        err << "error: certification failure: " << e.what() << '\n';
        return exit_certification_failure;
    } catch (const InvalidGamma& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_input;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_input;
    } catch (const std::exception& e) {
        err << "error: certification failure: " << e.what() << '\n';
        return exit_certification_failure;
    }
}

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified eigenvalues of the dissipative Maxwell operator outside the unit ball"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::string format = "csv";
    std::string output;
    app.add_option("--gamma", cfg.gamma, "dissipation constant, decimal or p/q")->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "number of angular modes")->capture_default_str();
    app.add_option("--precision", cfg.precision, "target interval width")->capture_default_str();
    app.add_option("--r-max", cfg.r_max, "largest radius for weyl");
    app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output", output, "write to this file instead of stdout");
    app.set_config("--config", "", "key=value configuration file");

    auto* eigs = app.add_subcommand("eigs", "certified eigenvalue table");
    auto* count = app.add_subcommand("count", "counting function N(r)");
    std::string r_text;
    count->add_option("--r,r", r_text, "radius")->required();
    auto* weyl = app.add_subcommand("weyl", "N(r) against the Weyl prediction on a grid");
    std::optional<double> r_min, r_step;
    weyl->add_option("--r-min", r_min, "first grid radius (default r-max/10)");
    weyl->add_option("--r-step", r_step, "grid spacing (default 200 intervals)");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* field = app.add_subcommand("field", "eigenfield residual report");
    int fn = 1, fm = 0;
    double fd_step = 1e-4;
    field->add_option("--n", fn, "angular index")->capture_default_str();
    field->add_option("--m", fm, "azimuthal index")->capture_default_str();
    field->add_option("--fd-step", fd_step, "finite-difference step")->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    cfg.output_format = format == "json" ? OutputFormat::json : OutputFormat::csv;

    return run_guarded(
        [&]() -> int {
            cfg.validate();
            std::ostringstream buffer;
            int code = exit_ok;
            if (eigs->parsed())
                code = cmd_eigs(cfg, buffer);
            else if (count->parsed())
                code = cmd_count(cfg, r_text, buffer);
            else if (weyl->parsed())
                code = cmd_weyl(cfg, r_min, r_step, buffer);
            else if (verify->parsed())
                code = cmd_verify(cfg, buffer, err);
            else if (field->parsed())
                code = cmd_field(cfg, fn, fm, fd_step, buffer);
            if (output.empty()) {
                out << buffer.str();
            } else {
                std::ofstream file(output);
                if (!file) throw std::invalid_argument("cannot open output file " + output);
                file << buffer.str();
            }
            return code;
        },
        err);
}

}  // namespace dissmax

#endif  // DISSMAX_CLI_HPP
