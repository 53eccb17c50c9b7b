// Eigenvalue table for the ball: one certified negative eigenvalue per
// angular index n, counted with multiplicity 2n + 1, plus the quantitative
// checks built on top of it (counting function, Weyl residual,
// localization around z_n, the exceptional eigenvalue bound, and the
// gamma <-> 1/gamma symmetry).

#ifndef DISSMAX_SPECTRUM_HPP
#define DISSMAX_SPECTRUM_HPP

#include "dissmax/besselpoly.hpp"
#include "dissmax/exactpoly.hpp"
#include "dissmax/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dissmax {

/// The table does not reach far enough along the negative axis for the
/// requested query; rebuild with a larger n_max.
class IncompleteTable : public std::out_of_range {
public:
    IncompleteTable(double needed, double reached)
        : std::out_of_range("eigenvalue table reaches |lambda| = " + std::to_string(reached) +
                            ", query needs beyond " + std::to_string(needed)),
          needed_(needed),
          reached_(reached) {}
    IncompleteTable(const std::string& message, double needed, double reached)
        : std::out_of_range(message), needed_(needed), reached_(reached) {}
    double needed() const noexcept { return needed_; }
    double reached() const noexcept { return reached_; }

private:
    double needed_;
    double reached_;
};

inline Rational default_precision() {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, 30);
    return Rational(Integer(1), den);
}

struct EigMode {
    unsigned n = 0;
    RootInterval w_interval;  ///< positive root of the characteristic polynomial
    Rational lambda_lo;       ///< -1/(2 w_lo)
    Rational lambda_hi;       ///< -1/(2 w_hi)
    std::uint64_t multiplicity = 0;
    double z_n = 0;
    Branch branch = Branch::U;

    Rational lambda_width() const { return lambda_hi - lambda_lo; }
    Rational lambda_mid_exact() const { return (lambda_lo + lambda_hi) / 2; }
    double lambda_mid() const { return lambda_mid_exact().get_d(); }
    double gap() const { return std::abs(lambda_mid() - z_n); }
};

/// -sqrt(n(n+1)/(gamma0^2 - 1)).
inline double localization_center(unsigned n, const GammaParam& gp) {
    const double nn = static_cast<double>(n) * (n + 1);
    return -std::sqrt(nn / gp.weyl_coefficient().get_d());
}

namespace detail {

// Bisects in w until both the w-width and the induced lambda-width are
// at most eps, then fills in the lambda interval.
inline void refine_into(EigMode& mode, const IntPoly& p, const Rational& eps) {
    for (Rational target = eps;; target /= 2) {
        mode.w_interval = refine(p, std::move(mode.w_interval), target);
        const RootInterval& w = mode.w_interval;
        if (sgn(w.lo) <= 0) continue;
        mode.lambda_lo = -1 / (2 * w.lo);
        mode.lambda_hi = -1 / (2 * w.hi);
        mode.lambda_lo.canonicalize();
        mode.lambda_hi.canonicalize();
        if (w.is_exact() || mode.lambda_width() <= eps) return;
    }
}

}  // namespace detail

/// Certified eigenvalue lambda_n = -1/(2 w_n), w_n the unique positive root
/// of w^2 R_n'(w) + alpha R_n(w).
inline EigMode eigenvalue(unsigned n, const GammaParam& gp, const Rational& eps = default_precision(),
                          RootCertificate cert = RootCertificate::both) {
    if (n == 0) throw std::invalid_argument("eigenvalue: modes start at n = 1");
    if (sgn(eps) <= 0) throw std::invalid_argument("eigenvalue: precision must be positive");
    const RatPoly charpoly = characteristic_poly_direct(n, gp);
    const IntPoly p(charpoly);
    EigMode mode;
    mode.n = n;
    mode.multiplicity = 2ull * n + 1;
    mode.z_n = localization_center(n, gp);
    mode.branch = gp.branch();
    mode.w_interval = isolate_unique_positive_root(p, cauchy_positive_bound(charpoly), cert);
    // A floating estimate only narrows the starting bracket; containment is
    // re-established from exact signs inside tighten_around.
    if (const double guess = float_root_estimate(p, mode.w_interval); guess > 0) {
        int e = 0;
        std::frexp(guess, &e);
        mode.w_interval = tighten_around(p, std::move(mode.w_interval), Rational(guess), Rational(std::ldexp(1.0, e - 44)));
    }
    detail::refine_into(mode, p, eps);
    return mode;
}

/// Tightens an existing mode; the polynomial is rebuilt rather than stored.
inline EigMode refine_mode(EigMode mode, const GammaParam& gp, const Rational& eps) {
    detail::refine_into(mode, IntPoly(characteristic_poly_direct(mode.n, gp)), eps);
    return mode;
}

class SpectrumTable {
public:
    SpectrumTable(GammaParam gp, Rational precision, std::vector<EigMode> modes)
        : gp_(std::move(gp)), precision_(std::move(precision)), modes_(std::move(modes)) {}

    const GammaParam& gamma_param() const noexcept { return gp_; }
    unsigned n_max() const noexcept { return static_cast<unsigned>(modes_.size()); }
    const Rational& precision() const noexcept { return precision_; }
    const std::vector<EigMode>& modes() const noexcept { return modes_; }
    const EigMode& mode(unsigned n) const { return modes_.at(n - 1); }

    /// Every eigenvalue not in the table has |lambda| above this value.
    Rational certified_radius() const { return -modes_.back().lambda_hi; }

private:
    GammaParam gp_;
    Rational precision_;
    std::vector<EigMode> modes_;
};

/// Modes n = 1..n_max, computed in parallel and assembled by index, then
/// refined until consecutive lambda intervals are disjoint and the chain is
/// strictly decreasing.
inline SpectrumTable spectrum_table(const GammaParam& gp, unsigned n_max, const Rational& eps = default_precision(),
                                    unsigned threads = 1, RootCertificate cert = RootCertificate::both) {
    if (n_max == 0) throw std::invalid_argument("spectrum_table: n_max must be at least 1");
    std::vector<EigMode> modes(n_max);
    parallel_for(n_max, threads, [&](std::size_t i) { modes[i] = eigenvalue(static_cast<unsigned>(i + 1), gp, eps, cert); });
    for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
        Rational target = eps;
        while (!(modes[i + 1].lambda_hi < modes[i].lambda_lo)) {
            if (modes[i].w_interval.is_exact() && modes[i + 1].w_interval.is_exact())
                throw std::logic_error("eigenvalue chain is not strictly decreasing at n = " + std::to_string(i + 1));
            target /= 16;
            modes[i] = refine_mode(std::move(modes[i]), gp, target);
            modes[i + 1] = refine_mode(std::move(modes[i + 1]), gp, target);
        }
    }
    return SpectrumTable(gp, eps, std::move(modes));
}

/// True when lambda_{n+1} < lambda_n holds as disjoint intervals for every
/// consecutive pair.
inline bool is_monotone_chain(const SpectrumTable& table) {
    const auto& m = table.modes();
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
        if (!(m[i + 1].lambda_hi < m[i].lambda_lo)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Counting function
// ---------------------------------------------------------------------------

/// N(r) = sum of 2n+1 over modes with |lambda_n| <= r. Intervals that
/// straddle -r are refined until they clear it.
inline std::uint64_t counting(const SpectrumTable& table, const Rational& r) {
    if (sgn(r) <= 0) throw std::invalid_argument("counting: r must be positive");
    if (!(table.certified_radius() > r)) throw IncompleteTable(r.get_d(), table.certified_radius().get_d());
    const Rational threshold = -r;
    std::uint64_t total = 0;
    for (const EigMode& m0 : table.modes()) {
        if (m0.lambda_hi < threshold) break;  // chain is decreasing, the rest are further out
        if (m0.lambda_lo >= threshold) {
            total += m0.multiplicity;
            continue;
        }
        EigMode m = m0;
        Rational eps = table.precision();
        while (m.lambda_lo < threshold && m.lambda_hi >= threshold) {
            if (m.w_interval.is_exact()) break;
            eps /= 1024;
            m = refine_mode(std::move(m), table.gamma_param(), eps);
        }
        if (m.lambda_lo >= threshold) total += m.multiplicity;
    }
    return total;
}

inline std::uint64_t counting(const SpectrumTable& table, double r) { return counting(table, Rational(r)); }

struct CountingReport {
    std::vector<double> r_grid;
    std::vector<std::uint64_t> n_values;
    std::vector<double> residuals;  ///< N(r) - (gamma0^2 - 1) r^2
    double weyl_coefficient = 0;
    double fitted_coefficient = 0;  ///< least squares of N against r^2
    double max_residual_over_r = 0;
    double residual_slope = 0;  ///< least-squares slope of residual vs r
    double lower_half_max = 0;  ///< max |residual|/r over the first half of the grid
    double upper_half_max = 0;  ///< same over the second half
};

inline CountingReport weyl_residual(const SpectrumTable& table, const std::vector<double>& r_grid) {
    CountingReport rep;
    rep.r_grid = r_grid;
    rep.weyl_coefficient = table.gamma_param().weyl_coefficient().get_d();
    double sxx = 0, sxy = 0;
    for (double r : r_grid) {
        const std::uint64_t nv = counting(table, r);
        rep.n_values.push_back(nv);
        const double res = static_cast<double>(nv) - rep.weyl_coefficient * r * r;
        rep.residuals.push_back(res);
        sxx += r * r * r * r;
        sxy += static_cast<double>(nv) * r * r;
        rep.max_residual_over_r = std::max(rep.max_residual_over_r, std::abs(res) / r);
    }
    if (r_grid.empty()) return rep;
    rep.fitted_coefficient = sxy / sxx;

    const std::size_t k = r_grid.size();
    const std::size_t half = k / 2;
    for (std::size_t i = 0; i < k; ++i) {
        const double v = std::abs(rep.residuals[i]) / r_grid[i];
        (i < half ? rep.lower_half_max : rep.upper_half_max) =
            std::max(i < half ? rep.lower_half_max : rep.upper_half_max, v);
    }

    double mr = 0, mres = 0;
    for (std::size_t i = 0; i < k; ++i) {
        mr += r_grid[i];
        mres += rep.residuals[i];
    }
    mr /= static_cast<double>(k);
    mres /= static_cast<double>(k);
    double cov = 0, var = 0;
    for (std::size_t i = 0; i < k; ++i) {
        cov += (r_grid[i] - mr) * (rep.residuals[i] - mres);
        var += (r_grid[i] - mr) * (r_grid[i] - mr);
    }
    rep.residual_slope = var > 0 ? cov / var : 0;
    return rep;
}

/// Evenly spaced grid lo, lo+step, ..., up to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
        const double r = lo + static_cast<double>(i) * step;
        if (r > hi + 1e-9 * step) break;
        g.push_back(r);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Localization, exceptional eigenvalue, reciprocal symmetry
// ---------------------------------------------------------------------------

struct LocalizationReport {
    std::vector<double> gaps;  ///< |lambda_n - z_n|, index n-1
    double max_gap = 0;        ///< empirical a(gamma)
    unsigned argmax_n = 0;

    /// Max gap over n in [from, to] (clamped to the table).
    double window_max(unsigned from, unsigned to) const {
        double m = 0;
        for (unsigned n = std::max(1u, from); n <= to && n <= gaps.size(); ++n) m = std::max(m, gaps[n - 1]);
        return m;
    }

    /// Boundedness proxy: the upper window never exceeds `factor` times the lower one.
    bool bounded(unsigned lower_from, unsigned split, unsigned upper_to, double factor = 2.0) const {
        return window_max(split, upper_to) <= factor * window_max(lower_from, split);
    }
};

inline LocalizationReport localization_check(const SpectrumTable& table) {
    if (table.modes().empty()) throw std::invalid_argument("localization_check: empty table");
    LocalizationReport rep;
    for (const EigMode& m : table.modes()) {
        const double g = m.gap();
        rep.gaps.push_back(g);
        if (g > rep.max_gap) {
            rep.max_gap = g;
            rep.argmax_n = m.n;
        }
    }
    return rep;
}

/// Number of modes with lambda_n > -c0; at most one is expected.
inline unsigned exceptional_count(const SpectrumTable& table) {
    const GammaParam& gp = table.gamma_param();
    if (gp.above_minus_c0(table.modes().back().lambda_lo))
        throw IncompleteTable(gp.c0(), table.certified_radius().get_d());
    unsigned count = 0;
    for (const EigMode& m0 : table.modes()) {
        EigMode m = m0;
        Rational eps = table.precision();
        while (gp.above_minus_c0(m.lambda_lo) != gp.above_minus_c0(m.lambda_hi)) {
            eps /= 1024;
            m = refine_mode(std::move(m), gp, eps);
        }
        if (gp.above_minus_c0(m.lambda_lo)) ++count;
    }
    return count;
}

struct ReciprocalReport {
    unsigned modes_compared = 0;
    unsigned interval_mismatches = 0;
    bool branches_differ = false;
    bool ok() const { return interval_mismatches == 0 && branches_differ; }
};

/// Builds the tables for gamma and 1/gamma and compares them mode by mode.
inline ReciprocalReport reciprocal_symmetry_check(const Rational& gamma, unsigned n_max,
                                                  const Rational& eps = default_precision(), unsigned threads = 1,
                                                  RootCertificate cert = RootCertificate::descartes) {
    const GammaParam direct(gamma);
    const GammaParam reciprocal(Rational(1 / gamma));
    const SpectrumTable a = spectrum_table(direct, n_max, eps, threads, cert);
    const SpectrumTable b = spectrum_table(reciprocal, n_max, eps, threads, cert);
    ReciprocalReport rep;
    rep.branches_differ = true;
    for (unsigned n = 1; n <= n_max; ++n) {
        ++rep.modes_compared;
        const EigMode& x = a.mode(n);
        const EigMode& y = b.mode(n);
        if (x.lambda_lo != y.lambda_lo || x.lambda_hi != y.lambda_hi) ++rep.interval_mismatches;
        if (x.branch == y.branch) rep.branches_differ = false;
    }
    return rep;
}

}  // namespace dissmax

#endif  // DISSMAX_SPECTRUM_HPP
