#include "dissmax/spectrum.hpp"

#include <gtest/gtest.h>

using namespace dissmax;

namespace {

const GammaParam& gp2() {
    static const GammaParam g(Rational(2));
    return g;
}

const SpectrumTable& table2() {
    static const SpectrumTable t = spectrum_table(gp2(), 150, default_precision(), 2);
    return t;
}

// lambda_1 for gamma = 2 is -1/(2w) with w = (1 + sqrt 5)/4; x < w iff
// (4x - 1)^2 < 5 for x > 1/4.
int compare_with_w1(const Rational& x) {
    const Rational t = 4 * x - 1;
    return sgn(Rational(t * t - 5));
}

long double bisect_cubic() {
    long double lo = 0, hi = 1;
    for (int i = 0; i < 200; ++i) {
        const long double m = (lo + hi) / 2;
        (48 * m * m * m - 6 * m - 1 < 0 ? lo : hi) = m;
    }
    return (lo + hi) / 2;
}

}  // namespace

TEST(Eigenvalue, FirstModeMatchesGoldenRatio) {
    const EigMode m = eigenvalue(1, gp2());
    EXPECT_EQ(m.n, 1u);
    EXPECT_EQ(m.multiplicity, 3u);
    EXPECT_EQ(m.branch, Branch::U);
    EXPECT_LE(compare_with_w1(m.w_interval.lo), 0);
    EXPECT_GE(compare_with_w1(m.w_interval.hi), 0);
    EXPECT_NEAR(m.lambda_mid(), -2 / (1 + std::sqrt(5.0)), 1e-12);
    EXPECT_LE(m.lambda_width(), default_precision());
    EXPECT_LE(m.w_interval.width(), default_precision());
}

TEST(Eigenvalue, SecondModeMatchesCubicOracle) {
    const EigMode m = eigenvalue(2, gp2());
    const double w2 = static_cast<double>(bisect_cubic());
    EXPECT_NEAR(m.w_interval.midpoint().get_d(), w2, 1e-14);
    EXPECT_NEAR(m.lambda_mid(), -1 / (2 * w2), 1e-12);
    EXPECT_NEAR(m.lambda_mid(), -1.19582, 1e-5);
    EXPECT_EQ(m.multiplicity, 5u);
}

TEST(Eigenvalue, CertificatesAgree) {
    for (unsigned n : {1u, 7u, 40u}) {
        const EigMode a = eigenvalue(n, gp2(), default_precision(), RootCertificate::sturm);
        const EigMode b = eigenvalue(n, gp2(), default_precision(), RootCertificate::descartes);
        EXPECT_EQ(a.lambda_lo, b.lambda_lo);
        EXPECT_EQ(a.lambda_hi, b.lambda_hi);
    }
}

TEST(Eigenvalue, HonoursRequestedPrecision) {
    const Rational eps(1, 1000000);
    const EigMode m = eigenvalue(10, gp2(), eps);
    EXPECT_LE(m.lambda_width(), eps);
    EXPECT_LT(m.lambda_hi, 0);
    const EigMode fine = refine_mode(m, gp2(), Rational(1, 1000000000));
    EXPECT_LE(fine.lambda_width(), Rational(1, 1000000000));
    EXPECT_GE(fine.lambda_lo, m.lambda_lo);
    EXPECT_LE(fine.lambda_hi, m.lambda_hi);
    EXPECT_THROW(eigenvalue(0, gp2()), std::invalid_argument);
    EXPECT_THROW(eigenvalue(1, gp2(), Rational(0)), std::invalid_argument);
}

TEST(Eigenvalue, IntervalBracketsTheRoot) {
    for (unsigned n : {1u, 5u, 33u}) {
        const EigMode m = eigenvalue(n, gp2(), Rational(1, 1000));
        const RatPoly p = characteristic_poly_direct(n, gp2());
        EXPECT_NE(eval_sign(p, m.w_interval.lo), eval_sign(p, m.w_interval.hi));
        EXPECT_EQ(sturm_root_count(p, m.w_interval.lo, m.w_interval.hi), 1);
    }
}

TEST(Table, SmallTableIsDecreasing) {
    const SpectrumTable t = spectrum_table(gp2(), 2);
    EXPECT_EQ(t.n_max(), 2u);
    EXPECT_NEAR(t.mode(1).lambda_mid(), -0.6180340, 1e-7);
    EXPECT_NEAR(t.mode(2).lambda_mid(), -1.19582, 1e-5);
    EXPECT_TRUE(is_monotone_chain(t));
    EXPECT_THROW(spectrum_table(gp2(), 0), std::invalid_argument);
}

TEST(Table, InvariantsHold) {
    const SpectrumTable& t = table2();
    EXPECT_TRUE(is_monotone_chain(t));
    for (const EigMode& m : t.modes()) {
        EXPECT_EQ(m.multiplicity, 2ull * m.n + 1);
        EXPECT_LT(m.lambda_hi, 0);
        EXPECT_LE(m.lambda_width(), t.precision());
        EXPECT_DOUBLE_EQ(m.z_n, -std::sqrt(m.n * (m.n + 1.0) / 3.0));
    }
    for (unsigned n = 1; n < t.n_max(); ++n) EXPECT_LT(t.mode(n + 1).w_interval.hi, t.mode(n).w_interval.lo);
    EXPECT_EQ(t.certified_radius(), -t.modes().back().lambda_hi);
}

TEST(Table, IndependentOfThreadCount) {
    const SpectrumTable a = spectrum_table(gp2(), 40, default_precision(), 1);
    const SpectrumTable b = spectrum_table(gp2(), 40, default_precision(), 4);
    for (unsigned n = 1; n <= 40; ++n) {
        EXPECT_EQ(a.mode(n).lambda_lo, b.mode(n).lambda_lo);
        EXPECT_EQ(a.mode(n).lambda_hi, b.mode(n).lambda_hi);
    }
}

TEST(Table, CoarsePrecisionStillYieldsDisjointChain) {
    const SpectrumTable t = spectrum_table(gp2(), 60, Rational(1, 2));
    EXPECT_TRUE(is_monotone_chain(t));
}

TEST(Counting, SpecExamples) {
    const SpectrumTable t = spectrum_table(gp2(), 5);
    EXPECT_EQ(counting(t, 1.0), 3u);
    EXPECT_EQ(counting(t, 1.3), 8u);
    EXPECT_EQ(counting(t, 0.1), 0u);
    EXPECT_THROW(counting(t, 100.0), IncompleteTable);
    EXPECT_THROW(counting(t, 0.0), std::invalid_argument);
}

TEST(Counting, RadiusInsideAnIntervalIsResolvedExactly) {
    const SpectrumTable t = spectrum_table(gp2(), 3, Rational(1, 100));
    const EigMode& m = t.mode(1);
    // r = -lambda_lo puts -r on the lower endpoint; lambda_1 >= -r is certain.
    EXPECT_EQ(counting(t, Rational(-m.lambda_lo)), 3u);
    // r = -midpoint straddles; the answer must follow the exact root.
    const Rational r = -m.lambda_mid_exact();
    const Rational w_at_r = 1 / (2 * r);  // lambda_1 >= -r iff w_1 >= w_at_r
    const std::uint64_t expected = compare_with_w1(w_at_r) <= 0 ? 3u : 0u;
    EXPECT_EQ(counting(t, r), expected);
}

TEST(Counting, StepFunctionWithOddJumps) {
    const SpectrumTable& t = table2();
    std::uint64_t prev = 0;
    for (double r = 0.5; r < 80; r += 0.37) {
        const std::uint64_t n = counting(t, r);
        EXPECT_GE(n, prev);
        prev = n;
    }
    for (unsigned n = 2; n + 1 < t.n_max(); ++n) {
        const Rational before = -(t.mode(n - 1).lambda_lo + t.mode(n).lambda_hi) / 2;
        const Rational after = -(t.mode(n).lambda_lo + t.mode(n + 1).lambda_hi) / 2;
        EXPECT_EQ(counting(t, after) - counting(t, before), 2ull * n + 1);
        EXPECT_EQ(counting(t, after), static_cast<std::uint64_t>((n + 1) * (n + 1) - 1));
    }
}

TEST(Weyl, ResidualIsLinearInRadius) {
    const auto grid = linear_grid(10, 80, 0.5);
    const CountingReport rep = weyl_residual(table2(), grid);
    EXPECT_EQ(rep.weyl_coefficient, 3.0);
    EXPECT_NEAR(rep.fitted_coefficient, 3.0, 0.15);
    EXPECT_LE(rep.upper_half_max, 1.5 * rep.lower_half_max);
    for (std::size_t i = 1; i < rep.n_values.size(); ++i) EXPECT_GE(rep.n_values[i], rep.n_values[i - 1]);
    // doubling r does not double |residual|/r
    const CountingReport a = weyl_residual(table2(), linear_grid(20, 40, 0.25));
    const CountingReport b = weyl_residual(table2(), linear_grid(40, 80, 0.25));
    EXPECT_LT(b.max_residual_over_r, 2 * a.max_residual_over_r);
    EXPECT_NEAR(static_cast<double>(counting(table2(), 80.0)) / (80.0 * 80.0), 3.0, 0.15);
}

TEST(Weyl, LinearGrid) {
    const auto g = linear_grid(1, 2, 0.25);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.back(), 2.0);
}

TEST(Localization, FirstGapsAndBoundedness) {
    const LocalizationReport rep = localization_check(table2());
    EXPECT_NEAR(rep.gaps[0], 0.1985, 1e-4);
    EXPECT_NEAR(rep.gaps[1], 0.2184, 1e-4);
    EXPECT_TRUE(rep.bounded(2, 75, 150));
    EXPECT_LT(rep.max_gap, 0.25);
    EXPECT_GE(rep.window_max(1, 150), rep.window_max(2, 75));
}

TEST(Exceptional, AtMostOneAboveMinusC0) {
    EXPECT_EQ(exceptional_count(spectrum_table(gp2(), 2)), 1u);
    EXPECT_LE(gp2().c0(), -table2().mode(2).lambda_mid());
    for (const char* g : {"3/2", "3", "5", "1/2", "2/3"})
        EXPECT_LE(exceptional_count(spectrum_table(GammaParam::parse(g), 12)), 1u) << g;
    EXPECT_THROW(exceptional_count(spectrum_table(GammaParam::parse("3/2"), 1)), IncompleteTable);
}

TEST(Reciprocal, SameIntervalsOppositeBranches) {
    const ReciprocalReport rep = reciprocal_symmetry_check(Rational(2), 30);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.modes_compared, 30u);
    EXPECT_EQ(rep.interval_mismatches, 0u);
}
