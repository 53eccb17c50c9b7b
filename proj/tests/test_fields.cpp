#include "dissmax/fields.hpp"
#include "dissmax/spectrum.hpp"

#include <gtest/gtest.h>

using namespace dissmax;

namespace {

double lambda_n(unsigned n, const char* gamma = "2") { return eigenvalue(n, GammaParam::parse(gamma)).lambda_mid(); }

std::vector<SphereSample> quad_samples(int n) {
    std::vector<SphereSample> out;
    for (const QuadNode& q : sphere_quadrature_for(n)) out.push_back(q.sample);
    return out;
}

std::vector<Vec3> standard_points() {
    const double radii[] = {1.5, 2.0, 3.0};
    return shell_points(radii);
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (int order : {1, 2, 5, 12, 18}) {
        const auto nodes = gauss_legendre(order);
        double wsum = 0;
        for (const auto& [x, w] : nodes) wsum += w;
        EXPECT_NEAR(wsum, 2.0, 1e-14);
        for (int k = 0; k <= 2 * order - 1; ++k) {
            double s = 0;
            for (const auto& [x, w] : nodes) s += w * std::pow(x, k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(s, exact, 1e-13) << order << " " << k;
        }
    }
}

TEST(SphereSample, UnitDirection) {
    for (double t = 0; t <= std::numbers::pi; t += 0.3)
        for (double p = 0; p < 6.2; p += 0.7) EXPECT_NEAR(SphereSample::at(t, p).omega.norm(), 1.0, 1e-14);
    const SphereSample s = SphereSample::toward(Vec3(0, 3, 4));
    EXPECT_NEAR(s.omega.norm(), 1.0, 1e-15);
    EXPECT_NEAR((SphereSample::at(s.theta, s.phi).omega - s.omega).norm(), 0.0, 1e-15);
}

TEST(SphHarm, ClosedForms) {
    const double pi = std::numbers::pi;
    for (double t : {0.0, 0.4, 1.3, pi}) {
        const SphereSample s = SphereSample::at(t, 0.9);
        EXPECT_NEAR(std::abs(sph_harm(0, 0, s) - 1 / std::sqrt(4 * pi)), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(sph_harm(1, 0, s) - std::sqrt(3 / (4 * pi)) * std::cos(t)), 0.0, 1e-15);
        const cdouble y11 = -std::sqrt(3 / (8 * pi)) * std::sin(t) * std::polar(1.0, 0.9);
        EXPECT_NEAR(std::abs(sph_harm(1, 1, s) - y11), 0.0, 1e-15);
        // Y_n^{-m} = (-1)^m conj(Y_n^m)
        EXPECT_NEAR(std::abs(sph_harm(3, -2, s) - std::conj(sph_harm(3, 2, s))), 0.0, 1e-14);
    }
    EXPECT_THROW(sph_harm(2, 3, SphereSample{}), std::invalid_argument);
}

TEST(SphHarm, OrthonormalUnderQuadrature) {
    const int nmax = 8;
    const auto q = sphere_quadrature_for(nmax);
    std::vector<std::vector<cdouble>> values;
    for (int n = 0; n <= nmax; ++n)
        for (int m = -n; m <= n; ++m) {
            values.emplace_back();
            for (const QuadNode& node : q) values.back().push_back(sph_harm(n, m, node.sample));
        }
    double worst = 0;
    for (std::size_t a = 0; a < values.size(); ++a)
        for (std::size_t b = a; b < values.size(); ++b) {
            cdouble s = 0;
            for (std::size_t k = 0; k < q.size(); ++k) s += q[k].weight * values[a][k] * std::conj(values[b][k]);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    EXPECT_LT(worst, 1e-10);
}

TEST(VectorHarmonics, TangentAndRotated) {
    for (int n = 1; n <= 6; ++n)
        for (int m = -n; m <= n; ++m)
            for (double t : {0.0, 0.2, 1.1, 2.5, std::numbers::pi})
                for (double p : {0.0, 1.7, 4.0}) {
                    const SphereSample s = SphereSample::at(t, p);
                    const VectorHarmonics vh = vector_harmonics(n, m, s);
                    const CVec3 om = s.omega.cast<cdouble>();
                    ASSERT_TRUE(vh.u.allFinite());
                    EXPECT_LT(std::abs(om.dot(vh.u)), 1e-12);
                    EXPECT_LT(std::abs(om.dot(vh.v)), 1e-12);
                    EXPECT_LT((wedge(om, wedge(om, vh.u)) + vh.u).norm(), 1e-12);
                }
}

TEST(VectorHarmonics, MatchesFiniteDifferenceSurfaceGradient) {
    const double h = 1e-6;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {3, -2}, {5, 4}}) {
        const SphereSample s = SphereSample::at(0.9, 2.1);
        const cdouble dt = (sph_harm(n, m, SphereSample::at(0.9 + h, 2.1)) - sph_harm(n, m, SphereSample::at(0.9 - h, 2.1))) / (2 * h);
        const cdouble dp = (sph_harm(n, m, SphereSample::at(0.9, 2.1 + h)) - sph_harm(n, m, SphereSample::at(0.9, 2.1 - h))) / (2 * h);
        const CVec3 grad = (dt * s.e_theta().cast<cdouble>() + dp / std::sin(0.9) * s.e_phi().cast<cdouble>()) /
                           std::sqrt(n * (n + 1.0));
        EXPECT_LT((grad - vector_harmonics(n, m, s).u).norm(), 1e-8) << n << " " << m;
    }
}

TEST(VectorHarmonics, OrthonormalFamilyUpToDegreeEight) {
    const int nmax = 8;
    const auto q = sphere_quadrature_for(nmax);
    std::vector<std::vector<CVec3>> family;
    for (int n = 1; n <= nmax; ++n)
        for (int m = -n; m <= n; ++m) {
            std::vector<CVec3> u, v;
            for (const QuadNode& node : q) {
                const VectorHarmonics vh = vector_harmonics(n, m, node.sample);
                u.push_back(vh.u);
                v.push_back(vh.v);
            }
            family.push_back(std::move(u));
            family.push_back(std::move(v));
        }
    double worst = 0;
    for (std::size_t a = 0; a < family.size(); ++a)
        for (std::size_t b = a; b < family.size(); ++b) {
            cdouble s = 0;
            for (std::size_t k = 0; k < q.size(); ++k) s += q[k].weight * family[b][k].dot(family[a][k]);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    EXPECT_LT(worst, 1e-8);
}

TEST(ModeField, ValidatesArguments) {
    EXPECT_THROW(ModeField(0, 0, -1, Branch::U, 2), std::invalid_argument);
    EXPECT_THROW(ModeField(2, 3, -1, Branch::U, 2), std::invalid_argument);
    EXPECT_THROW(ModeField(1, 0, 0.5, Branch::U, 2), std::invalid_argument);
    EXPECT_THROW(eigenfield(ModeField(1, 0, -1, Branch::U, 2), Vec3(0.5, 0, 0)), std::invalid_argument);
}

TEST(Eigenfield, RadialFactorMatchesHankelOracle) {
    // E_tan on the U branch carries d/dr(r h)/r; compare h itself through the
    // V-branch E = h V.
    const double lam = -1.3;
    const ModeField mode(3, 1, lam, Branch::V, 0.5);
    const SphereSample s = SphereSample::at(0.8, 0.4);
    for (double r : {1.0, 1.7, 3.0}) {
        const FieldValue f = eigenfield(mode, r * s.omega);
        const CVec3 expected = hankel_oracle(3, lam * r) * vector_harmonics(3, 1, s).v;
        EXPECT_LT((f.e - expected).norm(), 1e-12 * expected.norm());
    }
}

TEST(Eigenfield, DecaysExponentially) {
    const double lam = lambda_n(2);
    const ModeField mode(2, 1, lam, Branch::U, 2);
    const Vec3 dir = SphereSample::at(1.0, 0.5).omega;
    const double e1 = eigenfield(mode, dir).e.norm();
    for (double r : {2.0, 4.0}) {
        const double er = eigenfield(mode, r * dir).e.norm();
        EXPECT_LE(er, 2 * e1 * std::exp(lam * (r - 1)));
        EXPECT_LT(er, e1);
    }
}

TEST(Eigenfield, TangentialTraceIsParallelToU) {
    const double lam = lambda_n(2);
    const ModeField mode(2, -1, lam, Branch::U, 2);
    for (const SphereSample& s : {SphereSample::at(0.6, 1.0), SphereSample::at(2.0, 4.2)}) {
        const FieldValue f = eigenfield(mode, s.omega);
        const CVec3 nu = s.omega.cast<cdouble>();
        const CVec3 e_tan = f.e - nu.dot(f.e) * nu;
        const CVec3 u = vector_harmonics(2, -1, s).u;
        const cdouble c = u.dot(e_tan) / u.squaredNorm();
        EXPECT_LT((e_tan - c * u).norm(), 1e-12 * e_tan.norm());
    }
}

TEST(Residuals, CertifiedModesSatisfyBoundaryAndMaxwell) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {3, -2}}) {
        const double lam = lambda_n(n);
        for (auto [branch, gamma] : {std::pair{Branch::U, 2.0}, std::pair{Branch::V, 0.5}}) {
            const FieldReport fr = field_report(ModeField(n, m, lam, branch, gamma));
            EXPECT_LE(fr.boundary, 1e-8) << n << " " << m;
            EXPECT_LE(fr.maxwell, 1e-5);
            EXPECT_GE(fr.convergence_ratio, 3.0);
            EXPECT_LE(fr.convergence_ratio, 5.0);
            EXPECT_LE(fr.divergence, 1e-6);
        }
    }
}

TEST(Residuals, BranchMismatchViolatesBoundaryCondition) {
    const double lam = lambda_n(2);
    const auto samples = quad_samples(2);
    EXPECT_GT(boundary_residual(ModeField(2, 0, lam, Branch::V, 2.0), samples).relative(), 1e-3);
    EXPECT_GT(boundary_residual(ModeField(2, 0, lam, Branch::U, 0.5), samples).relative(), 1e-3);
}

TEST(Residuals, AsymptoticCentreIsNotAnEigenvalue) {
    const double z1 = -std::sqrt(2.0 / 3.0);
    EXPECT_GT(boundary_residual(ModeField(1, 0, z1, Branch::U, 2), quad_samples(1)).relative(), 1e-3);
}

TEST(Residuals, PerturbedLambdaIsDetected) {
    for (unsigned n : {1u, 2u, 3u}) {
        const double lam = lambda_n(n);
        const auto samples = quad_samples(static_cast<int>(n));
        const double at = boundary_residual(ModeField(n, 0, lam, Branch::U, 2), samples).relative();
        const double off = boundary_residual(ModeField(n, 0, lam + 0.1, Branch::U, 2), samples).relative();
        EXPECT_GE(off, 100 * std::max(at, 1e-12)) << n;
    }
}

TEST(Residuals, MaxwellRejectsPointsNearTheBall) {
    const std::vector<Vec3> pts{Vec3(1.0001, 0, 0)};
    EXPECT_THROW(maxwell_residual(ModeField(1, 0, -0.6, Branch::U, 2), pts), std::invalid_argument);
}

TEST(Residuals, SecondOrderInStep) {
    const ModeField mode(3, 2, lambda_n(3, "5"), Branch::U, 5.0);
    const auto pts = standard_points();
    const double a = maxwell_residual(mode, pts, 2e-4).absolute;
    const double b = maxwell_residual(mode, pts, 1e-4).absolute;
    EXPECT_NEAR(a / b, 4.0, 0.5);
}
