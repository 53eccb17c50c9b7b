// Single-mode eigenfields outside the unit ball and the numerical residuals
// that check them: the Maxwell generator identity via finite-difference
// curls, and the dissipative boundary condition on the sphere.
//
// Conventions: Y_n^m orthonormal with the Condon-Shortley phase,
// U_n^m = grad_S2 Y_n^m / sqrt(n(n+1)), V_n^m = omega x U_n^m. With
// mu = -i lambda the radial factor is evaluated through
//     h_n(mu r) = (-i)^n e^{lambda r} R_n(-1/(2 lambda r)) / (lambda r).

#ifndef DISSMAX_FIELDS_HPP
#define DISSMAX_FIELDS_HPP

#include "dissmax/besselpoly.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dissmax {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using cdouble = std::complex<double>;

struct SphereSample {
    double theta = 0;
    double phi = 0;
    Vec3 omega = Vec3::UnitZ();

    static SphereSample at(double theta, double phi) {
        return {theta, phi, Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta))};
    }

    /// Direction of a nonzero point; phi = 0 on the polar axis.
    static SphereSample toward(const Vec3& x) {
        const double r = x.norm();
        const double theta = std::acos(std::clamp(x.z() / r, -1.0, 1.0));
        double phi = std::atan2(x.y(), x.x());
        if (phi < 0) phi += 2 * std::numbers::pi;
        SphereSample s = at(theta, phi);
        s.omega = x / r;
        return s;
    }

    Vec3 e_theta() const {
        return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
    }
    Vec3 e_phi() const { return {-std::sin(phi), std::cos(phi), 0.0}; }
};

/// Bilinear cross product; Eigen's cross() conjugates complex results.
inline CVec3 wedge(const CVec3& a, const CVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

namespace detail {

// P_n^m(x) with the Condon-Shortley phase; zero outside |m| <= n.
inline double assoc_legendre(int n, int m, double x) {
    if (n < 0 || std::abs(m) > n) return 0.0;
    return boost::math::legendre_p(n, m, x);
}

inline double sph_norm(int n, int m) {
    // sqrt((2n+1)/(4 pi) * (n-m)!/(n+m)!)
    return std::sqrt((2.0 * n + 1) / (4 * std::numbers::pi) *
                     boost::math::tgamma_delta_ratio(static_cast<double>(n - m + 1), static_cast<double>(2 * m)));
}

}  // namespace detail

inline cdouble sph_harm(int n, int m, const SphereSample& s) {
    if (n < 0 || std::abs(m) > n) throw std::invalid_argument("sph_harm needs |m| <= n");
    const double p = detail::assoc_legendre(n, m, std::cos(s.theta));
    return detail::sph_norm(n, m) * p * std::polar(1.0, m * s.phi);
}

struct VectorHarmonics {
    CVec3 u;
    CVec3 v;
};

/// U_n^m and V_n^m at a sample. The theta derivative and the m/sin(theta)
/// factor both come from Legendre recurrences, so the poles need no special
/// casing:
///   dP_n^m/dtheta       = (P_n^{m+1} - (n+m)(n-m+1) P_n^{m-1}) / 2
///   m P_n^m / sin theta = -(P_{n-1}^{m+1} + (n+m-1)(n+m) P_{n-1}^{m-1}) / 2
inline VectorHarmonics vector_harmonics(int n, int m, const SphereSample& s) {
    if (n < 1 || std::abs(m) > n) throw std::invalid_argument("vector_harmonics needs n >= 1 and |m| <= n");
    const double x = std::cos(s.theta);
    const double dp = 0.5 * (detail::assoc_legendre(n, m + 1, x) -
                             static_cast<double>(n + m) * (n - m + 1) * detail::assoc_legendre(n, m - 1, x));
    const double mp_over_sin = -0.5 * (detail::assoc_legendre(n - 1, m + 1, x) +
                                       static_cast<double>(n + m - 1) * (n + m) * detail::assoc_legendre(n - 1, m - 1, x));
    const cdouble phase = detail::sph_norm(n, m) * std::polar(1.0, m * s.phi);
    const cdouble d_theta = phase * dp;
    const cdouble d_phi_over_sin = phase * cdouble(0, 1) * mp_over_sin;
    const double inv = 1.0 / std::sqrt(static_cast<double>(n) * (n + 1));
    const CVec3 et = s.e_theta().cast<cdouble>();
    const CVec3 ep = s.e_phi().cast<cdouble>();
    VectorHarmonics vh;
    vh.u = inv * (d_theta * et + d_phi_over_sin * ep);
    vh.v = wedge(s.omega.cast<cdouble>(), vh.u);
    return vh;
}

// ---------------------------------------------------------------------------
// Quadrature on the sphere
// ---------------------------------------------------------------------------

struct QuadNode {
    SphereSample sample;
    double weight;
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_k.
inline std::vector<std::pair<double, double>> gauss_legendre(int order) {
    std::vector<std::pair<double, double>> nodes(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p1 = x, p0 = 1;
            dp = order * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = {x, 2.0 / ((1 - x * x) * dp * dp)};
    }
    return nodes;
}

/// Product rule: Gauss-Legendre in cos(theta) times the trapezoid rule in phi.
inline std::vector<QuadNode> sphere_quadrature(int theta_order, int phi_points) {
    std::vector<QuadNode> q;
    q.reserve(static_cast<std::size_t>(theta_order) * phi_points);
    const double dphi = 2 * std::numbers::pi / phi_points;
    for (const auto& [x, w] : gauss_legendre(theta_order))
        for (int j = 0; j < phi_points; ++j) q.push_back({SphereSample::at(std::acos(x), j * dphi), w * dphi});
    return q;
}

/// Rule sized for harmonics up to degree n_max.
inline std::vector<QuadNode> sphere_quadrature_for(int n_max) { return sphere_quadrature(2 * n_max + 2, 4 * n_max + 4); }

// ---------------------------------------------------------------------------
// Eigenfields
// ---------------------------------------------------------------------------

struct ModeField {
    int n = 1;
    int m = 0;
    double lambda = -1;
    Branch branch = Branch::U;
    double gamma = 2;

    ModeField(int n_, int m_, double lambda_, Branch branch_, double gamma_)
        : n(n_), m(m_), lambda(lambda_), branch(branch_), gamma(gamma_) {
        if (n < 1 || std::abs(m) > n) throw std::invalid_argument("ModeField needs n >= 1 and |m| <= n");
        if (!(lambda < 0)) throw std::invalid_argument("ModeField needs lambda < 0");
    }
};

struct FieldValue {
    CVec3 e;
    CVec3 b;
};

namespace detail {

struct Radial {
    cdouble h;   // h_n(mu r)
    cdouble dr;  // d/dr (r h_n(mu r))
};

inline Radial radial(const std::vector<double>& coeffs, int n, double lambda, double r) {
    const double w = -1.0 / (2.0 * lambda * r);
    double rn = 0, drn = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        drn = drn * w + rn;
        rn = rn * w + coeffs[k];
    }
    cdouble phase = 1;
    for (int k = 0; k < n % 4; ++k) phase *= cdouble(0, -1);
    const double e = std::exp(lambda * r);
    Radial out;
    out.h = phase * e / (lambda * r) * rn;
    out.dr = phase / lambda * e * (lambda * rn + drn / (2 * lambda * r * r));
    return out;
}

inline std::vector<double> hankel_poly_double(int n) {
    const RatPoly r = hankel_poly_coeffs(static_cast<unsigned>(n));
    std::vector<double> c;
    for (const auto& q : r.coeffs()) {
        c.push_back(q.get_d());
        if (!std::isfinite(c.back())) throw std::overflow_error("R_n coefficients overflow double");
    }
    return c;
}

}  // namespace detail

/// Evaluates a fixed mode; the R_n coefficients are converted once.
class EigenfieldEvaluator {
public:
    explicit EigenfieldEvaluator(const ModeField& mode) : mode_(mode), coeffs_(detail::hankel_poly_double(mode.n)) {}

    const ModeField& mode() const noexcept { return mode_; }

    /// (E, B) at |x| >= 1, B = -H.
    FieldValue operator()(const Vec3& x) const {
        const double r = x.norm();
        const SphereSample s = SphereSample::toward(x);
        const auto rad = detail::radial(coeffs_, mode_.n, mode_.lambda, r);
        const VectorHarmonics vh = vector_harmonics(mode_.n, mode_.m, s);
        const cdouble y = sph_harm(mode_.n, mode_.m, s);
        const double root = std::sqrt(static_cast<double>(mode_.n) * (mode_.n + 1));
        const CVec3 om = s.omega.cast<cdouble>();
        // Transverse-magnetic-like combination carried by U, and its partner
        // built on V; i mu = lambda.
        const CVec3 poloidal = root * rad.h / r * y * om + rad.dr / r * vh.u;
        const CVec3 toroidal = rad.h * vh.v;
        const double lam = mode_.lambda;
        FieldValue f;
        if (mode_.branch == Branch::U) {
            f.e = poloidal;
            f.b = -lam * toroidal;  // H = lambda h V
        } else {
            f.e = toroidal;
            f.b = poloidal / lam;  // H = -(1/lambda) [poloidal]
        }
        return f;
    }

private:
    ModeField mode_;
    std::vector<double> coeffs_;
};

inline FieldValue eigenfield(const ModeField& mode, const Vec3& x) {
    if (x.norm() < 1 - 1e-12) throw std::invalid_argument("eigenfield is defined for |x| >= 1");
    return EigenfieldEvaluator(mode)(x);
}

struct Residual {
    double absolute = 0;  ///< max over points
    double scale = 0;     ///< max over points of the compared magnitudes
    double relative() const { return scale > 0 ? absolute / scale : absolute; }
};

namespace detail {

// Jacobian columns d/dx_j of E and B by central differences.
struct FieldJacobian {
    std::array<CVec3, 3> de;
    std::array<CVec3, 3> db;
};

inline FieldJacobian jacobian(const EigenfieldEvaluator& field, const Vec3& x, double h) {
    FieldJacobian jac;
    for (int j = 0; j < 3; ++j) {
        Vec3 step = Vec3::Zero();
        step[j] = h;
        const FieldValue plus = field(x + step);
        const FieldValue minus = field(x - step);
        jac.de[j] = (plus.e - minus.e) / (2 * h);
        jac.db[j] = (plus.b - minus.b) / (2 * h);
    }
    return jac;
}

inline CVec3 curl(const std::array<CVec3, 3>& d) {
    return {d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
}

inline cdouble divergence(const std::array<CVec3, 3>& d) { return d[0][0] + d[1][1] + d[2][2]; }

}  // namespace detail

/// max_x |curl B - lambda E| + |curl E + lambda B| with central-difference
/// curls; scale is max_x |lambda| (|E| + |B|).
inline Residual maxwell_residual(const ModeField& mode, std::span<const Vec3> points, double fd_step = 1e-4) {
    const EigenfieldEvaluator field(mode);
    Residual res;
    for (const Vec3& x : points) {
        if (x.norm() < 1 + 2 * fd_step) throw std::invalid_argument("maxwell_residual: point too close to the ball");
        const FieldValue f = field(x);
        const auto jac = detail::jacobian(field, x, fd_step);
        const double lam = mode.lambda;
        const double r = (detail::curl(jac.db) - lam * f.e).norm() + (detail::curl(jac.de) + lam * f.b).norm();
        res.absolute = std::max(res.absolute, r);
        res.scale = std::max(res.scale, std::abs(lam) * (f.e.norm() + f.b.norm()));
    }
    return res;
}

/// max_x (|div E| + |div B|); scale is max_x (|E| + |B|).
inline Residual divergence_residual(const ModeField& mode, std::span<const Vec3> points, double fd_step = 1e-4) {
    const EigenfieldEvaluator field(mode);
    Residual res;
    for (const Vec3& x : points) {
        const FieldValue f = field(x);
        const auto jac = detail::jacobian(field, x, fd_step);
        res.absolute = std::max(res.absolute, std::abs(detail::divergence(jac.de)) + std::abs(detail::divergence(jac.db)));
        res.scale = std::max(res.scale, f.e.norm() + f.b.norm());
    }
    return res;
}

/// sup |E_tan - gamma (nu x B_tan)| / sup |E_tan| over samples on the sphere.
inline Residual boundary_residual(const ModeField& mode, std::span<const SphereSample> samples) {
    const EigenfieldEvaluator field(mode);
    Residual res;
    for (const SphereSample& s : samples) {
        const FieldValue f = field(s.omega);
        const CVec3 nu = s.omega.cast<cdouble>();
        // dot() conjugates its left operand, which is real here
        const CVec3 e_tan = f.e - nu.dot(f.e) * nu;
        const CVec3 b_tan = f.b - nu.dot(f.b) * nu;
        const CVec3 bc = e_tan - mode.gamma * wedge(nu, b_tan);
        res.absolute = std::max(res.absolute, bc.norm());
        res.scale = std::max(res.scale, e_tan.norm());
    }
    return res;
}

/// Off-axis sample points at the given radii, spread over the sphere.
inline std::vector<Vec3> shell_points(std::span<const double> radii, int per_shell = 7) {
    std::vector<Vec3> pts;
    for (double r : radii)
        for (int k = 0; k < per_shell; ++k) {
            const double theta = std::numbers::pi * (k + 0.5) / per_shell;
            const double phi = 2.399963229728653 * k + 0.3;  // golden-angle spread
            pts.push_back(r * SphereSample::at(theta, phi).omega);
        }
    return pts;
}


struct FieldReport {
    double boundary = 0;         ///< relative boundary residual
    double maxwell = 0;          ///< relative Maxwell residual at fd_step
    double maxwell_half = 0;     ///< same at fd_step / 2
    double convergence_ratio = 0;
    double divergence = 0;       ///< relative, at fd_step
};

/// Standard residual battery for one mode: boundary condition on a
/// quadrature grid, Maxwell and divergence residuals on three shells.
inline FieldReport field_report(const ModeField& mode, double fd_step = 1e-4) {
    const double radii[] = {1.5, 2.0, 3.0};
    const auto points = shell_points(radii);
    std::vector<SphereSample> samples;
    for (const QuadNode& q : sphere_quadrature_for(mode.n)) samples.push_back(q.sample);
    FieldReport rep;
    rep.boundary = boundary_residual(mode, samples).relative();
    const Residual full = maxwell_residual(mode, points, fd_step);
    const Residual half = maxwell_residual(mode, points, fd_step / 2);
    rep.maxwell = full.relative();
    rep.maxwell_half = half.relative();
    rep.convergence_ratio = half.absolute > 0 ? full.absolute / half.absolute : 0;
    rep.divergence = divergence_residual(mode, points, fd_step).relative();
    return rep;
}

}  // namespace dissmax

#endif  // DISSMAX_FIELDS_HPP
