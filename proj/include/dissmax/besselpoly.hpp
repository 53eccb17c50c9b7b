// Reverse Bessel polynomials R_n, the characteristic polynomials whose
// positive roots give the negative eigenvalues, and a floating-point
// spherical Hankel oracle used to cross-check them.
//
// On the negative imaginary axis the outgoing spherical Hankel function
// factors as
//
//     h_n(-i*lambda) = (-i)^n * e^lambda / lambda * R_n(-1/(2*lambda)),
//     R_n(w) = sum_m (n+m)! / (m! (n-m)!) w^m,
//
// so with w = -1/(2*lambda) the eigenvalue condition becomes the polynomial
// equation  w^2 R_n'(w) + alpha R_n(w) = 0,  alpha = (1 - gamma0)/2.

#ifndef DISSMAX_BESSELPOLY_HPP
#define DISSMAX_BESSELPOLY_HPP

#include "dissmax/exactpoly.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dissmax {

class InvalidGamma : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OverflowAtLargeN : public std::overflow_error {
public:
    OverflowAtLargeN(unsigned n, double lambda)
        : std::overflow_error("Hankel recurrence overflows at n = " + std::to_string(n) +
                              ", lambda = " + std::to_string(lambda)) {}
};

/// Which vector harmonic family carries the eigenfield: U for gamma > 1,
/// V for 0 < gamma < 1.
enum class Branch { U, V };

inline const char* to_string(Branch b) { return b == Branch::U ? "U" : "V"; }

/// Parses decimal ("1.25", "1e-30") or fraction ("3/2") text into an exact
/// rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    try {
        if (s.find('/') != std::string::npos) {
            Rational q(s);
            if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
            q.canonicalize();
            return q;
        }
        std::string mantissa = s;
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string::npos) {
            mantissa = s.substr(0, e);
            exponent = std::stol(s.substr(e + 1));
        }
        bool negative = false;
        if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
            negative = mantissa[0] == '-';
            mantissa.erase(0, 1);
        }
        std::string digits;
        long frac_digits = 0;
        bool seen_point = false;
        for (char ch : mantissa) {
            if (ch == '.' && !seen_point) {
                seen_point = true;
            } else if (ch >= '0' && ch <= '9') {
                digits += ch;
                if (seen_point) ++frac_digits;
            } else {
                throw std::invalid_argument("bad character");
            }
        }
        if (digits.empty()) throw std::invalid_argument("no digits");
        Integer num(digits);
        exponent -= frac_digits;
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
        Rational q = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
        q.canonicalize();
        return negative ? Rational(-q) : q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse '" + s + "' as a rational number");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("cannot parse '" + s + "' as a rational number");
    }
}

/// The dissipation constant gamma together with the quantities every other
/// computation is expressed in.
class GammaParam {
public:
    explicit GammaParam(Rational gamma) : gamma_(std::move(gamma)) {
        gamma_.canonicalize();
        if (sgn(gamma_) <= 0) throw InvalidGamma("gamma must be positive, got " + gamma_.get_str());
        if (gamma_ == 1)
            throw InvalidGamma("gamma = 1 is excluded: for gamma = 1 there are no eigenvalues with negative real part");
        gamma0_ = gamma_ > 1 ? gamma_ : Rational(1 / gamma_);
        alpha_ = (1 - gamma0_) / 2;
        const double excess = Rational(gamma0_ - 1).get_d();
        c0_ = 1.0 / std::max(excess, std::sqrt(excess));
    }

    static GammaParam parse(std::string_view text) {
        Rational g;
        try {
            g = parse_rational(text);
        } catch (const std::invalid_argument& e) {
            throw InvalidGamma(e.what());
        }
        return GammaParam(std::move(g));
    }

    const Rational& gamma() const noexcept { return gamma_; }
    const Rational& gamma0() const noexcept { return gamma0_; }
    const Rational& alpha() const noexcept { return alpha_; }
    double c0() const noexcept { return c0_; }
    Branch branch() const { return gamma_ > 1 ? Branch::U : Branch::V; }

    /// gamma0^2 - 1, the Weyl leading coefficient.
    Rational weyl_coefficient() const { return gamma0_ * gamma0_ - 1; }

    /// Exact test of lambda > -c0 for lambda < 0, i.e. |lambda| < c0.
    bool above_minus_c0(const Rational& lambda) const {
        const Rational mag = abs(lambda);
        const Rational excess = gamma0_ - 1;
        if (excess >= 1) return mag * excess < 1;  // c0 = 1/(gamma0 - 1)
        return mag * mag * excess < 1;             // c0 = 1/sqrt(gamma0 - 1)
    }

private:
    Rational gamma_;
    Rational gamma0_;
    Rational alpha_;
    double c0_ = 0;
};

// ---------------------------------------------------------------------------
// Exact polynomials
// ---------------------------------------------------------------------------

/// R_n with a_{m,n} = (n+m)!/(m!(n-m)!), built by the ratio
/// a_{m+1,n}/a_{m,n} = (n+m+1)(n-m)/(m+1).
inline RatPoly hankel_poly_coeffs(unsigned n) {
    std::vector<Rational> a(n + 1);
    Integer v = 1;
    a[0] = 1;
    for (unsigned m = 0; m < n; ++m) {
        v *= static_cast<unsigned long>(n + m + 1);
        v *= static_cast<unsigned long>(n - m);
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), m + 1);
        a[m + 1] = v;
    }
    return RatPoly(std::move(a));
}

/// w^2 R_n'(w) + alpha R_n(w).
inline RatPoly characteristic_poly_direct(unsigned n, const GammaParam& gp) {
    if (n == 0) throw std::invalid_argument("characteristic polynomial needs n >= 1");
    const RatPoly r = hankel_poly_coeffs(n);
    return RatPoly::monomial(2) * derivative(r) + gp.alpha() * r;
}

/// Closed form  b_{k,n} = (n+k-1)!/((n-k+1)! k!) * (k(k-1) + alpha (n+k)(n-k+1)).
inline RatPoly characteristic_poly_bk(unsigned n, const GammaParam& gp) {
    if (n == 0) throw std::invalid_argument("characteristic polynomial needs n >= 1");
    std::vector<Rational> b(n + 2);
    Integer num, den1, den2;
    for (unsigned k = 0; k <= n + 1; ++k) {
        mpz_fac_ui(num.get_mpz_t(), n + k - 1);
        mpz_fac_ui(den1.get_mpz_t(), n - k + 1);
        mpz_fac_ui(den2.get_mpz_t(), k);
        Rational factor(num, den1 * den2);
        factor.canonicalize();
        const Rational bracket = Rational(static_cast<long>(k) * (static_cast<long>(k) - 1)) +
                                 gp.alpha() * Rational(static_cast<long>(n + k) * static_cast<long>(n - k + 1));
        b[k] = factor * bracket;
    }
    return RatPoly(std::move(b));
}

/// G_{n,n+1}(lambda) = (1/(2 lambda^2)) (R'_{n+1}/R_{n+1} - R'_n/R_n)(w),
/// w = -1/(2 lambda), evaluated exactly.
inline Rational log_derivative_gap(unsigned n, const Rational& lambda) {
    if (sgn(lambda) >= 0) throw std::invalid_argument("log_derivative_gap needs lambda < 0");
    const Rational w = -1 / (2 * lambda);
    const RatPoly rn = hankel_poly_coeffs(n);
    const RatPoly rn1 = hankel_poly_coeffs(n + 1);
    const Rational ratio_n = derivative(rn)(w) / rn(w);
    const Rational ratio_n1 = derivative(rn1)(w) / rn1(w);
    return (ratio_n1 - ratio_n) / (2 * lambda * lambda);
}

/// 1 - gamma0 + 2 w^2 R_n'(w)/R_n(w) at w = -1/(2 lambda): g_n in closed form.
inline Rational g_closed_form(unsigned n, const Rational& lambda, const GammaParam& gp) {
    const Rational w = -1 / (2 * lambda);
    const RatPoly rn = hankel_poly_coeffs(n);
    return 1 - gp.gamma0() + 2 * w * w * derivative(rn)(w) / rn(w);
}

// ---------------------------------------------------------------------------
// Floating-point oracle (independent of R_n)
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kHankelLimit = 1e290;

struct HankelPair {
    std::complex<double> value;  // h_n(z)
    std::complex<double> prev;   // h_{n-1}(z); h_{-1} = i e^{iz}/z for n = 0
};

// With `unit_phase` the common factor e^{iz} is dropped from both seeds; the
// recurrence is linear, so ratios such as the log-derivative are unchanged
// while e^lambda can no longer underflow.
inline HankelPair hankel_upward(unsigned n, double lambda, bool unit_phase = false) {
    using namespace std::complex_literals;
    const std::complex<double> z = -1i * lambda;
    const std::complex<double> e = unit_phase ? std::complex<double>(1) : std::exp(1i * z);
    std::complex<double> h0 = -1i * e / z;
    std::complex<double> h1 = -e * (z + 1i) / (z * z);
    if (n == 0) return {h0, e / z};
    for (unsigned k = 1; k < n; ++k) {
        const std::complex<double> h2 = static_cast<double>(2 * k + 1) / z * h1 - h0;
        h0 = h1;
        h1 = h2;
        if (!std::isfinite(h1.real()) || !std::isfinite(h1.imag()) || std::abs(h1) > kHankelLimit)
            throw OverflowAtLargeN(n, lambda);
    }
    return {h1, h0};
}

}  // namespace detail

/// h_n(-i*lambda) by the upward three-term recurrence from the closed forms
/// of h_0 and h_1.
inline std::complex<double> hankel_oracle(unsigned n, double lambda) {
    if (!(lambda < 0)) throw std::invalid_argument("hankel_oracle needs lambda < 0");
    return detail::hankel_upward(n, lambda).value;
}

/// d/dlambda log h_n(-i*lambda), using h_n'(z) = h_{n-1}(z) - (n+1)/z h_n(z).
inline std::complex<double> hankel_log_derivative(unsigned n, double lambda) {
    using namespace std::complex_literals;
    if (!(lambda < 0)) throw std::invalid_argument("hankel_log_derivative needs lambda < 0");
    const std::complex<double> z = -1i * lambda;
    std::complex<double> dh;
    const auto hp = detail::hankel_upward(n, lambda, true);
    if (n == 0)
        dh = -detail::hankel_upward(1, lambda, true).value;
    else
        dh = hp.prev - static_cast<double>(n + 1) / z * hp.value;
    return -1i * dh / hp.value;
}

/// (-i)^n e^lambda / lambda R_n(-1/(2 lambda)) in double precision.
inline std::complex<double> hankel_via_poly(unsigned n, double lambda) {
    using namespace std::complex_literals;
    const RatPoly r = hankel_poly_coeffs(n);
    const double w = -1.0 / (2.0 * lambda);
    double acc = 0;
    for (std::size_t k = r.degree() + 1; k-- > 0;) acc = acc * w + r.coeff(k).get_d();
    std::complex<double> phase = 1;
    for (unsigned k = 0; k < n % 4; ++k) phase *= -1i;
    return phase * std::exp(lambda) / lambda * acc;
}

/// g_n(lambda) = 1/lambda + d/dlambda log h_n(-i lambda) - gamma0.
/// The value is real for real lambda; a relative imaginary part above
/// 1e-10 means the oracle has broken down and is reported as an error.
inline double g_oracle(unsigned n, double lambda, const GammaParam& gp) {
    const std::complex<double> ld = hankel_log_derivative(n, lambda);
    const double scale = std::max(1.0, std::abs(ld));
    if (std::abs(ld.imag()) > 1e-10 * scale)
        throw std::runtime_error("g_oracle: imaginary part " + std::to_string(ld.imag()) + " is not negligible");
    return 1.0 / lambda + ld.real() - gp.gamma0().get_d();
}

/// |d/dlambda log h_n(-i lambda) - sqrt(1 + n(n+1)/lambda^2)|.
inline double logderiv_approx_error(unsigned n, double lambda) {
    if (!(lambda < 0) || std::abs(lambda) < 1) throw std::invalid_argument("logderiv_approx_error needs lambda <= -1");
    const double nn = static_cast<double>(n) * (n + 1);
    return std::abs(hankel_log_derivative(n, lambda).real() - std::sqrt(1.0 + nn / (lambda * lambda)));
}

}  // namespace dissmax

#endif  // DISSMAX_BESSELPOLY_HPP
