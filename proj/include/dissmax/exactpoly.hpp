// Exact univariate polynomials over Q with certified real-root isolation.
//
// Everything here is exact: coefficients are GMP rationals, sign
// evaluation never rounds, and root enclosures are certified either by a
// Sturm sequence or by Descartes' rule when it gives a single sign change.

#ifndef DISSMAX_EXACTPOLY_HPP
#define DISSMAX_EXACTPOLY_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dissmax {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign_of(const Integer& v) { return sgn(v); }
inline int sign_of(const Rational& v) { return sgn(v); }

/// Thrown when a polynomial that must have exactly one root in a range has
/// zero or several.
class ZeroOrManyRoots : public std::runtime_error {
public:
    explicit ZeroOrManyRoots(int count)
        : std::runtime_error("expected exactly one root, found " + std::to_string(count)),
          count_(count) {}
    int count() const noexcept { return count_; }

private:
    int count_;
};

/// Thrown by Sturm counting when an interval endpoint is itself a root.
class EndpointIsRoot : public std::invalid_argument {
public:
    explicit EndpointIsRoot(const Rational& x)
        : std::invalid_argument("interval endpoint " + x.get_str() + " is a root"), point_(x) {}
    const Rational& point() const noexcept { return point_; }

private:
    Rational point_;
};

// ---------------------------------------------------------------------------
// RatPoly
// ---------------------------------------------------------------------------

/// Polynomial with exact rational coefficients, ascending powers.
/// The coefficient vector is always trimmed so that the last entry is
/// nonzero; the zero polynomial has an empty vector and degree 0.
class RatPoly {
public:
    RatPoly() = default;

    explicit RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
        for (auto& q : c_) q.canonicalize();
        trim();
    }

    RatPoly(std::initializer_list<Rational> coeffs) : RatPoly(std::vector<Rational>(coeffs)) {}

    static RatPoly monomial(std::size_t k, Rational coeff = 1) {
        std::vector<Rational> c(k + 1, Rational(0));
        c[k] = std::move(coeff);
        return RatPoly(std::move(c));
    }

    bool is_zero() const noexcept { return c_.empty(); }
    std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
    std::span<const Rational> coeffs() const noexcept { return c_; }

    /// Coefficient of w^k, zero past the degree.
    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    const Rational& leading() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
        return c_.back();
    }

    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
        return RatPoly(std::move(c));
    }

    friend RatPoly operator-(const RatPoly& a) {
        std::vector<Rational> c(a.c_);
        for (auto& q : c) q = -q;
        return RatPoly(std::move(c));
    }

    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }

    friend RatPoly operator*(const Rational& s, const RatPoly& p) {
        std::vector<Rational> c(p.c_);
        for (auto& q : c) q *= s;
        return RatPoly(std::move(c));
    }

    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(c));
    }

    /// Exact value at a rational point.
    Rational operator()(const Rational& x) const {
        Rational v = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
        return v;
    }

    friend std::ostream& operator<<(std::ostream& os, const RatPoly& p) {
        os << '[';
        for (std::size_t k = 0; k < p.c_.size(); ++k) os << (k ? ", " : "") << p.c_[k];
        return os << ']';
    }

private:
    void trim() {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline RatPoly derivative(const RatPoly& p) {
    if (p.degree() == 0) return {};
    std::vector<Rational> c(p.degree());
    for (std::size_t k = 1; k <= p.degree(); ++k) c[k - 1] = p.coeff(k) * static_cast<unsigned long>(k);
    return RatPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// IntPoly: primitive integer representative used by all sign computations
// ---------------------------------------------------------------------------

/// Integer polynomial obtained from a RatPoly by a positive rescaling
/// (clear denominators, divide out the content). Signs of values are
/// therefore identical to those of the source polynomial.
class IntPoly {
public:
    IntPoly() = default;

    explicit IntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
        make_primitive();
    }

    explicit IntPoly(const RatPoly& p) {
        Integer den = 1;
        for (const auto& q : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
        c_.reserve(p.coeffs().size());
        for (const auto& q : p.coeffs()) c_.push_back(q.get_num() * (den / q.get_den()));
        make_primitive();
    }

    bool is_zero() const noexcept { return c_.empty(); }
    std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
    std::span<const Integer> coeffs() const noexcept { return c_; }
    const Integer& leading() const { return c_.back(); }

    /// Exact sign of p(x). Uses the homogenised sum  sum_k c_k a^k b^(d-k)
    /// for x = a/b, b > 0; shifts replace the powers of b when b = 2^s.
    int sign_at(const Rational& x) const {
        if (c_.empty()) return 0;
        const Integer& a = x.get_num();
        const Integer& b = x.get_den();
        const std::size_t d = degree();
        Integer v = c_[d];
        Integer term;
        if (mpz_popcount(b.get_mpz_t()) == 1) {
            const mp_bitcnt_t s = mpz_scan1(b.get_mpz_t(), 0);
            for (std::size_t k = d; k-- > 0;) {
                v *= a;
                mpz_mul_2exp(term.get_mpz_t(), c_[k].get_mpz_t(), s * (d - k));
                v += term;
            }
        } else {
            Integer bpow = 1;
            for (std::size_t k = d; k-- > 0;) {
                bpow *= b;
                v *= a;
                term = c_[k] * bpow;
                v += term;
            }
        }
        return sgn(v);
    }

    /// Sign of the value as x -> +inf (or -inf when `positive` is false).
    int sign_at_infinity(bool positive) const {
        if (c_.empty()) return 0;
        const int s = sgn(c_.back());
        return (positive || degree() % 2 == 0) ? s : -s;
    }

    IntPoly derivative() const {
        std::vector<Integer> c;
        for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(c_[k] * static_cast<unsigned long>(k));
        return IntPoly(std::move(c));
    }

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void make_primitive() {
        if (c_.empty()) return;
        Integer g = 0;
        for (const auto& v : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) return;
        }
        for (auto& v : c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }

    friend class SturmSequence;
    std::vector<Integer> c_;
};

inline int eval_sign(const RatPoly& p, const Rational& x) { return IntPoly(p).sign_at(x); }

/// Strict sign changes in the coefficient sequence, zeros skipped.
inline int descartes_sign_changes(const RatPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("descartes_sign_changes: zero polynomial");
    int changes = 0;
    int last = 0;
    for (const auto& q : p.coeffs()) {
        const int s = sgn(q);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// 1 + max_k |c_k / c_deg|; every real root has modulus strictly below it.
inline Rational cauchy_positive_bound(const RatPoly& p) {
    const Rational& lead = p.leading();
    Rational m = 0;
    for (std::size_t k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p.coeff(k) / lead)));
    return m + 1;
}

// ---------------------------------------------------------------------------
// Sturm sequences
// ---------------------------------------------------------------------------

/// Sturm chain p_0 = p, p_1 = p', p_{k+1} = -rem(p_{k-1}, p_k), each member
/// scaled by a positive factor to a primitive integer polynomial.
class SturmSequence {
public:
    explicit SturmSequence(const RatPoly& p) : SturmSequence(IntPoly(p)) {}

    explicit SturmSequence(IntPoly p) {
        if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
        chain_.push_back(std::move(p));
        IntPoly dp = chain_.front().derivative();
        if (dp.is_zero()) return;
        chain_.push_back(std::move(dp));
        while (chain_.back().degree() > 0) {
            IntPoly next = negated_remainder(chain_[chain_.size() - 2], chain_.back());
            if (next.is_zero()) break;
            chain_.push_back(std::move(next));
        }
    }

    std::span<const IntPoly> chain() const noexcept { return chain_; }

    int variations_at(const Rational& x) const {
        return count_variations([&](const IntPoly& q) { return q.sign_at(x); });
    }

    int variations_at_infinity(bool positive) const {
        return count_variations([&](const IntPoly& q) { return q.sign_at_infinity(positive); });
    }

    /// Number of distinct real roots in (lo, hi). Endpoints must not be roots.
    int count(const Rational& lo, const Rational& hi) const {
        if (!(lo < hi)) throw std::invalid_argument("Sturm count needs lo < hi");
        if (chain_.front().sign_at(lo) == 0) throw EndpointIsRoot(lo);
        if (chain_.front().sign_at(hi) == 0) throw EndpointIsRoot(hi);
        return variations_at(lo) - variations_at(hi);
    }

private:
    template <class SignFn>
    int count_variations(SignFn&& sign) const {
        int changes = 0;
        int last = 0;
        for (const auto& q : chain_) {
            const int s = sign(q);
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    }

    // Pseudo-remainder lc(b)^(delta+1) * a mod b, negated when that factor is
    // positive so that the result is a positive multiple of -rem(a, b).
    static IntPoly negated_remainder(const IntPoly& a, const IntPoly& b) {
        std::vector<Integer> r(a.c_);
        const auto& bc = b.c_;
        const std::size_t db = b.degree();
        const Integer& lb = bc.back();
        Integer t;
        for (std::size_t top = a.degree() + 1; top-- > db;) {
            const Integer lead = r[top];
            for (std::size_t j = 0; j < top; ++j) r[j] *= lb;
            const std::size_t shift = top - db;
            for (std::size_t j = 0; j < db; ++j) {
                t = lead * bc[j];
                r[shift + j] -= t;
            }
            r[top] = 0;
        }
        r.resize(db);
        const std::size_t delta = a.degree() - db;
        const bool factor_positive = sgn(lb) > 0 || (delta + 1) % 2 == 0;
        if (factor_positive)
            for (auto& v : r) v = -v;
        return IntPoly(std::move(r));
    }

    std::vector<IntPoly> chain_;
};

inline int sturm_root_count(const RatPoly& p, const Rational& lo, const Rational& hi) {
    return SturmSequence(p).count(lo, hi);
}

// ---------------------------------------------------------------------------
// Root intervals
// ---------------------------------------------------------------------------

/// Certified enclosure (lo, hi) of a single root. When the root was hit
/// exactly, lo == hi and both signs are 0.
struct RootInterval {
    Rational lo;
    Rational hi;
    int sign_lo = 0;
    int sign_hi = 0;

    bool is_exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
};

/// How the "exactly one positive root" precondition is certified.
enum class RootCertificate {
    sturm,      ///< Sturm count on (0, Cauchy bound) equals 1
    descartes,  ///< coefficient sequence has exactly one sign change
    both,
};

/// Enclosure (0, M) of the unique positive root, M the Cauchy bound.
inline RootInterval isolate_unique_positive_root(const IntPoly& p, const Rational& bound,
                                                 RootCertificate cert = RootCertificate::sturm) {
    const int s0 = p.sign_at(Rational(0));
    if (s0 == 0) throw std::invalid_argument("isolate_unique_positive_root: p(0) = 0");
    if (cert != RootCertificate::sturm) {
        int changes = 0;
        int last = 0;
        for (const auto& v : p.coeffs()) {
            const int s = sgn(v);
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        // One change certifies exactly one root; otherwise the rule only
        // bounds the count, so defer to Sturm when allowed.
        if (changes != 1 && (cert == RootCertificate::descartes || changes == 0)) throw ZeroOrManyRoots(changes);
        if (changes != 1) cert = RootCertificate::sturm;
    }
    if (cert != RootCertificate::descartes) {
        const int count = SturmSequence(p).count(Rational(0), bound);
        if (count != 1) throw ZeroOrManyRoots(count);
    }
    return RootInterval{Rational(0), bound, s0, p.sign_at(bound)};
}

inline RootInterval isolate_unique_positive_root(const RatPoly& p,
                                                 RootCertificate cert = RootCertificate::sturm) {
    return isolate_unique_positive_root(IntPoly(p), cauchy_positive_bound(p), cert);
}

/// Midpoint bisection down to width <= eps. A midpoint that is an exact root
/// collapses the interval to that point.
inline RootInterval refine(const IntPoly& p, RootInterval iv, const Rational& eps) {
    if (sgn(eps) <= 0) throw std::invalid_argument("refine: eps must be positive");
    while (!iv.is_exact() && iv.width() > eps) {
        Rational mid = iv.midpoint();
        const int s = p.sign_at(mid);
        if (s == 0) return RootInterval{mid, mid, 0, 0};
        if (s == iv.sign_lo)
            iv.lo = std::move(mid);
        else
            iv.hi = std::move(mid);
    }
    return iv;
}

inline RootInterval refine(const RatPoly& p, RootInterval iv, const Rational& eps) {
    return refine(IntPoly(p), std::move(iv), eps);
}

/// Long-double bisection on (iv.lo, iv.hi). Only a hint: callers must
/// re-certify any bracket derived from it with exact signs.
inline double float_root_estimate(const IntPoly& p, const RootInterval& iv) {
    std::vector<long double> c;
    c.reserve(p.coeffs().size());
    long max_exp = 0;
    std::vector<std::pair<double, long>> parts;
    for (const auto& v : p.coeffs()) {
        long e = 0;
        const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
        parts.emplace_back(m, e);
        max_exp = std::max(max_exp, e);
    }
    // Common power-of-two scaling keeps the coefficients in range.
    for (const auto& [m, e] : parts) c.push_back(std::ldexp(static_cast<long double>(m), static_cast<int>(e - max_exp)));
    auto value = [&](long double x) {
        long double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
    long double lo = iv.lo.get_d();
    long double hi = iv.hi.get_d();
    const int slo = iv.sign_lo;
    for (int i = 0; i < 80 && lo < hi; ++i) {
        const long double mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) break;
        const long double v = value(mid);
        if (v == 0) return static_cast<double>(mid);
        if ((v > 0) == (slo > 0))
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<double>((lo + hi) / 2);
}

/// Shrinks `iv` to a certified sub-bracket around a floating estimate of the
/// root, falling back to `iv` when the estimate does not bracket.
inline RootInterval tighten_around(const IntPoly& p, RootInterval iv, const Rational& guess, const Rational& radius) {
    if (iv.is_exact()) return iv;
    Rational lo = std::max(iv.lo, Rational(guess - radius));
    Rational hi = std::min(iv.hi, Rational(guess + radius));
    if (!(lo < hi)) return iv;
    const int slo = lo == iv.lo ? iv.sign_lo : p.sign_at(lo);
    const int shi = hi == iv.hi ? iv.sign_hi : p.sign_at(hi);
    if (slo == 0) return RootInterval{lo, lo, 0, 0};
    if (shi == 0) return RootInterval{hi, hi, 0, 0};
    if (slo == shi) return iv;
    return RootInterval{std::move(lo), std::move(hi), slo, shi};
}

}  // namespace dissmax

#endif  // DISSMAX_EXACTPOLY_HPP
