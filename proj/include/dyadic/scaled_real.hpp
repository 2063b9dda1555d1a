#ifndef DYADIC_SCALED_REAL_HPP
#define DYADIC_SCALED_REAL_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace dyadic {

/// Sign-carrying mantissa times a power of two, m * 2^e with |m| in [1,2).
/// Keeps quantities like 2^(-d(s+1)) and 2^(d j) exact far beyond double
/// range; sums align exponents, so everything stays correctly rounded with
/// no transcendental calls.
class ScaledReal {
public:
    ScaledReal() = default;
    ScaledReal(double v) { assign(v, 0); } // NOLINT: implicit by design

    static ScaledReal pow2(std::int64_t e) {
        ScaledReal r;
        r.m_ = 1.0;
        r.e_ = e;
        return r;
    }
    static ScaledReal scaled(double v, std::int64_t e) {
        ScaledReal r;
        r.assign(v, e);
        return r;
    }

    bool is_zero() const { return m_ == 0.0; }
    int sign() const { return m_ > 0.0 ? 1 : (m_ < 0.0 ? -1 : 0); }

    /// log2 of |value|; meaningful only when nonzero.
    double log2_abs() const { return std::log2(std::fabs(m_)) + static_cast<double>(e_); }

    double to_double() const {
        if (m_ == 0.0) return 0.0;
        if (e_ > 2000) return m_ > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
        if (e_ < -2000) return 0.0;
        return std::ldexp(m_, static_cast<int>(e_));
    }

    ScaledReal operator-() const {
        ScaledReal r = *this;
        r.m_ = -r.m_;
        return r;
    }

    ScaledReal operator*(const ScaledReal& o) const {
        ScaledReal r;
        r.assign(m_ * o.m_, e_ + o.e_);
        return r;
    }

    ScaledReal operator+(const ScaledReal& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        const ScaledReal& big = (e_ >= o.e_) ? *this : o;
        const ScaledReal& small = (e_ >= o.e_) ? o : *this;
        const std::int64_t shift = big.e_ - small.e_;
        if (shift > 1100) return big; // the small term is below one ulp
        ScaledReal r;
        r.assign(big.m_ + std::ldexp(small.m_, -static_cast<int>(shift)), big.e_);
        return r;
    }

    ScaledReal operator-(const ScaledReal& o) const { return *this + (-o); }
    ScaledReal& operator+=(const ScaledReal& o) { return *this = *this + o; }

    ScaledReal abs() const {
        ScaledReal r = *this;
        r.m_ = std::fabs(r.m_);
        return r;
    }

    /// |a| < |b|
    static bool abs_less(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero()) return !b.is_zero();
        if (b.is_zero()) return false;
        if (a.e_ != b.e_) return a.e_ < b.e_;
        return std::fabs(a.m_) < std::fabs(b.m_);
    }

private:
    void assign(double v, std::int64_t e) {
        if (v == 0.0 || !std::isfinite(v)) {
            m_ = v;
            e_ = 0;
            return;
        }
        int k = 0;
        m_ = std::frexp(v, &k); // |m_| in [0.5, 1)
        m_ *= 2.0;
        e_ = e + k - 1;
    }

    double m_ = 0.0;
    std::int64_t e_ = 0;
};

} // namespace dyadic

#endif
