#ifndef SPINZ_SCALED_HPP
#define SPINZ_SCALED_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spinz {

using cplx = std::complex<double>;

// A complex value stored as mantissa * exp(log_scale). The mantissa is kept
// near unit magnitude so that products of many Boltzmann factors neither
// overflow nor underflow.
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    double log_scale = 0.0;

    static ScaledComplex zero() { return {cplx(0.0, 0.0), 0.0}; }
    static ScaledComplex one() { return {cplx(1.0, 0.0), 0.0}; }

    static ScaledComplex from(cplx v) {
        ScaledComplex s{v, 0.0};
        s.normalize();
        return s;
    }

    bool is_zero() const { return mantissa == cplx(0.0, 0.0); }

    void normalize() {
        double m = std::abs(mantissa);
        if (m == 0.0) {
            log_scale = 0.0;
            return;
        }
        mantissa /= m;
        log_scale += std::log(m);
    }

    ScaledComplex operator*(const ScaledComplex& o) const {
        ScaledComplex r{mantissa * o.mantissa, log_scale + o.log_scale};
        r.normalize();
        return r;
    }

    ScaledComplex operator+(const ScaledComplex& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        // Add relative to the larger scale; the smaller term may flush to 0.
        if (log_scale >= o.log_scale) {
            double d = o.log_scale - log_scale;
            ScaledComplex r{mantissa + o.mantissa * std::exp(d), log_scale};
            r.normalize();
            return r;
        }
        return o + *this;
    }

    ScaledComplex operator/(const ScaledComplex& o) const {
        if (o.is_zero()) throw std::domain_error("division by zero ScaledComplex");
        ScaledComplex r{mantissa / o.mantissa, log_scale - o.log_scale};
        r.normalize();
        return r;
    }

    // log of the value: real part log|z|, imaginary part arg z.
    cplx log() const {
        if (is_zero()) throw std::domain_error("log of zero");
        return cplx(std::log(std::abs(mantissa)) + log_scale, std::arg(mantissa));
    }

    // The plain complex value; may overflow to inf for large log_scale.
    cplx value() const { return mantissa * std::exp(log_scale); }
};

inline ScaledComplex scaled_pow_q(double q, long long exponent) {
    return ScaledComplex{cplx(1.0, 0.0), static_cast<double>(exponent) * std::log(q)};
}

// |a/b - 1|, the relative deviation between two scaled values.
inline double relative_error(const ScaledComplex& a, const ScaledComplex& b) {
    if (b.is_zero()) return a.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    ScaledComplex r = a / b;
    return std::abs(r.value() - cplx(1.0, 0.0));
}

// A complex vector with a shared log-domain prefactor. Used both for
// Boltzmann weight vectors and for contraction messages.
struct ScaledVector {
    std::vector<cplx> amplitudes;
    double log_scale = 0.0;

    // Rescale so the largest magnitude entry is 1.
    void normalize() {
        double m = 0.0;
        for (const auto& a : amplitudes) m = std::max(m, std::abs(a));
        if (m == 0.0) {
            log_scale = 0.0;
            return;
        }
        for (auto& a : amplitudes) a /= m;
        log_scale += std::log(m);
    }

    ScaledComplex at(size_t i) const {
        return ScaledComplex{amplitudes[i], log_scale};
    }

    ScaledComplex sum() const {
        cplx s(0.0, 0.0);
        for (const auto& a : amplitudes) s += a;
        ScaledComplex r{s, log_scale};
        r.normalize();
        return r;
    }
};

}  // namespace spinz

#endif
