#pragma once

#include <complex>

#include "mobsig/errors.hpp"

namespace mobsig {

using Complex = std::complex<double>;

/// Point on the Riemann sphere: a finite complex number or the point at
/// infinity, kept symbolic so that near-degenerate cross-ratios stay stable.
struct RiemannPoint {
    Complex value{0.0, 0.0};
    bool infinite = false;

    RiemannPoint() = default;
    RiemannPoint(Complex z) : value(z) {}              // NOLINT: implicit on purpose
    RiemannPoint(double x) : value(x, 0.0) {}          // NOLINT

    static RiemannPoint infinity() {
        RiemannPoint p;
        p.infinite = true;
        return p;
    }
};

/// z -> (az + b) / (cz + d), ad - bc != 0.  Coefficients are not normalized;
/// all operations are covariant under rescaling (a,b,c,d) -> (ka,kb,kc,kd).
class MoebiusTransform {
public:
    MoebiusTransform() : a_(1), b_(0), c_(0), d_(1) {}

    MoebiusTransform(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
        const double scale = std::max(std::max(std::abs(a), std::abs(b)),
                                      std::max(std::abs(c), std::abs(d)));
        if (std::abs(a * d - b * c) <= 1e-14 * scale * scale)
            throw SingularTransform("MoebiusTransform: ad - bc vanishes");
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }

    static MoebiusTransform identity() { return {}; }

    /// z -> z / (1 + dz), the one-parameter family used throughout the
    /// ellipse experiments.
    static MoebiusTransform unipotent(Complex d) { return {1.0, 0.0, d, 1.0}; }

    static MoebiusTransform similarity(Complex scale_rot, Complex offset) {
        return {scale_rot, offset, 0.0, 1.0};
    }

    MoebiusTransform inverse() const {
        MoebiusTransform t;
        t.a_ = d_;
        t.b_ = -b_;
        t.c_ = -c_;
        t.d_ = a_;
        return t;
    }

private:
    Complex a_, b_, c_, d_;
};

RiemannPoint apply(const MoebiusTransform& t, const RiemannPoint& z);
Complex apply(const MoebiusTransform& t, Complex z);

/// Coefficient-matrix product: apply(compose(t1,t2), z) == apply(t1, apply(t2, z)).
MoebiusTransform compose(const MoebiusTransform& t1, const MoebiusTransform& t2);

MoebiusTransform inverse(const MoebiusTransform& t);

/// CR(z1,z2,z3,z4) = (z1-z3)(z2-z4) / ((z2-z3)(z1-z4)).  Total on the sphere
/// as long as at most one pair of arguments coincides; the result is infinite
/// when z2 == z3 or z1 == z4.
RiemannPoint cross_ratio(const RiemannPoint& z1, const RiemannPoint& z2,
                         const RiemannPoint& z3, const RiemannPoint& z4);

/// Finite-argument convenience; throws DegenerateConfiguration if the value
/// is infinite.
Complex cross_ratio(Complex z1, Complex z2, Complex z3, Complex z4);

}  // namespace mobsig
