#include "mobsig/moebius.hpp"

#include <algorithm>
#include <array>

namespace mobsig {

RiemannPoint apply(const MoebiusTransform& t, const RiemannPoint& z) {
    if (z.infinite) {
        if (std::abs(t.c()) == 0.0) return RiemannPoint::infinity();
        return RiemannPoint(t.a() / t.c());
    }
    const Complex den = t.c() * z.value + t.d();
    if (std::abs(den) == 0.0) return RiemannPoint::infinity();
    return RiemannPoint((t.a() * z.value + t.b()) / den);
}

Complex apply(const MoebiusTransform& t, Complex z) {
    return (t.a() * z + t.b()) / (t.c() * z + t.d());
}

MoebiusTransform compose(const MoebiusTransform& t1, const MoebiusTransform& t2) {
    return {t1.a() * t2.a() + t1.b() * t2.c(),
            t1.a() * t2.b() + t1.b() * t2.d(),
            t1.c() * t2.a() + t1.d() * t2.c(),
            t1.c() * t2.b() + t1.d() * t2.d()};
}

MoebiusTransform inverse(const MoebiusTransform& t) { return t.inverse(); }

namespace {

// Two points coincide when |zi - zj| < 1e-13 * (1 + max |z|) over the finite
// arguments; infinities coincide with each other only.
bool coincident(const RiemannPoint& p, const RiemannPoint& q, double tol) {
    if (p.infinite || q.infinite) return p.infinite && q.infinite;
    return std::abs(p.value - q.value) < tol;
}

}  // namespace

RiemannPoint cross_ratio(const RiemannPoint& z1, const RiemannPoint& z2,
                         const RiemannPoint& z3, const RiemannPoint& z4) {
    const std::array<const RiemannPoint*, 4> pts{&z1, &z2, &z3, &z4};
    double maxmag = 0.0;
    int n_inf = 0;
    for (const auto* p : pts) {
        if (p->infinite)
            ++n_inf;
        else
            maxmag = std::max(maxmag, std::abs(p->value));
    }
    if (n_inf > 1) throw DegenerateConfiguration("cross_ratio: repeated point at infinity");
    const double tol = 1e-13 * (1.0 + maxmag);

    int n_pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (coincident(*pts[i], *pts[j], tol)) ++n_pairs;
    if (n_pairs > 1) throw DegenerateConfiguration("cross_ratio: more than one coincident pair");

    // Symbolic limits for one argument at infinity.
    if (z1.infinite) {
        const Complex den = z2.value - z3.value;
        if (std::abs(den) < tol) return RiemannPoint::infinity();
        return RiemannPoint((z2.value - z4.value) / den);
    }
    if (z2.infinite) {
        const Complex den = z1.value - z4.value;
        if (std::abs(den) < tol) return RiemannPoint::infinity();
        return RiemannPoint((z1.value - z3.value) / den);
    }
    if (z3.infinite) {
        const Complex den = z1.value - z4.value;
        if (std::abs(den) < tol) return RiemannPoint::infinity();
        return RiemannPoint((z2.value - z4.value) / den);
    }
    if (z4.infinite) {
        const Complex den = z2.value - z3.value;
        if (std::abs(den) < tol) return RiemannPoint::infinity();
        return RiemannPoint((z1.value - z3.value) / den);
    }

    const Complex num = (z1.value - z3.value) * (z2.value - z4.value);
    const Complex den = (z2.value - z3.value) * (z1.value - z4.value);
    if (std::abs(den) == 0.0) return RiemannPoint::infinity();
    return RiemannPoint(num / den);
}

Complex cross_ratio(Complex z1, Complex z2, Complex z3, Complex z4) {
    const RiemannPoint r = cross_ratio(RiemannPoint(z1), RiemannPoint(z2),
                                       RiemannPoint(z3), RiemannPoint(z4));
    if (r.infinite) throw DegenerateConfiguration("cross_ratio: infinite value");
    return r.value;
}

}  // namespace mobsig
