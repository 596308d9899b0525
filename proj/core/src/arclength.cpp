#include "mobsig/arclength.hpp"

#include <algorithm>
#include <cmath>

namespace mobsig {

double circumcircle_curvature(Complex A, Complex B, Complex C) {
    const double a = std::abs(A - B);
    const double b = std::abs(B - C);
    const double c = std::abs(C - A);
    const double scale = std::max({a, b, c});
    if (a < 1e-300 || b < 1e-300 || c < 1e-300 || scale == 0.0)
        throw DegenerateTriple("circumcircle_curvature: coincident points");
    const double s = 0.5 * (a + b + c);
    // Heron under roundoff can dip slightly negative for collinear triples.
    const double area_sq = std::max(s * (s - a) * (s - b) * (s - c), 0.0);
    const double kappa = 4.0 * std::sqrt(area_sq) / (a * b * c);
    const Complex u = B - A, v = C - B;
    const double orient = u.real() * v.imag() - u.imag() * v.real();
    return orient >= 0.0 ? kappa : -kappa;
}

std::vector<double> density_curvature_method(const SampledCurve& c) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    std::vector<double> cells(c.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double k0 = circumcircle_curvature(c.z(i), c.z(i + 1), c.z(i + 2));
        const double k1 = circumcircle_curvature(c.z(i + 1), c.z(i + 2), c.z(i + 3));
        const double ds = std::abs(c.z(i + 2) - c.z(i + 1));
        cells[static_cast<std::size_t>(i)] = std::sqrt(std::abs(k1 - k0) * ds);
    }
    return cells;
}

namespace {

// 6 Im log CR of consecutive quadruples, signed, one value per cell.
std::vector<double> signed_im_log_cr(const SampledCurve& c, bool* undersampled) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    std::vector<double> vals(c.size());
    bool flag = false;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const RiemannPoint cr =
            cross_ratio(RiemannPoint(c.z(i)), RiemannPoint(c.z(i + 1)),
                        RiemannPoint(c.z(i + 2)), RiemannPoint(c.z(i + 3)));
        if (cr.infinite || std::abs(cr.value) == 0.0)
            throw DegenerateConfiguration("density: degenerate sample quadruple");
        const double im = std::arg(cr.value);  // Im log, principal branch
        if (std::abs(im) > M_PI / 2.0) flag = true;
        vals[static_cast<std::size_t>(i)] = 6.0 * im;
    }
    if (undersampled) *undersampled = flag;
    return vals;
}

}  // namespace

std::vector<double> density_crossratio_method(const SampledCurve& c, bool* undersampled) {
    std::vector<double> vals = signed_im_log_cr(c, undersampled);
    for (double& v : vals) v = std::sqrt(std::abs(v));
    return vals;
}

double density_oracle_ellipse(double t) {
    return 12.0 * M_PI * std::sqrt(std::abs(std::sin(4.0 * M_PI * t))) /
           (5.0 + 3.0 * std::cos(4.0 * M_PI * t));
}

namespace {

// tanh-sinh quadrature on [a, b]; handles the sqrt endpoint singularities of
// the oracle density.  Fixed fine step, double-exponential node decay.
double tanh_sinh(double (*f)(double), double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double h = 1.0 / 64.0;
    double sum = 0.0;
    for (int k = -6 * 64; k <= 6 * 64; ++k) {
        const double tk = h * static_cast<double>(k);
        const double u = 0.5 * M_PI * std::sinh(tk);
        if (std::abs(u) > 350.0) continue;  // cosh^2 would overflow
        const double x = std::tanh(u);
        const double w = 0.5 * M_PI * std::cosh(tk) / (std::cosh(u) * std::cosh(u));
        if (1.0 - std::abs(x) < 1e-17) continue;
        sum += w * f(mid + half * x);
    }
    return sum * half * h;
}

}  // namespace

double ellipse_length_reference() {
    // Integrate between the singularities at t = 0, 1/4, 1/2, 3/4, 1.
    static const double value = [] {
        double L = 0.0;
        for (int k = 0; k < 4; ++k)
            L += tanh_sinh(&density_oracle_ellipse, 0.25 * k, 0.25 * (k + 1));
        return L;
    }();
    return value;
}

ArclengthProfile::ArclengthProfile(const SampledCurve& c) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    const double h = c.h();
    std::vector<double> q = signed_im_log_cr(c, &undersampled_);
    for (double& v : q) v /= h * h;  // squared density at the cell centre

    // q[i] lives at (i + 3/2 + phase) * h.  With phase 1/4 the sorted knot grid
    // is x_k = (k + 3/4) * h carrying q[(k-1) mod n].
    const double centre_off = 1.5 + c.phase();
    knot_t_.resize(c.size());
    knot_q_.resize(c.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        double x = (static_cast<double>(k) + centre_off) * h;
        x -= std::floor(x);
        knot_t_[static_cast<std::size_t>(k)] = x;
        knot_q_[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k)];
    }
    // Rotate to ascending t.
    const auto first =
        std::min_element(knot_t_.begin(), knot_t_.end()) - knot_t_.begin();
    std::rotate(knot_t_.begin(), knot_t_.begin() + first, knot_t_.end());
    std::rotate(knot_q_.begin(), knot_q_.begin() + first, knot_q_.end());

    // Breakpoints covering [0,1]: value at 0 (== at 1) interpolated on the
    // wrap-around segment.
    const double tl = knot_t_.back() - 1.0;
    const double tr = knot_t_.front();
    const double f_at_0 =
        knot_q_.back() + (0.0 - tl) / (tr - tl) * (knot_q_.front() - knot_q_.back());

    std::vector<double> bx, bv;
    bx.reserve(c.size() + 2);
    bv.reserve(c.size() + 2);
    bx.push_back(0.0);
    bv.push_back(f_at_0);
    for (std::size_t k = 0; k < knot_t_.size(); ++k) {
        bx.push_back(knot_t_[k]);
        bv.push_back(knot_q_[k]);
    }
    bx.push_back(1.0);
    bv.push_back(f_at_0);

    double lam = 0.0;
    for (std::size_t i = 0; i + 1 < bx.size(); ++i) {
        const double t0 = bx[i], t1 = bx[i + 1];
        const double f0 = bv[i], f1 = bv[i + 1];
        if (!(t1 > t0)) continue;
        double pieces[2][3];  // {t0, t1, f_at_start}
        int np = 1;
        pieces[0][0] = t0;
        pieces[0][1] = t1;
        pieces[0][2] = f0;
        if (f0 * f1 < 0.0) {
            const double root = t0 + (t1 - t0) * f0 / (f0 - f1);
            pieces[0][1] = root;
            pieces[1][0] = root;
            pieces[1][1] = t1;
            pieces[1][2] = 0.0;
            np = 2;
        }
        const double slope = (f1 - f0) / (t1 - t0);
        for (int p = 0; p < np; ++p) {
            Segment s;
            s.t0 = pieces[p][0];
            s.t1 = pieces[p][1];
            s.f0 = pieces[p][2];
            s.slope = slope;
            s.lam0 = lam;
            const double dt = s.t1 - s.t0;
            const double fend = s.f0 + slope * dt;
            double dl;
            if (std::abs(slope) * dt < 1e-14 * (std::abs(s.f0) + std::abs(fend) + 1e-300)) {
                dl = std::sqrt(std::abs(0.5 * (s.f0 + fend))) * dt;
            } else {
                const double sgn = (s.f0 + fend) >= 0.0 ? 1.0 : -1.0;
                const double g0 = std::max(sgn * s.f0, 0.0);
                const double g1 = std::max(sgn * fend, 0.0);
                dl = 2.0 / (3.0 * sgn * slope) *
                     (g1 * std::sqrt(g1) - g0 * std::sqrt(g0));
            }
            lam += std::max(dl, 0.0);
            segments_.push_back(s);
        }
    }
    // Patch cumulative sums into the segments (lam0 assigned above as we went).
    total_ = lam;
}

double ArclengthProfile::lambda_of_t(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    // binary search over segment starts
    std::size_t lo = 0, hi = segments_.size();
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments_[mid].t0 <= t)
            lo = mid;
        else
            hi = mid;
    }
    const Segment& s = segments_[lo];
    const double tt = std::clamp(t, s.t0, s.t1);
    const double dt = tt - s.t0;
    const double fend = s.f0 + s.slope * (s.t1 - s.t0);
    if (std::abs(s.slope) * (s.t1 - s.t0) <
        1e-14 * (std::abs(s.f0) + std::abs(fend) + 1e-300)) {
        return s.lam0 + std::sqrt(std::abs(s.f0)) * dt;
    }
    const double sgn = (s.f0 + fend) >= 0.0 ? 1.0 : -1.0;
    const double g0 = std::max(sgn * s.f0, 0.0);
    const double g = std::max(sgn * (s.f0 + s.slope * dt), 0.0);
    return s.lam0 + 2.0 / (3.0 * sgn * s.slope) * (g * std::sqrt(g) - g0 * std::sqrt(g0));
}

double ArclengthProfile::t_of_lambda(double lambda) const {
    if (total_ <= 0.0) return 0.0;
    lambda = std::fmod(lambda, total_);
    if (lambda < 0.0) lambda += total_;
    std::size_t lo = 0, hi = segments_.size();
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments_[mid].lam0 <= lambda)
            lo = mid;
        else
            hi = mid;
    }
    const Segment& s = segments_[lo];
    const double d = lambda - s.lam0;
    const double fend = s.f0 + s.slope * (s.t1 - s.t0);
    if (std::abs(s.slope) * (s.t1 - s.t0) <
        1e-14 * (std::abs(s.f0) + std::abs(fend) + 1e-300)) {
        const double sq = std::sqrt(std::abs(0.5 * (s.f0 + fend)));
        return sq > 0.0 ? std::min(s.t0 + d / sq, s.t1) : s.t0;
    }
    const double sgn = (s.f0 + fend) >= 0.0 ? 1.0 : -1.0;
    const double g0 = std::max(sgn * s.f0, 0.0);
    const double gc = std::max(g0 * std::sqrt(g0) + 1.5 * sgn * s.slope * d, 0.0);
    const double g = std::cbrt(gc * gc);
    return std::clamp(s.t0 + (sgn * g - s.f0) / s.slope, s.t0, s.t1);
}

double moebius_length(const SampledCurve& c, LengthMethod method) {
    switch (method) {
        case LengthMethod::curvature: {
            double sum = 0.0;
            for (double v : density_curvature_method(c)) sum += v;
            return sum;
        }
        case LengthMethod::crossratio: {
            double sum = 0.0;
            for (double v : density_crossratio_method(c)) sum += v;
            return sum;
        }
        case LengthMethod::modified:
            return ArclengthProfile(c).total_length();
    }
    return 0.0;
}

double richardson_step(double coarse, double fine, double order) {
    const double w = std::pow(2.0, order);
    return (w * fine - coarse) / (w - 1.0);
}

double richardson_length(double l_n, double l_2n, double l_4n) {
    const double r1a = richardson_step(l_n, l_2n, 1.5);
    const double r1b = richardson_step(l_2n, l_4n, 1.5);
    return richardson_step(r1a, r1b, 2.0);
}

int count_vertices(const SampledCurve& c) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    std::vector<double> kp(c.size());
    double max_kp = 0.0, max_k = 0.0, max_r = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double k0 = circumcircle_curvature(c.z(i - 1), c.z(i), c.z(i + 1));
        const double k1 = circumcircle_curvature(c.z(i), c.z(i + 1), c.z(i + 2));
        const double ds = std::abs(c.z(i + 1) - c.z(i));
        kp[static_cast<std::size_t>(i)] = (k1 - k0) / ds;
        max_kp = std::max(max_kp, std::abs(kp[static_cast<std::size_t>(i)]));
        max_k = std::max(max_k, std::abs(k0));
        max_r = std::max(max_r, std::abs(c.z(i)));
    }
    // Circle convention: when the whole kappa' sequence sits at roundoff
    // scale (well below the kappa/diameter scale a non-circular curve would
    // show), report no vertices.
    const double diameter = 2.0 * max_r + 1e-300;
    if (max_kp < 1e-9 * max_k / diameter) return 0;

    const double tol = 1e-9 * max_kp;
    int changes = 0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double cur = kp[static_cast<std::size_t>(i)];
        const double nxt = kp[static_cast<std::size_t>((i + 1) % n)];
        if (cur * nxt < 0.0 && !(std::abs(cur) < tol && std::abs(nxt) < tol)) ++changes;
    }
    return changes;
}

double moebius_curvature(double kappa, double kappa_s, double kappa_ss, double kappa_sss) {
    if (std::abs(kappa_s) < 1e-12)
        throw AtVertex("moebius_curvature: kappa' vanishes");
    const double num =
        4.0 * kappa_s * (kappa_sss - kappa * kappa * kappa_s) - 5.0 * kappa_ss * kappa_ss;
    return num / (8.0 * kappa_s * kappa_s * kappa_s);
}

}  // namespace mobsig
