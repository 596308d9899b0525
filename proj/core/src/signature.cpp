#include "mobsig/signature.hpp"

#include <cmath>

namespace mobsig {

Complex phi1(Complex w) { return w / std::sqrt(1.0 + std::norm(w)); }

Complex phi2(Complex w) {
    const Complex p = phi1(w);
    return p * p;
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 decimation-in-time FFT, forward sign convention
// X_n = sum_k x_k e^{-2 pi i n k / N}.
void fft_forward(std::vector<Complex>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = x[i + k];
                const Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

ScrSignature scr(const SampledCurve& curve, const ScrOptions& opts) {
    if (!is_power_of_two(opts.n_sig))
        throw std::invalid_argument("scr: n_sig must be a power of two");
    if (!(opts.delta_frac > 0.0 && opts.delta_frac <= 0.25))
        throw std::invalid_argument("scr: delta_frac must lie in (0, 1/4]");

    const SampledCurve* c = &curve;
    SampledCurve oriented = curve;
    if (opts.normalize_orientation && curve.signed_area() < 0.0) {
        oriented = curve.reversed();
        c = &oriented;
    }

    const ArclengthProfile profile(*c);
    const double L = profile.total_length();

    ScrSignature sig;
    sig.delta_frac = opts.delta_frac;
    sig.delta = opts.delta_frac * L;
    sig.length = L;
    sig.vertex_count = count_vertices(*c);
    sig.values.resize(opts.n_sig);

    const auto n = static_cast<std::ptrdiff_t>(opts.n_sig);
    const double k_exact = opts.delta_frac * static_cast<double>(opts.n_sig);
    const auto k_steps = static_cast<std::ptrdiff_t>(std::llround(k_exact));
    const bool shared_grid = std::abs(k_exact - static_cast<double>(k_steps)) < 1e-12;

    if (shared_grid) {
        // delta is a whole number of signature grid steps: the same located
        // points are reused across quadruples, as in the L/delta integer case.
        std::vector<Complex> located(opts.n_sig);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double lam = static_cast<double>(i) * L / static_cast<double>(n);
            located[static_cast<std::size_t>(i)] = c->interpolate(profile.t_of_lambda(lam));
        }
        auto at = [&](std::ptrdiff_t i) { return located[static_cast<std::size_t>(i % n)]; };
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            sig.values[static_cast<std::size_t>(i)] =
                cross_ratio(at(i), at(i + k_steps), at(i + 2 * k_steps), at(i + 3 * k_steps));
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double lam = static_cast<double>(i) * L / static_cast<double>(n);
            Complex p[4];
            for (int k = 0; k < 4; ++k)
                p[k] = c->interpolate(profile.t_of_lambda(lam + k * sig.delta));
            sig.values[static_cast<std::size_t>(i)] = cross_ratio(p[0], p[1], p[2], p[3]);
        }
    }
    return sig;
}

FcrInvariant fcr(const ScrSignature& s) {
    const std::size_t n = s.values.size();
    std::vector<Complex> u(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = phi1(s.values[i]);
        w[i] = phi2(s.values[i]);
    }
    fft_forward(u);
    fft_forward(w);
    const double inv_n = 1.0 / static_cast<double>(n);

    FcrInvariant out;
    out.delta_frac = s.delta_frac;
    out.length = s.length;
    out.vertex_count = s.vertex_count;
    out.coeffs.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::ptrdiff_t m = -half; m < half; ++m) {
        const std::size_t up = static_cast<std::size_t>((m % static_cast<std::ptrdiff_t>(n) +
                                                         static_cast<std::ptrdiff_t>(n)) %
                                                        static_cast<std::ptrdiff_t>(n));
        const std::size_t wn = static_cast<std::size_t>(((-m) % static_cast<std::ptrdiff_t>(n) +
                                                         static_cast<std::ptrdiff_t>(n)) %
                                                        static_cast<std::ptrdiff_t>(n));
        out.coeffs[static_cast<std::size_t>(m + half)] = (u[up] * inv_n) * (w[wn] * inv_n);
    }
    return out;
}

FcrInvariant fcr_of_curve(const SampledCurve& c, const ScrOptions& opts) {
    return fcr(scr(c, opts));
}

double fcr_distance(const FcrInvariant& f1, const FcrInvariant& f2) {
    if (f1.n_sig() != f2.n_sig() || f1.delta_frac != f2.delta_frac)
        throw ShapeMismatch("fcr_distance: invariants have different shape");
    double sum = 0.0;
    for (std::size_t i = 0; i < f1.coeffs.size(); ++i)
        sum += std::norm(f1.coeffs[i] - f2.coeffs[i]);
    return std::sqrt(sum);
}

namespace {

FcrInvariant reversed_fcr(const FcrInvariant& f) {
    // FCR(n) -> FCR(-n); n and -n are taken mod N over the stored window.
    FcrInvariant out = f;
    const auto n = static_cast<std::ptrdiff_t>(f.coeffs.size());
    const std::ptrdiff_t half = n / 2;
    for (std::ptrdiff_t m = -half; m < half; ++m) {
        std::ptrdiff_t src = -m;
        if (src >= half) src -= n;  // m = -N/2 maps to itself
        out.coeffs[static_cast<std::size_t>(m + half)] =
            f.coeffs[static_cast<std::size_t>(src + half)];
    }
    return out;
}

FcrInvariant conjugated_fcr(const FcrInvariant& f) {
    FcrInvariant out = f;
    for (Complex& c : out.coeffs) c = std::conj(c);
    return out;
}

}  // namespace

double fcr_distance_quotient(const FcrInvariant& f1, const FcrInvariant& f2,
                             QuotientFlags modulo) {
    double best = fcr_distance(f1, f2);
    if (modulo.reversal) best = std::min(best, fcr_distance(f1, reversed_fcr(f2)));
    if (modulo.reflection) best = std::min(best, fcr_distance(f1, conjugated_fcr(f2)));
    if (modulo.reversal && modulo.reflection)
        best = std::min(best, fcr_distance(f1, conjugated_fcr(reversed_fcr(f2))));
    return best;
}

double scr_rms(const ScrSignature& s) {
    double sum = 0.0;
    for (const Complex& v : s.values) sum += std::norm(v);
    return std::sqrt(sum / static_cast<double>(s.values.size()));
}

double fcr_norm(const FcrInvariant& f) {
    double sum = 0.0;
    for (const Complex& c : f.coeffs) sum += std::norm(c);
    return std::sqrt(sum);
}

}  // namespace mobsig
