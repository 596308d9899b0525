#include "mobsig/curve.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mobsig/rng.hpp"

namespace mobsig {

SampledCurve::SampledCurve(std::vector<Complex> points, double phase)
    : points_(std::move(points)), phase_(phase) {
    if (points_.size() < 8) throw SampleCountTooSmall("SampledCurve: need at least 8 samples");
}

Complex SampledCurve::interpolate(double t) const {
    const auto n = static_cast<double>(points_.size());
    const double u = t * n - phase_;
    const double fl = std::floor(u);
    const double frac = u - fl;
    const auto j = static_cast<std::ptrdiff_t>(fl);
    return z(j) * (1.0 - frac) + z(j + 1) * frac;
}

double SampledCurve::signed_area() const {
    double area2 = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(points_.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Complex p = z(i), q = z(i + 1);
        area2 += p.real() * q.imag() - q.real() * p.imag();
    }
    return 0.5 * area2;
}

SampledCurve SampledCurve::reversed() const {
    std::vector<Complex> rev(points_.rbegin(), points_.rend());
    return SampledCurve(std::move(rev), phase_);
}

SampledCurve SampledCurve::transformed(const MoebiusTransform& t) const {
    std::vector<Complex> out;
    out.reserve(points_.size());
    for (const Complex& p : points_) out.push_back(apply(t, p));
    return SampledCurve(std::move(out), phase_);
}

Complex FourierShapeParams::evaluate(double t) const {
    Complex acc{0.0, 0.0};
    for (int n = -4; n <= 4; ++n) {
        const double ang = 2.0 * M_PI * n * t;
        acc += coeff(n) * Complex(std::cos(ang), std::sin(ang));
    }
    return acc;
}

SampledCurve FourierShapeParams::sample(std::size_t n_samples, double phase) const {
    std::vector<Complex> pts(n_samples);
    const double h = 1.0 / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        pts[i] = evaluate((static_cast<double>(i) + phase) * h);
    return SampledCurve(std::move(pts), phase);
}

SampledCurve ellipse(std::size_t n_samples) {
    if (n_samples < 8) throw SampleCountTooSmall("ellipse: need at least 8 samples");
    std::vector<Complex> pts(n_samples);
    const double h = 1.0 / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = (static_cast<double>(i) + SampledCurve::kDefaultPhase) * h;
        pts[i] = Complex(std::cos(2.0 * M_PI * t), 2.0 * std::sin(2.0 * M_PI * t));
    }
    return SampledCurve(std::move(pts));
}

FourierShapeParams random_shape_params(std::uint64_t seed) {
    Rng rng(seed);
    FourierShapeParams p;
    p.seed = seed;
    for (int n = -4; n <= 4; ++n) {
        if (n == -1 || n == 1) continue;
        const double sd = std::sqrt(1.0 / (1.0 + std::pow(std::abs(n), 3)));
        const double re = rng.normal(0.0, sd);
        const double im = rng.normal(0.0, sd);
        p.coeffs[static_cast<std::size_t>(n + 4)] = Complex(re, im);
    }
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const Complex a1(std::cos(theta), std::sin(theta));
    p.coeffs[5] = a1;
    p.coeffs[3] = rng.uniform(0.0, 0.6) * a1;
    return p;
}

SampledCurve random_jordan(std::uint64_t seed, std::size_t n_samples) {
    return random_shape_params(seed).sample(n_samples);
}

SampledCurve add_noise(const SampledCurve& c, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be nonnegative");
    if (sigma == 0.0) return c;
    Rng rng(seed);
    std::vector<Complex> pts = c.points();
    for (Complex& p : pts) {
        const double dx = rng.normal(0.0, sigma);
        const double dy = rng.normal(0.0, sigma);
        p += Complex(dx, dy);
    }
    return SampledCurve(std::move(pts), c.phase());
}

namespace {

bool segments_intersect(Complex a0, Complex a1, Complex b0, Complex b1) {
    auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(a1 - a0, b0 - a0);
    const double d2 = cross(a1 - a0, b1 - a0);
    const double d3 = cross(b1 - b0, a0 - b0);
    const double d4 = cross(b1 - b0, a1 - b0);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool is_simple(const SampledCurve& c) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wrap-adjacent
            if (segments_intersect(c.z(i), c.z(i + 1), c.z(j), c.z(j + 1))) return false;
        }
    }
    return true;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_curve(const SampledCurve& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_curve: cannot open " + path);
    out << "t,x,y\n";
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out << format_double(c.t(i)) << ',' << format_double(c.z(i).real()) << ','
            << format_double(c.z(i).imag()) << '\n';
    }
    if (!out) throw std::runtime_error("write_curve: write failed for " + path);
}

SampledCurve read_curve(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedCsv("read_curve: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw MalformedCsv("read_curve: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x,y") throw MalformedCsv("read_curve: expected header t,x,y");

    std::vector<double> ts;
    std::vector<Complex> pts;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double vals[3];
        const char* s = line.c_str();
        char* end = nullptr;
        for (int k = 0; k < 3; ++k) {
            vals[k] = std::strtod(s, &end);
            if (end == s) throw MalformedCsv("read_curve: bad number in row");
            s = end;
            if (k < 2) {
                if (*s != ',') throw MalformedCsv("read_curve: missing column");
                ++s;
            }
        }
        if (*s != '\0') throw MalformedCsv("read_curve: trailing characters in row");
        ts.push_back(vals[0]);
        pts.emplace_back(vals[1], vals[2]);
    }
    if (pts.size() < 8) throw SampleCountTooSmall("read_curve: need at least 8 rows");

    // Recover the uniform grid: t_i = (i + phase) * h must hold exactly-ish.
    const auto n = ts.size();
    const double h = 1.0 / static_cast<double>(n);
    const double phase = ts[0] / h;
    if (phase < 0.0 || phase >= 1.0) throw NonUniformGrid("read_curve: bad leading t");
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = (static_cast<double>(i) + phase) * h;
        if (std::abs(ts[i] - expect) > 1e-12)
            throw NonUniformGrid("read_curve: rows not on a sorted uniform grid");
    }
    return SampledCurve(std::move(pts), phase);
}

}  // namespace mobsig
