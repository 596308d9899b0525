#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mobsig/moebius.hpp"

namespace mobsig {

/// Closed curve sampled at the uniform grid t_i = (i + phase) * h, h = 1/N.
/// Indexing is cyclic.  The default phase 1/4 keeps the test ellipse from
/// being sampled exactly at its vertices.
class SampledCurve {
public:
    static constexpr double kDefaultPhase = 0.25;

    SampledCurve(std::vector<Complex> points, double phase = kDefaultPhase);

    std::size_t size() const { return points_.size(); }
    double h() const { return 1.0 / static_cast<double>(points_.size()); }
    double phase() const { return phase_; }

    /// Cyclic access: z(i + N) == z(i), negatives allowed.
    Complex z(std::ptrdiff_t i) const {
        const auto n = static_cast<std::ptrdiff_t>(points_.size());
        std::ptrdiff_t k = i % n;
        if (k < 0) k += n;
        return points_[static_cast<std::size_t>(k)];
    }

    double t(std::ptrdiff_t i) const { return (static_cast<double>(i) + phase_) * h(); }

    const std::vector<Complex>& points() const { return points_; }

    /// Linear interpolation of samples at arbitrary parameter t (wrapped).
    Complex interpolate(double t) const;

    /// Signed area of the sample polygon; positive for counterclockwise.
    double signed_area() const;

    /// Same points in reversed traversal order (grid convention unchanged).
    SampledCurve reversed() const;

    SampledCurve transformed(const MoebiusTransform& t) const;

private:
    std::vector<Complex> points_;
    double phase_;
};

/// Trigonometric sum z(t) = sum a_n e^{2 pi i n t}, n = -4..4; the generator
/// behind the random-shape distribution.
struct FourierShapeParams {
    std::array<Complex, 9> coeffs{};  // index k holds a_{k-4}
    std::uint64_t seed = 0;

    Complex coeff(int n) const { return coeffs[static_cast<std::size_t>(n + 4)]; }
    Complex evaluate(double t) const;
    SampledCurve sample(std::size_t n_samples, double phase = SampledCurve::kDefaultPhase) const;
};

/// z(t) = cos 2 pi t + 2 i sin 2 pi t at the standard grid.
SampledCurve ellipse(std::size_t n_samples);

/// Draw shape coefficients: Re, Im a_n ~ N(0, 1/(1+|n|^3)) for n != +-1,
/// |a_1| = 1 with uniform argument, a_{-1} = u a_1, u ~ U(0, 0.6).
/// N(m, s) is read as mean/variance.
FourierShapeParams random_shape_params(std::uint64_t seed);

SampledCurve random_jordan(std::uint64_t seed, std::size_t n_samples = 256);

/// Independent complex Gaussian per point, per-axis standard deviation sigma.
SampledCurve add_noise(const SampledCurve& c, double sigma, std::uint64_t seed);

/// Brute-force pairwise segment-intersection test of the sample polygon.
bool is_simple(const SampledCurve& c);

/// CSV with header `t,x,y`; full float64 round-trip precision, LF endings.
void write_curve(const SampledCurve& c, const std::string& path);
SampledCurve read_curve(const std::string& path);

}  // namespace mobsig
