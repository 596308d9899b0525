#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mobsig/moebius.hpp"

namespace mobsig {

/// Square grey-scale grid on [-1,1]^2; index (ix, iy) sits at
/// (-1 + ix h, -1 + iy h).  Row-major storage, rows in increasing y.
class ScalarImage {
public:
    ScalarImage(std::size_t m, std::vector<double> data);

    static ScalarImage from_function(const std::function<double(double, double)>& f,
                                     std::size_t m);

    std::size_t m() const { return m_; }
    double h() const { return 2.0 / static_cast<double>(m_ - 1); }
    double x(std::size_t ix) const { return -1.0 + h() * static_cast<double>(ix); }
    double y(std::size_t iy) const { return -1.0 + h() * static_cast<double>(iy); }

    double value(std::size_t ix, std::size_t iy) const { return data_[iy * m_ + ix]; }
    double& value(std::size_t ix, std::size_t iy) { return data_[iy * m_ + ix]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t m_;
    std::vector<double> data_;
};

/// Grid field with a validity mask (same geometry as the source image).
struct MaskedField {
    std::size_t m = 0;
    std::vector<double> values;       // NaN outside the mask
    std::vector<std::uint8_t> valid;

    bool is_valid(std::size_t ix, std::size_t iy) const { return valid[iy * m + ix] != 0; }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * m + ix]; }

    /// Bilinear interpolation; NaN when any stencil corner is invalid or the
    /// point leaves the grid.
    double interpolate(double x, double y, double h) const;
};

struct InvariantFields {
    MaskedField lambda_n;
    MaskedField lambda_t;
    MaskedField grad_norm;
    MaskedField div_n;  // level-set curvature kappa = div n (diagnostic)
};

/// f(x,y) = exp(-4x^2 - 8(y - 0.2x - 0.8x^2)^2); m must be odd so the
/// maximum at the origin is a grid point.
ScalarImage test_image(std::size_t m);
double test_image_function(double x, double y);

/// The transform used for the image invariance experiment:
/// a = 0.9+0.1i, b = 0.1, c = 0.1+0.4i, d = 1.
MoebiusTransform image_demo_transform();

/// Samples f o t^{-1} on the grid from the analytic source; throws
/// PoleInDomain when the pole of t^{-1} comes within 2h of a sample.
ScalarImage pullback(const std::function<double(double, double)>& f,
                     const MoebiusTransform& t, std::size_t m);

/// Moebius differential invariants of the image: with n = grad f / |grad f|,
///   lambda_n = -n . grad(curl n) / |grad f|^2,
///   lambda_t = -(n x grad(div n)) / |grad f|^2.
/// All derivatives are second-order central differences; points with
/// |grad f| < eps_grad_rel * max|grad f| are masked, and the mask widens near
/// the boundary where the stencils do not fit.
InvariantFields invariant_fields(const ScalarImage& img, double eps_grad_rel = 1e-3);

struct Polyline {
    std::vector<std::array<double, 2>> points;
    bool closed = false;
};

/// Marching-squares contours of f = level, linear interpolation on cell
/// edges, higher intensity on the left; saddle cells resolved by the
/// cell-centre average.  Possibly empty.
std::vector<Polyline> level_set(const ScalarImage& img, double level);

struct SignaturePoint {
    double x, y;
    double lambda_n, lambda_t;
    double u, v;  // (arctan(lambda_t/4), arctan(lambda_n/4))
};

struct SignatureCurve {
    double level = 0.5;
    std::vector<SignaturePoint> points;
};

/// Level-set contour mapped into compressed signature coordinates; contour
/// points whose bilinear stencil touches masked grid nodes are dropped.
SignatureCurve signature_curve(const ScalarImage& img, double level,
                               double eps_grad_rel = 1e-3);
SignatureCurve signature_curve(const ScalarImage& img, const InvariantFields& fields,
                               double level);

/// Symmetric mean nearest-point distance between two signature curves in the
/// compressed (u, v) coordinates.
double signature_distance(const SignatureCurve& a, const SignatureCurve& b);

struct GaussianBlob {
    double cx, cy, sigma, amplitude;
};

/// Sum of k random Gaussians with the evaluation-grid range scaled to [0,1].
class BlobImage {
public:
    BlobImage(std::vector<GaussianBlob> blobs, std::size_t grid_m);

    double operator()(double x, double y) const;
    const std::vector<GaussianBlob>& blobs() const { return blobs_; }

    /// Independent multiplicative jitter, uniform in [1-rel, 1+rel], on every
    /// Gaussian parameter.
    BlobImage jittered(double rel, std::uint64_t seed) const;

private:
    double raw(double x, double y) const;
    std::vector<GaussianBlob> blobs_;
    std::size_t grid_m_;
    double lo_ = 0.0, hi_ = 1.0;
};

BlobImage random_blobs(std::size_t k, std::uint64_t seed, std::size_t grid_m = 161);

/// Transform distribution of the blob experiment: b = 0, d = 1, a uniform on
/// the annulus 0.7 <= |a| <= 1.3, c with uniform argument and |N(0, 0.6)|
/// modulus.  Draws are rejected until the inverse has no pole within 2h of
/// the grid.
MoebiusTransform random_blob_transform(std::uint64_t seed, std::size_t grid_m = 161);

/// Transforms z -> 1/(1 + cz) with c complex Gaussian, per-axis std 0.1
/// (the near-identical-blob sensitivity experiment), same pole rejection.
MoebiusTransform random_small_transform(std::uint64_t seed, std::size_t grid_m = 161);

/// Saddle of a masked field: grid point minimising |grad| with indefinite
/// Hessian inside the window; returns {x, y, value}.
struct SaddlePoint {
    double x = 0.0, y = 0.0, value = 0.0;
    bool found = false;
};
SaddlePoint find_saddle(const MaskedField& field, double h, double cx, double cy,
                        double half_width);

/// Plain-text PGM, P2, maxval 65535, intensity = round(f * 65535); rows in
/// increasing y.
void write_pgm(const ScalarImage& img, const std::string& path);
ScalarImage read_pgm(const std::string& path);

/// Float CSV: m rows of m comma-separated values, increasing y.
void write_image_csv(const ScalarImage& img, const std::string& path);
ScalarImage read_image_csv(const std::string& path);

/// CSV rows `level,x,y,lambda_n,lambda_t,sig_u,sig_v`.
void write_signature_csv(const std::vector<SignatureCurve>& curves, const std::string& path);

}  // namespace mobsig
