#pragma once

#include <vector>

#include "mobsig/curve.hpp"

namespace mobsig {

enum class LengthMethod { curvature, crossratio, modified };

/// Signed curvature of the circle through A, B, C: Heron-formula magnitude,
/// sign from the orientation of the triangle (positive counterclockwise).
/// Collinear triples return 0; coincident points are degenerate.
double circumcircle_curvature(Complex a, Complex b, Complex c);

/// Per-cell Moebius arclength from curvature differences of interpolating
/// circles: cell i covers [t_{i+1}, t_{i+2}] and gets
/// sqrt(|kappa(z_{i+1},z_{i+2},z_{i+3}) - kappa(z_i,z_{i+1},z_{i+2})| * |z_{i+2}-z_{i+1}|).
std::vector<double> density_curvature_method(const SampledCurve& c);

/// Per-cell Moebius arclength sqrt(6 |Im log CR(z_i,...,z_{i+3})|), principal
/// branch.  `undersampled`, when given, is set if any |Im log CR| > pi/2
/// (branch jumps ahead: the grid is too coarse for the curve).
std::vector<double> density_crossratio_method(const SampledCurve& c,
                                              bool* undersampled = nullptr);

/// Closed-form arclength density of the test ellipse cos 2pi t + 2i sin 2pi t:
/// 12 pi sqrt(|sin 4 pi t|) / (5 + 3 cos 4 pi t).
double density_oracle_ellipse(double t);

/// Total length of the oracle density, accurate to ~1e-13 (tanh-sinh
/// quadrature between the square-root singularities).
double ellipse_length_reference();

/// Piecewise-linear model of the *signed* squared density
/// (dlambda/dt)^2_{i+3/2} = 6 Im log CR / h^2, with lambda(t) and t(lambda)
/// evaluated in closed form on each linear piece (pieces are split at
/// sign-change roots, so sqrt|f| integrates exactly).
class ArclengthProfile {
public:
    explicit ArclengthProfile(const SampledCurve& c);

    double total_length() const { return total_; }
    bool possibly_undersampled() const { return undersampled_; }

    /// lambda(t) for t in [0,1]; lambda(0) = 0, lambda(1) = L.
    double lambda_of_t(double t) const;

    /// Inverse map; the argument is wrapped into [0, L).
    double t_of_lambda(double lambda) const;

    /// Knot parameters and signed squared-density values (diagnostics).
    const std::vector<double>& knots() const { return knot_t_; }
    const std::vector<double>& density_sq() const { return knot_q_; }

private:
    struct Segment {
        double t0, t1;     // parameter range, single-signed f inside
        double f0, slope;  // f(t) = f0 + slope * (t - t0)
        double lam0;       // cumulative lambda at t0
    };

    std::vector<Segment> segments_;
    std::vector<double> knot_t_, knot_q_;
    double total_ = 0.0;
    bool undersampled_ = false;
};

/// Trapezoidal (cell-center) sum of per-cell values for the finite-difference
/// methods; exact profile integral for LengthMethod::modified.
double moebius_length(const SampledCurve& c, LengthMethod method);

/// One Richardson step at mesh ratio 2: (2^p * fine - coarse) / (2^p - 1).
double richardson_step(double coarse, double fine, double order);

/// Two-step extrapolation from lengths at N, 2N, 4N: the first step removes
/// the h^{3/2} vertex term, the second the h^2 finite-difference term.
double richardson_length(double l_n, double l_2n, double l_4n);

/// Number of sign changes of the cyclic kappa' sequence.  Sign changes whose
/// neighbours both fall below 1e-9 * max|kappa'| are suppressed; a curve whose
/// whole kappa' sequence is at roundoff scale (a circle) counts 0.
int count_vertices(const SampledCurve& c);

/// kappa_Moebius = (4 k'(k''' - k^2 k') - 5 k''^2) / (8 k'^3); derivatives
/// with respect to Euclidean arclength.  |kappa'| < 1e-12 is a vertex.
double moebius_curvature(double kappa, double kappa_s, double kappa_ss, double kappa_sss);

}  // namespace mobsig
