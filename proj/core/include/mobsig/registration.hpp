#pragma once

#include <array>
#include <vector>

#include "mobsig/curve.hpp"

namespace mobsig {

enum class RegistrationGroup { similarity, moebius };

/// Piecewise-linear increasing degree-1 circle map: psi(t + 1) = psi(t) + 1,
/// built from 16 positive increments summing to 1 plus a phase.
struct Reparam {
    std::array<double, 16> increments{};
    double phase = 0.0;

    static Reparam identity();
    double operator()(double t) const;
};

struct RegistrationConfig {
    double alpha = 0.1;         // H1 derivative weight
    int max_iterations = 500;   // per start
    int n_starts_rotations = 4; // {0, pi/2, pi, 3pi/2}
    bool parallel_starts = true;
};

struct RegistrationResult {
    double residual = 0.0;  // H1 norm of the registered difference
    MoebiusTransform transform;
    Reparam reparam;
    int starts_tried = 0;
    int best_start = -1;
    bool converged = false;
    long long iterations_total = 0;
    std::vector<double> residual_history;  // accepted residuals, best start
};

/// Discrete H1 norm: midpoint rule for |z|^2 + alpha |z'|^2 with
/// central-difference derivatives.
double h1_norm(const SampledCurve& c, double alpha = 0.1);

/// min over the group and reparametrizations of ||phi o z o psi - w||_H1 by
/// damped Gauss-Newton on the stacked residual, finite-difference Jacobian,
/// multi-start over 12 initial similarities (4 rotations x 3 scales).
RegistrationResult register_curves(const SampledCurve& z, const SampledCurve& w,
                                   RegistrationGroup group,
                                   const RegistrationConfig& cfg = {});

/// d_G(z, w) = max(r_G(z, w), r_G(w, z)).
double dist_symmetrized(const SampledCurve& z, const SampledCurve& w,
                        RegistrationGroup group, const RegistrationConfig& cfg = {});

}  // namespace mobsig
