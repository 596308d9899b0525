#include "mobsig/registration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "mobsig/parallel.hpp"

namespace mobsig {

Reparam Reparam::identity() {
    Reparam r;
    r.increments.fill(1.0 / 16.0);
    return r;
}

double Reparam::operator()(double t) const {
    const double shift = std::floor(t);
    const double u = (t - shift) * 16.0;
    const auto j = std::min(static_cast<std::size_t>(u), std::size_t{15});
    double cum = 0.0;
    for (std::size_t k = 0; k < j; ++k) cum += increments[k];
    return phase + shift + cum + (u - static_cast<double>(j)) * increments[j];
}

double h1_norm(const SampledCurve& c, double alpha) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    const double h = c.h();
    double sum = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Complex zi = c.z(i);
        const Complex dz = (c.z(i + 1) - c.z(i - 1)) / (2.0 * h);
        sum += std::norm(zi) + alpha * std::norm(dz);
    }
    return std::sqrt(sum / static_cast<double>(n));
}

namespace {

constexpr int kReparamControls = 16;

// Parameter vector layout: [group params | 16 raw warp controls | phase].
// Group charts: similarity (a_re, a_im, b_re, b_im); moebius chart 0 fixes
// d = 1 with params (a, b, c), chart 1 fixes c = 1 with params (a, b, d).
struct Model {
    RegistrationGroup group;
    int chart = 0;
    const SampledCurve* z;
    const SampledCurve* w;
    double alpha;

    int group_params() const { return group == RegistrationGroup::similarity ? 4 : 6; }
    int n_params() const { return group_params() + kReparamControls + 1; }

    Complex map(const Eigen::VectorXd& p, Complex u) const {
        if (group == RegistrationGroup::similarity)
            return Complex(p[0], p[1]) * u + Complex(p[2], p[3]);
        const Complex a(p[0], p[1]), b(p[2], p[3]), cd(p[4], p[5]);
        if (chart == 0) return (a * u + b) / (cd * u + 1.0);
        return (a * u + b) / (u + cd);
    }

    // Minimum |denominator| over the warped samples; small values mean the
    // current chart is collapsing.
    double denom_margin(const Eigen::VectorXd& p, const std::vector<Complex>& warped) const {
        if (group == RegistrationGroup::similarity) return 1.0;
        const Complex cd(p[4], p[5]);
        double m = std::numeric_limits<double>::infinity();
        for (const Complex& u : warped)
            m = std::min(m, chart == 0 ? std::abs(cd * u + 1.0) : std::abs(u + cd));
        return m;
    }

    void warp(const Eigen::VectorXd& p, std::vector<Complex>& out) const {
        const int gp = group_params();
        double raw_max = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < kReparamControls; ++k) raw_max = std::max(raw_max, p[gp + k]);
        std::array<double, kReparamControls> inc{};
        double sum = 0.0;
        for (int k = 0; k < kReparamControls; ++k) {
            inc[static_cast<std::size_t>(k)] = std::exp(p[gp + k] - raw_max);
            sum += inc[static_cast<std::size_t>(k)];
        }
        for (double& v : inc) v /= sum;
        const double phase = p[gp + kReparamControls];

        const auto n = static_cast<std::ptrdiff_t>(z->size());
        out.resize(z->size());
        std::array<double, kReparamControls + 1> cum{};
        for (int k = 0; k < kReparamControls; ++k)
            cum[static_cast<std::size_t>(k + 1)] =
                cum[static_cast<std::size_t>(k)] + inc[static_cast<std::size_t>(k)];
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double t = z->t(i);
            const double u = t * kReparamControls;
            const auto j = std::min(static_cast<std::size_t>(u), std::size_t{15});
            const double psi =
                phase + cum[j] + (u - static_cast<double>(j)) * inc[j];
            out[static_cast<std::size_t>(i)] = z->interpolate(psi);
        }
    }

    // Stacked residual: [Re d, Im d, sqrt(alpha) Re d', sqrt(alpha) Im d'] / sqrt(N).
    void residual(const Eigen::VectorXd& p, Eigen::VectorXd& r,
                  std::vector<Complex>& warped_scratch) const {
        warp(p, warped_scratch);
        const auto n = static_cast<std::ptrdiff_t>(z->size());
        const double h = z->h();
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
        const double sqa = std::sqrt(alpha);
        r.resize(4 * n);
        std::vector<Complex> diff(static_cast<std::size_t>(n));
        for (std::ptrdiff_t i = 0; i < n; ++i)
            diff[static_cast<std::size_t>(i)] =
                map(p, warped_scratch[static_cast<std::size_t>(i)]) - w->z(i);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const Complex d = diff[static_cast<std::size_t>(i)];
            const Complex dd =
                (diff[static_cast<std::size_t>((i + 1) % n)] -
                 diff[static_cast<std::size_t>((i - 1 + n) % n)]) /
                (2.0 * h);
            r[i] = d.real() * inv_sqrt_n;
            r[n + i] = d.imag() * inv_sqrt_n;
            r[2 * n + i] = sqa * dd.real() * inv_sqrt_n;
            r[3 * n + i] = sqa * dd.imag() * inv_sqrt_n;
        }
    }
};

struct StartOutcome {
    double residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXd params;
    int chart = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> history;
};

// Damped Gauss-Newton (Levenberg-Marquardt style) with forward-difference
// Jacobian; only residual-decreasing steps are accepted.
StartOutcome run_start(Model model, Eigen::VectorXd p, int max_iterations) {
    StartOutcome out;
    const int np = model.n_params();
    std::vector<Complex> scratch;
    Eigen::VectorXd r;
    model.residual(p, r, scratch);
    double err = r.norm();
    out.history.push_back(err);

    double mu = 1e-3;
    Eigen::MatrixXd J(r.size(), np);
    Eigen::VectorXd rp;
    int chart_switches = 0;

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        // Chart guard: rebase the Moebius parameters when the denominator
        // margin collapses under the current chart.
        if (model.group == RegistrationGroup::moebius) {
            model.warp(p, scratch);
            if (model.denom_margin(p, scratch) < 1e-3 && chart_switches < 2) {
                const Complex a(p[0], p[1]), b(p[2], p[3]), cd(p[4], p[5]);
                if (model.chart == 0 && std::abs(cd) > 1e-12) {
                    // (az+b)/(cz+1) == ((a/c) z + b/c)/(z + 1/c)
                    const Complex a2 = a / cd, b2 = b / cd, d2 = 1.0 / cd;
                    p[0] = a2.real(); p[1] = a2.imag();
                    p[2] = b2.real(); p[3] = b2.imag();
                    p[4] = d2.real(); p[5] = d2.imag();
                    model.chart = 1;
                    ++chart_switches;
                } else if (model.chart == 1 && std::abs(cd) > 1e-12) {
                    const Complex a2 = a / cd, b2 = b / cd, c2 = 1.0 / cd;
                    p[0] = a2.real(); p[1] = a2.imag();
                    p[2] = b2.real(); p[3] = b2.imag();
                    p[4] = c2.real(); p[5] = c2.imag();
                    model.chart = 0;
                    ++chart_switches;
                }
                model.residual(p, r, scratch);
                err = r.norm();
            }
        }

        for (int k = 0; k < np; ++k) {
            const double step = 1e-7 * (1.0 + std::abs(p[k]));
            Eigen::VectorXd pk = p;
            pk[k] += step;
            model.residual(pk, rp, scratch);
            J.col(k) = (rp - r) / step;
        }
        const Eigen::MatrixXd jtj = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-14) {
            out.converged = true;
            break;
        }

        bool accepted = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal().array() += mu;
            const Eigen::VectorXd delta = damped.ldlt().solve(-g);
            Eigen::VectorXd pn = p + delta;
            model.residual(pn, rp, scratch);
            const double en = rp.norm();
            if (en < err) {
                p = pn;
                r = rp;
                const double drop = err - en;
                err = en;
                out.history.push_back(err);
                mu = std::max(mu * 0.3, 1e-12);
                accepted = true;
                if (delta.norm() < 1e-11 || drop < 1e-14 * (1.0 + err)) {
                    out.converged = true;
                    iter = max_iterations;  // stop outer loop
                }
                break;
            }
            mu *= 10.0;
            if (mu > 1e10) break;
        }
        if (!accepted) {
            out.converged = err < 1e-6 || g.lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + err);
            break;
        }
    }
    if (iter >= max_iterations && !out.converged && err < 1e-8) out.converged = true;

    out.residual = err;
    out.params = p;
    out.chart = model.chart;
    out.iterations = static_cast<int>(out.history.size());
    return out;
}

}  // namespace

RegistrationResult register_curves(const SampledCurve& z, const SampledCurve& w,
                                   RegistrationGroup group, const RegistrationConfig& cfg) {
    if (z.size() != w.size())
        throw ShapeMismatch("register_curves: curves must have equal sample counts");

    Model model;
    model.group = group;
    model.z = &z;
    model.w = &w;
    model.alpha = cfg.alpha;

    static const double kScales[3] = {0.5, 1.0, 2.0};
    const int n_rot = cfg.n_starts_rotations;
    const int n_starts = n_rot * 3;
    std::vector<StartOutcome> outcomes(static_cast<std::size_t>(n_starts));

    auto run_one = [&](std::size_t s) {
        const int rot = static_cast<int>(s) % n_rot;
        const int sc = static_cast<int>(s) / n_rot;
        const double ang = 2.0 * M_PI * rot / n_rot;
        const Complex a0 = kScales[sc] * Complex(std::cos(ang), std::sin(ang));
        Eigen::VectorXd p = Eigen::VectorXd::Zero(model.n_params());
        p[0] = a0.real();
        p[1] = a0.imag();
        outcomes[s] = run_start(model, p, cfg.max_iterations);
    };
    if (cfg.parallel_starts)
        parallel_for(static_cast<std::size_t>(n_starts), run_one);
    else
        for (std::size_t s = 0; s < static_cast<std::size_t>(n_starts); ++s) run_one(s);

    // Deterministic reduction: best (residual, start index).
    int best = 0;
    for (int s = 1; s < n_starts; ++s)
        if (outcomes[static_cast<std::size_t>(s)].residual <
            outcomes[static_cast<std::size_t>(best)].residual)
            best = s;
    const StartOutcome& win = outcomes[static_cast<std::size_t>(best)];

    RegistrationResult res;
    res.residual = win.residual;
    res.starts_tried = n_starts;
    res.best_start = best;
    res.converged = win.converged;
    res.residual_history = win.history;
    for (const auto& o : outcomes) res.iterations_total += o.iterations;

    const Eigen::VectorXd& p = win.params;
    if (group == RegistrationGroup::similarity) {
        res.transform = MoebiusTransform::similarity(Complex(p[0], p[1]), Complex(p[2], p[3]));
    } else if (win.chart == 0) {
        res.transform =
            MoebiusTransform(Complex(p[0], p[1]), Complex(p[2], p[3]), Complex(p[4], p[5]), 1.0);
    } else {
        res.transform =
            MoebiusTransform(Complex(p[0], p[1]), Complex(p[2], p[3]), 1.0, Complex(p[4], p[5]));
    }

    const int gp = group == RegistrationGroup::similarity ? 4 : 6;
    double raw_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kReparamControls; ++k) raw_max = std::max(raw_max, p[gp + k]);
    double sum = 0.0;
    for (int k = 0; k < kReparamControls; ++k) {
        res.reparam.increments[static_cast<std::size_t>(k)] = std::exp(p[gp + k] - raw_max);
        sum += res.reparam.increments[static_cast<std::size_t>(k)];
    }
    for (double& v : res.reparam.increments) v /= sum;
    res.reparam.phase = p[gp + kReparamControls];
    return res;
}

double dist_symmetrized(const SampledCurve& z, const SampledCurve& w, RegistrationGroup group,
                        const RegistrationConfig& cfg) {
    const double r1 = register_curves(z, w, group, cfg).residual;
    const double r2 = register_curves(w, z, group, cfg).residual;
    return std::max(r1, r2);
}

}  // namespace mobsig
