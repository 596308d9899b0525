#pragma once

#include <vector>

#include "mobsig/arclength.hpp"
#include "mobsig/curve.hpp"

namespace mobsig {

struct ScrOptions {
    double delta_frac = 0.125;  // delta = delta_frac * L, in (0, 1/4]
    std::size_t n_sig = 128;    // power of two
    bool normalize_orientation = true;
};

/// Shape cross-ratio SCR(i L / N) = CR(z(lambda), z(lambda+delta),
/// z(lambda+2 delta), z(lambda+3 delta)) with lambda = i L / N, the curve
/// parameterized by Moebius arclength.
struct ScrSignature {
    std::vector<Complex> values;
    double delta = 0.0;
    double delta_frac = 0.125;
    double length = 0.0;   // Moebius length L
    int vertex_count = 0;  // carried along for the invariant bundle
};

/// FCR(n) = F(phi1 o SCR)_n * F(phi2 o SCR)_{-n}, n = -N/2 .. N/2-1, with the
/// unitary 1/N forward transform (matches the 1/L-integral convention).
struct FcrInvariant {
    std::vector<Complex> coeffs;  // index k holds n = k - N/2
    double delta_frac = 0.125;
    double length = 0.0;
    int vertex_count = 0;

    std::size_t n_sig() const { return coeffs.size(); }
};

/// phi1(w) = w / sqrt(1 + |w|^2); maps into the open unit disk, squashing the
/// cross-ratio's blow-ups so they cannot dominate the Fourier description.
Complex phi1(Complex w);
/// phi2 = phi1^2.
Complex phi2(Complex w);

ScrSignature scr(const SampledCurve& c, const ScrOptions& opts = {});

FcrInvariant fcr(const ScrSignature& s);

/// Full pipeline convenience.
FcrInvariant fcr_of_curve(const SampledCurve& c, const ScrOptions& opts = {});

/// Euclidean norm of the coefficient difference.
double fcr_distance(const FcrInvariant& f1, const FcrInvariant& f2);

struct QuotientFlags {
    bool reversal = false;
    bool reflection = false;
};

/// min over the selected subgroup of {id, reverse, conjugate,
/// reverse o conjugate} acting on f2, where reversal maps FCR(n) -> FCR(-n)
/// and reflection maps FCR(n) -> conj(FCR(n)).
double fcr_distance_quotient(const FcrInvariant& f1, const FcrInvariant& f2,
                             QuotientFlags modulo);

/// l2 norms of the signature samples under the mean (1/L-integral) convention.
double scr_rms(const ScrSignature& s);
double fcr_norm(const FcrInvariant& f);

}  // namespace mobsig
