#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "esl/kernels.hpp"
#include "esl/sieve.hpp"

namespace esl {

// P(alpha) = sum_{|h| <= H} coeffs[h + H] e((N + h) alpha).
struct TrigPoly {
    std::int64_t center = 0;
    std::int64_t halfwidth = 0;
    std::vector<std::complex<double>> coeffs;

    static TrigPoly zeros(std::int64_t center, std::int64_t halfwidth);

    std::complex<double>& coeff(std::int64_t h) { return coeffs[static_cast<std::size_t>(h + halfwidth)]; }
    const std::complex<double>& coeff(std::int64_t h) const {
        return coeffs[static_cast<std::size_t>(h + halfwidth)];
    }
    // Direct O(H) evaluation.
    std::complex<double> operator()(double alpha) const;
};

// Coefficients read from a sieved segment over n in [N - H, N + H]. With strict=true
// the endpoints n = N +- H are dropped (|n - N| < H). Positions n <= 0 carry 0.
TrigPoly from_segment(const MuSegment& seg, std::int64_t N, std::int64_t H, bool strict);
TrigPoly from_segment(const RFreeSegment& seg, std::int64_t N, std::int64_t H, bool strict);
TrigPoly from_segment(const CnSegment& seg, std::int64_t N, std::int64_t H, bool strict);

TrigPoly from_kernel(const kernels::KernelSpec& spec);

// Multiplies coeffs[h] by (1 - |h|/H): convolution with F_H on the torus.
TrigPoly taper_fejer(const TrigPoly& poly);

struct QuadratureOptions {
    int oversample = 64;
    std::size_t max_fft = std::size_t{1} << 27;    // cap on the number of grid samples M
    std::size_t fft_chunk = std::size_t{1} << 20;  // size of each FFT buffer
    unsigned workers = 1;
};

struct QuadratureResult {
    double value = 0;
    double rel_error_bound = 0;  // pi * H / M
    std::size_t samples = 0;     // M
};

// Smallest power of two >= oversample * (2H + 1).
std::size_t grid_size(std::int64_t halfwidth, int oversample);

// (1/M) sum_j |P(j/M)| on the grid of grid_size(H, oversample) points.
QuadratureResult l1_norm(const TrigPoly& poly, const QuadratureOptions& opts = {});

// sqrt(sum |coeffs|^2).
double l2_norm(const TrigPoly& poly);

// Max of |P| over the l1 grid; a lower bound for the supremum.
double linf_estimate(const TrigPoly& poly, const QuadratureOptions& opts = {});

// All grid statistics from one sweep.
struct GridNorms {
    double l1 = 0;
    double l2_squared = 0;  // (1/M) sum |P|^2, exact for M > 4H
    double linf = 0;
    std::size_t samples = 0;
    double rel_error_bound = 0;
};
GridNorms grid_norms(const TrigPoly& poly, const QuadratureOptions& opts = {});

// Midpoint rule for the integral of |P| over the arcs of `set`, with
// samples_per_arc points per arc. An optional filter keeps only the sample
// points it accepts. Throws ArgumentError when arcs overlap.
double integrate_over_set(const TrigPoly& poly, const kernels::IntervalSet& set, int samples_per_arc,
                          const std::function<bool(double)>& filter = {});

// Quadrature of |A(alpha) B(alpha)| on a common grid sized for the larger kernel.
double pair_product_l1(const kernels::KernelSpec& a, const kernels::KernelSpec& b,
                       const QuadratureOptions& opts = {});
double pair_product_l1(const TrigPoly& a, const TrigPoly& b, const QuadratureOptions& opts = {});

}  // namespace esl
