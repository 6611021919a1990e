#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace esl::analytic {

// Euler-Maclaurin with explicit cutoff: sum_{n < cutoff} n^{-s} plus the tail
// integral, the half term and `bernoulli_terms` (<= 15) correction terms.
std::complex<double> zeta_em(std::complex<double> s, std::int64_t cutoff, int bernoulli_terms);

// zeta(s) for Re s >= 0, s != 1, with the cutoff chosen so |error| < 1e-12 * max(1, |zeta|)
// for |Im s| <= 1e6.
std::complex<double> zeta(std::complex<double> s);

// zeta(1/2 + it). ResourceError when |t| > 1e6.
std::complex<double> zeta_critical(double t);

// Integral of |zeta(1/2 + it)|^2 over [-T, T], composite midpoint rule with
// step <= grid_step. ArgumentError when T < 2 or grid_step is not in (0, 0.05].
double zeta_second_moment(double T, double grid_step, unsigned workers = 1);

struct GrowthCheck {
    double value = 0;  // |zeta(sigma + it)|
    double bound = 0;  // t^{(1 - sigma)/3 + eps}
};

// ArgumentError unless 1/2 <= sigma <= 1 + eps and t >= 1.
GrowthCheck zeta_growth_check(double sigma, double t, double eps);

// As zeta_growth_check, with value the max of |zeta(sigma + iu)| over u in [t, t + window]
// sampled at `step`. Smooths out the zeros so ratios across t are comparable.
GrowthCheck zeta_growth_sup(double sigma, double t, double eps, double window = 20, double step = 0.05);

// sum_{0 <= n <= N} a_n n^{it}, a_0 unused.
struct DirichletPoly {
    std::vector<std::complex<double>> coeffs;

    std::int64_t length() const { return coeffs.empty() ? 0 : static_cast<std::int64_t>(coeffs.size()) - 1; }
    double energy() const;  // sum |a_n|^2 over n >= 1
    std::complex<double> operator()(double t) const;
};

struct MeanValue {
    double numeric = 0;    // integral over [0, T] of |D(t)|^2
    double main_term = 0;  // T * sum |a_n|^2
    std::int64_t N = 0;
};

// ArgumentError when T < 2 or grid_step is not in (0, 0.05].
MeanValue dpoly_mean_value(const DirichletPoly& poly, double T, double grid_step, unsigned workers = 1);

}  // namespace esl::analytic
