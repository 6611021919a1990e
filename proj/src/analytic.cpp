#include "esl/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "esl/errors.hpp"
#include "esl/parallel.hpp"

namespace esl::analytic {

namespace {

using cld = std::complex<long double>;

// B_{2k} / (2k)! for k = 1..15.
const std::array<long double, 15>& bernoulli_ratios() {
    static const std::array<long double, 15> table = [] {
        const std::array<long double, 15> b = {
            1.0L / 6,          -1.0L / 30,          1.0L / 42,           -1.0L / 30,
            5.0L / 66,         -691.0L / 2730,      7.0L / 6,            -3617.0L / 510,
            43867.0L / 798,    -174611.0L / 330,    854513.0L / 138,     -236364091.0L / 2730,
            8553103.0L / 6,    -23749461029.0L / 870, 8615841276005.0L / 14322,
        };
        std::array<long double, 15> out{};
        long double fact = 1;
        for (int k = 1; k <= 15; ++k) {
            fact *= static_cast<long double>(2 * k - 1) * static_cast<long double>(2 * k);
            out[k - 1] = b[k - 1] / fact;
        }
        return out;
    }();
    return table;
}

// n^{-s}
cld inv_pow(std::int64_t n, cld s) {
    const long double ln = std::log(static_cast<long double>(n));
    return std::polar(std::exp(-s.real() * ln), -s.imag() * ln);
}

std::size_t midpoint_cells(double T, double step) {
    if (!(T >= 2)) throw ArgumentError("T must be >= 2");
    if (!(step > 0) || step > 0.05) throw ArgumentError("grid step must be in (0, 0.05]");
    return static_cast<std::size_t>(std::ceil(T / step - 1e-9));
}

// sum_j f(t_j) * h over midpoints of [0, T], in index order.
template <class Fn>
double midpoint(double T, std::size_t cells, unsigned workers, Fn&& f) {
    const double h = T / static_cast<double>(cells);
    std::vector<double> values(cells);
    parallel_for(cells, workers, [&](std::size_t j) { values[j] = f((static_cast<double>(j) + 0.5) * h); });
    long double acc = 0;
    for (double v : values) acc += v;
    return static_cast<double>(acc * h);
}

}  // namespace

std::complex<double> zeta_em(std::complex<double> s_in, std::int64_t cutoff, int bernoulli_terms) {
    if (s_in == std::complex<double>(1, 0)) throw ArithmeticError("zeta has a pole at s = 1");
    if (cutoff < 2) throw ArgumentError("cutoff must be >= 2");
    if (bernoulli_terms < 0 || bernoulli_terms > 15) throw ArgumentError("bernoulli_terms must be in [0, 15]");
    const cld s{s_in.real(), s_in.imag()};
    cld acc = 0;
    for (std::int64_t n = 1; n < cutoff; ++n) acc += inv_pow(n, s);
    const cld n_s = inv_pow(cutoff, s);
    const auto N = static_cast<long double>(cutoff);
    acc += n_s * N / (s - 1.0L) + n_s / 2.0L;

    const auto& ratio = bernoulli_ratios();
    cld poch = s;                // s (s+1) ... (s+2k-2)
    cld power = n_s / N;         // N^{-s-2k+1}
    for (int k = 1; k <= bernoulli_terms; ++k) {
        acc += ratio[k - 1] * poch * power;
        poch *= (s + static_cast<long double>(2 * k - 1)) * (s + static_cast<long double>(2 * k));
        power /= N * N;
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::complex<double> zeta(std::complex<double> s) {
    if (s.real() < 0) throw ArgumentError("zeta is implemented for Re s >= 0");
    const double size = std::abs(s);
    const auto cutoff = static_cast<std::int64_t>(std::max(20.0, std::ceil(size / 2)));
    return zeta_em(s, cutoff, 15);
}

std::complex<double> zeta_critical(double t) {
    if (!(std::abs(t) <= 1e6)) throw ResourceError("|t| > 1e6 is out of range for zeta_critical");
    return zeta({0.5, t});
}

double zeta_second_moment(double T, double grid_step, unsigned workers) {
    const auto cells = midpoint_cells(T, grid_step);
    // |zeta(1/2 - it)| = |zeta(1/2 + it)|
    return 2 * midpoint(T, cells, workers, [](double t) { return std::norm(zeta_critical(t)); });
}

GrowthCheck zeta_growth_check(double sigma, double t, double eps) {
    if (!(sigma >= 0.5 && sigma <= 1 + eps)) throw ArgumentError("sigma must lie in [1/2, 1 + eps]");
    if (!(t >= 1)) throw ArgumentError("t must be >= 1");
    if (t > 1e6) throw ResourceError("t > 1e6 is out of range");
    return {std::abs(zeta({sigma, t})), std::pow(t, (1 - sigma) / 3 + eps)};
}

GrowthCheck zeta_growth_sup(double sigma, double t, double eps, double window, double step) {
    if (!(window >= 0) || !(step > 0)) throw ArgumentError("window must be >= 0 and step > 0");
    GrowthCheck out = zeta_growth_check(sigma, t, eps);
    const auto steps = static_cast<std::int64_t>(std::floor(window / step + 1e-9));
    for (std::int64_t k = 1; k <= steps; ++k)
        out.value = std::max(out.value, zeta_growth_check(sigma, t + static_cast<double>(k) * step, eps).value);
    return out;
}

double DirichletPoly::energy() const {
    long double acc = 0;
    for (std::size_t n = 1; n < coeffs.size(); ++n) acc += std::norm(coeffs[n]);
    return static_cast<double>(acc);
}

std::complex<double> DirichletPoly::operator()(double t) const {
    std::complex<long double> acc = 0;
    for (std::size_t n = 1; n < coeffs.size(); ++n) {
        if (coeffs[n] == std::complex<double>{}) continue;
        const long double phase = static_cast<long double>(t) * std::log(static_cast<long double>(n));
        acc += std::complex<long double>(coeffs[n].real(), coeffs[n].imag()) * std::polar(1.0L, phase);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

MeanValue dpoly_mean_value(const DirichletPoly& poly, double T, double grid_step, unsigned workers) {
    const auto cells = midpoint_cells(T, grid_step);
    MeanValue out;
    out.N = poly.length();
    out.main_term = T * poly.energy();
    out.numeric = midpoint(T, cells, workers, [&](double t) { return std::norm(poly(t)); });
    return out;
}

}  // namespace esl::analytic
