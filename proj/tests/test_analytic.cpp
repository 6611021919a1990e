#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "esl/analytic.hpp"
#include "esl/errors.hpp"

using namespace esl;
using namespace esl::analytic;
using cd = std::complex<double>;

namespace {

// mpmath at 30 digits.
struct Frozen {
    cd s;
    cd value;
};
const Frozen kFrozen[] = {
    {{0.5, 10}, {1.5448952202967527669, -0.11533646527127337544}},
    {{0.5, 100}, {2.6926198856813240905, -0.020386029602598161771}},
    {{0.5, 1000}, {0.35633436719439605507, 0.93199783123299366512}},
    {{0.5, 10000}, {-0.33937380263883445757, -0.037091505973206031474}},
    {{0.5, 123456.789}, {0.27631323987765392663, -0.21435154316119864712}},
    {{2, 0}, {1.6449340668482264365, 0}},
    {{0.75, 3}, {0.58090039608383657919, -0.095281202690117388612}},
    {{1.05, 50}, {0.47187880963508379647, 0.27305254492013807104}},
    {{1.05, 0}, {20.58084430203698483, 0}},
    {{0.5, 0}, {-1.4603545088095868129, 0}},
};

}  // namespace

TEST_CASE("zeta frozen values") {
    for (const auto& f : kFrozen) {
        CAPTURE(f.s);
        CHECK(std::abs(zeta(f.s) - f.value) <= 1e-8 * std::max(1.0, std::abs(f.value)));
    }
    CHECK(std::abs(zeta_critical(0) - cd(-1.4603545088095868129, 0)) <= 1e-8);
}

TEST_CASE("zeta critical line properties") {
    CHECK(std::abs(zeta_critical(14.134725141734693790)) <= 1e-4);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1e4);
    for (int i = 0; i < 100; ++i) {
        const double t = u(rng);
        const cd z = zeta_critical(t);
        CHECK(std::abs(zeta_critical(-t) - std::conj(z)) <= 1e-10);
        // Independent evaluation with a larger cutoff and fewer correction terms.
        const auto cutoff = static_cast<std::int64_t>(t) + 200;
        const cd ref = zeta_em({0.5, t}, cutoff, 8);
        CHECK(std::abs(z - ref) <= 1e-8);
    }
    CHECK_THROWS_AS(zeta_critical(2e6), ResourceError);
    CHECK_THROWS_AS(zeta(cd(1, 0)), ArithmeticError);
    CHECK_THROWS_AS(zeta(cd(-0.5, 3)), ArgumentError);
    CHECK_THROWS_AS(zeta_em({0.5, 10}, 20, 16), ArgumentError);
}

TEST_CASE("zeta second moment") {
    const double v50 = zeta_second_moment(50, 0.02);
    CHECK(v50 > 0);
    const double r50 = v50 / (50 * std::log(50.0));
    for (double T : {100.0, 200.0}) {
        const double r = zeta_second_moment(T, 0.02) / (T * std::log(T));
        CHECK(r / r50 <= 2);
        CHECK(r50 / r <= 2);
    }
    const double fine = zeta_second_moment(50, 0.01);
    CHECK(std::abs(fine - v50) / fine < 0.01);
    CHECK(zeta_second_moment(50, 0.02, 3) == doctest::Approx(v50).epsilon(1e-12));
    CHECK_THROWS_AS(zeta_second_moment(50, 0.06), ArgumentError);
    CHECK_THROWS_AS(zeta_second_moment(1, 0.01), ArgumentError);
}

TEST_CASE("zeta growth") {
    const double eps = 0.05;
    const double cap = std::abs(zeta(cd(1 + eps, 0)));
    for (double t : {1e2, 1e3, 1e4, 5e4}) {
        const auto g = zeta_growth_check(1 + eps, t, eps);
        CHECK(g.value <= cap);
    }
    double lo = 1e300, hi = 0;
    for (double t : {1e2, 1e3, 1e4}) {
        const auto g = zeta_growth_sup(0.5, t, eps);
        lo = std::min(lo, g.value / g.bound);
        hi = std::max(hi, g.value / g.bound);
    }
    CHECK(hi / lo <= 5);
    double prev = 0;
    for (double t = 1; t < 1e5; t *= 3) {
        const auto g = zeta_growth_check(0.7, t, eps);
        CHECK(g.bound >= prev);
        prev = g.bound;
    }
    CHECK_THROWS_AS(zeta_growth_check(0.4, 10, eps), ArgumentError);
    CHECK_THROWS_AS(zeta_growth_check(1.2, 10, eps), ArgumentError);
    CHECK_THROWS_AS(zeta_growth_check(0.6, 0.5, eps), ArgumentError);
}

TEST_CASE("dirichlet polynomial mean value") {
    DirichletPoly one{{0, 1}};
    const auto m1 = dpoly_mean_value(one, 100, 0.05);
    CHECK(m1.numeric == doctest::Approx(100).epsilon(1e-12));
    CHECK(m1.main_term == doctest::Approx(100));
    CHECK(m1.N == 1);

    DirichletPoly two{{0, 0, 1, 1}};
    const double T = 300;
    const double L = std::log(1.5);
    const double exact = 2 * T + 2 * std::sin(T * L) / L;
    const auto m2 = dpoly_mean_value(two, T, 0.05);
    CHECK(std::abs(m2.numeric - exact) / exact < 0.005);
    CHECK(m2.main_term == doctest::Approx(2 * T));

    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const int N = std::uniform_int_distribution<int>(1, 100)(rng);
        const double Tr = std::uniform_real_distribution<double>(2, 500)(rng);
        DirichletPoly p;
        p.coeffs.assign(static_cast<std::size_t>(N) + 1, 0);
        std::normal_distribution<double> g;
        for (int n = 1; n <= N; ++n) p.coeffs[static_cast<std::size_t>(n)] = {g(rng), g(rng)};
        const auto m = dpoly_mean_value(p, Tr, 0.05);
        CAPTURE(N);
        CAPTURE(Tr);
        CHECK(std::abs(m.numeric - m.main_term) <= 8 * N * p.energy());
    }
    CHECK_THROWS_AS(dpoly_mean_value(one, 1, 0.01), ArgumentError);
    CHECK_THROWS_AS(dpoly_mean_value(one, 10, 0.1), ArgumentError);
}

TEST_CASE("dirichlet polynomial deviation grows at most linearly") {
    std::vector<double> xs, ys;
    std::mt19937_64 rng(5);
    for (int N : {8, 16, 32, 64, 128}) {
        double worst = 0;
        for (int trial = 0; trial < 4; ++trial) {
            DirichletPoly p;
            p.coeffs.assign(static_cast<std::size_t>(N) + 1, 0);
            std::uniform_real_distribution<double> ph(0, 2 * M_PI);
            for (int n = 1; n <= N; ++n) p.coeffs[static_cast<std::size_t>(n)] = std::polar(1.0, ph(rng));
            const auto m = dpoly_mean_value(p, 200, 0.05);
            worst = std::max(worst, std::abs(m.numeric - m.main_term) / p.energy());
        }
        xs.push_back(std::log(N));
        ys.push_back(std::log(worst));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope <= 1.3);
}
