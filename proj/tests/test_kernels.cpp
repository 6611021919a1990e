#include <doctest.h>

#include <random>

#include "esl/errors.hpp"
#include "esl/kernels.hpp"
#include "esl/numeric.hpp"
#include "oracles.hpp"

using namespace esl;
using namespace esl::kernels;

namespace {

std::vector<KernelSpec> sample_specs() {
    return {fejer(40), fejer_short(1000, 64), fejer_diff(50, 12), q_analog(1000, 64, 4), gd(1000, 64, 2, 3),
            gd(10000, 256, 3, 2)};
}

}  // namespace

TEST_CASE("closed forms agree with direct sums") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1, 1);
    for (const auto& spec : sample_specs()) {
        const double s = scale(spec);
        for (int i = 0; i < 200; ++i) {
            const double a = unif(rng);
            REQUIRE(std::abs(eval(spec, a) - eval_direct(spec, a)) <= 1e-9 * s);
        }
        for (double a : {0.0, 1.0, -2.0, 1e-12, 0.5, 1.0 / 3}) CHECK(std::abs(eval(spec, a) - eval_direct(spec, a)) <= 1e-9 * s);
    }
}

TEST_CASE("kernel values at the origin") {
    CHECK(eval(fejer(10), 0).real() == doctest::Approx(10));
    CHECK(std::abs(eval(fejer_short(100, 10), 0)) == doctest::Approx(10));
    CHECK(eval(fejer_diff(10, 4), 0).real() == doctest::Approx(24));
    CHECK(std::abs(eval(fejer_short(100, 10), 1e-13)) == doctest::Approx(10));
}

TEST_CASE("fejer diff matches the difference of two squared Dirichlet kernels") {
    const std::int64_t N = 30, K = 7;
    for (double a : {0.013, 0.21, 0.377, 0.49}) {
        const double s = std::sin(std::numbers::pi * a);
        const double want = (std::pow(std::sin(std::numbers::pi * (N + K) * a), 2) -
                             std::pow(std::sin(std::numbers::pi * N * a), 2)) /
                            (K * s * s);
        CHECK(eval(fejer_diff(N, K), a).real() == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("envelopes") {
    const std::int64_t N = 500, H = 100, K = 20;
    for (int i = 1; i < 2000; ++i) {
        const double a = i / 4000.0;
        const double d = dist_to_int(a);
        CHECK(eval(fejer(N), a).real() <= 2 * std::min<double>(N, 1 / (N * d * d)));
        CHECK(std::abs(eval(fejer_short(N, H), a)) <= 2 * std::min<double>(H, 1 / (H * d * d)));
        CHECK(std::abs(eval(fejer_diff(N, K), a)) <= 2 * std::min({double(N + K), 1 / d, 1 / (K * d * d)}));
    }
}

// (sin x / x)^2 >= 4 / pi^2 on |x| <= pi/2.
TEST_CASE("short Fejer kernel is large near the origin") {
    const std::int64_t H = 512;
    for (int i = -50; i <= 50; ++i) {
        const double b = i / (100.0 * H);
        CHECK(std::abs(eval(fejer_short(4096, H), b)) >= 4 * H / (std::numbers::pi * std::numbers::pi));
    }
}

TEST_CASE("coefficients") {
    const auto c = coefficients(fejer_short(100, 4));
    CHECK(c.center == 100);
    CHECK(c.values.size() == 9);
    CHECK(c.values[0].real() == 0);
    CHECK(c.values[4].real() == 1);
    CHECK(c.values[5].real() == 0.75);

    // q-analog keeps n = 0 mod q
    const auto q = coefficients(q_analog(100, 10, 3));
    for (std::int64_t h = -10; h <= 10; ++h)
        CHECK((q.values[h + 10].real() != 0) == ((100 + h) % 3 == 0 && std::abs(h) < 10));

    // G_1 = F_H
    const auto g1 = coefficients(gd(100, 10, 2, 1));
    const auto f = coefficients(fejer_short(100, 10));
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(g1.values[i] - f.values[i]) < 1e-15);
}

TEST_CASE("G_d coefficients by brute force") {
    const auto spec = gd(200, 20, 2, 6);
    const auto& g = std::get<Gd>(spec);
    const auto c = coefficients(spec);
    for (std::int64_t h = -20; h <= 20; ++h) {
        std::complex<double> acc = 0;
        for (auto a : g.residues) acc += oracle::e(-static_cast<double>((200 + h) * a) / g.modulus);
        acc *= (1 - std::abs(h) / 20.0) / g.modulus;
        CHECK(std::abs(c.values[h + 20] - acc) < 1e-12);
    }
}

TEST_CASE("parity and argument validation") {
    CHECK_THROWS_AS(fejer_short(101, 10), ArgumentError);
    CHECK_THROWS_AS(fejer_short(100, 11), ArgumentError);
    CHECK_THROWS_AS(fejer_short(10, 12), ArgumentError);
    CHECK_THROWS_AS(q_analog(100, 10, 0), ArgumentError);
    CHECK_THROWS_AS(gd(100, 10, 1, 2), ArgumentError);
    CHECK_THROWS_AS(fejer_diff(10, 0), ArgumentError);
    CHECK(round_up_even(7) == 8);
    CHECK(round_up_even(8) == 8);
    CHECK_THROWS_AS(eval_direct(fejer(1 << 20), 0.1, 1000), ResourceError);
}

TEST_CASE("admissible residues") {
    CHECK(rfree_gcd_residues(1, 2) == std::vector<std::int64_t>{1});
    // d = 2, r = 2: gcd(a, 4) squarefree excludes a = 4
    CHECK(rfree_gcd_residues(2, 2) == std::vector<std::int64_t>{1, 2, 3});
    for (std::int64_t d : {3, 6, 10, 12}) {
        const auto res = rfree_gcd_residues(d, 2);
        const double want = x_set_measure_formula(d, 2, 1);
        CHECK(static_cast<double>(res.size()) == doctest::Approx(want));
    }
}

TEST_CASE("b_d range") {
    for (int r : {2, 3}) {
        for (double y : {1.0, 5.5, 10.08, 40.0}) {
            for (std::int64_t d = 1; d <= static_cast<std::int64_t>(y); ++d) {
                const double b = b_coeff(d, y, r);
                CHECK(b >= 1.0 / 3);
                CHECK(b <= 5.0 / 3);
            }
        }
    }
    CHECK(b_coeff(1, 1.5, 2) == 1.0);
    CHECK(b_coeff(1, 2.0, 2) == doctest::Approx(0.75));
    CHECK(b_coeff(2, 6.0, 2) == doctest::Approx(1 - 1.0 / 9));
    CHECK_THROWS_AS(b_coeff(5, 4.0, 2), ArgumentError);
}

TEST_CASE("X_d sets") {
    const auto X = x_set(3, 2, 1024);
    CHECK(X.size() == 8);
    CHECK(X.pairwise_disjoint());
    CHECK(X.measure() == doctest::Approx(8.0 / 1024));
    CHECK(X.contains(1.0 / 9 + 0.4 / 1024));
    CHECK_FALSE(X.contains(1.0 / 9 + 0.6 / 1024));
    CHECK_FALSE(X.contains(0.0));
    CHECK_THROWS_AS(x_set(40, 2, 100), ArgumentError);

    IntervalSet touching{{TorusArc{0, 2, 4}, TorusArc{1, 2, 4}}};
    CHECK(touching.pairwise_disjoint());
    IntervalSet overlapping{{TorusArc{0, 2, 3}, TorusArc{1, 2, 3}}};
    CHECK_FALSE(overlapping.pairwise_disjoint());
}

TEST_CASE("G_d family and Y_d membership") {
    const GdFamily fam(10000, 1024, 2, 10);
    std::vector<std::complex<double>> values;
    fam.eval_all(0.3, values);
    REQUIRE(values.size() == 10);
    for (std::int64_t d = 1; d <= 10; ++d) CHECK(std::abs(values[d - 1] - eval(fam.member(d), 0.3)) < 1e-12);

    const MembershipParams params{10000, 1024, 2, 10.08};
    CHECK(y_membership(0.0, 1, params));
    CHECK_THROWS_AS(y_membership(0.25, 1, params), ArgumentError);
}
