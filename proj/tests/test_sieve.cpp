#include <doctest.h>

#include <random>

#include "esl/errors.hpp"
#include "esl/numeric.hpp"
#include "esl/sieve.hpp"
#include "oracles.hpp"

using namespace esl;

TEST_CASE("integer roots") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(99) == 9);
    CHECK(isqrt(100) == 10);
    CHECK(isqrt(UINT64_MAX) == 4294967295ULL);
    CHECK(iroot(1000, 3) == 10);
    CHECK(iroot(999, 3) == 9);
    CHECK(iroot(1ULL << 62, 2) == 1ULL << 31);
    CHECK(real_root(32768, 3) == 32.0);
    CHECK(pow_capped(10, 5, 1000) == 1001);
}

TEST_CASE("window validation") {
    CHECK_THROWS_AS(Window::make(0, 5), ArgumentError);
    CHECK_THROWS_AS(Window::make(6, 5), ArgumentError);
    CHECK(Window::make(3, 5).size() == 3);
}

TEST_CASE("mobius on [1, 10]") {
    const auto seg = sieve_mobius(Window::make(1, 10));
    const std::vector<int> want{1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (std::uint64_t n = 1; n <= 10; ++n) CHECK(seg.at(n) == want[n - 1]);
}

TEST_CASE("mobius matches trial division up to 2e5") {
    SieveOptions opts;
    opts.segment_size = 4096;
    const auto seg = sieve_mobius(Window::make(1, 200000), opts);
    for (std::uint64_t n = 1; n <= 200000; ++n) REQUIRE(seg.at(n) == oracle::mobius(n));
}

TEST_CASE("mobius near 1e12 and worker independence") {
    const std::uint64_t lo = 1'000'000'000'000ULL - 2000;
    const auto w = Window::make(lo, lo + 1999);
    SieveOptions one, four;
    one.segment_size = 300;
    four.segment_size = 300;
    four.workers = 4;
    const auto a = sieve_mobius(w, one);
    const auto b = sieve_mobius(w, four);
    CHECK(a.values == b.values);
    for (std::uint64_t n = w.lo; n <= w.hi; n += 37) CHECK(a.at(n) == oracle::mobius(n));
}

TEST_CASE("sieve errors") {
    SieveOptions opts;
    CHECK_THROWS_AS(sieve_mobius(Window::make(1, opts.max_hi + 1), opts), ArgumentError);
    opts.memory_budget = 100;
    CHECK_THROWS_AS(sieve_mobius(Window::make(1, 1000), opts), ResourceError);
    CHECK_THROWS_AS(sieve_rfree(Window::make(1, 10), 1), ArgumentError);
    CHECK_THROWS_AS(sieve_cn(Window::make(1, 10), 2, 0.5, 3), ArgumentError);
    CHECK_THROWS_AS(sieve_cn(Window::make(1, 10), 2, 3, 3), ArgumentError);
}

TEST_CASE("r-free sieve against trial division") {
    for (int r : {2, 3, 4}) {
        const auto seg = sieve_rfree(Window::make(1, 50000), r);
        for (std::uint64_t n = 1; n <= 50000; ++n) REQUIRE(seg.at(n) == oracle::rfree(n, r));
    }
    const auto sq = sieve_rfree(Window::make(1, 100), 2);
    CHECK(sq.bits.count() == 61);
}

TEST_CASE("squarefree count matches the mobius-squared sum") {
    const auto w = Window::make(1'000'000, 1'010'000);
    const auto mu = sieve_mobius(w);
    const auto sq = sieve_rfree(w, 2);
    std::size_t mu2 = 0;
    for (auto v : mu.values) mu2 += v != 0;
    CHECK(mu2 == sq.bits.count());
}

TEST_CASE("c_n(y,z) against divisor enumeration") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        const int r = 2 + trial % 2;
        const double y = 1 + std::uniform_real_distribution<double>(0, 10)(rng);
        const double z = y + std::uniform_real_distribution<double>(0.5, 60)(rng);
        const std::uint64_t lo = std::uniform_int_distribution<std::uint64_t>(1, 90000)(rng);
        const auto w = Window::make(lo, lo + 3000);
        const auto seg = sieve_cn(w, r, y, z);
        for (auto n = w.lo; n <= w.hi; ++n) REQUIRE(seg.at(n) == oracle::cn(n, r, y, z));
    }
}

TEST_CASE("c_n summed over every d recovers the r-free indicator") {
    const auto w = Window::make(1, 20000);
    const auto cn = sieve_cn(w, 2, 1, 200);
    const auto sq = sieve_rfree(w, 2);
    for (auto n = w.lo; n <= w.hi; ++n) REQUIRE(1 + cn.at(n) == (sq.at(n) ? 1 : 0));
}

TEST_CASE("sum of c_n squared") {
    std::uint64_t brute = 0;
    for (std::uint64_t n = 90001; n <= 100000; ++n) {
        const auto c = oracle::cn(n, 2, 5.5, 316.2);
        brute += static_cast<std::uint64_t>(c * c);
    }
    CHECK(sum_cn_squared(100000, 10000, 2, 5.5, 316.2) == brute);
    CHECK_THROWS_AS(sum_cn_squared(100, 100, 2, 2, 3), ArgumentError);
}

TEST_CASE("representation count against a quadruple loop") {
    const std::uint64_t N = 5000, K = 700;
    const double y = 2.5, z = 40;
    std::uint64_t brute = 0;
    for (std::uint64_t n = N - K + 1; n <= N; ++n)
        for (std::uint64_t h = 1; h * h <= n; ++h)
            for (std::uint64_t d1 = 1; h * h * d1 * d1 <= n; ++d1)
                for (std::uint64_t d2 = 1; h * h * d1 * d1 * d2 * d2 <= n; ++d2) {
                    const auto m = h * h * d1 * d1 * d2 * d2;
                    const double hd1 = double(h * d1), hd2 = double(h * d2);
                    if (n % m == 0 && hd1 > y && hd1 <= z && hd2 > y && hd2 <= z) ++brute;
                }
    CHECK(count_representations(N, K, y, z) == brute);
    CHECK(count_representations(N, K, 5, 5) == 0);
}

TEST_CASE("representation count bounds the c_n moment") {
    CHECK(sum_cn_squared(20000, 3000, 2, 3, 141) <= count_representations(20000, 3000, 3, 141));
}
