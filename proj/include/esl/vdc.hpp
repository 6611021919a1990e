#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace esl::vdc {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& x);
// Accepts "a/b" or an integer. Throws ArgumentError on malformed input.
Rational parse_rational(std::string_view text);

struct ExponentPair {
    Rational p;
    Rational q;

    // Classical region: 0 <= p <= 1/2 <= q <= 1, p + q <= 1.
    static ExponentPair make(Rational p, Rational q);
    // Only 0 <= p, q <= 1.
    static ExponentPair make_relaxed(Rational p, Rational q);

    bool is_classical() const;
    // 1 + 2q - 4p >= 0
    bool corput_constraint() const;

    bool operator==(const ExponentPair&) const = default;
};

// (2/7, 1/14), stored verbatim with the relaxed check.
ExponentPair watt_pair();

std::string to_string(const ExponentPair& pair);
// "p,q" with each part a rational.
ExponentPair parse_pair(std::string_view text);

ExponentPair process_A(const ExponentPair& pair);
// Throws ArgumentError when q < 1/2.
ExponentPair process_B(const ExponentPair& pair);

// {x} - 1/2
double psi(double x);

// f(x) = N / (x^2 c)
struct InverseSquare {
    std::int64_t N;
    std::int64_t c;
};
// f(x) = (N / (x c))^{1/2}
struct SqrtInverse {
    std::int64_t N;
    std::int64_t c;
};

struct PsiSumSpec {
    std::variant<InverseSquare, SqrtInverse> shape;
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::int64_t max_terms = 100'000'000;
};

double psi_term(const PsiSumSpec& spec, std::int64_t m);
// Direct sum over m in [a, b]. ResourceError when b - a + 1 > max_terms.
double psi_sum(const PsiSumSpec& spec);
// max |f| on [a, b] (f is decreasing, so f(a)).
double psi_sum_F(const PsiSumSpec& spec);

struct VdcExponents {
    Rational F;  // p / (p + 1)
    Rational M;  // (1 + 2q) / (2(p + 1)), before epsilon
};
VdcExponents vdc_exponents(const ExponentPair& pair);

// F^{p/(p+1)} M^{(1+2q)/(2(p+1)) + eps}. ArgumentError unless F >= M >= 1.
double vdc_bound(const ExponentPair& pair, double F, double M, double eps);

struct HyperbolaSplit {
    std::int64_t sigma1 = 0;
    std::int64_t sigma2 = 0;
    std::int64_t direct = 0;
    std::int64_t cut = 0;  // largest u with u^3 d1^2 d2^2 <= N
};

// Counts (h, a) with N - K < h^2 d1^2 d2^2 a <= N and y/d1 < h <= z/d2.
// sigma1 takes h <= cut; sigma2 takes a <= cut with h > cut, so boundary pairs go to sigma1.
HyperbolaSplit hyperbola_split(std::int64_t N, std::int64_t K, std::int64_t d1, std::int64_t d2, double y,
                               double z);

struct Balance {
    Rational D_N;
    Rational D_y;
    Rational result_N;
    Rational result_y;
    Rational e1;
    Rational e2;
};

// Solves N^{e1} D^{e2} = N^{1/2} y^{-1/2} D^{-1/2} for D = N^a y^b.
// ArithmeticError when e2 = -1/2.
Balance balance_exponents(const ExponentPair& pair);

}  // namespace esl::vdc
