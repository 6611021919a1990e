#include "esl/vdc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "esl/errors.hpp"
#include "esl/numeric.hpp"

namespace esl::vdc {

namespace {

const Rational kZero{0};
const Rational kHalf{1, 2};
const Rational kOne{1};

double to_double(const Rational& x) {
    return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw ArgumentError("malformed rational '" + std::string(whole) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// floor(x) for a positive double, as a signed integer count.
std::int64_t floor_pos(double x) { return x <= 0 ? 0 : static_cast<std::int64_t>(std::floor(x)); }

}  // namespace

std::string to_string(const Rational& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

Rational parse_rational(std::string_view text) {
    const auto t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos) return Rational{parse_int(t, text)};
    const auto num = parse_int(trim(t.substr(0, slash)), text);
    const auto den = parse_int(trim(t.substr(slash + 1)), text);
    if (den == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
    return Rational{num, den};
}

ExponentPair ExponentPair::make(Rational p, Rational q) {
    ExponentPair pair{p, q};
    if (!pair.is_classical())
        throw ArgumentError("(" + to_string(p) + ", " + to_string(q) +
                            ") is outside 0 <= p <= 1/2 <= q <= 1, p + q <= 1");
    return pair;
}

ExponentPair ExponentPair::make_relaxed(Rational p, Rational q) {
    if (p < kZero || p > kOne || q < kZero || q > kOne)
        throw ArgumentError("(" + to_string(p) + ", " + to_string(q) + ") is outside 0 <= p, q <= 1");
    return ExponentPair{p, q};
}

bool ExponentPair::is_classical() const {
    return p >= kZero && p <= kHalf && q >= kHalf && q <= kOne && p + q <= kOne;
}

bool ExponentPair::corput_constraint() const { return kOne + 2 * q - 4 * p >= kZero; }

ExponentPair watt_pair() { return ExponentPair::make_relaxed(Rational{2, 7}, Rational{1, 14}); }

std::string to_string(const ExponentPair& pair) { return to_string(pair.p) + "," + to_string(pair.q); }

ExponentPair parse_pair(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw ArgumentError("exponent pair must be 'p,q', got '" + std::string(text) + "'");
    return ExponentPair::make_relaxed(parse_rational(text.substr(0, comma)),
                                      parse_rational(text.substr(comma + 1)));
}

ExponentPair process_A(const ExponentPair& pair) {
    const Rational den = 2 * pair.p + 2;
    return ExponentPair{pair.p / den, kHalf + pair.q / den};
}

ExponentPair process_B(const ExponentPair& pair) {
    if (pair.q < kHalf) throw ArgumentError("B process needs q >= 1/2, got q = " + to_string(pair.q));
    return ExponentPair{pair.q - kHalf, pair.p + kHalf};
}

double psi(double x) { return x - std::floor(x) - 0.5; }

double psi_term(const PsiSumSpec& spec, std::int64_t m) {
    if (const auto* s = std::get_if<InverseSquare>(&spec.shape)) {
        // N / (m^2 c) with the fractional part taken in integers.
        const auto den = static_cast<__int128>(m) * m * s->c;
        const auto rem = static_cast<__int128>(s->N) % den;
        return static_cast<double>(static_cast<long double>(rem) / static_cast<long double>(den)) - 0.5;
    }
    const auto& s = std::get<SqrtInverse>(spec.shape);
    const auto den = static_cast<std::int64_t>(m) * s.c;
    const std::int64_t quot = s.N / den;
    if (s.N % den == 0) {
        const auto root = isqrt(static_cast<std::uint64_t>(quot));
        if (root * root == static_cast<std::uint64_t>(quot)) return -0.5;
    }
    const long double x = std::sqrt(static_cast<long double>(s.N) / static_cast<long double>(den));
    // floor(x) = isqrt(floor(N / den)) exactly.
    const auto fl = static_cast<long double>(isqrt(static_cast<std::uint64_t>(quot)));
    return static_cast<double>(x - fl) - 0.5;
}

double psi_sum(const PsiSumSpec& spec) {
    if (spec.a < 1 || spec.b < spec.a) throw ArgumentError("psi sum range needs 1 <= a <= b");
    const bool positive = std::visit([](const auto& s) { return s.N > 0 && s.c > 0; }, spec.shape);
    if (!positive) throw ArgumentError("psi sum parameters must be positive");
    if (spec.b - spec.a + 1 > spec.max_terms)
        throw ResourceError("psi sum over " + std::to_string(spec.b - spec.a + 1) + " terms exceeds max_terms=" +
                            std::to_string(spec.max_terms));
    long double acc = 0;
    for (std::int64_t m = spec.a; m <= spec.b; ++m) acc += psi_term(spec, m);
    return static_cast<double>(acc);
}

double psi_sum_F(const PsiSumSpec& spec) {
    const auto a = static_cast<double>(spec.a);
    if (const auto* s = std::get_if<InverseSquare>(&spec.shape))
        return static_cast<double>(s->N) / (a * a * static_cast<double>(s->c));
    const auto& s = std::get<SqrtInverse>(spec.shape);
    return std::sqrt(static_cast<double>(s.N) / (a * static_cast<double>(s.c)));
}

VdcExponents vdc_exponents(const ExponentPair& pair) {
    return {pair.p / (pair.p + 1), (1 + 2 * pair.q) / (2 * (pair.p + 1))};
}

double vdc_bound(const ExponentPair& pair, double F, double M, double eps) {
    if (!(M >= 1)) throw ArgumentError("vdc bound needs M >= 1");
    if (!(F >= M)) throw ArgumentError("vdc bound needs F >= M");
    const auto e = vdc_exponents(pair);
    return std::pow(F, to_double(e.F)) * std::pow(M, to_double(e.M) + eps);
}

HyperbolaSplit hyperbola_split(std::int64_t N, std::int64_t K, std::int64_t d1, std::int64_t d2, double y,
                               double z) {
    if (d1 < 1 || d2 < 1) throw ArgumentError("d1, d2 must be >= 1");
    if (d1 > d2) throw ArgumentError("hyperbola split needs d1 <= d2");
    if (K < 1 || K >= N) throw ArgumentError("hyperbola split needs N > K >= 1");

    HyperbolaSplit out;
    const auto D = static_cast<std::uint64_t>(d1 * d1) * static_cast<std::uint64_t>(d2 * d2);
    const auto n = static_cast<std::uint64_t>(N);
    const auto lo = static_cast<std::uint64_t>(N - K);
    out.cut = static_cast<std::int64_t>(iroot(n / D, 3));

    const std::int64_t h_min = floor_pos(y / static_cast<double>(d1)) + 1;
    const std::int64_t h_max = floor_pos(z / static_cast<double>(d2));
    if (h_min > h_max) return out;

    auto count_a = [&](std::int64_t h) {
        const auto m = static_cast<std::uint64_t>(h) * static_cast<std::uint64_t>(h) * D;
        return static_cast<std::int64_t>(n / m - lo / m);
    };
    for (std::int64_t h = h_min; h <= h_max; ++h) {
        const auto m = static_cast<std::uint64_t>(h) * static_cast<std::uint64_t>(h) * D;
        if (m > n) break;
        const auto c = count_a(h);
        out.direct += c;
        if (h <= out.cut) out.sigma1 += c;
    }
    for (std::int64_t a = 1; a <= out.cut; ++a) {
        const auto m = static_cast<std::uint64_t>(a) * D;
        const auto top = static_cast<std::int64_t>(isqrt(n / m));
        const auto bottom = static_cast<std::int64_t>(isqrt(lo / m));
        const auto first = std::max({bottom + 1, h_min, out.cut + 1});
        const auto last = std::min(top, h_max);
        if (last >= first) out.sigma2 += last - first + 1;
    }
    return out;
}

Balance balance_exponents(const ExponentPair& pair) {
    Balance b;
    const Rational pq = pair.p + pair.q;
    b.e1 = (2 * pq + 1) / (6 * (pair.p + 1));
    b.e2 = 2 - (4 * pq + 2) / (3 * (pair.p + 1));
    const Rational denom = b.e2 + kHalf;
    if (denom == kZero) throw ArithmeticError("e2 = -1/2: the balance equation has no unique solution");
    b.D_N = (kHalf - b.e1) / denom;
    b.D_y = -kHalf / denom;
    b.result_N = b.e1 + b.e2 * b.D_N;
    b.result_y = b.e2 * b.D_y;
    return b;
}

}  // namespace esl::vdc
