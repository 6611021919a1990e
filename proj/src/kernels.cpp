#include "esl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "esl/errors.hpp"
#include "esl/numeric.hpp"
#include "esl/sieve.hpp"

namespace esl::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularSin = 1e-9;

// alpha reduced to [-1/2, 1/2]; every kernel here is 1-periodic.
double reduce(double alpha) { return alpha - std::nearbyint(alpha); }

std::complex<double> unit(double x) {
    const double f = x - std::nearbyint(x);
    return std::polar(1.0, 2 * kPi * f);
}

// sin(pi A d) sin(pi B d) / sin^2(pi d) for reduced d, with the Taylor limit near 0.
double sine_ratio(double A, double B, double delta) {
    const double s = std::sin(kPi * delta);
    if (std::abs(s) < kSingularSin) {
        const double x2 = (kPi * delta) * (kPi * delta);
        return A * B * (1 - (A * A + B * B - 2) * x2 / 6);
    }
    return std::sin(kPi * A * delta) * std::sin(kPi * B * delta) / (s * s);
}

std::complex<double> fejer_short_at(std::int64_t N, std::int64_t H, double alpha) {
    const double delta = reduce(alpha);
    const double Hd = static_cast<double>(H);
    return unit(static_cast<double>(N) * delta) * (sine_ratio(Hd, Hd, delta) / Hd);
}

void require_even(std::int64_t N, std::int64_t H, const char* what) {
    if (N < 1 || H < 1) throw ArgumentError(std::string(what) + ": N and H must be positive");
    if ((N & 1) || (H & 1))
        throw ArgumentError(std::string(what) + ": N and H must be even (got N=" +
                            std::to_string(N) + ", H=" + std::to_string(H) + ")");
    if (H > N) throw ArgumentError(std::string(what) + ": requires H <= N");
}

bool admissible(std::int64_t a, std::int64_t modulus, int r) {
    return is_rfree_small(static_cast<std::uint64_t>(std::gcd(a, modulus)), r);
}

double taper(std::int64_t h, std::int64_t H) {
    return 1.0 - static_cast<double>(std::abs(h)) / static_cast<double>(H);
}

// c(n) = (1/m) sum_a e(-n a / m), tabulated by n mod m. Real, since the admissible
// set is closed under a -> m - a.
std::vector<double> ramanujan_table(const Gd& g) {
    const std::int64_t m = g.modulus;
    std::vector<double> table(static_cast<std::size_t>(m));
    for (std::int64_t n = 0; n < m; ++n) {
        long double acc = 0;
        for (auto a : g.residues)
            acc += std::cos(2 * kPi * static_cast<double>((n * a) % m) / static_cast<double>(m));
        table[static_cast<std::size_t>(n)] = static_cast<double>(acc / m);
    }
    return table;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

KernelSpec fejer(std::int64_t N) {
    if (N < 1) throw ArgumentError("Fejer kernel needs N >= 1");
    return Fejer{N};
}

KernelSpec fejer_short(std::int64_t N, std::int64_t H) {
    require_even(N, H, "FejerShort");
    return FejerShort{N, H};
}

KernelSpec fejer_diff(std::int64_t N, std::int64_t K) {
    if (N < 0) throw ArgumentError("FejerDiff needs N >= 0");
    if (K < 1) throw ArgumentError("FejerDiff needs K >= 1");
    return FejerDiff{N, K};
}

KernelSpec q_analog(std::int64_t N, std::int64_t H, std::int64_t q) {
    require_even(N, H, "QAnalog");
    if (q < 1) throw ArgumentError("QAnalog needs q >= 1");
    return QAnalog{N, H, q};
}

std::vector<std::int64_t> rfree_gcd_residues(std::int64_t d, int r) {
    if (d < 1 || r < 2) throw ArgumentError("residues need d >= 1 and r >= 2");
    const auto m = static_cast<std::int64_t>(pow_capped(static_cast<std::uint64_t>(d), r, 1ULL << 40));
    if (m > (std::int64_t{1} << 40)) throw ResourceError("d^r too large");
    std::vector<std::int64_t> out;
    for (std::int64_t a = 1; a <= m; ++a)
        if (admissible(a, m, r)) out.push_back(a);
    return out;
}

KernelSpec gd(std::int64_t N, std::int64_t H, int r, std::int64_t d) {
    require_even(N, H, "Gd");
    if (r < 2) throw ArgumentError("Gd needs r >= 2");
    if (d < 1) throw ArgumentError("Gd needs d >= 1");
    Gd g{N, H, r, d, 0, rfree_gcd_residues(d, r)};
    g.modulus = static_cast<std::int64_t>(pow_capped(static_cast<std::uint64_t>(d), r, 1ULL << 40));
    return g;
}

double scale(const KernelSpec& spec) {
    return std::visit(overloaded{
                          [](const Fejer& k) { return static_cast<double>(k.N); },
                          [](const FejerShort& k) { return static_cast<double>(k.H); },
                          [](const FejerDiff& k) { return static_cast<double>(2 * k.N + k.K); },
                          [](const QAnalog& k) { return static_cast<double>(k.H); },
                          [](const Gd& k) { return static_cast<double>(k.H); },
                      },
                      spec);
}

std::complex<double> eval(const KernelSpec& spec, double alpha) {
    return std::visit(
        overloaded{
            [&](const Fejer& k) -> std::complex<double> {
                const double Nd = static_cast<double>(k.N);
                return sine_ratio(Nd, Nd, reduce(alpha)) / Nd;
            },
            [&](const FejerShort& k) { return fejer_short_at(k.N, k.H, alpha); },
            [&](const FejerDiff& k) -> std::complex<double> {
                const double A = static_cast<double>(2 * k.N + k.K);
                const double B = static_cast<double>(k.K);
                return sine_ratio(A, B, reduce(alpha)) / B;
            },
            [&](const QAnalog& k) {
                std::complex<double> acc = 0;
                for (std::int64_t a = 1; a <= k.q; ++a)
                    acc += fejer_short_at(k.N, k.H,
                                          alpha - static_cast<double>(a) / static_cast<double>(k.q));
                return acc / static_cast<double>(k.q);
            },
            [&](const Gd& k) {
                std::complex<double> acc = 0;
                const double m = static_cast<double>(k.modulus);
                for (auto a : k.residues)
                    acc += fejer_short_at(k.N, k.H, alpha - static_cast<double>(a) / m);
                return acc / m;
            },
        },
        spec);
}

Coefficients coefficients(const KernelSpec& spec) {
    return std::visit(
        overloaded{
            [](const Fejer& k) {
                Coefficients c{0, k.N, {}};
                for (std::int64_t h = -k.N; h <= k.N; ++h) c.values.emplace_back(taper(h, k.N));
                return c;
            },
            [](const FejerShort& k) {
                Coefficients c{k.N, k.H, {}};
                for (std::int64_t h = -k.H; h <= k.H; ++h) c.values.emplace_back(taper(h, k.H));
                return c;
            },
            [](const FejerDiff& k) {
                const std::int64_t W = k.N + k.K;
                Coefficients c{0, W, {}};
                for (std::int64_t n = -W; n <= W; ++n)
                    c.values.emplace_back(std::min(
                        1.0, static_cast<double>(W - std::abs(n)) / static_cast<double>(k.K)));
                return c;
            },
            [](const QAnalog& k) {
                Coefficients c{k.N, k.H, {}};
                for (std::int64_t h = -k.H; h <= k.H; ++h)
                    c.values.emplace_back((k.N + h) % k.q == 0 ? taper(h, k.H) : 0.0);
                return c;
            },
            [](const Gd& k) {
                const auto table = ramanujan_table(k);
                Coefficients c{k.N, k.H, {}};
                for (std::int64_t h = -k.H; h <= k.H; ++h) {
                    const auto n = k.N + h;
                    c.values.emplace_back(taper(h, k.H) *
                                          table[static_cast<std::size_t>(n % k.modulus)]);
                }
                return c;
            },
        },
        spec);
}

std::complex<double> eval_direct(const KernelSpec& spec, double alpha, std::size_t max_terms) {
    const std::int64_t hw = std::visit(
        overloaded{
            [](const Fejer& k) { return k.N; },
            [](const FejerDiff& k) { return k.N + k.K; },
            [](const auto& k) { return k.H; },
        },
        spec);
    if (static_cast<std::size_t>(2 * hw + 1) > max_terms)
        throw ResourceError("direct kernel sum has " + std::to_string(2 * hw + 1) +
                            " terms, above the bound " + std::to_string(max_terms));
    const Coefficients c = coefficients(spec);
    std::complex<double> acc = 0;
    for (std::int64_t h = -c.halfwidth; h <= c.halfwidth; ++h) {
        const auto coeff = c.values[static_cast<std::size_t>(h + c.halfwidth)];
        if (coeff == 0.0) continue;
        const double n = static_cast<double>(c.center + h);
        acc += coeff * unit(n * alpha);
    }
    return acc;
}

double b_coeff(std::int64_t d, double y, int r) {
    if (d < 1) throw ArgumentError("b_coeff needs d >= 1");
    if (static_cast<double>(d) > y) throw ArgumentError("b_coeff needs d <= y");
    auto mmax = static_cast<std::int64_t>(std::floor(y / static_cast<double>(d)));
    while (static_cast<double>((mmax + 1) * d) <= y) ++mmax;
    while (mmax > 1 && static_cast<double>(mmax * d) > y) --mmax;
    const MuSegment mu = sieve_mobius(Window::make(1, static_cast<std::uint64_t>(mmax)));
    long double acc = 0;
    for (std::int64_t m = 1; m <= mmax; ++m) {
        const int s = mu.at(static_cast<std::uint64_t>(m));
        if (s == 0 || std::gcd(m, d) != 1) continue;
        acc += s / std::pow(static_cast<long double>(m), r);
    }
    return static_cast<double>(acc);
}

double TorusArc::center() const {
    const std::int64_t n = ((num % den) + den) % den;
    return static_cast<double>(n) / static_cast<double>(den);
}

bool TorusArc::contains(double alpha) const {
    return dist_to_int(alpha - center()) <= half_width() * (1 + 1e-12);
}

double IntervalSet::measure() const {
    double total = 0;
    for (const auto& a : arcs) total += 2 * a.half_width();
    return total;
}

bool IntervalSet::contains(double alpha) const {
    return std::any_of(arcs.begin(), arcs.end(), [&](const TorusArc& a) { return a.contains(alpha); });
}

bool IntervalSet::pairwise_disjoint() const {
    using i128 = __int128;
    if (arcs.empty()) return true;
    struct Norm {
        i128 n, d, w;
    };
    std::vector<Norm> v;
    v.reserve(arcs.size());
    for (const auto& a : arcs) {
        if (a.den < 1 || a.hw_den < 1) return false;
        v.push_back({((a.num % a.den) + a.den) % a.den, a.den, a.hw_den});
    }
    std::sort(v.begin(), v.end(), [](const Norm& x, const Norm& y) { return x.n * y.d < y.n * x.d; });
    // gap (n2/d2 - n1/d1) must be at least 1/w1 + 1/w2
    auto separated = [](i128 n1, i128 d1, i128 w1, i128 n2, i128 d2, i128 w2) {
        return (n2 * d1 - n1 * d2) * w1 * w2 >= (w1 + w2) * d1 * d2;
    };
    if (v.size() == 1) return v[0].w >= 2;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!separated(v[i].n, v[i].d, v[i].w, v[i + 1].n, v[i + 1].d, v[i + 1].w)) return false;
    const auto& last = v.back();
    const auto& first = v.front();
    return separated(last.n, last.d, last.w, first.n + first.d, first.d, first.w);
}

IntervalSet x_set(std::int64_t d, int r, std::int64_t H) {
    if (H < 1) throw ArgumentError("x_set needs H >= 1");
    const auto m = pow_capped(static_cast<std::uint64_t>(d), r, 1ULL << 40);
    if (m > static_cast<std::uint64_t>(2 * H))
        throw ArgumentError("x_set needs d^r <= 2H");
    IntervalSet out;
    for (auto a : rfree_gcd_residues(d, r))
        out.arcs.push_back({a, static_cast<std::int64_t>(m), 2 * H});
    std::sort(out.arcs.begin(), out.arcs.end(),
              [](const TorusArc& x, const TorusArc& y) { return x.center() < y.center(); });
    return out;
}

double x_set_measure_formula(std::int64_t d, int r, std::int64_t H) {
    double value = std::pow(static_cast<double>(d), r) / static_cast<double>(H);
    std::int64_t rest = d;
    for (std::int64_t p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        value *= 1 - std::pow(static_cast<double>(p), -r);
        while (rest % p == 0) rest /= p;
    }
    if (rest > 1) value *= 1 - std::pow(static_cast<double>(rest), -r);
    return value;
}

GdFamily::GdFamily(std::int64_t N, std::int64_t H, int r, std::int64_t max_d) : N_(N), H_(H), r_(r) {
    for (std::int64_t d = 1; d <= max_d; ++d) members_.push_back(std::get<Gd>(gd(N, H, r, d)));
}

void GdFamily::eval_all(double alpha, std::vector<std::complex<double>>& out) const {
    out.assign(members_.size(), {});
    for (std::size_t i = 0; i < members_.size(); ++i) out[i] = eval(members_[i], alpha);
}

bool y_membership_from_values(std::int64_t d, int r, std::int64_t H,
                              const std::vector<double>& abs_values) {
    long double others = 0;
    for (std::size_t i = 0; i < abs_values.size(); ++i)
        if (static_cast<std::int64_t>(i) + 1 != d) others += abs_values[i];
    return others <= static_cast<long double>(H) / (20.0L * std::pow(static_cast<long double>(d), r));
}

bool y_membership(double alpha, std::int64_t d, const MembershipParams& params) {
    const auto m = static_cast<std::int64_t>(
        pow_capped(static_cast<std::uint64_t>(d), params.r, 1ULL << 40));
    auto a = static_cast<std::int64_t>(std::nearbyint(alpha * static_cast<double>(m)));
    a = ((a % m) + m) % m;
    if (a == 0) a = m;
    const TorusArc arc{a, m, 2 * params.H};
    if (!admissible(a, m, params.r) || !arc.contains(alpha))
        throw ArgumentError("alpha is not in X_d");
    const auto max_d = static_cast<std::int64_t>(std::floor(params.y));
    std::vector<double> abs_values;
    for (std::int64_t dp = 1; dp <= max_d; ++dp)
        abs_values.push_back(dp == d ? 0.0 : std::abs(eval(gd(params.N, params.H, params.r, dp), alpha)));
    return y_membership_from_values(d, params.r, params.H, abs_values);
}

}  // namespace esl::kernels
