#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace esl::kernels {

// sum_{|n| <= N} (1 - |n|/N) e(n a) = sin^2(pi N a) / (N sin^2(pi a)).
struct Fejer {
    std::int64_t N;
};

// e(N a) times the order-H Fejer kernel: sum_{|n-N| <= H} (1 - |n-N|/H) e(n a).
struct FejerShort {
    std::int64_t N;
    std::int64_t H;
};

// sum_{|n| <= N+K} min{1, (N+K-|n|)/K} e(n a).
struct FejerDiff {
    std::int64_t N;
    std::int64_t K;
};

// (1/q) sum_{a=1}^{q} F_H(alpha - a/q): the progression n = 0 mod q of F_H.
struct QAnalog {
    std::int64_t N;
    std::int64_t H;
    std::int64_t q;
};

// (1/d^r) sum over 1 <= a <= d^r with gcd(a, d^r) r-free of F_H(alpha - a/d^r).
struct Gd {
    std::int64_t N;
    std::int64_t H;
    int r;
    std::int64_t d;
    std::int64_t modulus;                // d^r
    std::vector<std::int64_t> residues;  // admissible a, ascending
};

using KernelSpec = std::variant<Fejer, FejerShort, FejerDiff, QAnalog, Gd>;

// Validating constructors. FejerShort, QAnalog and Gd need N and H even and H <= N.
KernelSpec fejer(std::int64_t N);
KernelSpec fejer_short(std::int64_t N, std::int64_t H);
KernelSpec fejer_diff(std::int64_t N, std::int64_t K);
KernelSpec q_analog(std::int64_t N, std::int64_t H, std::int64_t q);
KernelSpec gd(std::int64_t N, std::int64_t H, int r, std::int64_t d);

// Rounds odd values up to the next even integer.
inline std::int64_t round_up_even(std::int64_t v) { return v + (v & 1); }

// Admissible residues 1 <= a <= d^r with gcd(a, d^r) r-free.
std::vector<std::int64_t> rfree_gcd_residues(std::int64_t d, int r);

// Natural magnitude of the kernel: its value at alpha = 0 (N, H, 2N+K, ...).
double scale(const KernelSpec& spec);

// Closed form; removable singularities at integer alpha return the analytic limit.
std::complex<double> eval(const KernelSpec& spec, double alpha);

// Literal summation of the defining exponential sum. Throws ResourceError when the
// number of terms exceeds max_terms.
std::complex<double> eval_direct(const KernelSpec& spec, double alpha,
                                 std::size_t max_terms = std::size_t{1} << 24);

// Coefficient of e(n alpha) in the kernel, for every n in [center - halfwidth, center + halfwidth].
struct Coefficients {
    std::int64_t center = 0;
    std::int64_t halfwidth = 0;
    std::vector<std::complex<double>> values;  // index h + halfwidth
};
Coefficients coefficients(const KernelSpec& spec);

// b_d = sum_{m <= y/d, gcd(m,d) = 1} mu(m) / m^r.
double b_coeff(std::int64_t d, double y, int r);

// Closed arc of the torus centred at num/den with half-width 1/hw_den.
struct TorusArc {
    std::int64_t num = 0;
    std::int64_t den = 1;
    std::int64_t hw_den = 2;

    double center() const;  // in [0, 1)
    double half_width() const { return 1.0 / static_cast<double>(hw_den); }
    bool contains(double alpha) const;
};

struct IntervalSet {
    std::vector<TorusArc> arcs;  // sorted by centre

    std::size_t size() const { return arcs.size(); }
    bool empty() const { return arcs.empty(); }
    double measure() const;
    bool contains(double alpha) const;
    // Exact check that no two arcs overlap in more than an endpoint.
    bool pairwise_disjoint() const;
};

// X_d: one arc of half-width 1/(2H) around every admissible a/d^r. Requires d^r <= 2H.
IntervalSet x_set(std::int64_t d, int r, std::int64_t H);

// Euler-product measure d^r prod_{p | d}(1 - p^-r) / H of X_d.
double x_set_measure_formula(std::int64_t d, int r, std::int64_t H);

// G_1, ..., G_D for one (N, H, r), evaluated together.
class GdFamily {
public:
    GdFamily(std::int64_t N, std::int64_t H, int r, std::int64_t max_d);

    std::int64_t N() const { return N_; }
    std::int64_t H() const { return H_; }
    int r() const { return r_; }
    std::int64_t max_d() const { return static_cast<std::int64_t>(members_.size()); }
    const Gd& member(std::int64_t d) const { return members_.at(static_cast<std::size_t>(d - 1)); }

    // out[d-1] = G_d(alpha) for d = 1..max_d.
    void eval_all(double alpha, std::vector<std::complex<double>>& out) const;

private:
    std::int64_t N_, H_;
    int r_;
    std::vector<Gd> members_;
};

struct MembershipParams {
    std::int64_t N;
    std::int64_t H;
    int r;
    double y;
};

// Y_d test: alpha in X_d and sum_{d' <= y, d' != d} |G_d'(alpha)| <= H / (20 d^r).
// Throws ArgumentError when alpha is not in X_d.
bool y_membership(double alpha, std::int64_t d, const MembershipParams& params);

// Same test from precomputed |G_d'(alpha)| values (index d' - 1, d' <= floor(y)).
bool y_membership_from_values(std::int64_t d, int r, std::int64_t H,
                              const std::vector<double>& abs_values);

}  // namespace esl::kernels
