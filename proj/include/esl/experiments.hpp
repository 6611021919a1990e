#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esl/cache.hpp"
#include "esl/sieve.hpp"
#include "esl/torus.hpp"

namespace esl::experiments {

enum class SeriesKind { Mobius, MobiusSquared, RFree };

struct Series {
    SeriesKind kind = SeriesKind::Mobius;
    int r = 2;  // used by RFree; MobiusSquared is r = 2

    static Series mobius() { return {SeriesKind::Mobius, 0}; }
    static Series mobius_squared() { return {SeriesKind::MobiusSquared, 2}; }
    static Series rfree(int r);
    // "mobius", "mobius_squared", "rfree" (with r given separately).
    static Series parse(std::string_view name, int r = 2);
    std::string name() const;

    friend bool operator==(const Series&, const Series&) = default;
};

struct ScanRecord {
    Series series;
    std::int64_t N = 0;
    std::int64_t H = 0;
    bool strict = true;
    int oversample = 64;
    double l1 = 0;
    double l1_err = 0;  // absolute: rel_error_bound * l1
    double l2 = 0;      // from the quadrature grid
    std::int64_t wall_ms = 0;

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct FitResult {
    Series series;
    std::int64_t N = 0;
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    int points = 0;

    friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct RunOptions {
    QuadratureOptions quad;
    SieveOptions sieve;
    const SegmentCache* cache = nullptr;
};

struct ScanReport {
    std::vector<ScanRecord> records;
    std::vector<std::string> warnings;
};

// Exponent theta such that the L1 scaling bounds for this series need H >= N^theta:
// 9/17 for mobius, 18/29 for r = 2, (r+1)/(2r) otherwise.
double length_threshold(const Series& series);

ScanReport scan_l1(const Series& series, std::int64_t N, const std::vector<std::int64_t>& H_list, bool strict,
                   const RunOptions& opts = {});

// Least squares of log l1 against log H. ArgumentError for fewer than 3 records,
// mixed series/N or non-positive l1.
FitResult fit_exponent(const std::vector<ScanRecord>& records);

// Report as ordered key=value pairs.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(const KeyValues& kv, std::ostream& out);

struct LemmaKeyRow {
    std::int64_t N = 0;
    std::int64_t K = 0;
    double y = 0;
    double z = 0;
    std::uint64_t sum = 0;       // sum of c_n(y,z)^2 over (N-K, N]
    double ratio_general = 0;    // sum / (K y^{1-r} + N^{1/r+eps})
    double ratio_r2 = 0;         // sum / (K y^{-1} + N^{12/29+eps} y^{-10/29}), r = 2 only
    double balance_constant = 0; // sum / K^{2/(r+1)}
    bool balance_applicable = false;  // K >= N^{theta + 0.01}
};

struct LemmaKeyReport {
    int r = 2;
    double kappa = 0.6;
    double eps = 0.01;
    std::vector<LemmaKeyRow> rows;
    double max_ratio = 0;     // of ratio_r2 for r = 2, ratio_general otherwise
    double ratio_trend = 0;   // last / first
    double balance_spread = 0;  // max / min of balance_constant over applicable rows

    KeyValues key_values() const;
};

// K = floor(N^kappa), y = K^{1/(r+1)}, z = N^{1/r}.
LemmaKeyReport verify_lemma_key(const std::vector<std::int64_t>& N_list, int r, double kappa,
                                const RunOptions& opts = {});

struct LowerBoundReport {
    std::int64_t N = 0, H = 0;
    int r = 2;
    double eps = 0.1;
    double y = 0;
    std::int64_t max_d = 0;
    double b_min = 0, b_max = 0;
    bool b_in_range = false;           // every b_d in [1/3, 5/3]
    double g2_identity_error = 0;      // kernel sum vs tapered c_n(1,y) coefficients
    double g2_l1 = 0;
    std::int64_t samples = 0;
    std::int64_t collisions = 0;       // samples lying in two or more Y_d
    double g2_constant = 0;            // min |g2| d^r / H over sampled Y_d, squarefree d
    double y_integral = 0;             // integral of |g2| over Y
    double y_integral_constant = 0;    // y_integral / (eps H^{1/(r+1)})
    double y_measure = 0;              // |Y| from sampling
    double cn_energy = 0;              // sum over |n-N| <= H of c_n(y,z)^2
    double cs_tail = 0;                // (|Y| cn_energy)^{1/2}
    double lower_estimate = 0;         // y_integral - cs_tail
    double taper_l1 = 0;               // ||F_H * g1||_L1
    double zd_max_ratio = 0;           // max_d |Z_d| / (d^{2r} y / H^2)
    double center_min_small = 0;       // min |G_d(center)| d^r / H over d <= max(1, 0.1 y)
    double center_min_all = 0;         // same over all d <= y
    double quasi_max = 0;              // max over d1 < d2 <= y of integral |G_d1 G_d2|
    std::int64_t quasi_d1 = 0, quasi_d2 = 0;

    KeyValues key_values() const;
};

// ArgumentError when y = H^{1/(r+1)} > 64.
LowerBoundReport verify_lower_bound_machinery(std::int64_t N, std::int64_t H, int r, double eps_frac,
                                              const RunOptions& opts = {});

struct UpperPiece {
    int s = 0;
    std::int64_t K = 0;
    double lo = 0, hi = 0;  // d range (lo, hi]
    double sigma3_l1 = 0;
    double sigma4_l1 = 0;
    double sigma4_cs = 0;   // Cauchy-Schwarz bound for sigma4
};

struct UpperBoundReport {
    std::int64_t N = 0, H = 0;
    int r = 2;
    double D = 0;
    int S = 0;
    std::vector<UpperPiece> pieces;
    double tail_l1 = 0;
    double total = 0;
    double total_ratio = 0;     // total / H^{1/(r+1)}
    double direct_l1 = 0;       // L1 of sum_{|n-N| <= H} a_n e(n alpha)
    double direct_ratio = 0;
    bool reconstruction_exact = false;
    double reconstruction_error = 0;
    int lemma_samples = 0;
    double lemma_max_constant = 0;
    std::vector<std::string> warnings;

    KeyValues key_values() const;
};

UpperBoundReport verify_upper_bound_decomposition(std::int64_t N, std::int64_t H, int r, int lemma_samples = 1000,
                                                  std::uint64_t rng_seed = 1, const RunOptions& opts = {});

// sum_{|n| <= H+K, n = M mod d} min{1, (H+K-|n|)/K} e(n alpha), by direct summation.
std::complex<double> smoothed_progression_sum(std::int64_t H, std::int64_t K, std::int64_t d, std::int64_t M,
                                              double alpha);
// min{(H+K)/d, 1/||d alpha||, d/(K ||d alpha||^2)}
double smoothed_progression_bound(std::int64_t H, std::int64_t K, std::int64_t d, double alpha);

inline constexpr std::string_view kScanHeader = "series,r,N,H,strict,oversample,l1,l1_err,l2,wall_ms";
inline constexpr std::string_view kFitHeader = "series,N,points,slope,intercept,r_squared";

// Appends rows, writing the header when the file is new or empty. IoError when the
// path cannot be written or an existing header differs.
void emit_csv(const std::vector<ScanRecord>& records, const std::filesystem::path& path);
void emit_csv(const std::vector<FitResult>& fits, const std::filesystem::path& path);
void write_csv(const std::vector<ScanRecord>& records, std::ostream& out, bool header = true);
void write_csv(const std::vector<FitResult>& fits, std::ostream& out, bool header = true);

std::vector<ScanRecord> parse_scan_csv(std::istream& in);
std::vector<ScanRecord> parse_scan_csv(const std::filesystem::path& path);
std::vector<FitResult> parse_fit_csv(std::istream& in);

// Shortest round-trip decimal form, always with '.'.
std::string format_double(double x);

}  // namespace esl::experiments
