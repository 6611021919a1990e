#include "esl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "esl/errors.hpp"
#include "esl/kernels.hpp"
#include "esl/numeric.hpp"

namespace esl::experiments {

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

void check_positive(std::int64_t v, const char* what) {
    if (v < 1) throw ArgumentError(std::string(what) + " must be >= 1");
}

TrigPoly series_poly(const Series& series, const Window& window, std::int64_t N, std::int64_t H, bool strict,
                     const RunOptions& opts, MuSegment* mu_cache, RFreeSegment* rf_cache) {
    if (series.kind == SeriesKind::Mobius) {
        if (mu_cache->values.empty()) *mu_cache = mobius_cached(opts.cache, window, opts.sieve);
        return from_segment(*mu_cache, N, H, strict);
    }
    if (rf_cache->bits.size() == 0) *rf_cache = rfree_cached(opts.cache, window, series.r, opts.sieve);
    return from_segment(*rf_cache, N, H, strict);
}

std::vector<int> small_mobius(std::int64_t D) {
    std::vector<int> mu(static_cast<std::size_t>(D) + 1, 0);
    if (D < 1) return mu;
    const MuSegment seg = sieve_mobius(Window::make(1, static_cast<std::uint64_t>(D)));
    for (std::int64_t d = 1; d <= D; ++d) mu[static_cast<std::size_t>(d)] = seg.at(static_cast<std::uint64_t>(d));
    return mu;
}

// alpha in X_d: nearest a/d^r is admissible and within 1/(2H).
bool in_x_set(double alpha, const kernels::Gd& g) {
    const auto m = g.modulus;
    const double scaled = alpha * static_cast<double>(m);
    auto a = static_cast<std::int64_t>(std::nearbyint(scaled));
    const double dist = std::abs(scaled - static_cast<double>(a)) / static_cast<double>(m);
    if (dist > 0.5 / static_cast<double>(g.H) * (1 + 1e-12)) return false;
    a = ((a % m) + m) % m;
    if (a == 0) a = m;
    return std::binary_search(g.residues.begin(), g.residues.end(), a);
}

double fejer_l1(const TrigPoly& p, const QuadratureOptions& q) { return l1_norm(p, q).value; }

}  // namespace

Series Series::rfree(int r) {
    if (r < 2) throw ArgumentError("r must be >= 2");
    return {SeriesKind::RFree, r};
}

Series Series::parse(std::string_view name, int r) {
    if (name == "mobius") return mobius();
    if (name == "mobius_squared") return mobius_squared();
    if (name == "rfree") return rfree(r);
    throw ArgumentError("unknown series '" + std::string(name) + "' (mobius, mobius_squared, rfree)");
}

std::string Series::name() const {
    switch (kind) {
        case SeriesKind::Mobius: return "mobius";
        case SeriesKind::MobiusSquared: return "mobius_squared";
        case SeriesKind::RFree: return "rfree";
    }
    return "?";
}

double length_threshold(const Series& series) {
    if (series.kind == SeriesKind::Mobius) return 9.0 / 17;
    if (series.r == 2) return 18.0 / 29;
    return (series.r + 1.0) / (2.0 * series.r);
}

ScanReport scan_l1(const Series& series, std::int64_t N, const std::vector<std::int64_t>& H_list, bool strict,
                   const RunOptions& opts) {
    if (H_list.empty()) throw ArgumentError("H list is empty");
    check_positive(N, "N");
    for (auto H : H_list) check_positive(H, "H");
    const std::int64_t Hmax = *std::max_element(H_list.begin(), H_list.end());
    if (Hmax > N) throw ArgumentError("max(H) = " + std::to_string(Hmax) + " exceeds N = " + std::to_string(N));

    ScanReport report;
    const double theta = length_threshold(series);
    for (auto H : H_list) {
        if (static_cast<double>(H) < std::pow(static_cast<double>(N), theta)) {
            report.warnings.push_back("H=" + std::to_string(H) + " is below N^" + num(theta) + " = " +
                                      num(std::pow(static_cast<double>(N), theta)) +
                                      "; the length hypothesis does not hold");
        }
    }

    const Window window = Window::make(static_cast<std::uint64_t>(std::max<std::int64_t>(1, N - Hmax)),
                                       static_cast<std::uint64_t>(N + Hmax));
    MuSegment mu;
    RFreeSegment rf;
    for (auto H : H_list) {
        const auto t0 = std::chrono::steady_clock::now();
        const TrigPoly poly = series_poly(series, window, N, H, strict, opts, &mu, &rf);
        const GridNorms g = grid_norms(poly, opts.quad);
        const auto t1 = std::chrono::steady_clock::now();
        ScanRecord rec;
        rec.series = series;
        rec.N = N;
        rec.H = H;
        rec.strict = strict;
        rec.oversample = opts.quad.oversample;
        rec.l1 = g.l1;
        rec.l1_err = g.rel_error_bound * g.l1;
        rec.l2 = std::sqrt(g.l2_squared);
        rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        report.records.push_back(rec);
    }
    return report;
}

FitResult fit_exponent(const std::vector<ScanRecord>& records) {
    if (records.size() < 3) throw ArgumentError("fit needs at least 3 records, got " + std::to_string(records.size()));
    const auto& first = records.front();
    long double sx = 0, sy = 0;
    for (const auto& rec : records) {
        if (!(rec.series == first.series) || rec.N != first.N)
            throw ArgumentError("fit records must share series and N");
        if (!(rec.l1 > 0) || rec.H < 1) throw ArgumentError("fit needs l1 > 0 and H >= 1");
        sx += std::log(static_cast<long double>(rec.H));
        sy += std::log(static_cast<long double>(rec.l1));
    }
    const auto n = static_cast<long double>(records.size());
    const long double mx = sx / n, my = sy / n;
    long double sxx = 0, sxy = 0, syy = 0;
    for (const auto& rec : records) {
        const long double dx = std::log(static_cast<long double>(rec.H)) - mx;
        const long double dy = std::log(static_cast<long double>(rec.l1)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw ArgumentError("fit needs at least two distinct H values");
    FitResult fit;
    fit.series = first.series;
    fit.N = first.N;
    fit.points = static_cast<int>(records.size());
    fit.slope = static_cast<double>(sxy / sxx);
    fit.intercept = static_cast<double>(my - sxy / sxx * mx);
    if (syy == 0) {
        fit.r_squared = 1;
    } else {
        const long double ss_res = syy - sxy * sxy / sxx;
        fit.r_squared = std::clamp(static_cast<double>(1 - ss_res / syy), 0.0, 1.0);
    }
    return fit;
}

void write_key_values(const KeyValues& kv, std::ostream& out) {
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KeyValues LemmaKeyReport::key_values() const {
    KeyValues kv{{"r", num(r)}, {"kappa", num(kappa)}, {"eps", num(eps)}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string p = "row" + std::to_string(i) + ".";
        kv.emplace_back(p + "N", num(row.N));
        kv.emplace_back(p + "K", num(row.K));
        kv.emplace_back(p + "y", num(row.y));
        kv.emplace_back(p + "z", num(row.z));
        kv.emplace_back(p + "sum", num(row.sum));
        kv.emplace_back(p + "ratio_general", num(row.ratio_general));
        if (r == 2) kv.emplace_back(p + "ratio_r2", num(row.ratio_r2));
        kv.emplace_back(p + "balance_constant", num(row.balance_constant));
        kv.emplace_back(p + "balance_applicable", flag(row.balance_applicable));
    }
    kv.emplace_back("max_ratio", num(max_ratio));
    kv.emplace_back("ratio_trend", num(ratio_trend));
    kv.emplace_back("balance_spread", num(balance_spread));
    return kv;
}

LemmaKeyReport verify_lemma_key(const std::vector<std::int64_t>& N_list, int r, double kappa,
                                const RunOptions& opts) {
    if (N_list.empty()) throw ArgumentError("N list is empty");
    if (r < 2) throw ArgumentError("r must be >= 2");
    if (!(kappa > 0 && kappa < 1)) throw ArgumentError("kappa must lie in (0, 1)");
    LemmaKeyReport rep;
    rep.r = r;
    rep.kappa = kappa;
    const double theta = r == 2 ? 9.0 / 17 : (r + 1.0) / (2.0 * r);
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
    for (auto N : N_list) {
        if (N < 3) throw ArgumentError("N must be >= 3");
        LemmaKeyRow row;
        row.N = N;
        const double Nd = static_cast<double>(N);
        row.K = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(std::pow(Nd, kappa))), 1, N - 1);
        const double Kd = static_cast<double>(row.K);
        row.y = real_root(Kd, r + 1);
        row.z = real_root(Nd, r);
        row.sum = row.y < row.z ? sum_cn_squared(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(row.K), r,
                                                 std::max(1.0, row.y), row.z, opts.sieve)
                                : 0;
        const double s = static_cast<double>(row.sum);
        row.ratio_general = s / (Kd * std::pow(row.y, 1 - r) + std::pow(Nd, 1.0 / r + rep.eps));
        if (r == 2)
            row.ratio_r2 = s / (Kd / row.y + std::pow(Nd, 12.0 / 29 + rep.eps) * std::pow(row.y, -10.0 / 29));
        row.balance_constant = s / std::pow(Kd, 2.0 / (r + 1));
        row.balance_applicable = Kd >= std::pow(Nd, theta + 0.01);
        if (row.balance_applicable) {
            cmin = std::min(cmin, row.balance_constant);
            cmax = std::max(cmax, row.balance_constant);
        }
        const double ratio = r == 2 ? row.ratio_r2 : row.ratio_general;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        rep.rows.push_back(row);
    }
    const auto pick = [&](const LemmaKeyRow& row) { return r == 2 ? row.ratio_r2 : row.ratio_general; };
    const double first = pick(rep.rows.front());
    rep.ratio_trend = first > 0 ? pick(rep.rows.back()) / first : 0;
    rep.balance_spread = cmax > 0 && cmin > 0 ? cmax / cmin : 0;
    return rep;
}

KeyValues LowerBoundReport::key_values() const {
    return {
        {"N", num(N)},
        {"H", num(H)},
        {"r", num(r)},
        {"eps", num(eps)},
        {"y", num(y)},
        {"max_d", num(max_d)},
        {"b_min", num(b_min)},
        {"b_max", num(b_max)},
        {"b_in_range", flag(b_in_range)},
        {"g2_identity_error", num(g2_identity_error)},
        {"g2_l1", num(g2_l1)},
        {"samples", num(samples)},
        {"collisions", num(collisions)},
        {"g2_constant", num(g2_constant)},
        {"y_integral", num(y_integral)},
        {"y_integral_constant", num(y_integral_constant)},
        {"y_measure", num(y_measure)},
        {"cn_energy", num(cn_energy)},
        {"cs_tail", num(cs_tail)},
        {"lower_estimate", num(lower_estimate)},
        {"taper_l1", num(taper_l1)},
        {"zd_max_ratio", num(zd_max_ratio)},
        {"center_min_small", num(center_min_small)},
        {"center_min_all", num(center_min_all)},
        {"quasi_max", num(quasi_max)},
        {"quasi_d1", num(quasi_d1)},
        {"quasi_d2", num(quasi_d2)},
    };
}

LowerBoundReport verify_lower_bound_machinery(std::int64_t N, std::int64_t H, int r, double eps_frac,
                                              const RunOptions& opts) {
    if (r < 2) throw ArgumentError("r must be >= 2");
    if (!(eps_frac > 0 && eps_frac <= 1)) throw ArgumentError("eps must lie in (0, 1]");
    check_positive(H, "H");
    if (H > N) throw ArgumentError("H must be <= N");
    constexpr int kSamples = 64;

    LowerBoundReport rep;
    rep.N = N;
    rep.H = H;
    rep.r = r;
    rep.eps = eps_frac;
    rep.y = real_root(static_cast<double>(H), r + 1);
    if (rep.y > 64) throw ArgumentError("y = H^(1/(r+1)) = " + num(rep.y) + " exceeds 64");
    const auto D = static_cast<std::int64_t>(std::floor(rep.y));
    rep.max_d = D;
    const auto mu = small_mobius(D);
    const double Hd = static_cast<double>(H);

    std::vector<double> b(static_cast<std::size_t>(D) + 1, 0);
    rep.b_min = std::numeric_limits<double>::infinity();
    for (std::int64_t d = 1; d <= D; ++d) {
        b[static_cast<std::size_t>(d)] = kernels::b_coeff(d, rep.y, r);
        rep.b_min = std::min(rep.b_min, b[static_cast<std::size_t>(d)]);
        rep.b_max = std::max(rep.b_max, b[static_cast<std::size_t>(d)]);
    }
    rep.b_in_range = rep.b_min >= 1.0 / 3 && rep.b_max <= 5.0 / 3;

    const kernels::GdFamily family(N, H, r, D);
    std::vector<TrigPoly> gpolys;
    gpolys.reserve(static_cast<std::size_t>(D));
    for (std::int64_t d = 1; d <= D; ++d) gpolys.push_back(from_kernel(family.member(d)));

    // g2 as sum_d mu(d) b_d G_d, and directly as the taper of sum_{d <= y, d^r | n} mu(d).
    TrigPoly g2 = TrigPoly::zeros(N, H);
    for (std::int64_t d = 1; d <= D; ++d) {
        const double w = mu[static_cast<std::size_t>(d)] * b[static_cast<std::size_t>(d)];
        if (w == 0) continue;
        const auto& gp = gpolys[static_cast<std::size_t>(d - 1)];
        for (std::size_t i = 0; i < g2.coeffs.size(); ++i) g2.coeffs[i] += w * gp.coeffs[i];
    }
    TrigPoly direct = TrigPoly::zeros(N, H);
    for (std::int64_t h = -H; h <= H; ++h) {
        const std::int64_t n = N + h;
        if (n < 1) continue;
        int c = 0;
        for (std::int64_t d = 1; d <= D; ++d) {
            const auto q = static_cast<std::int64_t>(pow_capped(static_cast<std::uint64_t>(d), r, 1ULL << 62));
            if (n % q == 0) c += mu[static_cast<std::size_t>(d)];
        }
        direct.coeff(h) = static_cast<double>(c);
    }
    direct = taper_fejer(direct);
    for (std::size_t i = 0; i < g2.coeffs.size(); ++i)
        rep.g2_identity_error = std::max(rep.g2_identity_error, std::abs(g2.coeffs[i] - direct.coeffs[i]));
    rep.g2_l1 = fejer_l1(g2, opts.quad);

    const Window window = Window::make(static_cast<std::uint64_t>(std::max<std::int64_t>(1, N - H)),
                                       static_cast<std::uint64_t>(N + H));
    const RFreeSegment a_seg = rfree_cached(opts.cache, window, r, opts.sieve);
    rep.taper_l1 = fejer_l1(taper_fejer(from_segment(a_seg, N, H, false)), opts.quad);

    // Sample 64 midpoints on every arc of every X_d.
    std::vector<std::complex<double>> values;
    std::vector<double> abs_values(static_cast<std::size_t>(D));
    auto g2_at = [&](const std::vector<std::complex<double>>& v) {
        std::complex<double> acc = 0;
        for (std::int64_t d = 1; d <= D; ++d)
            acc += static_cast<double>(mu[static_cast<std::size_t>(d)]) * b[static_cast<std::size_t>(d)] *
                   v[static_cast<std::size_t>(d - 1)];
        return acc;
    };
    auto eval_at = [&](double alpha) {
        family.eval_all(alpha, values);
        for (std::size_t i = 0; i < values.size(); ++i) abs_values[i] = std::abs(values[i]);
    };

    const double eps_y = eps_frac * rep.y;
    rep.g2_constant = std::numeric_limits<double>::infinity();
    rep.center_min_small = std::numeric_limits<double>::infinity();
    rep.center_min_all = std::numeric_limits<double>::infinity();
    const double small_cut = std::max(1.0, 0.1 * rep.y);
    for (std::int64_t d = 1; d <= D; ++d) {
        const auto& g = family.member(d);
        const double m = static_cast<double>(g.modulus);
        const double dr = std::pow(static_cast<double>(d), r);
        std::int64_t in_y = 0, total = 0;
        for (auto a : g.residues) {
            const double center = static_cast<double>(a) / m;
            const double c_ratio = std::abs(kernels::eval(g, center)) * dr / Hd;
            rep.center_min_all = std::min(rep.center_min_all, c_ratio);
            if (static_cast<double>(d) <= small_cut) rep.center_min_small = std::min(rep.center_min_small, c_ratio);
            for (int k = 0; k < kSamples; ++k) {
                const double alpha = center + ((2.0 * k + 1) / kSamples - 1) * (0.5 / Hd);
                eval_at(alpha);
                int memberships = 0;
                bool own = false;
                for (std::int64_t d2 = 1; d2 <= D; ++d2) {
                    const bool in_x = d2 == d || in_x_set(alpha, family.member(d2));
                    if (in_x && kernels::y_membership_from_values(d2, r, H, abs_values)) {
                        ++memberships;
                        if (d2 == d) own = true;
                    }
                }
                ++total;
                if (memberships >= 2) ++rep.collisions;
                if (!own) continue;
                ++in_y;
                if (mu[static_cast<std::size_t>(d)] != 0)
                    rep.g2_constant = std::min(rep.g2_constant, std::abs(g2_at(values)) * dr / Hd);
            }
        }
        rep.samples += total;
        const double x_measure = static_cast<double>(g.residues.size()) / Hd;
        const double z_measure = static_cast<double>(total - in_y) / static_cast<double>(total) * x_measure;
        rep.zd_max_ratio =
            std::max(rep.zd_max_ratio, z_measure / (std::pow(static_cast<double>(d), 2 * r) * rep.y / (Hd * Hd)));
        if (static_cast<double>(d) <= eps_y && mu[static_cast<std::size_t>(d)] != 0) {
            rep.y_measure += static_cast<double>(in_y) / static_cast<double>(total) * x_measure;
            const auto set = kernels::x_set(d, r, H);
            rep.y_integral += integrate_over_set(g2, set, kSamples, [&](double alpha) {
                eval_at(alpha);
                return kernels::y_membership_from_values(d, r, H, abs_values);
            });
        }
    }
    if (!std::isfinite(rep.g2_constant)) rep.g2_constant = 0;
    rep.y_integral_constant = rep.y_integral / (eps_frac * rep.y);

    if (rep.y < real_root(static_cast<double>(N), r)) {
        const CnSegment cn = cn_cached(opts.cache, window, r, std::max(1.0, rep.y), real_root(static_cast<double>(N), r),
                                       opts.sieve);
        long double energy = 0;
        for (auto v : cn.values) energy += static_cast<long double>(v) * v;
        rep.cn_energy = static_cast<double>(energy);
    }
    rep.cs_tail = std::sqrt(rep.y_measure * rep.cn_energy);
    rep.lower_estimate = rep.y_integral - rep.cs_tail;

    for (std::int64_t d1 = 1; d1 <= D; ++d1) {
        for (std::int64_t d2 = d1 + 1; d2 <= D; ++d2) {
            const double v = pair_product_l1(gpolys[static_cast<std::size_t>(d1 - 1)],
                                             gpolys[static_cast<std::size_t>(d2 - 1)], opts.quad);
            if (v > rep.quasi_max) {
                rep.quasi_max = v;
                rep.quasi_d1 = d1;
                rep.quasi_d2 = d2;
            }
        }
    }
    return rep;
}

std::complex<double> smoothed_progression_sum(std::int64_t H, std::int64_t K, std::int64_t d, std::int64_t M,
                                              double alpha) {
    if (H < 0 || K < 1 || d < 1) throw ArgumentError("need H >= 0, K >= 1, d >= 1");
    const std::int64_t L = H + K;
    const std::int64_t res = ((M % d) + d) % d;
    // smallest n >= -L with n = M mod d
    std::int64_t n = -L + (((res + L) % d) + d) % d;
    std::complex<long double> acc = 0;
    const long double a = alpha;
    for (; n <= L; n += d) {
        const long double w = std::min<long double>(1, static_cast<long double>(L - std::abs(n)) / K);
        const long double x = static_cast<long double>(n) * a;
        acc += w * std::polar(1.0L, 2 * std::numbers::pi_v<long double> * (x - std::nearbyint(x)));
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double smoothed_progression_bound(std::int64_t H, std::int64_t K, std::int64_t d, double alpha) {
    const double trivial = static_cast<double>(H + K) / static_cast<double>(d);
    const double dist = dist_to_int(static_cast<double>(d) * alpha);
    if (dist == 0) return trivial;
    return std::min({trivial, 1 / dist, static_cast<double>(d) / (static_cast<double>(K) * dist * dist)});
}

KeyValues UpperBoundReport::key_values() const {
    KeyValues kv{{"N", num(N)}, {"H", num(H)}, {"r", num(r)}, {"D", num(D)}, {"S", num(S)}};
    for (const auto& p : pieces) {
        const std::string pre = "s" + std::to_string(p.s) + ".";
        kv.emplace_back(pre + "K", num(p.K));
        kv.emplace_back(pre + "d_lo", num(p.lo));
        kv.emplace_back(pre + "d_hi", num(p.hi));
        kv.emplace_back(pre + "sigma3_l1", num(p.sigma3_l1));
        kv.emplace_back(pre + "sigma4_l1", num(p.sigma4_l1));
        kv.emplace_back(pre + "sigma4_cs", num(p.sigma4_cs));
    }
    kv.emplace_back("tail_l1", num(tail_l1));
    kv.emplace_back("total", num(total));
    kv.emplace_back("total_ratio", num(total_ratio));
    kv.emplace_back("direct_l1", num(direct_l1));
    kv.emplace_back("direct_ratio", num(direct_ratio));
    kv.emplace_back("reconstruction_exact", flag(reconstruction_exact));
    kv.emplace_back("reconstruction_error", num(reconstruction_error));
    kv.emplace_back("lemma_samples", num(lemma_samples));
    kv.emplace_back("lemma_max_constant", num(lemma_max_constant));
    for (std::size_t i = 0; i < warnings.size(); ++i) kv.emplace_back("warning" + std::to_string(i), warnings[i]);
    return kv;
}

UpperBoundReport verify_upper_bound_decomposition(std::int64_t N, std::int64_t H, int r, int lemma_samples,
                                                  std::uint64_t rng_seed, const RunOptions& opts) {
    if (r < 2) throw ArgumentError("r must be >= 2");
    check_positive(H, "H");
    if (lemma_samples < 0) throw ArgumentError("lemma_samples must be >= 0");
    UpperBoundReport rep;
    rep.N = N;
    rep.H = H;
    rep.r = r;
    const double Hd = static_cast<double>(H);
    rep.D = real_root(Hd, r + 1);
    while (std::ldexp(1.0, rep.S) <= rep.D) ++rep.S;
    rep.S = std::max(rep.S, 1);

    const Series series = r == 2 ? Series::mobius_squared() : Series::rfree(r);
    if (Hd < std::pow(static_cast<double>(N), length_threshold(series)))
        rep.warnings.push_back("H is below N^" + num(length_threshold(series)) + "; the length hypothesis does not hold");

    auto K_of = [&](int s) {
        return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::ldexp(Hd, -r * s))));
    };
    const std::int64_t Kmax = K_of(1);
    if (N - H - Kmax < 1) throw ArgumentError("window [N-H-K, N+H+K] must stay positive");
    const Window wide = Window::make(static_cast<std::uint64_t>(N - H - Kmax), static_cast<std::uint64_t>(N + H + Kmax));

    // c_n over (lo, hi]; lo < 1 adds the d = 1 term, which sieve_cn excludes.
    auto cn_values = [&](double lo, double hi) {
        std::vector<double> v(wide.size(), 0);
        const double from = std::max(lo, 1.0);
        if (from < hi && std::floor(from) < std::floor(hi)) {
            const CnSegment seg = cn_cached(opts.cache, wide, r, from, hi, opts.sieve);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = seg.values[i];
        }
        if (lo < 1 && hi >= 1)
            for (auto& x : v) x += 1;
        return v;
    };
    auto at = [&](const std::vector<double>& v, std::int64_t n) {
        return v[static_cast<std::size_t>(n) - static_cast<std::size_t>(wide.lo)];
    };

    std::vector<double> recon(static_cast<std::size_t>(2 * H + 1), 0);
    for (int s = 1; s <= rep.S; ++s) {
        UpperPiece piece;
        piece.s = s;
        piece.K = K_of(s);
        piece.lo = std::ldexp(rep.D, -s);
        piece.hi = std::ldexp(rep.D, -(s - 1));
        const auto c = cn_values(piece.lo, piece.hi);
        const std::int64_t L = H + piece.K;
        const double Kd = static_cast<double>(piece.K);
        TrigPoly s3 = TrigPoly::zeros(N, L), s4 = TrigPoly::zeros(N, L);
        long double tail_energy = 0;
        for (std::int64_t h = -L; h <= L; ++h) {
            const double cv = at(c, N + h);
            if (cv == 0) continue;
            const auto ah = std::abs(h);
            s3.coeff(h) = std::min(1.0, static_cast<double>(L - ah) / Kd) * cv;
            if (ah > H) {
                s4.coeff(h) = -(static_cast<double>(L - ah) / Kd) * cv;
                tail_energy += static_cast<long double>(cv) * cv;
            }
        }
        for (std::int64_t h = -H; h <= H; ++h)
            recon[static_cast<std::size_t>(h + H)] += (s3.coeff(h) + s4.coeff(h)).real();
        for (std::int64_t h = H + 1; h <= L; ++h) {
            for (auto hh : {h, -h}) {
                const double sum = (s3.coeff(hh) + s4.coeff(hh)).real();
                rep.reconstruction_error = std::max(rep.reconstruction_error, std::abs(sum));
            }
        }
        piece.sigma3_l1 = fejer_l1(s3, opts.quad);
        piece.sigma4_l1 = fejer_l1(s4, opts.quad);
        piece.sigma4_cs = static_cast<double>(std::sqrt(tail_energy));
        rep.total += piece.sigma3_l1 + piece.sigma4_l1;
        rep.pieces.push_back(piece);
    }

    const double ztail = static_cast<double>(iroot(static_cast<std::uint64_t>(N + H), r));
    const auto tail = ztail > rep.D ? cn_values(rep.D, ztail) : std::vector<double>(wide.size(), 0);
    TrigPoly tail_poly = TrigPoly::zeros(N, H);
    for (std::int64_t h = -H; h <= H; ++h) {
        tail_poly.coeff(h) = at(tail, N + h);
        recon[static_cast<std::size_t>(h + H)] += at(tail, N + h);
    }
    rep.tail_l1 = fejer_l1(tail_poly, opts.quad);
    rep.total += rep.tail_l1;
    const double scale = std::pow(Hd, 1.0 / (r + 1));
    rep.total_ratio = rep.total / scale;

    const RFreeSegment a_seg = rfree_cached(opts.cache, wide, r, opts.sieve);
    for (std::int64_t h = -H; h <= H; ++h) {
        const double a = a_seg.at(static_cast<std::uint64_t>(N + h)) ? 1.0 : 0.0;
        rep.reconstruction_error = std::max(rep.reconstruction_error, std::abs(recon[static_cast<std::size_t>(h + H)] - a));
    }
    rep.reconstruction_exact = rep.reconstruction_error == 0;
    rep.direct_l1 = fejer_l1(from_segment(a_seg, N, H, false), opts.quad);
    rep.direct_ratio = rep.direct_l1 / scale;

    std::mt19937_64 rng(rng_seed);
    rep.lemma_samples = lemma_samples;
    for (int i = 0; i < lemma_samples; ++i) {
        std::int64_t K, d, M;
        double alpha;
        if (i == 0) {
            K = K_of(1);
            d = 1;
            M = 0;
            alpha = 0;
        } else {
            const int s = std::uniform_int_distribution<int>(1, rep.S)(rng);
            K = K_of(s);
            d = std::uniform_int_distribution<std::int64_t>(1, H + K)(rng);
            M = std::uniform_int_distribution<std::int64_t>(0, d - 1)(rng);
            alpha = std::uniform_real_distribution<double>(0, 1)(rng);
        }
        const double lhs = std::abs(smoothed_progression_sum(H, K, d, M, alpha));
        rep.lemma_max_constant = std::max(rep.lemma_max_constant, lhs / smoothed_progression_bound(H, K, d, alpha));
    }
    return rep;
}

}  // namespace esl::experiments
