#include "esl/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <memory>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <tuple>

#include "esl/errors.hpp"
#include "esl/parallel.hpp"

namespace esl {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::complex<double> unit(double x) { return std::polar(1.0, kTwoPi * (x - std::nearbyint(x))); }

// e(num / den) with the argument reduced exactly in integers.
std::complex<double> unit_ratio(std::int64_t num, std::int64_t den) {
    const std::int64_t r = ((num % den) + den) % den;
    return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(den));
}

// Backward (e^{+2 pi i}) in-place plans, one per size, shared across threads.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) return it->second;
        auto* scratch = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, FFTW_BACKWARD,
                                       FFTW_ESTIMATE);
        fftw_free(scratch);
        if (!p) throw ResourceError("FFTW could not plan a transform of size " + std::to_string(n));
        plans_.emplace(n, p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, fftw_plan> plans_;
};

class FftBuffer {
public:
    explicit FftBuffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n)) {
        if (!data_) throw ResourceError("cannot allocate FFT buffer of " + std::to_string(n));
    }
    ~FftBuffer() { fftw_free(data_); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
    std::span<std::complex<double>> span() { return {data(), n_}; }
    void zero() { std::fill(data(), data() + n_, std::complex<double>{}); }
    void execute(fftw_plan plan) { fftw_execute_dft(plan, data_, data_); }

private:
    std::size_t n_;
    fftw_complex* data_;
};

// Fills buf with the P-point fold of coeffs[h] * e(h * l / M), so that after the
// backward FFT, buf[k] = Q((k * (M/P) + l) / M) with Q the recentred polynomial.
void fold_twisted(const TrigPoly& poly, std::size_t M, std::size_t P, std::size_t l, FftBuffer& buf) {
    buf.zero();
    auto* out = buf.data();
    const auto Pi = static_cast<std::int64_t>(P);
    const auto Mi = static_cast<std::int64_t>(M);
    const auto li = static_cast<std::int64_t>(l);
    for (std::int64_t h = -poly.halfwidth; h <= poly.halfwidth; ++h) {
        const auto c = poly.coeff(h);
        if (c == std::complex<double>{}) continue;
        const auto idx = static_cast<std::size_t>(((h % Pi) + Pi) % Pi);
        out[idx] += l == 0 ? c : c * unit_ratio(h * li, Mi);
    }
}

std::size_t checked_grid(std::int64_t halfwidth, const QuadratureOptions& opts) {
    const std::size_t M = grid_size(halfwidth, opts.oversample);
    if (M > opts.max_fft)
        throw ResourceError("quadrature grid of " + std::to_string(M) + " samples exceeds max_fft=" +
                            std::to_string(opts.max_fft) +
                            "; lower the oversample factor or raise max_fft (evaluation is chunked "
                            "into fft_chunk-sized transforms)");
    return M;
}

struct Partial {
    long double sum_abs = 0;
    long double sum_sq = 0;
    double max_abs = 0;
};

// Sweeps the M-point grid chunk by chunk. fn(chunk, samples...) returns a Partial;
// partials are combined in chunk order so the result is independent of `workers`.
template <std::size_t K, class Fn>
Partial sweep(const std::array<const TrigPoly*, K>& polys, std::size_t M, const QuadratureOptions& opts,
              Fn&& fn) {
    const std::size_t P = std::min(M, std::bit_floor(std::max<std::size_t>(opts.fft_chunk, 1)));
    const std::size_t L = M / P;
    fftw_plan plan = PlanCache::instance().get(P);
    std::vector<Partial> partials(L);
    parallel_for(L, opts.workers, [&](std::size_t l) {
        std::vector<std::unique_ptr<FftBuffer>> bufs;
        std::array<std::span<const std::complex<double>>, K> samples;
        for (std::size_t i = 0; i < K; ++i) {
            bufs.push_back(std::make_unique<FftBuffer>(P));
            fold_twisted(*polys[i], M, P, l, *bufs.back());
            bufs.back()->execute(plan);
            samples[i] = bufs.back()->span();
        }
        partials[l] = fn(samples);
    });
    Partial total;
    for (const auto& p : partials) {
        total.sum_abs += p.sum_abs;
        total.sum_sq += p.sum_sq;
        total.max_abs = std::max(total.max_abs, p.max_abs);
    }
    return total;
}

template <class Segment, class Get>
TrigPoly poly_from(const Segment& seg, std::int64_t N, std::int64_t H, bool strict, Get get) {
    if (H < 0) throw ArgumentError("halfwidth must be >= 0");
    const std::int64_t first = std::max<std::int64_t>(1, N - H);
    const std::int64_t last = N + H;
    if (last < 1) throw ArgumentError("window [N-H, N+H] has no positive integers");
    const auto lo = static_cast<std::uint64_t>(first);
    const auto hi = static_cast<std::uint64_t>(last);
    if (!seg.window.contains(lo) || !seg.window.contains(hi)) {
        std::string missing;
        if (lo < seg.window.lo)
            missing += "[" + std::to_string(lo) + ", " + std::to_string(std::min(hi, seg.window.lo - 1)) + "]";
        if (hi > seg.window.hi)
            missing += (missing.empty() ? "" : " and ") + std::string("[") +
                       std::to_string(std::max(lo, seg.window.hi + 1)) + ", " + std::to_string(hi) + "]";
        throw ArgumentError("segment does not cover " + missing);
    }
    TrigPoly poly = TrigPoly::zeros(N, H);
    for (std::int64_t h = -H; h <= H; ++h) {
        const std::int64_t n = N + h;
        if (n < 1) continue;
        if (strict && (h == -H || h == H)) continue;
        poly.coeff(h) = get(static_cast<std::uint64_t>(n));
    }
    return poly;
}

}  // namespace

TrigPoly TrigPoly::zeros(std::int64_t center, std::int64_t halfwidth) {
    if (halfwidth < 0) throw ArgumentError("halfwidth must be >= 0");
    return TrigPoly{center, halfwidth, std::vector<std::complex<double>>(static_cast<std::size_t>(2 * halfwidth + 1))};
}

std::complex<double> TrigPoly::operator()(double alpha) const {
    std::complex<double> acc = 0;
    for (std::int64_t h = -halfwidth; h <= halfwidth; ++h) {
        const auto c = coeff(h);
        if (c != std::complex<double>{}) acc += c * unit(static_cast<double>(h) * alpha);
    }
    return acc * unit(static_cast<double>(center) * alpha);
}

TrigPoly from_segment(const MuSegment& seg, std::int64_t N, std::int64_t H, bool strict) {
    return poly_from(seg, N, H, strict, [&](std::uint64_t n) { return static_cast<double>(seg.at(n)); });
}

TrigPoly from_segment(const RFreeSegment& seg, std::int64_t N, std::int64_t H, bool strict) {
    return poly_from(seg, N, H, strict, [&](std::uint64_t n) { return seg.at(n) ? 1.0 : 0.0; });
}

TrigPoly from_segment(const CnSegment& seg, std::int64_t N, std::int64_t H, bool strict) {
    return poly_from(seg, N, H, strict, [&](std::uint64_t n) { return static_cast<double>(seg.at(n)); });
}

TrigPoly from_kernel(const kernels::KernelSpec& spec) {
    auto c = kernels::coefficients(spec);
    return TrigPoly{c.center, c.halfwidth, std::move(c.values)};
}

TrigPoly taper_fejer(const TrigPoly& poly) {
    TrigPoly out = poly;
    if (poly.halfwidth == 0) {
        out.coeffs[0] = 0;
        return out;
    }
    const double H = static_cast<double>(poly.halfwidth);
    for (std::int64_t h = -poly.halfwidth; h <= poly.halfwidth; ++h)
        out.coeff(h) *= 1.0 - static_cast<double>(std::abs(h)) / H;
    return out;
}

std::size_t grid_size(std::int64_t halfwidth, int oversample) {
    if (oversample < 4) throw ArgumentError("oversample must be >= 4");
    if (halfwidth < 0) throw ArgumentError("halfwidth must be >= 0");
    const auto want = static_cast<std::size_t>(oversample) * static_cast<std::size_t>(2 * halfwidth + 1);
    return std::bit_ceil(want);
}

GridNorms grid_norms(const TrigPoly& poly, const QuadratureOptions& opts) {
    const std::size_t M = checked_grid(poly.halfwidth, opts);
    const Partial p = sweep<1>({&poly}, M, opts, [](const auto& samples) {
        Partial part;
        for (const auto& v : samples[0]) {
            const double a = std::abs(v);
            part.sum_abs += a;
            part.sum_sq += std::norm(v);
            part.max_abs = std::max(part.max_abs, a);
        }
        return part;
    });
    GridNorms out;
    out.samples = M;
    out.l1 = static_cast<double>(p.sum_abs / static_cast<long double>(M));
    out.l2_squared = static_cast<double>(p.sum_sq / static_cast<long double>(M));
    out.linf = p.max_abs;
    out.rel_error_bound = std::numbers::pi * static_cast<double>(poly.halfwidth) / static_cast<double>(M);
    return out;
}

QuadratureResult l1_norm(const TrigPoly& poly, const QuadratureOptions& opts) {
    const GridNorms g = grid_norms(poly, opts);
    return {g.l1, g.rel_error_bound, g.samples};
}

double l2_norm(const TrigPoly& poly) {
    long double acc = 0;
    for (const auto& c : poly.coeffs) acc += std::norm(c);
    return static_cast<double>(std::sqrt(acc));
}

double linf_estimate(const TrigPoly& poly, const QuadratureOptions& opts) {
    return grid_norms(poly, opts).linf;
}

double integrate_over_set(const TrigPoly& poly, const kernels::IntervalSet& set, int samples_per_arc,
                          const std::function<bool(double)>& filter) {
    if (samples_per_arc < 1) throw ArgumentError("samples_per_arc must be >= 1");
    if (set.empty()) return 0.0;
    if (!set.pairwise_disjoint()) throw ArgumentError("interval set has overlapping arcs");

    // Arcs sharing (den, hw_den) are evaluated together: for each offset t, fold
    // coeffs[h] e(h t) modulo den and one FFT yields Q(a/den + t) for every a.
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::int64_t>> groups;
    for (const auto& arc : set.arcs)
        groups[{arc.den, arc.hw_den}].push_back(((arc.num % arc.den) + arc.den) % arc.den);

    const int S = samples_per_arc;
    long double total = 0;
    for (const auto& [key, residues] : groups) {
        const auto [den, hw_den] = key;
        const double hw = 1.0 / static_cast<double>(hw_den);
        const double weight = 2 * hw / S;
        const bool use_fft = den <= (std::int64_t{1} << 22);
        std::unique_ptr<FftBuffer> buf;
        fftw_plan plan = nullptr;
        if (use_fft) {
            buf = std::make_unique<FftBuffer>(static_cast<std::size_t>(den));
            plan = PlanCache::instance().get(static_cast<std::size_t>(den));
        }
        for (int k = 0; k < S; ++k) {
            const double t = ((2.0 * k + 1) / S - 1) * hw;
            if (use_fft) {
                buf->zero();
                auto* out = buf->data();
                for (std::int64_t h = -poly.halfwidth; h <= poly.halfwidth; ++h) {
                    const auto c = poly.coeff(h);
                    if (c == std::complex<double>{}) continue;
                    out[((h % den) + den) % den] += c * unit(static_cast<double>(h) * t);
                }
                buf->execute(plan);
            }
            for (auto a : residues) {
                const double alpha = static_cast<double>(a) / static_cast<double>(den) + t;
                if (filter && !filter(alpha)) continue;
                const double value = use_fft ? std::abs(buf->data()[a]) : std::abs(poly(alpha));
                total += value * weight;
            }
        }
    }
    return static_cast<double>(total);
}

double pair_product_l1(const TrigPoly& a, const TrigPoly& b, const QuadratureOptions& opts) {
    const std::size_t M = checked_grid(std::max(a.halfwidth, b.halfwidth), opts);
    const Partial p = sweep<2>({&a, &b}, M, opts, [](const auto& samples) {
        Partial part;
        for (std::size_t j = 0; j < samples[0].size(); ++j)
            part.sum_abs += std::abs(samples[0][j]) * std::abs(samples[1][j]);
        return part;
    });
    return static_cast<double>(p.sum_abs / static_cast<long double>(M));
}

double pair_product_l1(const kernels::KernelSpec& a, const kernels::KernelSpec& b,
                       const QuadratureOptions& opts) {
    return pair_product_l1(from_kernel(a), from_kernel(b), opts);
}

}  // namespace esl
