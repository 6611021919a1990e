#include "esl/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "esl/errors.hpp"
#include "esl/numeric.hpp"
#include "esl/parallel.hpp"

namespace esl {

Window Window::make(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1) throw ArgumentError("window must start at n >= 1");
    if (lo > hi)
        throw ArgumentError("empty window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "]");
    if (hi - lo >= static_cast<std::uint64_t>(PTRDIFF_MAX))
        throw ArgumentError("window length does not fit in memory addressing");
    return Window{lo, hi};
}

BitArray::BitArray(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    if (value && (size & 63)) words_.back() &= (std::uint64_t{1} << (size & 63)) - 1;
}

std::size_t BitArray::count() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

namespace {

std::mutex prime_mutex;
std::vector<std::uint32_t> prime_table;
std::uint64_t prime_limit = 0;

void check_window(const Window& w, std::size_t elem_bytes, const SieveOptions& opts) {
    if (w.lo < 1 || w.lo > w.hi) throw ArgumentError("invalid window");
    if (w.hi > opts.max_hi)
        throw ArgumentError("window end " + std::to_string(w.hi) + " exceeds configured maximum " +
                            std::to_string(opts.max_hi));
    const std::size_t len = w.size();
    if (len > opts.memory_budget / std::max<std::size_t>(elem_bytes, 1)) {
        const std::size_t seg = std::max<std::size_t>(opts.segment_size, 1);
        throw ResourceError("window of " + std::to_string(len) + " entries exceeds the memory budget of " +
                            std::to_string(opts.memory_budget) + " bytes; split it into " +
                            std::to_string((len + seg - 1) / seg) + " segments of " +
                            std::to_string(seg) + " entries");
    }
}

inline std::uint64_t first_multiple(std::uint64_t from, std::uint64_t q) {
    return (from + q - 1) / q * q;
}

}  // namespace

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::lock_guard lock(prime_mutex);
    if (limit > prime_limit) {
        const std::uint64_t target = std::max<std::uint64_t>(limit, 2 * prime_limit);
        if (target > UINT32_MAX) throw ResourceError("prime table limit exceeds 2^32");
        std::vector<bool> composite(target + 1, false);
        prime_table.clear();
        for (std::uint64_t i = 2; i <= target; ++i) {
            if (composite[i]) continue;
            prime_table.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= target; j += i) composite[j] = true;
        }
        prime_limit = target;
    }
    auto end = std::upper_bound(prime_table.begin(), prime_table.end(), limit);
    return {prime_table.begin(), end};
}

MuSegment sieve_mobius(const Window& window, const SieveOptions& opts) {
    check_window(window, sizeof(std::int8_t), opts);
    const std::vector<std::uint32_t> primes = primes_up_to(isqrt(window.hi));

    MuSegment out{window, std::vector<std::int8_t>(window.size(), 1)};
    const std::size_t seg = std::max<std::size_t>(opts.segment_size, 1);
    const std::size_t nseg = (window.size() + seg - 1) / seg;

    parallel_for(nseg, opts.workers, [&](std::size_t s) {
        const std::uint64_t a = window.lo + s * seg;
        const std::uint64_t b = std::min<std::uint64_t>(window.hi, a + seg - 1);
        std::int8_t* mu = out.values.data() + (a - window.lo);
        std::vector<std::uint64_t> prod(b - a + 1, 1);
        for (std::uint32_t p32 : primes) {
            const std::uint64_t p = p32;
            if (p * p > b) break;
            for (std::uint64_t m = first_multiple(a, p); m <= b; m += p) {
                mu[m - a] = static_cast<std::int8_t>(-mu[m - a]);
                prod[m - a] *= p;
            }
            const std::uint64_t pp = p * p;
            for (std::uint64_t m = first_multiple(a, pp); m <= b; m += pp) mu[m - a] = 0;
        }
        // At most one prime factor above sqrt(b) remains unaccounted for.
        for (std::uint64_t n = a; n <= b; ++n)
            if (mu[n - a] != 0 && prod[n - a] != n) mu[n - a] = static_cast<std::int8_t>(-mu[n - a]);
    });
    return out;
}

RFreeSegment sieve_rfree(const Window& window, int r, const SieveOptions& opts) {
    if (r < 2) throw ArgumentError("r must be >= 2, got " + std::to_string(r));
    check_window(window, 1, opts);
    RFreeSegment out{r, window, BitArray(window.size(), true)};
    const std::vector<std::uint32_t> primes = primes_up_to(iroot(window.hi, r));
    for (std::uint32_t p : primes) {
        const std::uint64_t q = pow_capped(p, r, window.hi);
        if (q > window.hi) break;
        for (std::uint64_t m = first_multiple(window.lo, q); m <= window.hi; m += q)
            out.bits.reset(m - window.lo);
    }
    return out;
}

CnSegment sieve_cn(const Window& window, int r, double y, double z, const SieveOptions& opts) {
    if (r < 2) throw ArgumentError("r must be >= 2, got " + std::to_string(r));
    if (!(y >= 1)) throw ArgumentError("c_n(y,z) requires y >= 1");
    if (!(y < z)) throw ArgumentError("c_n(y,z) requires y < z");
    check_window(window, sizeof(std::int32_t), opts);
    CnSegment out{r, y, z, window, std::vector<std::int32_t>(window.size(), 0)};

    const auto dlo = static_cast<std::uint64_t>(std::floor(y)) + 1;
    const std::uint64_t dhi =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(std::floor(std::min(z, 0x1p62))),
                                iroot(window.hi, r));
    if (dlo > dhi) return out;

    SieveOptions mu_opts = opts;
    mu_opts.max_hi = std::max(opts.max_hi, dhi);
    const MuSegment mu = sieve_mobius(Window::make(dlo, dhi), mu_opts);
    for (std::uint64_t d = dlo; d <= dhi; ++d) {
        const int m = mu.at(d);
        if (m == 0) continue;
        const std::uint64_t q = pow_capped(d, r, window.hi);
        for (std::uint64_t n = first_multiple(window.lo, q); n <= window.hi; n += q)
            out.values[n - window.lo] += m;
    }
    return out;
}

std::uint64_t sum_cn_squared(std::uint64_t N, std::uint64_t K, int r, double y, double z,
                             const SieveOptions& opts) {
    if (K < 1 || K >= N) throw ArgumentError("sum_cn_squared requires 1 <= K < N");
    const CnSegment seg = sieve_cn(Window::make(N - K + 1, N), r, y, z, opts);
    std::uint64_t total = 0;
    for (auto v : seg.values) total += static_cast<std::uint64_t>(static_cast<std::int64_t>(v) * v);
    return total;
}

std::uint64_t count_representations(std::uint64_t N, std::uint64_t K, double y, double z) {
    if (K < 1 || K >= N) throw ArgumentError("count_representations requires 1 <= K < N");
    if (!(y >= 1)) throw ArgumentError("count_representations requires y >= 1");
    if (!(y < z)) return 0;
    const std::uint64_t lo = N - K;
    std::uint64_t total = 0;
    // h * d <= z and h^2 d1^2 d2^2 <= N bound every loop.
    for (std::uint64_t h = 1; static_cast<double>(h) <= z && h * h <= N; ++h) {
        const std::uint64_t h2 = h * h;
        for (std::uint64_t d1 = 1; static_cast<double>(h * d1) <= z; ++d1) {
            if (static_cast<double>(h * d1) <= y) continue;
            const std::uint64_t m1 = h2 * d1 * d1;
            if (m1 > N) break;
            for (std::uint64_t d2 = 1; static_cast<double>(h * d2) <= z; ++d2) {
                if (static_cast<double>(h * d2) <= y) continue;
                const std::uint64_t m = m1 * d2 * d2;
                if (m > N) break;
                total += N / m - lo / m;
            }
        }
    }
    return total;
}

}  // namespace esl
