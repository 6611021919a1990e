#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace esl {

// floor(sqrt(n)), exact for every 64-bit n.
inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > UINT32_MAX || r * r > n)) --r;
    while (r + 1 <= UINT32_MAX && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

// base^exp, saturating at `cap + 1` when the true value exceeds `cap`.
inline std::uint64_t pow_capped(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && acc > cap / base) return cap + 1;
        acc *= base;
    }
    return acc > cap ? cap + 1 : acc;
}

// floor(n^(1/k)), exact.
inline std::uint64_t iroot(std::uint64_t n, int k) {
    if (k <= 1 || n < 2) return n;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
    while (r > 0 && pow_capped(r, k, n) > n) --r;
    while (pow_capped(r + 1, k, n) <= n) ++r;
    return r;
}

// x^(1/k) for real x >= 1, snapped to the integer root when x is an exact k-th
// power (so that e.g. (2^15)^(1/3) is exactly 32).
inline double real_root(double x, int k) {
    const double r = std::pow(x, 1.0 / k);
    const double nearest = std::round(r);
    if (nearest >= 1 && x < 0x1p53) {
        long double p = 1;
        for (int i = 0; i < k; ++i) p *= nearest;
        if (p == static_cast<long double>(x)) return nearest;
    }
    return r;
}

// True iff no prime p has p^r | n (n >= 1). Trial division; meant for small n.
inline bool is_rfree_small(std::uint64_t n, int r) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            if (++e >= r) return false;
        }
    }
    return true;
}

// Distance to the nearest integer.
inline double dist_to_int(double x) { return std::abs(x - std::nearbyint(x)); }

}  // namespace esl
