#pragma once

// Brute-force reference implementations used by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

inline int mobius(std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

inline bool rfree(std::uint64_t n, int r) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e >= r) return false;
    }
    return true;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// c_n(y,z) by enumerating every d with d^r <= n.
inline int cn(std::uint64_t n, int r, double y, double z) {
    int total = 0;
    for (std::uint64_t d = 1; ipow(d, r) <= n; ++d)
        if (static_cast<double>(d) > y && static_cast<double>(d) <= z && n % ipow(d, r) == 0) total += mobius(d);
    return total;
}

inline std::complex<double> e(double x) {
    return std::polar(1.0, 2 * std::numbers::pi * (x - std::floor(x)));
}

}  // namespace oracle
