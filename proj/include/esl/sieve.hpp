#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace esl {

// Closed integer window [lo, hi] with 1 <= lo <= hi.
struct Window {
    std::uint64_t lo = 1;
    std::uint64_t hi = 1;

    static Window make(std::uint64_t lo, std::uint64_t hi);

    std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
    bool contains(std::uint64_t n) const { return lo <= n && n <= hi; }
    bool covers(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
    friend bool operator==(const Window&, const Window&) = default;
};

// Packed bit vector, LSB-first within each 64-bit word.
class BitArray {
public:
    BitArray() = default;
    explicit BitArray(std::size_t size, bool value = false);

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    std::size_t count() const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    friend bool operator==(const BitArray&, const BitArray&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct MuSegment {
    Window window;
    std::vector<std::int8_t> values;  // values[n - lo] = mu(n)

    int at(std::uint64_t n) const { return values[n - window.lo]; }
};

struct RFreeSegment {
    int r = 2;
    Window window;
    BitArray bits;  // bit n - lo set iff n is r-free

    bool at(std::uint64_t n) const { return bits.test(n - window.lo); }
};

// c_n(y, z) = sum over d in (y, z] with d^r | n of mu(d).
struct CnSegment {
    int r = 2;
    double y = 1;
    double z = 2;
    Window window;
    std::vector<std::int32_t> values;

    int at(std::uint64_t n) const { return values[n - window.lo]; }
};

struct SieveOptions {
    std::uint64_t max_hi = 1'000'000'000'000ULL;
    std::size_t segment_size = std::size_t{1} << 22;
    std::size_t memory_budget = std::size_t{1} << 30;  // bytes for the result array
    unsigned workers = 1;
};

// All primes <= limit, copied out of a process-wide table that only grows.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

MuSegment sieve_mobius(const Window& window, const SieveOptions& opts = {});
RFreeSegment sieve_rfree(const Window& window, int r, const SieveOptions& opts = {});
CnSegment sieve_cn(const Window& window, int r, double y, double z,
                   const SieveOptions& opts = {});

// Exact sum of c_n(y,z)^2 over N - K < n <= N.
std::uint64_t sum_cn_squared(std::uint64_t N, std::uint64_t K, int r, double y, double z,
                             const SieveOptions& opts = {});

// Number of tuples (n, h, d1, d2, a) with N - K < n = h^2 d1^2 d2^2 a <= N and
// y < h*d_i <= z for i = 1, 2.
std::uint64_t count_representations(std::uint64_t N, std::uint64_t K, double y, double z);

}  // namespace esl
