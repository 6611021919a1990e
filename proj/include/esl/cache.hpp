#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esl/sieve.hpp"

namespace esl {

// On-disk segment format (all integers little-endian):
//   "ESL1" | version u8 | record type u8 | r u8 | lo u64 | len u64 | payload | crc32 u32
// The CRC covers every byte before it. Payloads: mu as len i8; r-free bits packed
// LSB-first into ceil(len/8) bytes; c_n as y f64, z f64, then len i32.
inline constexpr std::uint8_t kCacheVersion = 1;

enum class RecordType : std::uint8_t { Mobius = 1, RFree = 2, Cn = 3 };

struct CacheKey {
    RecordType type = RecordType::Mobius;
    int r = 0;
    Window window;
    double y = 0;  // c_n only
    double z = 0;

    // "{type}_{r}_{lo}_{len}.seg"; c_n types carry y and z as hex bit patterns.
    std::string filename() const;
};

CacheKey key_of(const MuSegment& seg);
CacheKey key_of(const RFreeSegment& seg);
CacheKey key_of(const CnSegment& seg);

std::vector<std::uint8_t> encode_segment(const MuSegment& seg);
std::vector<std::uint8_t> encode_segment(const RFreeSegment& seg);
std::vector<std::uint8_t> encode_segment(const CnSegment& seg);

// Decoders validate magic, version, record type, length and checksum, and throw
// CacheMiss on any mismatch.
MuSegment decode_mobius(std::span<const std::uint8_t> bytes);
RFreeSegment decode_rfree(std::span<const std::uint8_t> bytes);
CnSegment decode_cn(std::span<const std::uint8_t> bytes);

struct SegmentHeader {
    std::uint8_t version = 0;
    RecordType type = RecordType::Mobius;
    int r = 0;
    std::uint64_t lo = 0;
    std::uint64_t len = 0;
    bool checksum_ok = false;
};

// Header fields of a file, or nullopt when it is not a readable segment file.
std::optional<SegmentHeader> inspect_segment(const std::filesystem::path& file);

class SegmentCache {
public:
    explicit SegmentCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const { return dir_ / key.filename(); }

    // Atomic: the bytes go to a temporary file in the same directory, then rename.
    void store(const MuSegment& seg) const;
    void store(const RFreeSegment& seg) const;
    void store(const CnSegment& seg) const;

    MuSegment load_mobius(const Window& window) const;
    RFreeSegment load_rfree(const Window& window, int r) const;
    CnSegment load_cn(const Window& window, int r, double y, double z) const;

    std::vector<std::filesystem::path> entries() const;
    std::size_t clear() const;

private:
    void write_atomic(const std::filesystem::path& target,
                      std::span<const std::uint8_t> bytes) const;
    std::vector<std::uint8_t> read_all(const CacheKey& key) const;

    std::filesystem::path dir_;
};

// Cache-first sieving: a miss (or a null cache) recomputes and stores.
MuSegment mobius_cached(const SegmentCache* cache, const Window& window,
                        const SieveOptions& opts = {});
RFreeSegment rfree_cached(const SegmentCache* cache, const Window& window, int r,
                          const SieveOptions& opts = {});
CnSegment cn_cached(const SegmentCache* cache, const Window& window, int r, double y, double z,
                    const SieveOptions& opts = {});

}  // namespace esl
