#include "esl/cache.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unistd.h>

#include "esl/errors.hpp"

namespace esl {

namespace {

constexpr char kMagic[4] = {'E', 'S', 'L', '1'};
constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 1 + 8 + 8;
constexpr std::size_t kTrailerSize = 4;

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    std::vector<std::uint8_t> finish() {
        u32(static_cast<std::uint32_t>(::crc32(0L, buf_.data(), static_cast<uInt>(buf_.size()))));
        return std::move(buf_);
    }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
    void need(std::size_t n) const {
        if (pos_ + n > b_.size()) throw CacheMiss("segment file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b_[pos_++]} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b_[pos_++]} << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = b_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return b_.size() - pos_; }

private:
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

Writer header(RecordType type, int r, const Window& w) {
    Writer out;
    out.bytes(kMagic, 4);
    out.u8(kCacheVersion);
    out.u8(static_cast<std::uint8_t>(type));
    out.u8(static_cast<std::uint8_t>(r));
    out.u64(w.lo);
    out.u64(w.size());
    return out;
}

// Validates framing and checksum; returns a reader positioned at the payload.
Reader open_record(std::span<const std::uint8_t> bytes, RecordType expected, SegmentHeader& hdr) {
    if (bytes.size() < kHeaderSize + kTrailerSize) throw CacheMiss("segment file truncated");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CacheMiss("bad magic");
    const auto body = bytes.first(bytes.size() - kTrailerSize);
    Reader trailer(bytes.last(kTrailerSize));
    const std::uint32_t stored = trailer.u32();
    const auto actual =
        static_cast<std::uint32_t>(::crc32(0L, body.data(), static_cast<uInt>(body.size())));
    Reader in(body);
    in.take(4);
    hdr.version = in.u8();
    if (hdr.version != kCacheVersion) throw CacheMiss("unsupported segment version");
    hdr.type = static_cast<RecordType>(in.u8());
    hdr.r = in.u8();
    hdr.lo = in.u64();
    hdr.len = in.u64();
    if (stored != actual) throw CacheMiss("checksum mismatch");
    if (hdr.type != expected) throw CacheMiss("unexpected record type");
    if (hdr.lo < 1 || hdr.len < 1 || hdr.lo + (hdr.len - 1) < hdr.lo)
        throw CacheMiss("invalid window in segment header");
    hdr.checksum_ok = true;
    return in;
}

Window header_window(const SegmentHeader& h) { return Window{h.lo, h.lo + h.len - 1}; }

std::string hex_bits(double v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

}  // namespace

std::string CacheKey::filename() const {
    std::string t;
    switch (type) {
        case RecordType::Mobius: t = "mu"; break;
        case RecordType::RFree: t = "rfree"; break;
        case RecordType::Cn: t = "cn-" + hex_bits(y) + "-" + hex_bits(z); break;
    }
    return t + "_" + std::to_string(r) + "_" + std::to_string(window.lo) + "_" +
           std::to_string(window.size()) + ".seg";
}

CacheKey key_of(const MuSegment& s) { return {RecordType::Mobius, 0, s.window}; }
CacheKey key_of(const RFreeSegment& s) { return {RecordType::RFree, s.r, s.window}; }
CacheKey key_of(const CnSegment& s) { return {RecordType::Cn, s.r, s.window, s.y, s.z}; }

std::vector<std::uint8_t> encode_segment(const MuSegment& seg) {
    Writer out = header(RecordType::Mobius, 0, seg.window);
    out.bytes(seg.values.data(), seg.values.size());
    return out.finish();
}

std::vector<std::uint8_t> encode_segment(const RFreeSegment& seg) {
    Writer out = header(RecordType::RFree, seg.r, seg.window);
    const std::size_t nbytes = (seg.bits.size() + 7) / 8;
    const auto words = seg.bits.words();
    for (std::size_t i = 0; i < nbytes; ++i)
        out.u8(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
    return out.finish();
}

std::vector<std::uint8_t> encode_segment(const CnSegment& seg) {
    Writer out = header(RecordType::Cn, seg.r, seg.window);
    out.f64(seg.y);
    out.f64(seg.z);
    for (auto v : seg.values) out.u32(static_cast<std::uint32_t>(v));
    return out.finish();
}

MuSegment decode_mobius(std::span<const std::uint8_t> bytes) {
    SegmentHeader h;
    Reader in = open_record(bytes, RecordType::Mobius, h);
    if (in.remaining() != h.len) throw CacheMiss("payload length mismatch");
    auto payload = in.take(h.len);
    MuSegment seg{header_window(h), std::vector<std::int8_t>(h.len)};
    std::memcpy(seg.values.data(), payload.data(), h.len);
    for (auto v : seg.values)
        if (v < -1 || v > 1) throw CacheMiss("mu value out of range");
    return seg;
}

RFreeSegment decode_rfree(std::span<const std::uint8_t> bytes) {
    SegmentHeader h;
    Reader in = open_record(bytes, RecordType::RFree, h);
    const std::size_t nbytes = (h.len + 7) / 8;
    if (in.remaining() != nbytes) throw CacheMiss("payload length mismatch");
    if (h.r < 2) throw CacheMiss("invalid r");
    auto payload = in.take(nbytes);
    RFreeSegment seg{h.r, header_window(h), BitArray(h.len)};
    auto words = seg.bits.words();
    for (std::size_t i = 0; i < nbytes; ++i)
        words[i / 8] |= std::uint64_t{payload[i]} << (8 * (i % 8));
    if (h.len & 63) words.back() &= (std::uint64_t{1} << (h.len & 63)) - 1;
    return seg;
}

CnSegment decode_cn(std::span<const std::uint8_t> bytes) {
    SegmentHeader h;
    Reader in = open_record(bytes, RecordType::Cn, h);
    if (in.remaining() != 16 + 4 * h.len) throw CacheMiss("payload length mismatch");
    CnSegment seg;
    seg.r = h.r;
    seg.window = header_window(h);
    seg.y = in.f64();
    seg.z = in.f64();
    seg.values.resize(h.len);
    for (auto& v : seg.values) v = static_cast<std::int32_t>(in.u32());
    return seg;
}

std::optional<SegmentHeader> inspect_segment(const std::filesystem::path& file) {
    std::ifstream f(file, std::ios::binary);
    if (!f) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderSize + kTrailerSize || std::memcmp(bytes.data(), kMagic, 4) != 0)
        return std::nullopt;
    Reader in(bytes);
    in.take(4);
    SegmentHeader h;
    h.version = in.u8();
    h.type = static_cast<RecordType>(in.u8());
    h.r = in.u8();
    h.lo = in.u64();
    h.len = in.u64();
    const auto body = std::span<const std::uint8_t>(bytes).first(bytes.size() - kTrailerSize);
    Reader trailer(std::span<const std::uint8_t>(bytes).last(kTrailerSize));
    h.checksum_ok = trailer.u32() ==
                    static_cast<std::uint32_t>(::crc32(0L, body.data(), static_cast<uInt>(body.size())));
    return h;
}

SegmentCache::SegmentCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

void SegmentCache::write_atomic(const std::filesystem::path& target,
                                std::span<const std::uint8_t> bytes) const {
    static std::atomic<unsigned> counter{0};
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + tmp.string());
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into " + target.string());
    }
}

std::vector<std::uint8_t> SegmentCache::read_all(const CacheKey& key) const {
    const auto file = path_for(key);
    std::ifstream f(file, std::ios::binary);
    if (!f) throw CacheMiss("no cache entry " + file.filename().string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void SegmentCache::store(const MuSegment& seg) const { write_atomic(path_for(key_of(seg)), encode_segment(seg)); }
void SegmentCache::store(const RFreeSegment& seg) const { write_atomic(path_for(key_of(seg)), encode_segment(seg)); }
void SegmentCache::store(const CnSegment& seg) const { write_atomic(path_for(key_of(seg)), encode_segment(seg)); }

MuSegment SegmentCache::load_mobius(const Window& window) const {
    auto seg = decode_mobius(read_all({RecordType::Mobius, 0, window}));
    if (seg.window != window) throw CacheMiss("window mismatch");
    return seg;
}

RFreeSegment SegmentCache::load_rfree(const Window& window, int r) const {
    auto seg = decode_rfree(read_all({RecordType::RFree, r, window}));
    if (seg.window != window || seg.r != r) throw CacheMiss("key mismatch");
    return seg;
}

CnSegment SegmentCache::load_cn(const Window& window, int r, double y, double z) const {
    auto seg = decode_cn(read_all({RecordType::Cn, r, window, y, z}));
    if (seg.window != window || seg.r != r || seg.y != y || seg.z != z)
        throw CacheMiss("key mismatch");
    return seg;
}

std::vector<std::filesystem::path> SegmentCache::entries() const {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir_))
        if (e.is_regular_file() && e.path().extension() == ".seg") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SegmentCache::clear() const {
    std::size_t n = 0;
    for (const auto& p : entries()) n += std::filesystem::remove(p) ? 1 : 0;
    return n;
}

MuSegment mobius_cached(const SegmentCache* cache, const Window& window, const SieveOptions& opts) {
    if (cache) {
        try {
            return cache->load_mobius(window);
        } catch (const CacheMiss&) {
        }
    }
    auto seg = sieve_mobius(window, opts);
    if (cache) cache->store(seg);
    return seg;
}

RFreeSegment rfree_cached(const SegmentCache* cache, const Window& window, int r,
                          const SieveOptions& opts) {
    if (cache) {
        try {
            return cache->load_rfree(window, r);
        } catch (const CacheMiss&) {
        }
    }
    auto seg = sieve_rfree(window, r, opts);
    if (cache) cache->store(seg);
    return seg;
}

CnSegment cn_cached(const SegmentCache* cache, const Window& window, int r, double y, double z,
                    const SieveOptions& opts) {
    if (cache) {
        try {
            return cache->load_cn(window, r, y, z);
        } catch (const CacheMiss&) {
        }
    }
    auto seg = sieve_cn(window, r, y, z, opts);
    if (cache) cache->store(seg);
    return seg;
}

}  // namespace esl
