#include <charconv>
#include <fstream>
#include <sstream>

#include "esl/errors.hpp"
#include "esl/experiments.hpp"

namespace esl::experiments {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_field(std::string_view text, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ArgumentError("line " + std::to_string(line) + ": malformed field '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text, std::size_t line) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ArgumentError("line " + std::to_string(line) + ": malformed boolean '" + std::string(text) + "'");
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

// Opens `path` for appending; writes `header` when the file is new or empty and
// checks it otherwise.
std::ofstream open_append(const std::filesystem::path& path, std::string_view header) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    if (!fresh) {
        std::ifstream in(path);
        std::string first;
        std::getline(in, first);
        if (strip_cr(first) != header)
            throw IoError(path.string() + ": existing header '" + first + "' does not match '" + std::string(header) + "'");
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    if (fresh) out << header << '\n';
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, ptr};
}

void write_csv(const std::vector<ScanRecord>& records, std::ostream& out, bool header) {
    if (header) out << kScanHeader << '\n';
    for (const auto& rec : records) {
        out << rec.series.name() << ',' << rec.series.r << ',' << rec.N << ',' << rec.H << ','
            << (rec.strict ? "true" : "false") << ',' << rec.oversample << ',' << format_double(rec.l1) << ','
            << format_double(rec.l1_err) << ',' << format_double(rec.l2) << ',' << rec.wall_ms << '\n';
    }
}

void write_csv(const std::vector<FitResult>& fits, std::ostream& out, bool header) {
    if (header) out << kFitHeader << '\n';
    for (const auto& fit : fits) {
        out << fit.series.name() << ',' << fit.N << ',' << fit.points << ',' << format_double(fit.slope) << ','
            << format_double(fit.intercept) << ',' << format_double(fit.r_squared) << '\n';
    }
}

void emit_csv(const std::vector<ScanRecord>& records, const std::filesystem::path& path) {
    auto out = open_append(path, kScanHeader);
    write_csv(records, out, false);
    finish(out, path);
}

void emit_csv(const std::vector<FitResult>& fits, const std::filesystem::path& path) {
    auto out = open_append(path, kFitHeader);
    write_csv(fits, out, false);
    finish(out, path);
}

std::vector<ScanRecord> parse_scan_csv(std::istream& in) {
    std::vector<ScanRecord> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = strip_cr(raw);
        if (text.empty() || text == kScanHeader) continue;
        const auto f = split(text);
        if (f.size() != 10) throw ArgumentError("line " + std::to_string(line) + ": expected 10 fields");
        ScanRecord rec;
        const int r = parse_field<int>(f[1], line);
        rec.series = Series::parse(f[0], r);
        rec.series.r = r;
        rec.N = parse_field<std::int64_t>(f[2], line);
        rec.H = parse_field<std::int64_t>(f[3], line);
        rec.strict = parse_bool(f[4], line);
        rec.oversample = parse_field<int>(f[5], line);
        rec.l1 = parse_field<double>(f[6], line);
        rec.l1_err = parse_field<double>(f[7], line);
        rec.l2 = parse_field<double>(f[8], line);
        rec.wall_ms = parse_field<std::int64_t>(f[9], line);
        out.push_back(rec);
    }
    return out;
}

std::vector<ScanRecord> parse_scan_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_scan_csv(in);
}

std::vector<FitResult> parse_fit_csv(std::istream& in) {
    std::vector<FitResult> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = strip_cr(raw);
        if (text.empty() || text == kFitHeader) continue;
        const auto f = split(text);
        if (f.size() != 6) throw ArgumentError("line " + std::to_string(line) + ": expected 6 fields");
        FitResult fit;
        fit.series = Series::parse(f[0]);
        fit.N = parse_field<std::int64_t>(f[1], line);
        fit.points = parse_field<int>(f[2], line);
        fit.slope = parse_field<double>(f[3], line);
        fit.intercept = parse_field<double>(f[4], line);
        fit.r_squared = parse_field<double>(f[5], line);
        out.push_back(fit);
    }
    return out;
}

}  // namespace esl::experiments
