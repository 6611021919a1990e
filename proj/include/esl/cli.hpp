#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace esl::cli {

struct Config {
    std::filesystem::path cache_dir;  // empty: no cache
    int oversample = 64;
    std::size_t max_fft = std::size_t{1} << 27;
    unsigned workers = 1;
    std::size_t sieve_segment = std::size_t{1} << 22;

    static Config defaults();  // workers = hardware concurrency
    void validate() const;     // ArgumentError on oversample < 4 or max_fft not a power of two
};

// Applies one key=value setting (cache_dir, oversample, max_fft, workers, sieve_segment).
void apply_setting(Config& config, std::string_view key, std::string_view value);
// Reads `key=value` lines; blank lines and lines starting with '#' are skipped.
void apply_config_file(Config& config, const std::filesystem::path& path);

// Exit codes: 0 success, 1 argument error, 2 resource error, 3 failed verification.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esl::cli
