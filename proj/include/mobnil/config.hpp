#pragma once

#include <cstdint>
#include <string>

namespace mobnil {

struct RunConfig {
    std::string cache_path;
    std::uint64_t memory_cap_bytes = std::uint64_t{2} << 30;
    std::uint64_t seed = 0x5eed;
    int thread_count = 0;  // 0 is "auto"
    std::string output_format = "csv";
};

// Lines of "key = value"; '#' starts a comment. Throws ValidationError.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Applies one setting; the same keys as the config file.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace mobnil
