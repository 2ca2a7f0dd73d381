#include "mobnil/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mobnil/error.hpp"

namespace mobnil {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    int base = 10;
    std::string digits = value;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        base = 16;
        digits = digits.substr(2);
    }
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ValidationError("config: " + key + " expects an integer, got \"" + value + "\"");
    }
    return out;
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "cache_path") {
        config.cache_path = value;
    } else if (key == "memory_cap_bytes") {
        config.memory_cap_bytes = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed") {
        config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "thread_count") {
        if (value == "auto") {
            config.thread_count = 0;
        } else {
            const int n = parse_number<int>(key, value);
            if (n < 1) throw ValidationError("config: thread_count must be a positive integer or \"auto\"");
            config.thread_count = n;
        }
    } else if (key == "output_format") {
        if (value != "csv" && value != "json") throw ValidationError("config: output_format must be csv or json");
        config.output_format = value;
    } else {
        throw ValidationError("config: unknown key \"" + key + "\"");
    }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), base);
}

}  // namespace mobnil
