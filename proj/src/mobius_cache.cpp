#include "mobnil/mobius_cache.hpp"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace mobnil::sieve {

namespace {

constexpr char kMagic[4] = {'M', 'B', 'T', '1'};
constexpr std::size_t kHeader = 4 + 4 + 8;

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <class T>
T get_le(const std::uint8_t* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
    return v;
}

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const auto step = static_cast<uInt>(std::min<std::size_t>(n, std::size_t{1} << 30));
        crc = crc32(crc, data, step);
        data += step;
        n -= step;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> encode_table(const MobiusTable& table) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeader + static_cast<std::size_t>(table.n_max) + 4);
    out.insert(out.end(), kMagic, kMagic + 4);
    put_le<std::uint32_t>(out, kCacheVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(table.n_max));
    for (std::int64_t n = 1; n <= table.n_max; ++n) out.push_back(static_cast<std::uint8_t>(table.values[n]));
    put_le<std::uint32_t>(out, crc32_of(out.data(), out.size()));
    return out;
}

MobiusTable decode_table(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kHeader + 4) throw FormatError("mobius cache: truncated header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("mobius cache: bad magic");
    const auto version = get_le<std::uint32_t>(bytes.data() + 4);
    if (version != kCacheVersion) throw FormatError("mobius cache: unsupported version " + std::to_string(version));
    const auto n_max = get_le<std::uint64_t>(bytes.data() + 8);
    if (n_max < 1 || bytes.size() - kHeader - 4 != n_max) throw FormatError("mobius cache: length mismatch");
    const std::size_t body = kHeader + static_cast<std::size_t>(n_max);
    if (crc32_of(bytes.data(), body) != get_le<std::uint32_t>(bytes.data() + body)) {
        throw ChecksumError("mobius cache: checksum mismatch");
    }
    MobiusTable t;
    t.n_max = static_cast<std::int64_t>(n_max);
    t.values.assign(static_cast<std::size_t>(n_max) + 1, 0);
    for (std::size_t i = 0; i < n_max; ++i) {
        const auto v = static_cast<std::int8_t>(bytes[kHeader + i]);
        if (v < -1 || v > 1) throw FormatError("mobius cache: value out of {-1,0,1}");
        t.values[i + 1] = v;
    }
    return t;
}

void write_table(const MobiusTable& table, const std::string& path) {
    const auto bytes = encode_table(table);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("mobius cache: cannot open " + tmp);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("mobius cache: write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("mobius cache: cannot move into " + path + ": " + ec.message());
}

MobiusTable read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("mobius cache: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_table(bytes);
}

MobiusTable load_or_sieve(std::int64_t n_max, const std::string& path, std::uint64_t memory_cap) {
    if (!path.empty() && std::filesystem::exists(path)) {
        MobiusTable cached = read_table(path);
        if (cached.n_max >= n_max) {
            cached.values.resize(static_cast<std::size_t>(n_max) + 1);
            cached.n_max = n_max;
            return cached;
        }
    }
    MobiusTable t = sieve_mobius(n_max, memory_cap);
    if (!path.empty()) write_table(t, path);
    return t;
}

}  // namespace mobnil::sieve
