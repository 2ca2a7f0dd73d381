#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mobnil/sieve.hpp"

namespace mobnil::sieve {

inline constexpr std::uint32_t kCacheVersion = 1;

// Serialized table: "MBT1", u32 version, u64 n_max, n_max signed bytes,
// then a CRC-32 of every byte before it. All integers little-endian.
std::vector<std::uint8_t> encode_table(const MobiusTable& table);
MobiusTable decode_table(const std::vector<std::uint8_t>& bytes);

void write_table(const MobiusTable& table, const std::string& path);
MobiusTable read_table(const std::string& path);

// Loads the cache if it covers n_max, otherwise sieves and rewrites it.
// An empty path disables caching.
MobiusTable load_or_sieve(std::int64_t n_max, const std::string& path,
                          std::uint64_t memory_cap = kDefaultMemoryCap);

}  // namespace mobnil::sieve
