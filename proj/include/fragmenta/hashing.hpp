#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string_view>

namespace fragmenta {

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 14695981039346656037ULL);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of words into one well-mixed seed.
std::uint64_t combine_seed(std::initializer_list<std::uint64_t> words);

}  // namespace fragmenta
