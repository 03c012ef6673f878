// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kuq::detail {

/// "%.17g": round-trips every float64.
std::string format_double(double x);

void write_float64_le(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_float64_le(const std::filesystem::path& path);

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::span<const double> values, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t h);

}  // namespace kuq::detail
