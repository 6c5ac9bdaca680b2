#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kotoc {

using Rng = std::mt19937_64;

/// Independent generator for (master seed, purpose tag, index). Streams depend only on
/// these three values, never on scheduling.
Rng make_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index);

}  // namespace kotoc
