#include "kotoc/random.hpp"

namespace kotoc {

namespace {

// FNV-1a, stable across platforms unlike std::hash.
std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

Rng make_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index) {
    const std::uint64_t tag = fnv1a(purpose);
    std::seed_seq seq{lo(seed), hi(seed), lo(tag), hi(tag), lo(index), hi(index)};
    return Rng(seq);
}

}  // namespace kotoc
