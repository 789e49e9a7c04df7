#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "faircrowd/bytes.hpp"

namespace faircrowd {

// Deterministic random generator backed by the ChaCha20 block function.
// Seeded from the OS by default; seedable for reproducible runs. Streams for
// independent actors are derived with fork() so per-user randomness does not
// depend on call interleaving.
class Drbg {
public:
    Drbg();                                   // OS entropy
    explicit Drbg(uint64_t seed);             // deterministic
    explicit Drbg(const std::array<uint8_t, 32>& key);

    void fill(std::span<uint8_t> out);
    uint64_t next_u64();
    // uniform in [0, n), n > 0
    uint64_t uniform(uint64_t n);

    Drbg fork(std::string_view label) const;

private:
    void refill();

    std::array<uint8_t, 32> key_{};
    uint64_t counter_ = 0;
    std::array<uint8_t, 64> block_{};
    size_t avail_ = 0;
};

}  // namespace faircrowd
