#include "faircrowd/sha256.hpp"

#include <openssl/sha.h>

namespace faircrowd {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
    std::array<uint8_t, 32> out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

}  // namespace faircrowd
