#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace faircrowd {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

}  // namespace faircrowd
