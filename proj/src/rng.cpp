#include "faircrowd/rng.hpp"

#include <cstring>
#include <random>

#include "faircrowd/sha256.hpp"

namespace faircrowd {

namespace {

inline uint32_t rotl(uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

inline void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl(d, 16);
    c += d; b ^= c; b = rotl(b, 12);
    a += b; d ^= a; d = rotl(d, 8);
    c += d; b ^= c; b = rotl(b, 7);
}

// RFC 8439 block function, 64-bit block counter, zero nonce (counter never
// wraps at the volumes used here).
void chacha20_block(const std::array<uint8_t, 32>& key, uint64_t counter,
                    std::array<uint8_t, 64>& out) {
    uint32_t state[16];
    state[0] = 0x61707865;
    state[1] = 0x3320646e;
    state[2] = 0x79622d32;
    state[3] = 0x6b206574;
    for (int i = 0; i < 8; ++i) {
        state[4 + i] = static_cast<uint32_t>(key[4 * i]) | static_cast<uint32_t>(key[4 * i + 1]) << 8 |
                       static_cast<uint32_t>(key[4 * i + 2]) << 16 | static_cast<uint32_t>(key[4 * i + 3]) << 24;
    }
    state[12] = static_cast<uint32_t>(counter);
    state[13] = static_cast<uint32_t>(counter >> 32);
    state[14] = 0;
    state[15] = 0;

    uint32_t w[16];
    std::memcpy(w, state, sizeof(w));
    for (int round = 0; round < 10; ++round) {
        quarter_round(w[0], w[4], w[8], w[12]);
        quarter_round(w[1], w[5], w[9], w[13]);
        quarter_round(w[2], w[6], w[10], w[14]);
        quarter_round(w[3], w[7], w[11], w[15]);
        quarter_round(w[0], w[5], w[10], w[15]);
        quarter_round(w[1], w[6], w[11], w[12]);
        quarter_round(w[2], w[7], w[8], w[13]);
        quarter_round(w[3], w[4], w[9], w[14]);
    }
    for (int i = 0; i < 16; ++i) {
        uint32_t v = w[i] + state[i];
        out[4 * i] = static_cast<uint8_t>(v);
        out[4 * i + 1] = static_cast<uint8_t>(v >> 8);
        out[4 * i + 2] = static_cast<uint8_t>(v >> 16);
        out[4 * i + 3] = static_cast<uint8_t>(v >> 24);
    }
}

}  // namespace

Drbg::Drbg() {
    std::random_device rd;
    for (size_t i = 0; i < key_.size(); i += 4) {
        uint32_t v = rd();
        std::memcpy(key_.data() + i, &v, 4);
    }
}

Drbg::Drbg(uint64_t seed) {
    ByteWriter w;
    w.str("FairCrowd/seed/v1");
    w.u64(seed);
    key_ = sha256(w.bytes());
}

Drbg::Drbg(const std::array<uint8_t, 32>& key) : key_(key) {}

void Drbg::refill() {
    chacha20_block(key_, counter_++, block_);
    avail_ = block_.size();
}

void Drbg::fill(std::span<uint8_t> out) {
    size_t pos = 0;
    while (pos < out.size()) {
        if (avail_ == 0) refill();
        size_t take = std::min(avail_, out.size() - pos);
        std::memcpy(out.data() + pos, block_.data() + (block_.size() - avail_), take);
        avail_ -= take;
        pos += take;
    }
}

uint64_t Drbg::next_u64() {
    uint8_t buf[8];
    fill(buf);
    uint64_t v = 0;
    for (uint8_t b : buf) v = v << 8 | b;
    return v;
}

uint64_t Drbg::uniform(uint64_t n) {
    // rejection sampling over the top multiple of n
    uint64_t limit = n == 0 ? 0 : UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

Drbg Drbg::fork(std::string_view label) const {
    ByteWriter w;
    w.str("FairCrowd/fork/v1");
    w.raw(key_);
    w.u64(counter_);
    w.str(label);
    return Drbg(sha256(w.bytes()));
}

}  // namespace faircrowd
