#pragma once

#include "faircrowd/pvas.hpp"
#include "faircrowd/result.hpp"
#include "faircrowd/sigma.hpp"

// Canonical binary encodings for everything that crosses a trust boundary:
// fixed-width group elements, framed [tag, version] records, length-prefixed
// variable fields. Deterministic, rejects trailing bytes, and refuses to
// serialize witness-bearing values.
namespace faircrowd::codec {

inline constexpr uint8_t FORMAT_VERSION = 1;

enum class Tag : uint8_t {
    Params = 1,
    Cipher = 2,
    HomSig = 3,
    Resign = 4,
    Aggregate = 5,
    Proof = 6,
};

Bytes encode_params(const pvas::PublicParams& pp);
Res<pvas::PublicParams> decode_params(std::span<const uint8_t> b);

Res<Bytes> encode_cipher(const pvas::CipherBundle& cb);  // SecretFieldPresent if witness kept
Res<pvas::CipherBundle> decode_cipher(std::span<const uint8_t> b);

Res<Bytes> encode_homsig(const pvas::HomSig& s);  // SecretFieldPresent if witness kept
Res<pvas::HomSig> decode_homsig(std::span<const uint8_t> b);

Bytes encode_resign(const pvas::ResignKey& rk);
Res<pvas::ResignKey> decode_resign(std::span<const uint8_t> b);

Bytes encode_aggregate(const pvas::AggregateBundle& agg);
Res<pvas::AggregateBundle> decode_aggregate(std::span<const uint8_t> b);

Bytes encode_proof(const sigma::ConsistencyProof& proof);
Res<sigma::ConsistencyProof> decode_proof(std::span<const uint8_t> b);

// Byte-size manifest used for the storage accounting. Variable types carry
// their closed-form size in the dimension l.
struct Manifest {
    uint8_t version = FORMAT_VERSION;
    size_t scalar = gm::FR_BYTES;
    size_t g1 = gm::G1_BYTES;
    size_t g2 = gm::G2_BYTES;
    size_t gt = gm::GT_BYTES;
    size_t homsig = 2 + gm::G1_BYTES + gm::G2_BYTES + gm::G1_BYTES;
    size_t resign = 2 + gm::G2_BYTES;

    static size_t cipher(uint32_t l) { return 2 + 4 + 2ull * l * gm::G2_BYTES; }
    static size_t aggregate(uint32_t l) {
        return 2 + 4 + 2ull * l * gm::G2_BYTES + gm::GT_BYTES + gm::G2_BYTES;
    }
    static size_t proof(uint32_t l) { return sigma::proof_encoded_size(l); }
};

}  // namespace faircrowd::codec
