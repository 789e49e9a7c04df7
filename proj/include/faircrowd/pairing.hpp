#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faircrowd/bytes.hpp"
#include "faircrowd/ec.hpp"

namespace faircrowd::gm {

// Element of the order-r subgroup of Fp12* (pairing target group).
// Elements produced by pairing() and by the GT ops below are unitary, so the
// inverse is the Fp6-conjugate.
struct GT {
    Fp12 val;

    static GT one() { return {Fp12::one()}; }
    bool is_one() const { return val.is_one(); }
    bool operator==(const GT& o) const { return val == o.val; }
    bool operator!=(const GT& o) const { return !(val == o.val); }

    GT operator*(const GT& o) const { return {val * o.val}; }
    GT& operator*=(const GT& o) {
        val *= o.val;
        return *this;
    }
    GT inv() const { return {val.conj()}; }
    GT pow(const Fr& e) const { return {val.pow(e.to_u256())}; }
    GT pow_u64(u64 e) const { return {val.pow(U256::from_u64(e))}; }
};

GT pairing(const G1& p, const G2& q);

// Split pairing: products of pairings raised to powers can share one final
// exponentiation because x -> x^((p^12-1)/r) is a homomorphism. pairing(p, q)
// == finalize_pairing(miller_loop(p, q)) exactly.
Fp12 miller_loop(const G1& p, const G2& q);
GT finalize_pairing(const Fp12& miller_value);

// Frobenius endomorphism on Fp12 (power 1 or 2), used by the pairing and its
// tests.
Fp12 frobenius(const Fp12& f, int power);

// pi_p and pi_p^2 on twist coordinates
G2 g2_frobenius(const G2& q);
G2 g2_frobenius_sqr(const G2& q);

// --- hashing ---
Fr hash_to_scalar(std::span<const uint8_t> data);
G1 hash_to_g1(std::span<const uint8_t> data);
G2 hash_to_g2(std::span<const uint8_t> data);

inline Fr hash_to_scalar(const Bytes& b) { return hash_to_scalar(std::span<const uint8_t>(b)); }

// --- canonical encodings (compressed, fixed width) ---
inline constexpr size_t G1_BYTES = 33;   // flag byte + x
inline constexpr size_t G2_BYTES = 65;   // flag byte + x.c0 + x.c1
inline constexpr size_t GT_BYTES = 384;  // 12 Fp coefficients
inline constexpr size_t FR_BYTES = 32;

Bytes g1_to_bytes(const G1& p);
Bytes g2_to_bytes(const G2& q);
Bytes gt_to_bytes(const GT& t);
std::optional<G1> g1_from_bytes(std::span<const uint8_t> b);
std::optional<G2> g2_from_bytes(std::span<const uint8_t> b);
std::optional<GT> gt_from_bytes(std::span<const uint8_t> b);  // subgroup-checked

// Pairing group context: the shared generators. Dimension l gives g_1..g_l in
// G1 and h_1..h_l in G2, all derived by hashing fixed labels, so two runs of
// par_gen agree without any trusted setup.
struct PairingContext {
    uint32_t l = 0;
    G1 g;
    G2 h;
    std::vector<G1> g_vec;  // g_1..g_l
    std::vector<G2> h_vec;  // h_1..h_l
    FixedBase<G2> h_tbl;    // comb table for the hottest base

    static PairingContext make(uint32_t l);

    G2 h_pow(const Fr& e) const { return h_tbl.mul(e); }
};

namespace detail {
// final exponentiation split for tests: full = hard(easy(f)), and the hard
// part has two routes (plain 766-bit exponent vs the BN addition chain)
Fp12 final_exp_easy(const Fp12& f);
Fp12 final_exp_hard_plain(const Fp12& f);
Fp12 final_exp_hard_chain(const Fp12& f);
}  // namespace detail

}  // namespace faircrowd::gm
