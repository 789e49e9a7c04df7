#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>

#include "faircrowd/rng.hpp"

namespace faircrowd::gm {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// --- 4-limb little-endian helpers (values < 2^256) ---

struct U256 {
    u64 limb[4] = {0, 0, 0, 0};

    static U256 from_u64(u64 v) {
        U256 r;
        r.limb[0] = v;
        return r;
    }
    bool is_zero() const { return (limb[0] | limb[1] | limb[2] | limb[3]) == 0; }
    bool is_odd() const { return limb[0] & 1; }
    bool operator==(const U256& o) const {
        return limb[0] == o.limb[0] && limb[1] == o.limb[1] && limb[2] == o.limb[2] && limb[3] == o.limb[3];
    }
    int bit_length() const {
        for (int i = 3; i >= 0; --i) {
            if (limb[i]) return 64 * i + 64 - __builtin_clzll(limb[i]);
        }
        return 0;
    }
    bool bit(int i) const { return (limb[i / 64] >> (i % 64)) & 1; }
};

// a < b ? -1 : a == b ? 0 : 1
inline int u256_cmp(const u64 a[4], const u64 b[4]) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

// out = a + b, returns carry
inline u64 u256_add(u64 out[4], const u64 a[4], const u64 b[4]) {
    u128 c = 0;
    for (int i = 0; i < 4; ++i) {
        c += static_cast<u128>(a[i]) + b[i];
        out[i] = static_cast<u64>(c);
        c >>= 64;
    }
    return static_cast<u64>(c);
}

// out = a - b, returns borrow
inline u64 u256_sub(u64 out[4], const u64 a[4], const u64 b[4]) {
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u64 ai = a[i], bi = b[i];
        u64 d = ai - bi;
        u64 nb = (ai < bi) ? 1 : 0;
        u64 d2 = d - borrow;
        nb |= (d < borrow) ? 1 : 0;
        out[i] = d2;
        borrow = nb;
    }
    return borrow;
}

inline void u256_rshift1(u64 v[4]) {
    for (int i = 0; i < 3; ++i) v[i] = (v[i] >> 1) | (v[i + 1] << 63);
    v[3] >>= 1;
}

inline void u256_to_be_bytes(const u64 v[4], uint8_t out[32]) {
    for (int i = 0; i < 4; ++i) {
        u64 w = v[3 - i];
        for (int j = 0; j < 8; ++j) out[8 * i + j] = static_cast<uint8_t>(w >> (56 - 8 * j));
    }
}

inline void u256_from_be_bytes(u64 out[4], const uint8_t in[32]) {
    for (int i = 0; i < 4; ++i) {
        u64 w = 0;
        for (int j = 0; j < 8; ++j) w = w << 8 | in[8 * i + j];
        out[3 - i] = w;
    }
}

// --- Curve family constants (BN parametrization, u = 6332666225848382053) ---
// p = 36u^4+36u^3+24u^2+6u+1 (field prime), r = p - 6u^2 (group order),
// both 256-bit primes, p = 3 mod 4. Found by deterministic search for the
// smallest u with these properties; b = 10, tower constant xi = 3 + i.

struct FpTag {
    static constexpr u64 MOD[4] = {0x2c0e9f3ac1e14eafULL, 0x43bafa32e3edef14ULL, 0xca749facf7b1c33bULL,
                                   0x80000000000046e2ULL};
    static constexpr u64 R2[4] = {0xa9e39937953ecf1dULL, 0xe450ff08c5d7d46cULL, 0xed2d026730b10e48ULL,
                                  0x628141c5b6127939ULL};
    static constexpr u64 ONE[4] = {0xd3f160c53e1eb151ULL, 0xbc4505cd1c1210ebULL, 0x358b6053084e3cc4ULL,
                                   0x7fffffffffffb91dULL};
    static constexpr u64 N0 = 0x7e9677ca45ff37b1ULL;
};

struct FrTag {
    static constexpr u64 MOD[4] = {0x22303f688fe4a799ULL, 0x8eb606feea0f5871ULL, 0xca749facf7b1c33aULL,
                                   0x80000000000046e2ULL};
    static constexpr u64 R2[4] = {0xd864f62b301a25e0ULL, 0x37203f3f69bbbd1fULL, 0xf85dcad98b604d6fULL,
                                  0x453033fb15bf4887ULL};
    static constexpr u64 ONE[4] = {0xddcfc097701b5867ULL, 0x7149f90115f0a78eULL, 0x358b6053084e3cc5ULL,
                                   0x7fffffffffffb91dULL};
    static constexpr u64 N0 = 0x6b1b3be3f99e4357ULL;
};

// BN parameter u and the optimal-ate loop count 6u+2 (66 bits, fits u128).
inline constexpr u64 BN_U = 6332666225848382053ULL;
inline constexpr u128 BN_ATE_LOOP = static_cast<u128>(6) * BN_U + 2;

// Prime field element in Montgomery form, 4x64 limbs.
template <class Tag>
class Fe {
public:
    Fe() = default;

    static Fe zero() { return Fe(); }
    static Fe one() {
        Fe r;
        std::memcpy(r.v_, Tag::ONE, sizeof(r.v_));
        return r;
    }
    static Fe from_u64(u64 v) {
        Fe r;
        r.v_[0] = v;
        return mont_mul_fe(r, r2());
    }
    // value mod m, from a 4-limb little-endian integer (any value < 2^256)
    static Fe from_u256(const U256& v) {
        Fe r;
        std::memcpy(r.v_, v.limb, sizeof(r.v_));
        // up to one conditional subtraction is not enough for arbitrary
        // 256-bit input; subtract until below the modulus (at most twice
        // since MOD > 2^255)
        while (u256_cmp(r.v_, Tag::MOD) >= 0) u256_sub(r.v_, r.v_, Tag::MOD);
        return mont_mul_fe(r, r2());
    }
    // strict: rejects bytes encoding a value >= MOD
    static std::optional<Fe> from_bytes(std::span<const uint8_t> b) {
        if (b.size() != 32) return std::nullopt;
        Fe r;
        u256_from_be_bytes(r.v_, b.data());
        if (u256_cmp(r.v_, Tag::MOD) >= 0) return std::nullopt;
        return mont_mul_fe(r, r2());
    }

    void to_bytes(uint8_t out[32]) const {
        Fe plain = mont_mul_fe(*this, unit());
        u256_to_be_bytes(plain.v_, out);
    }
    std::array<uint8_t, 32> bytes() const {
        std::array<uint8_t, 32> out;
        to_bytes(out.data());
        return out;
    }
    U256 to_u256() const {
        Fe plain = mont_mul_fe(*this, unit());
        U256 r;
        std::memcpy(r.limb, plain.v_, sizeof(r.limb));
        return r;
    }

    static Fe random(Drbg& rng) {
        uint8_t buf[32];
        for (;;) {
            rng.fill(buf);
            Fe r;
            u256_from_be_bytes(r.v_, buf);
            if (u256_cmp(r.v_, Tag::MOD) < 0) return mont_mul_fe(r, r2());
        }
    }
    static Fe random_nonzero(Drbg& rng) {
        for (;;) {
            Fe r = random(rng);
            if (!r.is_zero()) return r;
        }
    }

    bool is_zero() const { return (v_[0] | v_[1] | v_[2] | v_[3]) == 0; }
    bool operator==(const Fe& o) const { return u256_cmp(v_, o.v_) == 0; }
    bool operator!=(const Fe& o) const { return !(*this == o); }

    Fe operator+(const Fe& o) const {
        Fe r;
        u64 carry = u256_add(r.v_, v_, o.v_);
        if (carry || u256_cmp(r.v_, Tag::MOD) >= 0) u256_sub(r.v_, r.v_, Tag::MOD);
        return r;
    }
    Fe operator-(const Fe& o) const {
        Fe r;
        u64 borrow = u256_sub(r.v_, v_, o.v_);
        if (borrow) u256_add(r.v_, r.v_, Tag::MOD);
        return r;
    }
    Fe operator-() const {
        if (is_zero()) return *this;
        Fe r;
        u256_sub(r.v_, Tag::MOD, v_);
        return r;
    }
    Fe operator*(const Fe& o) const { return mont_mul_fe(*this, o); }
    Fe& operator+=(const Fe& o) { return *this = *this + o; }
    Fe& operator-=(const Fe& o) { return *this = *this - o; }
    Fe& operator*=(const Fe& o) { return *this = *this * o; }

    Fe sqr() const { return *this * *this; }
    Fe dbl() const { return *this + *this; }

    Fe pow(const U256& e) const {
        Fe base = *this;
        Fe acc = one();
        int bits = e.bit_length();
        for (int i = bits - 1; i >= 0; --i) {
            acc = acc.sqr();
            if (e.bit(i)) acc = acc * base;
        }
        return acc;
    }

    // multiplicative inverse; zero maps to zero (callers guard)
    Fe inv() const {
        if (is_zero()) return *this;
        // binary extended gcd on the plain representation
        Fe plain = mont_mul_fe(*this, unit());
        u64 u[4], v[4], x1[4], x2[4];
        std::memcpy(u, plain.v_, sizeof(u));
        std::memcpy(v, Tag::MOD, sizeof(v));
        std::memset(x1, 0, sizeof(x1));
        x1[0] = 1;
        std::memset(x2, 0, sizeof(x2));
        auto halve_mod = [](u64 x[4]) {
            if (x[0] & 1) {
                u64 carry = u256_add(x, x, Tag::MOD);
                for (int i = 0; i < 3; ++i) x[i] = (x[i] >> 1) | (x[i + 1] << 63);
                x[3] = (x[3] >> 1) | (carry << 63);
            } else {
                u256_rshift1(x);
            }
        };
        auto sub_mod = [](u64 a[4], const u64 b[4]) {
            if (u256_sub(a, a, b)) u256_add(a, a, Tag::MOD);
        };
        auto is_one = [](const u64 x[4]) { return x[0] == 1 && !(x[1] | x[2] | x[3]); };
        while (!is_one(u) && !is_one(v)) {
            while (!(u[0] & 1)) {
                u256_rshift1(u);
                halve_mod(x1);
            }
            while (!(v[0] & 1)) {
                u256_rshift1(v);
                halve_mod(x2);
            }
            if (u256_cmp(u, v) >= 0) {
                u256_sub(u, u, v);
                sub_mod(x1, x2);
            } else {
                u256_sub(v, v, u);
                sub_mod(x2, x1);
            }
        }
        Fe r;
        std::memcpy(r.v_, is_one(u) ? x1 : x2, sizeof(r.v_));
        // r = plain^-1 (plain repr); two R2 multiplications bring it to
        // Montgomery form of value^-1 = (plain)^-1 * R^2... one suffices:
        // want inv(value)*R = plain^-1 * R^2 * R^-1 * R^2 * R^-1? Walk it:
        // value = plain, Montgomery form of value^-1 is value^-1 * R.
        // r = value^-1 mod m (plain). mont_mul(r, R2) = r * R = done.
        return mont_mul_fe(r, r2());
    }

    // Legendre symbol: 1 (QR), -1 (non-QR), 0 (zero)
    int legendre() const {
        if (is_zero()) return 0;
        U256 e;
        std::memcpy(e.limb, Tag::MOD, sizeof(e.limb));
        u64 one_l[4] = {1, 0, 0, 0};
        u256_sub(e.limb, e.limb, one_l);
        u256_rshift1(e.limb);
        Fe s = pow(e);
        return s == one() ? 1 : -1;
    }

    // square root for MOD = 3 mod 4; nullopt if non-residue
    std::optional<Fe> sqrt() const {
        U256 e;
        std::memcpy(e.limb, Tag::MOD, sizeof(e.limb));
        u64 one_l[4] = {1, 0, 0, 0};
        u256_add(e.limb, e.limb, one_l);  // p+1 overflows 256 bits? p < 2^256-1 so fine
        u256_rshift1(e.limb);
        u256_rshift1(e.limb);
        Fe cand = pow(e);
        if (cand.sqr() == *this) return cand;
        return std::nullopt;
    }

    static U256 modulus() {
        U256 m;
        std::memcpy(m.limb, Tag::MOD, sizeof(m.limb));
        return m;
    }

private:
    static Fe r2() {
        Fe r;
        std::memcpy(r.v_, Tag::R2, sizeof(r.v_));
        return r;
    }
    // the integer 1 (not Montgomery one); multiplying by it performs a
    // plain Montgomery reduction
    static Fe unit() {
        Fe r;
        r.v_[0] = 1;
        return r;
    }

    // CIOS Montgomery multiplication
    static Fe mont_mul_fe(const Fe& a, const Fe& b) {
        u64 t[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i) {
            u64 c = 0;
            for (int j = 0; j < 4; ++j) {
                u128 z = static_cast<u128>(t[j]) + static_cast<u128>(a.v_[i]) * b.v_[j] + c;
                t[j] = static_cast<u64>(z);
                c = static_cast<u64>(z >> 64);
            }
            u128 z = static_cast<u128>(t[4]) + c;
            t[4] = static_cast<u64>(z);
            t[5] = static_cast<u64>(z >> 64);

            u64 m = t[0] * Tag::N0;
            u128 z2 = static_cast<u128>(t[0]) + static_cast<u128>(m) * Tag::MOD[0];
            c = static_cast<u64>(z2 >> 64);
            for (int j = 1; j < 4; ++j) {
                u128 zz = static_cast<u128>(t[j]) + static_cast<u128>(m) * Tag::MOD[j] + c;
                t[j - 1] = static_cast<u64>(zz);
                c = static_cast<u64>(zz >> 64);
            }
            u128 zz = static_cast<u128>(t[4]) + c;
            t[3] = static_cast<u64>(zz);
            t[4] = t[5] + static_cast<u64>(zz >> 64);
        }
        Fe r;
        std::memcpy(r.v_, t, sizeof(r.v_));
        if (t[4] || u256_cmp(r.v_, Tag::MOD) >= 0) u256_sub(r.v_, r.v_, Tag::MOD);
        return r;
    }

    u64 v_[4] = {0, 0, 0, 0};
};

using Fp = Fe<FpTag>;
using Fr = Fe<FrTag>;

// Comparison of plain values, for canonical sign selection in encodings.
template <class Tag>
inline int fe_cmp_plain(const Fe<Tag>& a, const Fe<Tag>& b) {
    U256 ua = a.to_u256(), ub = b.to_u256();
    return u256_cmp(ua.limb, ub.limb);
}

}  // namespace faircrowd::gm
