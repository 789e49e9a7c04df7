#pragma once

#include <optional>

#include "faircrowd/fp.hpp"

namespace faircrowd::gm {

// Tower: Fp2 = Fp[i]/(i^2+1), Fp6 = Fp2[v]/(v^3 - xi), Fp12 = Fp6[w]/(w^2 - v),
// with xi = 3 + i (quadratic and cubic non-residue in Fp2).

inline constexpr u64 XI_A = 3;  // xi = XI_A + i

struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }
    static Fp2 xi() { return {Fp::from_u64(XI_A), Fp::one()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }
    Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    Fp2 operator*(const Fp2& o) const {
        Fp v0 = c0 * o.c0;
        Fp v1 = c1 * o.c1;
        Fp mixed = (c0 + c1) * (o.c0 + o.c1);
        return {v0 - v1, mixed - v0 - v1};
    }
    Fp2 mul_fp(const Fp& s) const { return {c0 * s, c1 * s}; }
    Fp2 sqr() const {
        Fp t0 = (c0 + c1) * (c0 - c1);
        Fp t1 = (c0 * c1).dbl();
        return {t0, t1};
    }
    Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
    Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
    Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

    // (3 + i) * (c0 + c1 i) = (3 c0 - c1) + (c0 + 3 c1) i
    Fp2 mul_xi() const {
        Fp three_c0 = c0 + c0 + c0;
        Fp three_c1 = c1 + c1 + c1;
        return {three_c0 - c1, c0 + three_c1};
    }
    Fp2 conj() const { return {c0, -c1}; }

    Fp norm() const { return c0 * c0 + c1 * c1; }

    Fp2 inv() const {
        Fp n = norm().inv();
        return {c0 * n, -(c1 * n)};
    }

    Fp2 pow(const U256& e) const {
        Fp2 base = *this;
        Fp2 acc = one();
        for (int i = e.bit_length() - 1; i >= 0; --i) {
            acc = acc.sqr();
            if (e.bit(i)) acc = acc * base;
        }
        return acc;
    }

    // quadratic residue test via the norm map
    bool is_square() const {
        if (is_zero()) return true;
        return norm().legendre() == 1;
    }

    // sqrt for p = 3 mod 4, norm method; nullopt if non-residue
    std::optional<Fp2> sqrt() const {
        if (is_zero()) return zero();
        Fp n = norm();
        auto lam = n.sqrt();
        if (!lam) return std::nullopt;
        Fp inv2 = Fp::from_u64(2).inv();
        Fp delta = (c0 + *lam) * inv2;
        auto x0 = delta.sqrt();
        if (!x0) {
            delta = (c0 - *lam) * inv2;
            x0 = delta.sqrt();
            if (!x0) return std::nullopt;
        }
        if (x0->is_zero()) {
            // c = -c1^2 form; sqrt lies on the i axis
            auto x1 = (-c0).sqrt();
            if (!x1) return std::nullopt;
            Fp2 cand{Fp::zero(), *x1};
            if (cand.sqr() == *this) return cand;
            return std::nullopt;
        }
        Fp x1 = c1 * (x0->dbl()).inv();
        Fp2 cand{*x0, x1};
        if (cand.sqr() == *this) return cand;
        return std::nullopt;
    }

    static Fp2 random(Drbg& rng) { return {Fp::random(rng), Fp::random(rng)}; }
};

struct Fp6 {
    Fp2 c0, c1, c2;  // c0 + c1 v + c2 v^2

    static Fp6 zero() { return {}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }

    Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }

    Fp6 operator*(const Fp6& o) const {
        Fp2 v0 = c0 * o.c0;
        Fp2 v1 = c1 * o.c1;
        Fp2 v2 = c2 * o.c2;
        Fp2 t0 = ((c1 + c2) * (o.c1 + o.c2) - v1 - v2).mul_xi() + v0;
        Fp2 t1 = (c0 + c1) * (o.c0 + o.c1) - v0 - v1 + v2.mul_xi();
        Fp2 t2 = (c0 + c2) * (o.c0 + o.c2) - v0 - v2 + v1;
        return {t0, t1, t2};
    }
    Fp6 mul_fp2(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }
    Fp6 sqr() const { return *this * *this; }

    // multiply by v: (c0, c1, c2) -> (xi c2, c0, c1)
    Fp6 mul_v() const { return {c2.mul_xi(), c0, c1}; }

    Fp6 inv() const {
        Fp2 a = c0.sqr() - (c1 * c2).mul_xi();
        Fp2 b = c2.sqr().mul_xi() - c0 * c1;
        Fp2 c = c1.sqr() - c0 * c2;
        Fp2 f = (c0 * a + (c2 * b + c1 * c).mul_xi()).inv();
        return {a * f, b * f, c * f};
    }
};

struct Fp12 {
    Fp6 c0, c1;  // c0 + c1 w

    static Fp12 zero() { return {}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool is_one() const { return *this == one(); }
    bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp12& o) const { return !(*this == o); }

    Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

    Fp12 operator*(const Fp12& o) const {
        Fp6 v0 = c0 * o.c0;
        Fp6 v1 = c1 * o.c1;
        Fp6 t1 = (c0 + c1) * (o.c0 + o.c1) - v0 - v1;
        return {v0 + v1.mul_v(), t1};
    }
    Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

    Fp12 sqr() const {
        Fp6 v0 = c0 * c1;
        Fp6 t0 = (c0 + c1) * (c0 + c1.mul_v()) - v0 - v0.mul_v();
        return {t0, v0 + v0};
    }

    Fp12 inv() const {
        Fp6 n = (c0.sqr() - c1.sqr().mul_v()).inv();
        return {c0 * n, -(c1 * n)};
    }

    // conjugate over Fp6 = Frobenius^6; inverse for unitary elements
    Fp12 conj() const { return {c0, -c1}; }

    Fp12 pow(const U256& e) const {
        Fp12 base = *this;
        Fp12 acc = one();
        for (int i = e.bit_length() - 1; i >= 0; --i) {
            acc = acc.sqr();
            if (e.bit(i)) acc = acc * base;
        }
        return acc;
    }

    // pow with a wide little-endian limb exponent (for the final-exponentiation
    // hard part and subgroup checks)
    Fp12 pow_limbs(std::span<const u64> e) const {
        int bits = 0;
        for (int i = static_cast<int>(e.size()) - 1; i >= 0; --i) {
            if (e[i]) {
                bits = 64 * i + 64 - __builtin_clzll(e[i]);
                break;
            }
        }
        Fp12 base = *this;
        Fp12 acc = one();
        for (int i = bits - 1; i >= 0; --i) {
            acc = acc.sqr();
            if ((e[i / 64] >> (i % 64)) & 1) acc = acc * base;
        }
        return acc;
    }
};

}  // namespace faircrowd::gm
