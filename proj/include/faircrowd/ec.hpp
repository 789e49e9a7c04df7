#pragma once

#include <optional>
#include <span>
#include <utility>

#include "faircrowd/fp_tower.hpp"

namespace faircrowd::gm {

// E(Fp):  y^2 = x^3 + 10        order r (prime, cofactor 1)
// E'(Fp2): y^2 = x^3 + 10/xi    D-type sextic twist, order r * (2p - r)

struct G1CurveTag {
    static const Fp& curve_b() {
        static const Fp b = Fp::from_u64(10);
        return b;
    }
};

struct G2CurveTag {
    static const Fp2& curve_b() {
        static const Fp2 b = Fp2{Fp::from_u64(10), Fp::zero()} * Fp2::xi().inv();
        return b;
    }
};

// Jacobian point; identity is Z = 0.
template <class F, class Tag>
struct Pt {
    F X, Y, Z;

    static Pt identity() { return {F::zero(), F::one(), F::zero()}; }

    static std::optional<Pt> from_affine(const F& x, const F& y) {
        if (y.sqr() != x.sqr() * x + Tag::curve_b()) return std::nullopt;
        return Pt{x, y, F::one()};
    }

    bool is_identity() const { return Z.is_zero(); }

    bool on_curve() const {
        if (is_identity()) return true;
        // Y^2 = X^3 + b Z^6
        F z2 = Z.sqr();
        F z6 = z2.sqr() * z2;
        return Y.sqr() == X.sqr() * X + Tag::curve_b() * z6;
    }

    Pt neg() const { return {X, -Y, Z}; }

    Pt dbl() const {
        if (is_identity()) return *this;
        F a = X.sqr();
        F b = Y.sqr();
        F c = b.sqr();
        F t = X + b;
        F d = (t.sqr() - a - c).dbl();
        F e = a + a + a;
        F f = e.sqr();
        F x3 = f - d.dbl();
        F c8 = c.dbl().dbl().dbl();
        F y3 = e * (d - x3) - c8;
        F z3 = (Y * Z).dbl();
        return {x3, y3, z3};
    }

    Pt add(const Pt& o) const {
        if (is_identity()) return o;
        if (o.is_identity()) return *this;
        F z1z1 = Z.sqr();
        F z2z2 = o.Z.sqr();
        F u1 = X * z2z2;
        F u2 = o.X * z1z1;
        F s1 = Y * o.Z * z2z2;
        F s2 = o.Y * Z * z1z1;
        F h = u2 - u1;
        F rr = (s2 - s1).dbl();
        if (h.is_zero()) {
            if (rr.is_zero()) return dbl();
            return identity();
        }
        F i = h.dbl().sqr();
        F j = h * i;
        F v = u1 * i;
        F x3 = rr.sqr() - j - v.dbl();
        F y3 = rr * (v - x3) - (s1 * j).dbl();
        F zsum = Z + o.Z;
        F z3 = (zsum.sqr() - z1z1 - z2z2) * h;
        return {x3, y3, z3};
    }

    bool eq(const Pt& o) const {
        if (is_identity() || o.is_identity()) return is_identity() && o.is_identity();
        F z1z1 = Z.sqr();
        F z2z2 = o.Z.sqr();
        if (X * z2z2 != o.X * z1z1) return false;
        return Y * z2z2 * o.Z == o.Y * z1z1 * Z;
    }
    bool operator==(const Pt& o) const { return eq(o); }
    bool operator!=(const Pt& o) const { return !eq(o); }

    // 4-bit window scalar multiplication over a little-endian limb exponent
    Pt mul_limbs(std::span<const u64> k) const {
        int bits = 0;
        for (int i = static_cast<int>(k.size()) - 1; i >= 0; --i) {
            if (k[i]) {
                bits = 64 * i + 64 - __builtin_clzll(k[i]);
                break;
            }
        }
        if (bits == 0) return identity();
        Pt table[16];
        table[0] = identity();
        table[1] = *this;
        for (int i = 2; i < 16; ++i) table[i] = table[i - 1].add(*this);
        Pt acc = identity();
        int nibbles = (bits + 3) / 4;
        for (int n = nibbles - 1; n >= 0; --n) {
            acc = acc.dbl().dbl().dbl().dbl();
            unsigned idx = 0;
            for (int b = 3; b >= 0; --b) {
                int bit = n * 4 + b;
                idx <<= 1;
                if (bit < bits && ((k[bit / 64] >> (bit % 64)) & 1)) idx |= 1;
            }
            if (idx) acc = acc.add(table[idx]);
        }
        return acc;
    }

    Pt mul(const U256& k) const { return mul_limbs(std::span<const u64>(k.limb, 4)); }
    Pt mul(const Fr& k) const { return mul(k.to_u256()); }
    Pt mul_u64(u64 k) const { return mul(U256::from_u64(k)); }

    // affine coordinates; must not be identity
    std::pair<F, F> affine() const {
        F zinv = Z.inv();
        F zinv2 = zinv.sqr();
        return {X * zinv2, Y * zinv2 * zinv};
    }

    Pt normalized() const {
        if (is_identity()) return identity();
        auto [x, y] = affine();
        return {x, y, F::one()};
    }
};

using G1 = Pt<Fp, G1CurveTag>;
using G2 = Pt<Fp2, G2CurveTag>;

// Fixed-base comb: 64 4-bit windows, 15 precomputed multiples each. Turns a
// full-width scalar multiplication into at most 64 additions; pays for itself
// once a base is reused a couple dozen times.
template <class Point>
class FixedBase {
public:
    FixedBase() = default;
    explicit FixedBase(const Point& base) {
        tbl_.resize(64 * 15);
        Point w = base;
        for (int win = 0; win < 64; ++win) {
            Point acc = Point::identity();
            for (int d = 1; d <= 15; ++d) {
                acc = acc.add(w);
                tbl_[win * 15 + d - 1] = acc;
            }
            w = acc.add(w);  // 15w + w = w * 2^4
        }
    }

    Point mul(const U256& k) const {
        Point acc = Point::identity();
        for (int win = 0; win < 64; ++win) {
            unsigned d = (k.limb[win / 16] >> (4 * (win % 16))) & 0xf;
            if (d) acc = acc.add(tbl_[win * 15 + d - 1]);
        }
        return acc;
    }
    Point mul(const Fr& k) const { return mul(k.to_u256()); }
    bool ready() const { return !tbl_.empty(); }

private:
    std::vector<Point> tbl_;
};

// order r as limbs, handy for subgroup checks
inline std::span<const u64> order_limbs() {
    return std::span<const u64>(FrTag::MOD, 4);
}

// twist cofactor 2p - r (257 bits, 5 limbs)
inline std::span<const u64> g2_cofactor_limbs() {
    static const std::array<u64, 5> c = [] {
        std::array<u64, 5> out{};
        u64 twop[4];
        u64 carry = u256_add(twop, FpTag::MOD, FpTag::MOD);
        u64 diff[4];
        u64 borrow = u256_sub(diff, twop, FrTag::MOD);
        for (int i = 0; i < 4; ++i) out[i] = diff[i];
        out[4] = carry - borrow;
        return out;
    }();
    return std::span<const u64>(c.data(), 5);
}

inline bool in_g1_subgroup(const G1& p) {
    // cofactor 1: curve membership is subgroup membership
    return p.on_curve();
}

inline bool in_g2_subgroup(const G2& q) {
    return q.on_curve() && q.mul_limbs(order_limbs()).is_identity();
}

}  // namespace faircrowd::gm
