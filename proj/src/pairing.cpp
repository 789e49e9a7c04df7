#include "faircrowd/pairing.hpp"

#include <algorithm>
#include <array>
#include <cassert>

#include "faircrowd/sha256.hpp"

namespace faircrowd::gm {

namespace {

// (p^4 - p^2 + 1) / r, little-endian limbs (766 bits)
constexpr u64 FINAL_EXP_HARD[12] = {
    0x14f19b3b552d3d49ULL, 0x074b0e4f13a82650ULL, 0x1bdc2cdcbcabecf9ULL, 0xe7d1f226020ce096ULL,
    0xbcbfe2531ffcf5e8ULL, 0x3d036fe7500cbc31ULL, 0xb563ad499fb7dedcULL, 0x95211329773bee46ULL,
    0x8fee87fed6116b42ULL, 0x6c12a6d76f7b5698ULL, 0x17d777c1d73689dfULL, 0x200000000000352aULL};

// divide a U256 by a small constant (exact division assumed by callers)
U256 u256_div_small(const U256& a, u64 d) {
    U256 q;
    u128 rem = 0;
    for (int i = 3; i >= 0; --i) {
        u128 cur = (rem << 64) | a.limb[i];
        q.limb[i] = static_cast<u64>(cur / d);
        rem = cur % d;
    }
    return q;
}

struct FrobeniusConsts {
    Fp2 g1[6];  // xi^(j(p-1)/6), j = 0..5
    Fp g2[6];   // norm(xi)^(j(p-1)/6) mod p
    Fp2 tw_x;   // xi^((p-1)/3)
    Fp2 tw_y;   // xi^((p-1)/2)
    Fp tw2_x;   // norm(xi)^((p-1)/3)
    Fp tw2_y;   // norm(xi)^((p-1)/2)
};

const FrobeniusConsts& frob_consts() {
    static const FrobeniusConsts fc = [] {
        FrobeniusConsts c;
        U256 e = Fp::modulus();
        u64 one_l[4] = {1, 0, 0, 0};
        u256_sub(e.limb, e.limb, one_l);  // p - 1
        U256 e6 = u256_div_small(e, 6);
        Fp2 xi = Fp2::xi();
        Fp2 base = xi.pow(e6);
        c.g1[0] = Fp2::one();
        for (int j = 1; j < 6; ++j) c.g1[j] = c.g1[j - 1] * base;
        Fp nbase = Fp::from_u64(10).pow(e6);  // norm(xi) = 10
        c.g2[0] = Fp::one();
        for (int j = 1; j < 6; ++j) c.g2[j] = c.g2[j - 1] * nbase;
        c.tw_x = c.g1[2];
        c.tw_y = c.g1[3];
        c.tw2_x = c.g2[2];
        c.tw2_y = c.g2[3];
        return c;
    }();
    return fc;
}

// (x0 + x1 v + x2 v^2) * (b + c v), 5 Fp2 multiplications
Fp6 mul_fp6_by_01(const Fp6& f, const Fp2& b, const Fp2& c) {
    Fp2 x0b = f.c0 * b;
    Fp2 x1c = f.c1 * c;
    Fp2 x2c = f.c2 * c;
    Fp2 x2b = f.c2 * b;
    Fp2 m01 = (f.c0 + f.c1) * (b + c);
    return {x0b + x2c.mul_xi(), m01 - x0b - x1c, x1c + x2b};
}

// sparse multiplication by a Miller line: L = l0 + l1 w + l3 w^3,
// i.e. c0 = (l0, 0, 0), c1 = (l1, l3, 0); 13 Fp2 multiplications
Fp12 mul_by_line(const Fp12& f, const Fp2& l0, const Fp2& l1, const Fp2& l3) {
    Fp6 t0 = f.c0.mul_fp2(l0);
    Fp6 t1 = mul_fp6_by_01(f.c1, l1, l3);
    Fp6 sum_f = f.c0 + f.c1;
    Fp6 t2 = mul_fp6_by_01(sum_f, l0 + l1, l3);
    return {t0 + t1.mul_v(), t2 - t0 - t1};
}

struct LineEval {
    Fp2 l0, l1, l3;
};

// doubling step: T <- 2T, returns the tangent line at the old T evaluated at P
LineEval dbl_step(G2& t, const Fp& xp, const Fp& yp) {
    Fp2 x = t.X, y = t.Y, z = t.Z;
    Fp2 x2 = x.sqr();
    Fp2 y2 = y.sqr();
    Fp2 z2 = z.sqr();
    Fp2 three_x2 = x2 + x2 + x2;

    LineEval ln;
    // (2YZ^3) yp  +  (-3X^2 Z^2 xp) w  +  (3X^3 - 2Y^2) w^3
    ln.l0 = (y * z * z2).dbl().mul_fp(yp);
    ln.l1 = -(three_x2 * z2).mul_fp(xp);
    ln.l3 = three_x2 * x - y2.dbl();

    // dbl-2007-bl, a = 0
    Fp2 b = y2;
    Fp2 c = b.sqr();
    Fp2 d = ((x + b).sqr() - x2 - c).dbl();
    Fp2 e = three_x2;
    Fp2 f = e.sqr();
    Fp2 x3 = f - d.dbl();
    Fp2 y3 = e * (d - x3) - c.dbl().dbl().dbl();
    Fp2 z3 = (y * z).dbl();
    t = G2{x3, y3, z3};
    return ln;
}

// addition step: T <- T + Q (Q affine), returns the chord line evaluated at P
LineEval add_step(G2& t, const G2& q_affine, const Fp& xp, const Fp& yp) {
    const Fp2& x2a = q_affine.X;
    const Fp2& y2a = q_affine.Y;
    Fp2 z1z1 = t.Z.sqr();
    Fp2 u2 = x2a * z1z1;
    Fp2 s2 = y2a * t.Z * z1z1;
    Fp2 h = u2 - t.X;
    Fp2 rr = s2 - t.Y;
    Fp2 zh = t.Z * h;

    LineEval ln;
    // (Z H yp)  +  (-R xp) w  +  (R x2 - y2 Z H) w^3
    ln.l0 = zh.mul_fp(yp);
    ln.l1 = -rr.mul_fp(xp);
    ln.l3 = rr * x2a - y2a * zh;

    Fp2 hh = h.sqr();
    Fp2 hhh = h * hh;
    Fp2 v = t.X * hh;
    Fp2 x3 = rr.sqr() - hhh - v.dbl();
    Fp2 y3 = rr * (v - x3) - t.Y * hhh;
    Fp2 z3 = zh;
    t = G2{x3, y3, z3};
    return ln;
}

// non-adjacent form of the ate loop count, most significant digit first
const std::vector<int>& ate_naf() {
    static const std::vector<int> naf = [] {
        std::vector<int> digits;
        u128 x = BN_ATE_LOOP;
        while (x) {
            if (x & 1) {
                int d = 2 - static_cast<int>(x % 4);
                digits.push_back(d);
                if (d == 1) {
                    x -= 1;
                } else {
                    x += 1;
                }
            } else {
                digits.push_back(0);
            }
            x >>= 1;
        }
        std::reverse(digits.begin(), digits.end());
        return digits;
    }();
    return naf;
}

Fp12 final_exponentiation(const Fp12& f) {
    return detail::final_exp_hard_chain(detail::final_exp_easy(f));
}

}  // namespace

namespace detail {

Fp12 final_exp_easy(const Fp12& f) {
    // f^((p^6-1)(p^2+1)); output is unitary
    Fp12 t0 = f.conj() * f.inv();
    return frobenius(t0, 2) * t0;
}

Fp12 final_exp_hard_plain(const Fp12& f) {
    return f.pow_limbs(std::span<const u64>(FINAL_EXP_HARD, 12));
}

// BN addition chain for f^((p^4-p^2+1)/r), f unitary; three exponentiations
// by the curve parameter u instead of one 766-bit exponent. Checked against
// final_exp_hard_plain in the tests.
Fp12 final_exp_hard_chain(const Fp12& f) {
    auto pow_u = [](const Fp12& x) { return x.pow(U256::from_u64(BN_U)); };
    Fp12 fu = pow_u(f);
    Fp12 fu2 = pow_u(fu);
    Fp12 fu3 = pow_u(fu2);
    Fp12 fp = frobenius(f, 1);
    Fp12 fp2 = frobenius(f, 2);
    Fp12 fp3 = frobenius(fp2, 1);
    Fp12 fu2p = frobenius(fu2, 1);
    Fp12 fu3p = frobenius(fu3, 1);

    Fp12 y0 = fp * fp2 * fp3;
    Fp12 y1 = f.conj();
    Fp12 y2 = frobenius(fu2, 2);
    Fp12 y3 = frobenius(fu, 1).conj();
    Fp12 y4 = (fu * fu2p).conj();
    Fp12 y5 = fu2.conj();
    Fp12 y6 = (fu3 * fu3p).conj();

    Fp12 t0 = y6.sqr() * y4 * y5;
    Fp12 t1 = y3 * y5 * t0;
    t0 = t0 * y2;
    t1 = (t1.sqr() * t0).sqr();
    t0 = t1 * y1;
    t1 = t1 * y0;
    t0 = t0.sqr();
    return t1 * t0;
}

}  // namespace detail

Fp12 frobenius(const Fp12& f, int power) {
    const auto& fc = frob_consts();
    // coefficients as powers of w: z0..z5
    const Fp2* z[6] = {&f.c0.c0, &f.c1.c0, &f.c0.c1, &f.c1.c1, &f.c0.c2, &f.c1.c2};
    Fp2 out[6];
    if (power == 1) {
        for (int j = 0; j < 6; ++j) out[j] = z[j]->conj() * fc.g1[j];
    } else {
        assert(power == 2);
        for (int j = 0; j < 6; ++j) out[j] = z[j]->mul_fp(fc.g2[j]);
    }
    return Fp12{Fp6{out[0], out[2], out[4]}, Fp6{out[1], out[3], out[5]}};
}

G2 g2_frobenius(const G2& q) {
    const auto& fc = frob_consts();
    G2 a = q.normalized();
    if (a.is_identity()) return a;
    return G2{a.X.conj() * fc.tw_x, a.Y.conj() * fc.tw_y, Fp2::one()};
}

G2 g2_frobenius_sqr(const G2& q) {
    const auto& fc = frob_consts();
    G2 a = q.normalized();
    if (a.is_identity()) return a;
    return G2{a.X.mul_fp(fc.tw2_x), a.Y.mul_fp(fc.tw2_y), Fp2::one()};
}

GT pairing(const G1& p, const G2& q) { return finalize_pairing(miller_loop(p, q)); }

GT finalize_pairing(const Fp12& miller_value) { return GT{final_exponentiation(miller_value)}; }

Fp12 miller_loop(const G1& p, const G2& q) {
    if (p.is_identity() || q.is_identity()) return Fp12::one();
    G1 pa = p.normalized();
    G2 qa = q.normalized();
    const Fp& xp = pa.X;
    const Fp& yp = pa.Y;

    const auto& naf = ate_naf();
    G2 t = qa;
    G2 qneg = qa.neg();
    Fp12 f = Fp12::one();
    for (size_t i = 1; i < naf.size(); ++i) {  // top digit consumed by initial T = Q
        f = f.sqr();
        LineEval ln = dbl_step(t, xp, yp);
        f = mul_by_line(f, ln.l0, ln.l1, ln.l3);
        if (naf[i] == 1) {
            LineEval la = add_step(t, qa, xp, yp);
            f = mul_by_line(f, la.l0, la.l1, la.l3);
        } else if (naf[i] == -1) {
            LineEval la = add_step(t, qneg, xp, yp);
            f = mul_by_line(f, la.l0, la.l1, la.l3);
        }
    }
    // optimal ate tail: lines through pi(Q) and -pi^2(Q)
    G2 q1 = g2_frobenius(qa);
    G2 q2 = g2_frobenius_sqr(qa).neg();
    LineEval l1 = add_step(t, q1, xp, yp);
    f = mul_by_line(f, l1.l0, l1.l1, l1.l3);
    LineEval l2 = add_step(t, q2, xp, yp);
    f = mul_by_line(f, l2.l0, l2.l1, l2.l3);

    return f;
}

// --- hashing ---

namespace {

Bytes hash_input(std::string_view tag, std::span<const uint8_t> data, uint8_t ctr, int branch = -1) {
    ByteWriter w;
    w.str(tag);
    w.var(data);
    w.u8(ctr);
    if (branch >= 0) w.u8(static_cast<uint8_t>(branch));
    return w.take();
}

std::optional<Fp> fp_from_hash(const std::array<uint8_t, 32>& digest) {
    return Fp::from_bytes(digest);
}

// canonical ordering of an Fp2 value against its negation: compare c1 then c0
bool fp2_lex_greater_than_neg(const Fp2& y) {
    Fp2 n = -y;
    int c = fe_cmp_plain(y.c1, n.c1);
    if (c != 0) return c > 0;
    return fe_cmp_plain(y.c0, n.c0) > 0;
}

bool fp_greater_than_neg(const Fp& y) { return fe_cmp_plain(y, -y) > 0; }

}  // namespace

Fr hash_to_scalar(std::span<const uint8_t> data) {
    for (uint8_t ctr = 0;; ++ctr) {
        auto d = sha256(hash_input("FairCrowd/H2S/v1", data, ctr));
        if (auto s = Fr::from_bytes(d)) return *s;
    }
}

G1 hash_to_g1(std::span<const uint8_t> data) {
    for (uint8_t ctr = 0;; ++ctr) {
        auto d = sha256(hash_input("FairCrowd/H2G1/v1", data, ctr, 0));
        auto x = fp_from_hash(d);
        if (!x) continue;
        Fp rhs = x->sqr() * *x + G1CurveTag::curve_b();
        auto y = rhs.sqrt();
        if (!y) continue;
        auto sign = sha256(hash_input("FairCrowd/H2G1/v1", data, ctr, 1));
        bool want_hi = sign[0] & 1;
        Fp yy = (fp_greater_than_neg(*y) == want_hi) ? *y : -*y;
        return G1{*x, yy, Fp::one()};
    }
}

G2 hash_to_g2(std::span<const uint8_t> data) {
    for (uint8_t ctr = 0;; ++ctr) {
        auto d0 = sha256(hash_input("FairCrowd/H2G2/v1", data, ctr, 0));
        auto d1 = sha256(hash_input("FairCrowd/H2G2/v1", data, ctr, 1));
        auto c0 = fp_from_hash(d0);
        auto c1 = fp_from_hash(d1);
        if (!c0 || !c1) continue;
        Fp2 x{*c0, *c1};
        Fp2 rhs = x.sqr() * x + G2CurveTag::curve_b();
        auto y = rhs.sqrt();
        if (!y) continue;
        auto sign = sha256(hash_input("FairCrowd/H2G2/v1", data, ctr, 2));
        bool want_hi = sign[0] & 1;
        Fp2 yy = (fp2_lex_greater_than_neg(*y) == want_hi) ? *y : -*y;
        G2 pt{x, yy, Fp2::one()};
        G2 sub = pt.mul_limbs(g2_cofactor_limbs());
        if (sub.is_identity()) continue;
        return sub.normalized();
    }
}

// --- encodings ---

Bytes g1_to_bytes(const G1& p) {
    Bytes out(G1_BYTES, 0);
    if (p.is_identity()) return out;
    auto [x, y] = p.affine();
    out[0] = fp_greater_than_neg(y) ? 0x03 : 0x02;
    x.to_bytes(out.data() + 1);
    return out;
}

std::optional<G1> g1_from_bytes(std::span<const uint8_t> b) {
    if (b.size() != G1_BYTES) return std::nullopt;
    if (b[0] == 0x00) {
        for (size_t i = 1; i < b.size(); ++i) {
            if (b[i] != 0) return std::nullopt;
        }
        return G1::identity();
    }
    if (b[0] != 0x02 && b[0] != 0x03) return std::nullopt;
    auto x = Fp::from_bytes(b.subspan(1, 32));
    if (!x) return std::nullopt;
    Fp rhs = x->sqr() * *x + G1CurveTag::curve_b();
    auto y = rhs.sqrt();
    if (!y) return std::nullopt;
    bool want_hi = b[0] == 0x03;
    Fp yy = (fp_greater_than_neg(*y) == want_hi) ? *y : -*y;
    return G1{*x, yy, Fp::one()};
}

Bytes g2_to_bytes(const G2& q) {
    Bytes out(G2_BYTES, 0);
    if (q.is_identity()) return out;
    auto [x, y] = q.affine();
    out[0] = fp2_lex_greater_than_neg(y) ? 0x03 : 0x02;
    x.c0.to_bytes(out.data() + 1);
    x.c1.to_bytes(out.data() + 33);
    return out;
}

std::optional<G2> g2_from_bytes(std::span<const uint8_t> b) {
    if (b.size() != G2_BYTES) return std::nullopt;
    if (b[0] == 0x00) {
        for (size_t i = 1; i < b.size(); ++i) {
            if (b[i] != 0) return std::nullopt;
        }
        return G2::identity();
    }
    if (b[0] != 0x02 && b[0] != 0x03) return std::nullopt;
    auto c0 = Fp::from_bytes(b.subspan(1, 32));
    auto c1 = Fp::from_bytes(b.subspan(33, 32));
    if (!c0 || !c1) return std::nullopt;
    Fp2 x{*c0, *c1};
    Fp2 rhs = x.sqr() * x + G2CurveTag::curve_b();
    auto y = rhs.sqrt();
    if (!y) return std::nullopt;
    bool want_hi = b[0] == 0x03;
    Fp2 yy = (fp2_lex_greater_than_neg(*y) == want_hi) ? *y : -*y;
    G2 pt{x, yy, Fp2::one()};
    if (!in_g2_subgroup(pt)) return std::nullopt;
    return pt;
}

Bytes gt_to_bytes(const GT& t) {
    Bytes out;
    out.reserve(GT_BYTES);
    const Fp* coeffs[12] = {&t.val.c0.c0.c0, &t.val.c0.c0.c1, &t.val.c0.c1.c0, &t.val.c0.c1.c1,
                            &t.val.c0.c2.c0, &t.val.c0.c2.c1, &t.val.c1.c0.c0, &t.val.c1.c0.c1,
                            &t.val.c1.c1.c0, &t.val.c1.c1.c1, &t.val.c1.c2.c0, &t.val.c1.c2.c1};
    uint8_t buf[32];
    for (const Fp* c : coeffs) {
        c->to_bytes(buf);
        out.insert(out.end(), buf, buf + 32);
    }
    return out;
}

std::optional<GT> gt_from_bytes(std::span<const uint8_t> b) {
    if (b.size() != GT_BYTES) return std::nullopt;
    GT t;
    Fp* coeffs[12] = {&t.val.c0.c0.c0, &t.val.c0.c0.c1, &t.val.c0.c1.c0, &t.val.c0.c1.c1,
                      &t.val.c0.c2.c0, &t.val.c0.c2.c1, &t.val.c1.c0.c0, &t.val.c1.c0.c1,
                      &t.val.c1.c1.c0, &t.val.c1.c1.c1, &t.val.c1.c2.c0, &t.val.c1.c2.c1};
    for (int i = 0; i < 12; ++i) {
        auto c = Fp::from_bytes(b.subspan(32 * i, 32));
        if (!c) return std::nullopt;
        *coeffs[i] = *c;
    }
    // order-r subgroup check
    if (!t.val.pow_limbs(order_limbs()).is_one()) return std::nullopt;
    return t;
}

PairingContext PairingContext::make(uint32_t l) {
    PairingContext ctx;
    ctx.l = l;
    ctx.g = hash_to_g1(to_bytes("FairCrowd/g/0"));
    ctx.h = hash_to_g2(to_bytes("FairCrowd/h/0"));
    ctx.g_vec.reserve(l);
    ctx.h_vec.reserve(l);
    for (uint32_t j = 1; j <= l; ++j) {
        ctx.g_vec.push_back(hash_to_g1(to_bytes("FairCrowd/g/" + std::to_string(j))));
        ctx.h_vec.push_back(hash_to_g2(to_bytes("FairCrowd/h/" + std::to_string(j))));
    }
    ctx.h_tbl = FixedBase<G2>(ctx.h);
    return ctx;
}

}  // namespace faircrowd::gm
