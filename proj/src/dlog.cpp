#include "faircrowd/dlog.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

namespace faircrowd::gm {

namespace {

struct Aff {
    Fp2 x, y;
    bool inf = true;

    static Aff from(const G2& p) {
        if (p.is_identity()) return {};
        auto [x, y] = p.affine();
        return {x, y, false};
    }
    G2 jac() const {
        if (inf) return G2::identity();
        return G2{x, y, Fp2::one()};
    }
};

// 64-bit fingerprint of a point's x-coordinate (canonical; affine input)
u64 point_fingerprint(const Aff& p) {
    if (p.inf) return 0;
    auto b = p.x.c0.bytes();
    u64 v = 0;
    for (int i = 24; i < 32; ++i) v = v << 8 | b[i];
    auto b1 = p.x.c1.bytes();
    u64 v1 = 0;
    for (int i = 24; i < 32; ++i) v1 = v1 << 8 | b1[i];
    return v ^ (v1 * 0x9e3779b97f4a7c15ULL);
}

std::string point_key(const Aff& p) {
    if (p.inf) return std::string("inf");
    auto b0 = p.x.c0.bytes();
    auto b1 = p.x.c1.bytes();
    auto by = p.y.c0.bytes();
    std::string k;
    k.reserve(65);
    k.append(reinterpret_cast<const char*>(b0.data()), b0.size());
    k.append(reinterpret_cast<const char*>(b1.data()), b1.size());
    k.push_back(static_cast<char>(by[31] & 1));
    return k;
}

// affine addition with a caller-supplied inverse of (q.x - p.x); callers
// guarantee q.x != p.x
Aff add_with_inv(const Aff& p, const Aff& q, const Fp2& dinv) {
    Fp2 lam = (q.y - p.y) * dinv;
    Fp2 x3 = lam.sqr() - p.x - q.x;
    Fp2 y3 = lam * (p.x - x3) - p.y;
    return {x3, y3, false};
}

// general (slow path) affine addition
Aff add_general(const Aff& p, const Aff& q) {
    if (p.inf) return q;
    if (q.inf) return p;
    if (p.x == q.x) {
        if (p.y == q.y) {
            Fp2 lam = (p.x.sqr().mul_fp(Fp::from_u64(3))) * (p.y.dbl()).inv();
            Fp2 x3 = lam.sqr() - p.x.dbl();
            Fp2 y3 = lam * (p.x - x3) - p.y;
            return {x3, y3, false};
        }
        return {};  // inverse points
    }
    return add_with_inv(p, q, (q.x - p.x).inv());
}

uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

DlogResult brute_force(const G2& base, const G2& target, uint64_t bound) {
    DlogResult res;
    G2 acc = G2::identity();
    for (uint64_t x = 0; x <= bound; ++x) {
        if (acc.eq(target)) {
            res.value = x;
            return res;
        }
        acc = acc.add(base);
        ++res.steps;
    }
    return res;
}

}  // namespace

DlogResult dlog_bounded(const G2& base, const G2& target, uint64_t bound) {
    if (target.is_identity()) return {0, 0};
    if (bound < 1024) return brute_force(base, target, bound);

    DlogResult res;
    uint64_t m = isqrt_u64(bound);
    // jump set {2^0 .. 2^(K-1)}; pick K so the mean jump is closest to m/2
    int k_count = 1;
    double best = 1e300;
    for (int k = 1; k <= 40; ++k) {
        double mean = (std::pow(2.0, k) - 1.0) / k;
        double diff = std::fabs(mean - static_cast<double>(m) / 2.0);
        if (diff < best) {
            best = diff;
            k_count = k;
        }
    }
    std::vector<Aff> jumps(k_count);
    std::vector<uint64_t> jump_dist(k_count);
    {
        G2 j = base;
        for (int k = 0; k < k_count; ++k) {
            jumps[k] = Aff::from(j.normalized());
            jump_dist[k] = 1ULL << k;
            j = j.dbl();
        }
    }
    int dp_bits = 2;
    {
        int mb = 0;
        uint64_t t = m;
        while (t >>= 1) ++mb;
        dp_bits = std::max(2, mb / 2);
    }
    const uint64_t dp_mask = (1ULL << dp_bits) - 1;
    const uint64_t budget = 20 * m;

    struct Trap {
        bool tame;
        uint64_t dist;
    };
    std::unordered_map<std::string, Trap> traps;

    Aff tame = Aff::from(base.mul_u64(bound).normalized());
    Aff wild = Aff::from(target.normalized());
    uint64_t tame_dist = 0;
    uint64_t wild_dist = 0;

    auto verify = [&](uint64_t cand) -> bool { return base.mul_u64(cand).eq(target); };

    // returns the answer if a trap collision resolves the instance
    auto check_dp = [&](bool is_tame, const Aff& pt, uint64_t dist) -> std::optional<uint64_t> {
        u64 fp = point_fingerprint(pt);
        if ((fp & dp_mask) != 0) return std::nullopt;
        auto key = point_key(pt);
        auto it = traps.find(key);
        if (it == traps.end()) {
            traps.emplace(std::move(key), Trap{is_tame, dist});
            return std::nullopt;
        }
        if (it->second.tame == is_tame) return std::nullopt;  // same herd rejoined its own path
        uint64_t dt = is_tame ? dist : it->second.dist;
        uint64_t dw = is_tame ? it->second.dist : dist;
        // bound + dt = x + dw
        if (bound + dt < dw) return std::nullopt;
        uint64_t x = bound + dt - dw;
        if (x <= bound && verify(x)) return x;
        return std::nullopt;
    };

    if (auto x = check_dp(true, tame, tame_dist)) {
        res.value = *x;
        return res;
    }
    if (auto x = check_dp(false, wild, wild_dist)) {
        res.value = *x;
        return res;
    }

    while (res.steps < budget) {
        int kt = static_cast<int>(point_fingerprint(tame) % k_count);
        int kw = static_cast<int>(point_fingerprint(wild) % k_count);
        const Aff& jt = jumps[kt];
        const Aff& jw = jumps[kw];

        bool fast_t = !tame.inf && !jt.inf && !(tame.x == jt.x);
        bool fast_w = !wild.inf && !jw.inf && !(wild.x == jw.x);
        if (fast_t && fast_w) {
            // batch the two denominator inversions
            Fp2 dt = jt.x - tame.x;
            Fp2 dw = jw.x - wild.x;
            Fp2 minv = (dt * dw).inv();
            tame = add_with_inv(tame, jt, minv * dw);
            wild = add_with_inv(wild, jw, minv * dt);
        } else {
            tame = add_general(tame, jt);
            wild = add_general(wild, jw);
        }
        tame_dist += jump_dist[kt];
        wild_dist += jump_dist[kw];
        res.steps += 2;

        if (auto x = check_dp(true, tame, tame_dist)) {
            res.value = *x;
            return res;
        }
        if (auto x = check_dp(false, wild, wild_dist)) {
            res.value = *x;
            return res;
        }
    }
    return res;  // budget exhausted: NotInRange
}

DlogResult dlog_bsgs(const G2& base, const G2& target, uint64_t bound) {
    DlogResult res;
    if (target.is_identity()) return {0, 0};
    if (bound < 64) return brute_force(base, target, bound);

    uint64_t m = isqrt_u64(bound) + 1;
    std::unordered_map<std::string, uint64_t> baby;
    baby.reserve(m);
    Aff cur{};
    for (uint64_t j = 0; j < m; ++j) {
        baby.emplace(point_key(cur), j);
        cur = add_general(cur, Aff::from(base));
        ++res.steps;
    }
    G2 giant_step = base.mul_u64(m).neg().normalized();
    Aff walk = Aff::from(target.normalized());
    uint64_t k_max = bound / m + 1;
    for (uint64_t k = 0; k <= k_max; ++k) {
        auto it = baby.find(point_key(walk));
        if (it != baby.end()) {
            uint64_t x = k * m + it->second;
            if (x <= bound && base.mul_u64(x).eq(target)) {
                res.value = x;
                return res;
            }
        }
        walk = add_general(walk, Aff::from(giant_step));
        ++res.steps;
    }
    return res;
}

}  // namespace faircrowd::gm
