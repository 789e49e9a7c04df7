#include "faircrowd/pvas.hpp"

#include "faircrowd/dlog.hpp"

namespace faircrowd::pvas {

using gm::Fp12;
using gm::U256;

Res<PublicParams> par_gen(uint32_t lambda, uint32_t l, PlaintextBounds bounds) {
    if (lambda != 256) return Err::UnsupportedParameter;
    if (l < 1) return Err::UnsupportedParameter;
    if (bounds.per_dimension < 1 || bounds.aggregate < bounds.per_dimension) return Err::UnsupportedParameter;
    PublicParams pp;
    pp.ctx = gm::PairingContext::make(l);
    pp.lambda = lambda;
    pp.bounds = bounds;
    return pp;
}

CustomerKeyPair keygen_customer(const PublicParams& pp, Drbg& rng) {
    Fr a = Fr::random_nonzero(rng);
    return {a, pp.ctx.h_pow(a)};
}

UserKeyPair keygen_user(const PublicParams& pp, Drbg& rng) {
    Fr u = Fr::random_nonzero(rng);
    return {u, pp.ctx.h_pow(u)};
}

ServerKeyPair keygen_server(const PublicParams& pp, Drbg& rng) {
    Fr v = Fr::random_nonzero(rng);
    return {v, pp.ctx.h_pow(v)};
}

Bytes task_binding_bytes(const TaskId& task, const G2& customer_pub) {
    ByteWriter w;
    w.var(task.n);
    w.raw(gm::g2_to_bytes(customer_pub));
    return w.take();
}

TaskContext::TaskContext(const PublicParams& pp, const G2& cpub, const TaskId& task)
    : customer_pub(cpub), a_tbl(cpub), hna(gm::hash_to_g1(task_binding_bytes(task, cpub))) {
    (void)pp;
}

Res<std::tuple<CipherBundle, HomSig, ResignKey>> sig_enc(const PublicParams& pp, const UserKeyPair& user,
                                                         const TaskContext& tc, const DataVector& data,
                                                         Drbg& rng) {
    const uint32_t l = pp.l();
    if (data.m.size() != l) return Err::DataOutOfBounds;
    for (uint64_t v : data.m) {
        if (v >= pp.bounds.per_dimension) return Err::DataOutOfBounds;
    }
    if (tc.customer_pub.is_identity()) return Err::DegenerateOperand;

    CipherBundle cb;
    cb.c.reserve(l);
    cb.d.reserve(l);
    std::vector<Fr> rs;
    rs.reserve(l);
    for (uint32_t j = 0; j < l; ++j) {
        Fr r = Fr::random(rng);
        // c_j = h_j^(m_j) * A^(r_j),  d_j = h^(r_j)
        G2 cj = pp.ctx.h_vec[j].mul(U256::from_u64(data.m[j])).add(tc.a_tbl.mul(r));
        cb.c.push_back(cj);
        cb.d.push_back(pp.ctx.h_pow(r));
        rs.push_back(r);
    }
    cb.randomness = std::move(rs);

    Fr tau = Fr::random(rng);
    G1 w_commit = tc.hna.mul(tau);
    for (uint32_t j = 0; j < l; ++j) {
        w_commit = w_commit.add(pp.ctx.g_vec[j].mul(U256::from_u64(data.m[j])));
    }
    HomSig sig;
    sig.w_commit = w_commit;
    sig.sigma = w_commit.mul(user.secret);
    sig.e = pp.ctx.h_pow(tau);
    sig.tau = tau;

    ResignKey rk{tc.a_tbl.mul(user.secret.inv())};
    return std::make_tuple(std::move(cb), std::move(sig), std::move(rk));
}

Res<std::tuple<CipherBundle, HomSig, ResignKey>> sig_enc(const PublicParams& pp, const UserKeyPair& user,
                                                         const G2& customer_pub, const TaskId& task,
                                                         const DataVector& data, Drbg& rng) {
    TaskContext tc(pp, customer_pub, task);
    return sig_enc(pp, user, tc, data, rng);
}

Res<AggregateBundle> aggregate(const PublicParams& pp, const ServerKeyPair& server,
                               std::span<const UserReport> inputs, const WeightVector& weights) {
    const uint32_t l = pp.l();
    if (inputs.empty()) return Err::EmptyInput;
    if (weights.w.size() != inputs.size()) return Err::DimensionMismatch;
    for (const UserReport& rep : inputs) {
        if (rep.cipher.c.size() != l || rep.cipher.d.size() != l) return Err::DimensionMismatch;
    }

    AggregateBundle agg;
    agg.c.assign(l, G2::identity());
    agg.d.assign(l, G2::identity());
    // sigma = prod_i e(sigma_i, rk_i)^(v w_i) = ( FE(prod_i M_i^(w_i)) )^v
    Fp12 macc = Fp12::one();
    G2 eacc = G2::identity();
    for (size_t i = 0; i < inputs.size(); ++i) {
        U256 wi = U256::from_u64(weights.w[i]);
        const UserReport& rep = inputs[i];
        for (uint32_t j = 0; j < l; ++j) {
            agg.c[j] = agg.c[j].add(rep.cipher.c[j].mul(wi));
            agg.d[j] = agg.d[j].add(rep.cipher.d[j].mul(wi));
        }
        macc = macc * gm::miller_loop(rep.sig.sigma, rep.resign.rk).pow(wi);
        eacc = eacc.add(rep.sig.e.mul(wi));
    }
    agg.sigma = gm::finalize_pairing(macc).pow(server.secret);
    agg.e = eacc.mul(server.secret);
    return agg;
}

Res<std::vector<uint64_t>> decrypt(const PublicParams& pp, const CustomerKeyPair& customer,
                                   const AggregateBundle& agg, uint32_t* failed_dim) {
    const uint32_t l = pp.l();
    if (agg.c.size() != l || agg.d.size() != l) return Err::DimensionMismatch;
    std::vector<uint64_t> out;
    out.reserve(l);
    for (uint32_t j = 0; j < l; ++j) {
        // h_j^(m*_j) = c_j * d_j^(-a)
        G2 target = agg.c[j].add(agg.d[j].mul(customer.secret).neg());
        // escalate the search interval; honest small aggregates decode fast,
        // NotInRange only after the configured bound itself fails
        std::optional<uint64_t> value;
        uint64_t bound = 1ULL << 10;
        for (;;) {
            if (bound > pp.bounds.aggregate) bound = pp.bounds.aggregate;
            auto res = gm::dlog_bounded(pp.ctx.h_vec[j], target, bound);
            if (res.value) {
                value = res.value;
                break;
            }
            if (bound == pp.bounds.aggregate) break;
            bound *= 16;
        }
        if (!value) {
            if (failed_dim) *failed_dim = j;
            return Err::NotInRange;
        }
        out.push_back(*value);
    }
    return out;
}

bool verify(const PublicParams& pp, const CustomerKeyPair& customer, const G2& server_pub, const TaskId& task,
            const AggregateBundle& agg, std::span<const uint64_t> result) {
    const uint32_t l = pp.l();
    if (result.size() != l || agg.c.size() != l) return false;
    G1 hna = gm::hash_to_g1(task_binding_bytes(task, customer.pub));
    G1 gm_prod = G1::identity();
    for (uint32_t j = 0; j < l; ++j) {
        gm_prod = gm_prod.add(pp.ctx.g_vec[j].mul(U256::from_u64(result[j])));
    }
    // sigma ?= ( e(H(N||A), e) * e(prod_j g_j^(m*_j), Lambda) )^a
    Fp12 m = gm::miller_loop(hna, agg.e) * gm::miller_loop(gm_prod, server_pub);
    GT rhs = gm::finalize_pairing(m).pow(customer.secret);
    return agg.sigma == rhs;
}

}  // namespace faircrowd::pvas
