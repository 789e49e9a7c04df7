#include "faircrowd/sigma.hpp"

namespace faircrowd::sigma {

using gm::Fp12;
using gm::U256;

PkStatement make_statement(const pvas::TaskId& task, const G2& customer_pub, const G2& user_pub,
                           const pvas::UserReport& report) {
    PkStatement st;
    st.task_n = task.n;
    st.customer_pub = customer_pub;
    st.user_pub = user_pub;
    st.c = report.cipher.c;
    st.d = report.cipher.d;
    st.w_commit = report.sig.w_commit;
    st.e = report.sig.e;
    st.sig = report.sig.sigma;
    st.rk = report.resign.rk;
    return st;
}

Res<PkWitness> make_witness(const pvas::UserKeyPair& user, const pvas::DataVector& data,
                            const pvas::CipherBundle& cipher, const pvas::HomSig& sig) {
    if (!cipher.has_witness() || !sig.has_witness()) return Err::WitnessMismatch;
    PkWitness wit;
    wit.m = data.m;
    wit.r = *cipher.randomness;
    wit.tau = *sig.tau;
    wit.w = user.secret.inv();
    return wit;
}

namespace {

void append_g1(ByteWriter& w, const G1& p) { w.raw(gm::g1_to_bytes(p)); }
void append_g2(ByteWriter& w, const G2& p) { w.raw(gm::g2_to_bytes(p)); }

Bytes transcript_bytes(const pvas::PublicParams& pp, const PkStatement& st, const ConsistencyProof& proof) {
    ByteWriter w;
    w.str("FairCrowd/PK/v1");
    w.u32(pp.l());
    w.var(st.task_n);
    append_g2(w, st.customer_pub);
    append_g2(w, st.user_pub);
    for (const G2& x : st.c) append_g2(w, x);
    for (const G2& x : st.d) append_g2(w, x);
    append_g1(w, st.w_commit);
    append_g2(w, st.e);
    append_g1(w, st.sig);
    append_g2(w, st.rk);
    for (const G2& x : proof.t_c) append_g2(w, x);
    for (const G2& x : proof.t_d) append_g2(w, x);
    append_g1(w, proof.t_w);
    append_g2(w, proof.t_e);
    append_g2(w, proof.t_rk);
    append_g2(w, proof.t_u);
    return w.take();
}

}  // namespace

Fr transcript_challenge(const pvas::PublicParams& pp, const PkStatement& st, const ConsistencyProof& proof) {
    return gm::hash_to_scalar(transcript_bytes(pp, st, proof));
}

Res<ConsistencyProof> prove(const pvas::PublicParams& pp, const PkStatement& st, const PkWitness& wit,
                            Drbg& rng, const pvas::TaskContext* tc) {
    const uint32_t l = pp.l();
    if (st.c.size() != l || st.d.size() != l || wit.m.size() != l || wit.r.size() != l) {
        return Err::DimensionMismatch;
    }

    pvas::TaskContext local = tc ? *tc
                                 : pvas::TaskContext(pp, st.customer_pub, pvas::TaskId{st.task_n});
    if (!local.customer_pub.eq(st.customer_pub)) return Err::WitnessMismatch;
    const G1& hna = local.hna;

    // pre-check every relation before committing to a proof
    for (uint32_t j = 0; j < l; ++j) {
        G2 cj = pp.ctx.h_vec[j].mul(U256::from_u64(wit.m[j])).add(local.a_tbl.mul(wit.r[j]));
        if (!cj.eq(st.c[j])) return Err::WitnessMismatch;
        if (!pp.ctx.h_pow(wit.r[j]).eq(st.d[j])) return Err::WitnessMismatch;
    }
    G1 w_check = hna.mul(wit.tau);
    for (uint32_t j = 0; j < l; ++j) w_check = w_check.add(pp.ctx.g_vec[j].mul(U256::from_u64(wit.m[j])));
    if (!w_check.eq(st.w_commit)) return Err::WitnessMismatch;
    if (!pp.ctx.h_pow(wit.tau).eq(st.e)) return Err::WitnessMismatch;
    if (!local.a_tbl.mul(wit.w).eq(st.rk)) return Err::WitnessMismatch;
    if (!st.user_pub.mul(wit.w).eq(pp.ctx.h)) return Err::WitnessMismatch;

    std::vector<Fr> rho_m(l), rho_r(l);
    for (uint32_t j = 0; j < l; ++j) {
        rho_m[j] = Fr::random(rng);
        rho_r[j] = Fr::random(rng);
    }
    Fr rho_tau = Fr::random(rng);
    Fr rho_w = Fr::random(rng);

    ConsistencyProof proof;
    proof.t_c.reserve(l);
    proof.t_d.reserve(l);
    for (uint32_t j = 0; j < l; ++j) {
        proof.t_c.push_back(pp.ctx.h_vec[j].mul(rho_m[j]).add(local.a_tbl.mul(rho_r[j])));
        proof.t_d.push_back(pp.ctx.h_pow(rho_r[j]));
    }
    G1 tw = hna.mul(rho_tau);
    for (uint32_t j = 0; j < l; ++j) tw = tw.add(pp.ctx.g_vec[j].mul(rho_m[j]));
    proof.t_w = tw;
    proof.t_e = pp.ctx.h_pow(rho_tau);
    proof.t_rk = local.a_tbl.mul(rho_w);
    proof.t_u = st.user_pub.mul(rho_w);

    Fr e = transcript_challenge(pp, st, proof);
    proof.challenge = e;
    proof.s_m.reserve(l);
    proof.s_r.reserve(l);
    for (uint32_t j = 0; j < l; ++j) {
        proof.s_m.push_back(rho_m[j] - e * Fr::from_u64(wit.m[j]));
        proof.s_r.push_back(rho_r[j] - e * wit.r[j]);
    }
    proof.s_tau = rho_tau - e * wit.tau;
    proof.s_w = rho_w - e * wit.w;
    return proof;
}

bool verify_pk(const pvas::PublicParams& pp, const PkStatement& st, const ConsistencyProof& proof) {
    const uint32_t l = pp.l();
    if (st.c.size() != l || st.d.size() != l) return false;
    if (proof.t_c.size() != l || proof.t_d.size() != l || proof.s_m.size() != l || proof.s_r.size() != l) {
        return false;
    }

    Fr e = transcript_challenge(pp, st, proof);
    if (e != proof.challenge) return false;

    G1 hna = gm::hash_to_g1(pvas::task_binding_bytes(pvas::TaskId{st.task_n}, st.customer_pub));
    U256 eu = e.to_u256();
    for (uint32_t j = 0; j < l; ++j) {
        G2 rhs = st.c[j].mul(eu).add(pp.ctx.h_vec[j].mul(proof.s_m[j])).add(st.customer_pub.mul(proof.s_r[j]));
        if (!proof.t_c[j].eq(rhs)) return false;
        G2 rhs_d = st.d[j].mul(eu).add(pp.ctx.h_pow(proof.s_r[j]));
        if (!proof.t_d[j].eq(rhs_d)) return false;
    }
    G1 rhs_w = st.w_commit.mul(eu).add(hna.mul(proof.s_tau));
    for (uint32_t j = 0; j < l; ++j) rhs_w = rhs_w.add(pp.ctx.g_vec[j].mul(proof.s_m[j]));
    if (!proof.t_w.eq(rhs_w)) return false;
    if (!proof.t_e.eq(st.e.mul(eu).add(pp.ctx.h_pow(proof.s_tau)))) return false;
    if (!proof.t_rk.eq(st.rk.mul(eu).add(st.customer_pub.mul(proof.s_w)))) return false;
    if (!proof.t_u.eq(pp.ctx.h.mul(eu).add(st.user_pub.mul(proof.s_w)))) return false;

    // e(sigma, h) = e(W, U) forces sigma = W^u by non-degeneracy
    Fp12 m = gm::miller_loop(st.sig, pp.ctx.h) * gm::miller_loop(st.w_commit.neg(), st.user_pub);
    if (!gm::finalize_pairing(m).is_one()) return false;
    return true;
}

size_t proof_encoded_size(uint32_t l) {
    // header (tag + version) + l count + G2 commitments (2l+3) + one G1
    // commitment + (2l+3) scalars (challenge + responses)
    return 2 + 4 + (2ull * l + 3) * gm::G2_BYTES + gm::G1_BYTES + (2ull * l + 3) * gm::FR_BYTES;
}

}  // namespace faircrowd::sigma
