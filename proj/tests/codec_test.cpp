#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "faircrowd/codec.hpp"
#include "support/test_util.hpp"

using namespace faircrowd;
using namespace faircrowd::codec;
using faircrowd::gm::Fr;
using faircrowd::testing::params_for;

namespace {

pvas::UserReport sample_report(const pvas::PublicParams& pp, Drbg& rng, pvas::TaskId* task_out = nullptr) {
    auto customer = pvas::keygen_customer(pp, rng);
    auto user = pvas::keygen_user(pp, rng);
    auto task = pvas::TaskId::random(rng);
    if (task_out) *task_out = task;
    pvas::DataVector data;
    for (uint32_t j = 0; j < pp.l(); ++j) data.m.push_back(rng.uniform(500));
    auto enc = pvas::sig_enc(pp, user, customer.pub, task, data, rng);
    REQUIRE(enc.ok());
    auto& [cb, sig, rk] = *enc;
    return pvas::UserReport{cb.public_part(), sig.public_part(), rk};
}

}  // namespace

TEST_CASE("params round trip regenerates the identical context") {
    const auto& pp = params_for(3, pvas::PlaintextBounds{1u << 18, 1ull << 30});
    Bytes enc = encode_params(pp);
    auto back = decode_params(enc);
    REQUIRE(back.ok());
    CHECK(back->l() == 3);
    CHECK(back->bounds.per_dimension == (1u << 18));
    CHECK(back->bounds.aggregate == (1ull << 30));
    CHECK(gm::g1_to_bytes(back->ctx.g) == gm::g1_to_bytes(pp.ctx.g));
    CHECK(gm::g2_to_bytes(back->ctx.h_vec[2]) == gm::g2_to_bytes(pp.ctx.h_vec[2]));
    CHECK(encode_params(*back) == enc);
}

TEST_CASE("report artifacts round trip and encodings are deterministic") {
    const auto& pp = params_for(2);
    Drbg rng(300);
    for (int i = 0; i < 25; ++i) {
        auto rep = sample_report(pp, rng);

        auto ce = encode_cipher(rep.cipher);
        REQUIRE(ce.ok());
        CHECK(*ce == *encode_cipher(rep.cipher));
        auto cb = decode_cipher(*ce);
        REQUIRE(cb.ok());
        CHECK(*encode_cipher(*cb) == *ce);
        CHECK(cb->c[1].eq(rep.cipher.c[1]));

        auto se = encode_homsig(rep.sig);
        REQUIRE(se.ok());
        auto sig = decode_homsig(*se);
        REQUIRE(sig.ok());
        CHECK(sig->sigma.eq(rep.sig.sigma));
        CHECK(sig->e.eq(rep.sig.e));
        CHECK(sig->w_commit.eq(rep.sig.w_commit));
        CHECK(!sig->has_witness());

        auto re = encode_resign(rep.resign);
        auto rk = decode_resign(re);
        REQUIRE(rk.ok());
        CHECK(rk->rk.eq(rep.resign.rk));
    }
}

TEST_CASE("aggregate and proof round trips") {
    const auto& pp = params_for(2);
    Drbg rng(301);
    auto customer = pvas::keygen_customer(pp, rng);
    auto server = pvas::keygen_server(pp, rng);
    auto task = pvas::TaskId::random(rng);
    std::vector<pvas::UserReport> reports;
    pvas::TaskContext tc(pp, customer.pub, task);
    for (int i = 0; i < 3; ++i) {
        auto user = pvas::keygen_user(pp, rng);
        auto enc = pvas::sig_enc(pp, user, tc, pvas::DataVector{{5, 6}}, rng);
        auto& [cb, sig, rk] = *enc;
        reports.push_back({cb.public_part(), sig.public_part(), rk});

        auto wit = sigma::make_witness(user, pvas::DataVector{{5, 6}}, cb, sig);
        auto st = sigma::make_statement(task, customer.pub, user.pub, reports.back());
        auto proof = sigma::prove(pp, st, *wit, rng, &tc);
        REQUIRE(proof.ok());
        Bytes pe = encode_proof(*proof);
        CHECK(pe.size() == Manifest::proof(pp.l()));
        auto pd = decode_proof(pe);
        REQUIRE(pd.ok());
        CHECK(encode_proof(*pd) == pe);
        CHECK(sigma::verify_pk(pp, st, *pd));
    }
    auto agg = pvas::aggregate(pp, server, reports, pvas::WeightVector::uniform(3));
    REQUIRE(agg.ok());
    Bytes ae = encode_aggregate(*agg);
    CHECK(ae.size() == Manifest::aggregate(pp.l()));
    auto back = decode_aggregate(ae);
    REQUIRE(back.ok());
    CHECK(back->sigma == agg->sigma);
    CHECK(back->e.eq(agg->e));
    CHECK(encode_aggregate(*back) == ae);
}

TEST_CASE("malformed and non-canonical encodings are rejected") {
    const auto& pp = params_for(1);
    Drbg rng(302);
    auto rep = sample_report(pp, rng);
    Bytes good = *encode_cipher(rep.cipher);

    // truncation
    Bytes trunc(good.begin(), good.end() - 1);
    auto r1 = decode_cipher(trunc);
    REQUIRE(!r1.ok());
    CHECK(r1.error() == Err::MalformedEncoding);

    // trailing garbage
    Bytes trail = good;
    trail.push_back(0x00);
    auto r2 = decode_cipher(trail);
    REQUIRE(!r2.ok());
    CHECK(r2.error() == Err::MalformedEncoding);

    // version bump
    Bytes vers = good;
    vers[1] = 9;
    auto r3 = decode_cipher(vers);
    REQUIRE(!r3.ok());
    CHECK(r3.error() == Err::VersionMismatch);

    // wrong tag
    Bytes tag = good;
    tag[0] = static_cast<uint8_t>(Tag::HomSig);
    auto r4 = decode_cipher(tag);
    REQUIRE(!r4.ok());
    CHECK(r4.error() == Err::MalformedEncoding);

    // corrupted group element payload
    Bytes corrupt = good;
    corrupt[8] ^= 0xff;
    CHECK(!decode_cipher(corrupt).ok());

    // absurd dimension field
    Bytes dim = good;
    dim[2] = 0xff;
    CHECK(!decode_cipher(dim).ok());
}

TEST_CASE("manifest sizes match produced encodings") {
    Drbg rng(303);
    Manifest mf;
    for (uint32_t l : {1u, 3u}) {
        const auto& pp = params_for(l);
        auto rep = sample_report(pp, rng);
        CHECK((*encode_cipher(rep.cipher)).size() == Manifest::cipher(l));
        CHECK((*encode_homsig(rep.sig)).size() == mf.homsig);
        CHECK(encode_resign(rep.resign).size() == mf.resign);
    }
    CHECK(mf.g1 == 33);
    CHECK(mf.g2 == 65);
    CHECK(mf.gt == 384);
    CHECK(mf.scalar == 32);
}
