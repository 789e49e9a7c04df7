#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "faircrowd/codec.hpp"
#include "faircrowd/pvas.hpp"
#include "support/test_util.hpp"

using namespace faircrowd;
using namespace faircrowd::pvas;
using faircrowd::gm::Fr;
using faircrowd::gm::G1;
using faircrowd::gm::G2;
using faircrowd::gm::GT;
using faircrowd::testing::params_for;
using faircrowd::testing::plaintext_aggregate;

namespace {

struct Pipeline {
    const PublicParams& pp;
    CustomerKeyPair customer;
    ServerKeyPair server;
    TaskId task;
    TaskContext tc;
    std::vector<UserKeyPair> users;
    std::vector<std::vector<uint64_t>> data;
    std::vector<UserReport> reports;
    std::vector<CipherBundle> local_ciphers;  // witness-bearing copies
    std::vector<HomSig> local_sigs;

    Pipeline(const PublicParams& pp_, size_t n, Drbg& rng,
             std::function<std::vector<uint64_t>(size_t)> gen)
        : pp(pp_),
          customer(keygen_customer(pp_, rng)),
          server(keygen_server(pp_, rng)),
          task(TaskId::random(rng)),
          tc(pp_, customer.pub, task) {
        for (size_t i = 0; i < n; ++i) {
            users.push_back(keygen_user(pp, rng));
            data.push_back(gen(i));
            auto out = sig_enc(pp, users[i], tc, DataVector{data[i]}, rng);
            REQUIRE(out.ok());
            auto& [cb, sig, rk] = *out;
            local_ciphers.push_back(cb);
            local_sigs.push_back(sig);
            reports.push_back(UserReport{cb.public_part(), sig.public_part(), rk});
        }
    }
};

}  // namespace

TEST_CASE("par_gen: parameter contract and generator distinctness") {
    auto bad = par_gen(128, 1);
    REQUIRE(!bad.ok());
    CHECK(bad.error() == Err::UnsupportedParameter);
    CHECK(!par_gen(256, 0).ok());

    const auto& p1 = params_for(1);
    CHECK(p1.l() == 1);
    CHECK(!p1.ctx.g_vec[0].is_identity());
    CHECK(!p1.ctx.h_vec[0].is_identity());

    const auto& p8 = params_for(8);
    std::set<Bytes> g_enc, h_enc;
    g_enc.insert(gm::g1_to_bytes(p8.ctx.g));
    h_enc.insert(gm::g2_to_bytes(p8.ctx.h));
    for (uint32_t j = 0; j < 8; ++j) {
        g_enc.insert(gm::g1_to_bytes(p8.ctx.g_vec[j]));
        h_enc.insert(gm::g2_to_bytes(p8.ctx.h_vec[j]));
    }
    CHECK(g_enc.size() == 9);
    CHECK(h_enc.size() == 9);
}

TEST_CASE("keygen: invariants and freshness") {
    const auto& pp = params_for(1);
    Drbg rng(100);
    auto c = keygen_customer(pp, rng);
    auto u = keygen_user(pp, rng);
    auto s = keygen_server(pp, rng);
    CHECK(c.pub.eq(pp.ctx.h.mul(c.secret)));
    CHECK(u.pub.eq(pp.ctx.h.mul(u.secret)));
    CHECK(s.pub.eq(pp.ctx.h.mul(s.secret)));
    CHECK(!(c.secret == u.secret));
    CHECK(!u.secret.is_zero());
    // u invertible: rk computable
    CHECK(!(u.secret.inv() * u.secret - Fr::one() == Fr::one()));
}

TEST_CASE("sig_enc: zero message, bounds, probabilistic encryption") {
    const auto& pp = params_for(1);
    Drbg rng(101);
    auto customer = keygen_customer(pp, rng);
    auto user = keygen_user(pp, rng);
    auto task = TaskId::random(rng);
    TaskContext tc(pp, customer.pub, task);

    // m = 0: c_1 = A^(r_1) exactly
    auto out = sig_enc(pp, user, tc, DataVector{{0}}, rng);
    REQUIRE(out.ok());
    auto& [cb, sig, rk] = *out;
    REQUIRE(cb.has_witness());
    CHECK(cb.c[0].eq(customer.pub.mul((*cb.randomness)[0])));

    // out of bounds rejected
    auto bad = sig_enc(pp, user, tc, DataVector{{pp.bounds.per_dimension}}, rng);
    REQUIRE(!bad.ok());
    CHECK(bad.error() == Err::DataOutOfBounds);
    CHECK(!sig_enc(pp, user, tc, DataVector{{1, 2}}, rng).ok());

    // fresh randomness: same inputs, different ciphertext and signature
    auto out2 = sig_enc(pp, user, tc, DataVector{{0}}, rng);
    auto& [cb2, sig2, rk2] = *out2;
    CHECK(!cb.c[0].eq(cb2.c[0]));
    CHECK(!cb.d[0].eq(cb2.d[0]));
    CHECK(!sig.sigma.eq(sig2.sigma));
    CHECK(!sig.e.eq(sig2.e));
    // resign key is deterministic in (user, A)
    CHECK(rk.rk.eq(rk2.rk));
}

TEST_CASE("single-user round trip decrypts exactly") {
    const auto& pp = params_for(2);
    Drbg rng(102);
    Pipeline p(pp, 1, rng, [](size_t) { return std::vector<uint64_t>{3, 5}; });
    auto agg = aggregate(pp, p.server, p.reports, WeightVector::uniform(1));
    REQUIRE(agg.ok());
    // weight-1 passthrough on ciphertexts
    CHECK(agg->c[0].eq(p.reports[0].cipher.c[0]));
    CHECK(agg->d[1].eq(p.reports[0].cipher.d[1]));

    auto dec = decrypt(pp, p.customer, *agg);
    REQUIRE(dec.ok());
    CHECK(*dec == std::vector<uint64_t>{3, 5});
    CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *dec));
}

TEST_CASE("weighted aggregation matches the plaintext oracle") {
    const auto& pp = params_for(1);
    Drbg rng(103);

    SUBCASE("n=2 equal weights") {
        Pipeline p(pp, 2, rng, [](size_t i) { return std::vector<uint64_t>{i == 0 ? 3u : 5u}; });
        auto agg = aggregate(pp, p.server, p.reports, WeightVector::uniform(2));
        auto dec = decrypt(pp, p.customer, *agg);
        REQUIRE(dec.ok());
        CHECK((*dec)[0] == 8);
        CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *dec));
    }

    SUBCASE("n=3 weights (1,2,3)") {
        Pipeline p(pp, 3, rng, [](size_t i) { return std::vector<uint64_t>{i + 1}; });
        WeightVector w{{1, 2, 3}};
        auto agg = aggregate(pp, p.server, p.reports, w);
        auto dec = decrypt(pp, p.customer, *agg);
        REQUIRE(dec.ok());
        CHECK((*dec)[0] == 14);  // 1*1 + 2*2 + 3*3
        CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *dec));
    }

    SUBCASE("all-zero data decrypts to zeros") {
        Pipeline p(pp, 3, rng, [](size_t) { return std::vector<uint64_t>{0}; });
        WeightVector w{{7, 1, 9}};
        auto agg = aggregate(pp, p.server, p.reports, w);
        auto dec = decrypt(pp, p.customer, *agg);
        REQUIRE(dec.ok());
        CHECK((*dec)[0] == 0);
        CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *dec));
    }
}

TEST_CASE("randomized round trips against the oracle") {
    const auto& pp = params_for(3);
    Drbg rng(104);
    for (int trial = 0; trial < 6; ++trial) {
        size_t n = 1 + rng.uniform(5);
        std::vector<uint64_t> weights;
        for (size_t i = 0; i < n; ++i) weights.push_back(1 + rng.uniform(15));
        Pipeline p(pp, n, rng, [&](size_t) {
            std::vector<uint64_t> row;
            for (uint32_t j = 0; j < pp.l(); ++j) row.push_back(rng.uniform(1 << 12));
            return row;
        });
        auto agg = aggregate(pp, p.server, p.reports, WeightVector{weights});
        REQUIRE(agg.ok());
        auto dec = decrypt(pp, p.customer, *agg);
        REQUIRE(dec.ok());
        CHECK(*dec == plaintext_aggregate(p.data, weights));
        CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *dec));
    }
}

TEST_CASE("homomorphism by parts: aggregate ciphertext equals witness recomputation") {
    const auto& pp = params_for(2);
    Drbg rng(105);
    size_t n = 3;
    std::vector<uint64_t> weights{2, 3, 4};
    Pipeline p(pp, n, rng, [&](size_t) {
        return std::vector<uint64_t>{rng.uniform(100), rng.uniform(100)};
    });
    auto agg = aggregate(pp, p.server, p.reports, WeightVector{weights});
    REQUIRE(agg.ok());
    for (uint32_t j = 0; j < pp.l(); ++j) {
        uint64_t msum = 0;
        Fr rsum = Fr::zero();
        for (size_t i = 0; i < n; ++i) {
            msum += p.data[i][j] * weights[i];
            rsum += (*p.local_ciphers[i].randomness)[j] * Fr::from_u64(weights[i]);
        }
        G2 expect = pp.ctx.h_vec[j].mul(Fr::from_u64(msum)).add(p.customer.pub.mul(rsum));
        CHECK(agg->c[j].eq(expect));
        CHECK(agg->d[j].eq(pp.ctx.h_pow(rsum)));
    }
}

TEST_CASE("signature correctness identity with test-only knowledge of a") {
    const auto& pp = params_for(2);
    Drbg rng(106);
    Pipeline p(pp, 3, rng, [&](size_t) {
        return std::vector<uint64_t>{rng.uniform(50), rng.uniform(50)};
    });
    for (size_t i = 0; i < 3; ++i) {
        GT lhs = gm::pairing(p.reports[i].sig.sigma, p.reports[i].resign.rk);
        GT rhs = gm::pairing(p.reports[i].sig.w_commit, pp.ctx.h).pow(p.customer.secret);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("aggregate input validation") {
    const auto& pp = params_for(1);
    Drbg rng(107);
    Pipeline p(pp, 2, rng, [](size_t) { return std::vector<uint64_t>{1}; });
    auto empty = aggregate(pp, p.server, std::span<const UserReport>(), WeightVector{{}});
    REQUIRE(!empty.ok());
    CHECK(empty.error() == Err::EmptyInput);
    auto mismatch = aggregate(pp, p.server, p.reports, WeightVector{{1}});
    REQUIRE(!mismatch.ok());
    CHECK(mismatch.error() == Err::DimensionMismatch);
}

TEST_CASE("off-by-one ciphertext tamper shifts decrypt and verify rejects") {
    const auto& pp = params_for(1);
    Drbg rng(108);
    Pipeline p(pp, 2, rng, [](size_t i) { return std::vector<uint64_t>{10 + i}; });
    auto agg = aggregate(pp, p.server, p.reports, WeightVector::uniform(2));
    REQUIRE(agg.ok());

    AggregateBundle tampered = *agg;
    tampered.c[0] = tampered.c[0].add(pp.ctx.h_vec[0]);
    auto dec = decrypt(pp, p.customer, tampered);
    REQUIRE(dec.ok());
    CHECK((*dec)[0] == 22);  // 10 + 11 + 1
    CHECK(!verify(pp, p.customer, p.server.pub, p.task, tampered, *dec));

    // honest result against tampered sigma
    AggregateBundle bad_sigma = *agg;
    bad_sigma.sigma = bad_sigma.sigma * gm::pairing(pp.ctx.g, pp.ctx.h);
    auto dec2 = decrypt(pp, p.customer, bad_sigma);
    REQUIRE(dec2.ok());
    CHECK(!verify(pp, p.customer, p.server.pub, p.task, bad_sigma, *dec2));

    // claimed result perturbed
    auto honest = decrypt(pp, p.customer, *agg);
    std::vector<uint64_t> lied = *honest;
    lied[0] += 1;
    CHECK(!verify(pp, p.customer, p.server.pub, p.task, *agg, lied));
    CHECK(verify(pp, p.customer, p.server.pub, p.task, *agg, *honest));
}

TEST_CASE("random corrupted aggregate fails decrypt with NotInRange") {
    pvas::PlaintextBounds tight{1u << 10, 1u << 14};
    const auto& pp = params_for(1, tight);
    Drbg rng(109);
    Pipeline p(pp, 2, rng, [](size_t) { return std::vector<uint64_t>{5}; });
    auto agg = aggregate(pp, p.server, p.reports, WeightVector::uniform(2));
    AggregateBundle corrupt = *agg;
    corrupt.c[0] = corrupt.c[0].add(pp.ctx.h.mul(Fr::random(rng)));
    uint32_t failed_dim = 99;
    auto dec = decrypt(pp, p.customer, corrupt, &failed_dim);
    REQUIRE(!dec.ok());
    CHECK(dec.error() == Err::NotInRange);
    CHECK(failed_dim == 0);
}

TEST_CASE("witness stripping is enforced at the codec boundary") {
    const auto& pp = params_for(1);
    Drbg rng(110);
    Pipeline p(pp, 1, rng, [](size_t) { return std::vector<uint64_t>{9}; });
    // local copies still carry witnesses
    REQUIRE(p.local_ciphers[0].has_witness());
    REQUIRE(p.local_sigs[0].has_witness());
    auto refuse = codec::encode_cipher(p.local_ciphers[0]);
    REQUIRE(!refuse.ok());
    CHECK(refuse.error() == Err::SecretFieldPresent);
    auto refuse2 = codec::encode_homsig(p.local_sigs[0]);
    REQUIRE(!refuse2.ok());
    CHECK(refuse2.error() == Err::SecretFieldPresent);
    // transmitted forms don't
    CHECK(!p.reports[0].cipher.has_witness());
    CHECK(codec::encode_cipher(p.reports[0].cipher).ok());
}
