#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "faircrowd/actors.hpp"
#include "faircrowd/chain.hpp"
#include "support/test_util.hpp"

using namespace faircrowd;
using namespace faircrowd::chain;
using faircrowd::testing::params_for;

namespace {

// small hand-driven world (kept independent of the actors runner)
struct Rig {
    const pvas::PublicParams& pp;
    pvas::CustomerKeyPair customer;
    pvas::ServerKeyPair server;
    std::vector<pvas::UserKeyPair> users;
    pvas::TaskId task;
    SimChain chain;

    static contract::Ledger ledger_for(const pvas::CustomerKeyPair& c,
                                       const std::vector<pvas::UserKeyPair>& us, contract::Coins reward,
                                       contract::Coins deposit) {
        contract::Ledger led;
        led.balances[gm::g2_to_bytes(c.pub)] = reward;
        for (const auto& u : us) led.balances[gm::g2_to_bytes(u.pub)] = deposit;
        return led;
    }

    Rig(const pvas::PublicParams& pp_, size_t n, Drbg& rng, contract::Coins reward = 900,
        contract::Coins deposit = 30)
        : pp(pp_),
          customer(pvas::keygen_customer(pp_, rng)),
          server(pvas::keygen_server(pp_, rng)),
          users([&] {
              std::vector<pvas::UserKeyPair> us;
              for (size_t i = 0; i < n; ++i) us.push_back(pvas::keygen_user(pp_, rng));
              return us;
          }()),
          task(pvas::TaskId::random(rng)),
          chain(pp_, ledger_for(customer, users, reward, deposit)) {}

    contract::Identity uid(size_t i) const { return gm::g2_to_bytes(users[i].pub); }
    contract::Identity cid() const { return gm::g2_to_bytes(customer.pub); }

    CreatePayload create_payload(contract::Coins reward, uint64_t t1 = 2, uint64_t t2 = 4,
                                 uint64_t t3 = 7, uint64_t t4 = 9) const {
        CreatePayload p;
        p.task_n = task.n;
        p.customer_pub = gm::g2_to_bytes(customer.pub);
        p.description = "air quality";
        p.reward = reward;
        p.t1 = t1;
        p.t2 = t2;
        p.t3 = t3;
        p.t4 = t4;
        p.n_min = 1;
        return p;
    }

    ReportPayload report_payload(size_t i, const std::vector<uint64_t>& values, Drbg& rng,
                                 pvas::UserReport* out = nullptr) const {
        pvas::TaskContext tc(pp, customer.pub, task);
        auto enc = pvas::sig_enc(pp, users[i], tc, pvas::DataVector{values}, rng);
        REQUIRE(enc.ok());
        auto& [cb, sig, rk] = *enc;
        pvas::UserReport rep{cb.public_part(), sig.public_part(), rk};
        auto st = sigma::make_statement(task, customer.pub, users[i].pub, rep);
        auto wit = sigma::make_witness(users[i], pvas::DataVector{values}, cb, sig);
        auto proof = sigma::prove(pp, st, *wit, rng, &tc);
        REQUIRE(proof.ok());
        if (out) *out = rep;
        ReportPayload p;
        p.task_n = task.n;
        p.cipher = *codec::encode_cipher(rep.cipher);
        p.homsig = *codec::encode_homsig(rep.sig);
        p.resign = codec::encode_resign(rep.resign);
        p.proof = codec::encode_proof(*proof);
        return p;
    }
};

}  // namespace

TEST_CASE("honest submission flow: create, accept, claim, report, reward") {
    const auto& pp = params_for(1);
    Drbg rng(400);
    Rig rig(pp, 2, rng);

    REQUIRE(rig.chain.submit_create(rig.cid(), rig.create_payload(900)).ok());
    rig.chain.advance_to(2);
    REQUIRE(rig.chain.submit_accept(rig.uid(0), AcceptPayload{rig.task.n, 30}).ok());
    REQUIRE(rig.chain.submit_accept(rig.uid(1), AcceptPayload{rig.task.n, 30}).ok());
    rig.chain.advance_to(4);  // claim fires
    CHECK(rig.chain.agreement().task(rig.task.n)->state == contract::TaskState::CLAIMED);

    auto p0 = rig.report_payload(0, {11}, rng);
    auto p1 = rig.report_payload(1, {22}, rng);
    REQUIRE(rig.chain.submit_report(rig.uid(0), p0).ok());
    REQUIRE(rig.chain.submit_report(rig.uid(1), p1).ok());
    rig.chain.advance_to(7);  // reward fires at T3
    const auto* t = rig.chain.agreement().task(rig.task.n);
    CHECK(t->state == contract::TaskState::FINISHED);
    CHECK(rig.chain.agreement().ledger().balance(rig.uid(0)) == 30 + 450);
    CHECK(rig.chain.agreement().ledger().balance(rig.uid(1)) == 30 + 450);
    CHECK(rig.chain.agreement().escrow_balance() == 0);

    // signature index holds exactly one (sigma, e) per user
    const auto& idx = rig.chain.signature_index().at(rig.task.n);
    CHECK(idx.size() == 2);
    CHECK(idx.count(rig.uid(0)) == 1);

    // empty block advance still increments the clock
    uint64_t h = rig.chain.height();
    const Block& b = rig.chain.advance_block();
    CHECK(b.height == h + 1);
    CHECK(b.txs.empty());
}

TEST_CASE("node-side rejections carry contract reasons") {
    const auto& pp = params_for(1);
    Drbg rng(401);
    Rig rig(pp, 3, rng);
    REQUIRE(rig.chain.submit_create(rig.cid(), rig.create_payload(900)).ok());
    rig.chain.advance_to(2);
    REQUIRE(rig.chain.submit_accept(rig.uid(0), AcceptPayload{rig.task.n, 30}).ok());
    REQUIRE(rig.chain.submit_accept(rig.uid(1), AcceptPayload{rig.task.n, 30}).ok());
    rig.chain.advance_to(4);

    auto good = rig.report_payload(0, {5}, rng);

    SUBCASE("perturbed proof is rejected as InvalidProof") {
        ReportPayload bad = good;
        // flip one byte inside a response scalar at the tail of the proof
        bad.proof[bad.proof.size() - 1] ^= 0x01;
        auto res = rig.chain.submit_report(rig.uid(0), bad);
        REQUIRE(!res.ok());
        CHECK((res.error() == Err::InvalidProof || res.error() == Err::MalformedEncoding));
        // the honest one still lands
        CHECK(rig.chain.submit_report(rig.uid(0), good).ok());
    }
    SUBCASE("duplicate report is rejected as AlreadyUploaded") {
        REQUIRE(rig.chain.submit_report(rig.uid(0), good).ok());
        auto res = rig.chain.submit_report(rig.uid(0), good);
        REQUIRE(!res.ok());
        CHECK(res.error() == Err::AlreadyUploaded);
        const auto& idx = rig.chain.signature_index().at(rig.task.n);
        CHECK(idx.at(rig.uid(0)).first.size() == gm::G1_BYTES);
        CHECK(idx.size() == 1);
    }
    SUBCASE("report from a never-accepted key is rejected as NotAccepted") {
        auto payload = rig.report_payload(2, {7}, rng);
        auto res = rig.chain.submit_report(rig.uid(2), payload);
        REQUIRE(!res.ok());
        CHECK(res.error() == Err::NotAccepted);
    }
    SUBCASE("replaying another user's report under a different sender fails the proof") {
        auto res = rig.chain.submit_report(rig.uid(1), good);
        REQUIRE(!res.ok());
        CHECK(res.error() == Err::InvalidProof);
    }
    SUBCASE("rejected transactions are retained in sealed blocks with reasons") {
        REQUIRE(rig.chain.submit_report(rig.uid(0), good).ok());
        rig.chain.submit_report(rig.uid(0), good);  // duplicate
        const Block& b = rig.chain.advance_block();
        REQUIRE(b.txs.size() == 2);
        CHECK(b.txs[0].accepted);
        CHECK(!b.txs[1].accepted);
        CHECK(*b.txs[1].reject_reason == Err::AlreadyUploaded);
    }
}

TEST_CASE("chain log export and replay reproduce identical state byte-for-byte") {
    const auto& pp = params_for(2);
    Drbg rng(402);
    Rig rig(pp, 3, rng);
    REQUIRE(rig.chain.submit_create(rig.cid(), rig.create_payload(900)).ok());
    rig.chain.advance_to(2);
    for (size_t i = 0; i < 3; ++i) {
        REQUIRE(rig.chain.submit_accept(rig.uid(i), AcceptPayload{rig.task.n, 30}).ok());
    }
    rig.chain.advance_to(4);
    for (size_t i = 0; i < 3; ++i) {
        auto p = rig.report_payload(i, {10 * i + 1, 20 * i + 2}, rng);
        REQUIRE(rig.chain.submit_report(rig.uid(i), p).ok());
        if (i == 0) {
            // a rejected duplicate goes into the log too and must replay
            rig.chain.submit_report(rig.uid(0), p);
        }
    }
    rig.chain.advance_to(10);  // through reward and past T4

    std::string log = rig.chain.export_log();
    auto replayed = SimChain::replay(log);
    REQUIRE(replayed.ok());
    CHECK(replayed->state_digest() == rig.chain.state_digest());
    CHECK(replayed->height() == rig.chain.height());
    CHECK(replayed->export_log() == log);

    // a corrupted log line fails replay
    std::string broken = log;
    auto pos = broken.find("T ");
    broken[pos + 3] = broken[pos + 3] == 'a' ? 'b' : 'a';
    auto bad = SimChain::replay(broken);
    CHECK(!bad.ok());
}

TEST_CASE("storage accounting: constant for empty tasks, affine growth in n") {
    Drbg rng(403);

    auto run_n = [&](uint32_t n, uint32_t l) {
        const auto& pp = params_for(l);
        Rig rig(pp, n, rng, 1000, 25);
        REQUIRE(rig.chain.submit_create(rig.cid(), rig.create_payload(1000)).ok());
        rig.chain.advance_to(2);
        for (uint32_t i = 0; i < n; ++i) {
            REQUIRE(rig.chain.submit_accept(rig.uid(i), AcceptPayload{rig.task.n, 25}).ok());
        }
        rig.chain.advance_to(4);
        for (uint32_t i = 0; i < n; ++i) {
            std::vector<uint64_t> vals(l, i + 1);
            REQUIRE(rig.chain.submit_report(rig.uid(i), rig.report_payload(i, vals, rng)).ok());
        }
        rig.chain.advance_to(10);
        auto rep = rig.chain.storage_report(rig.task.n);
        REQUIRE(rep.ok());
        return *rep;
    };

    SUBCASE("task with no accepts reports only the fixed record") {
        const auto& pp = params_for(1);
        Rig rig(pp, 1, rng);
        REQUIRE(rig.chain.submit_create(rig.cid(), rig.create_payload(900)).ok());
        rig.chain.advance_to(10);
        auto rep = rig.chain.storage_report(rig.task.n);
        REQUIRE(rep.ok());
        CHECK(rep->on_chain > 0);
        CHECK(rep->off_chain == 0);
        auto rep2 = rig.chain.storage_report(Bytes{0x99});
        REQUIRE(!rep2.ok());
        CHECK(rep2.error() == Err::UnknownTask);
    }

    SUBCASE("on-chain bytes are affine in n; off-chain fit alpha*l*n + beta*n exactly") {
        auto s2 = run_n(2, 1);
        auto s4 = run_n(4, 1);
        auto s6 = run_n(6, 1);
        CHECK(s4.on_chain - s2.on_chain == s6.on_chain - s4.on_chain);
        CHECK(s4.off_chain - s2.off_chain == s6.off_chain - s4.off_chain);

        // two dimensions, two sizes: solve off_chain = alpha*l*n + beta*n and
        // check a third point exactly (integer arithmetic, residual zero)
        auto a2 = run_n(2, 2);
        auto a4 = run_n(4, 2);
        auto l4n2 = run_n(2, 4);
        size_t per_user_l2 = (a4.off_chain - a2.off_chain) / 2;  // alpha*2 + beta
        size_t per_user_l1 = (s4.off_chain - s2.off_chain) / 2;  // alpha*1 + beta
        size_t alpha = per_user_l2 - per_user_l1;
        size_t beta = per_user_l1 - alpha;
        CHECK(l4n2.off_chain == 2 * (alpha * 4 + beta));
    }
}

TEST_CASE("scenario runner end-to-end (honest) matches the plaintext oracle") {
    actors::Scenario sc;
    sc.seed = 7;
    sc.n = 3;
    sc.l = 2;
    sc.reward = 600;
    sc.deposit = 20;
    sc.data.max_value = 200;
    auto report = actors::run_scenario(sc);
    REQUIRE(report.scenario_ok);
    CHECK(report.failure.empty());
    CHECK(report.verify_accepted);
    CHECK(report.decrypt_ok);
    CHECK(report.conservation_ok);
    CHECK(report.final_state == contract::TaskState::FINISHED);
    REQUIRE(report.world != nullptr);
    // oracle comparison
    std::vector<uint64_t> expect(sc.l, 0);
    for (uint32_t i = 0; i < sc.n; ++i) {
        for (uint32_t j = 0; j < sc.l; ++j) expect[j] += report.world->user_data[i][j];
    }
    CHECK(report.result == expect);
    // determinism: same seed, same digest and same report values
    auto report2 = actors::run_scenario(sc);
    CHECK(report2.final_digest == report.final_digest);
    CHECK(report2.result == report.result);
    CHECK(report2.chain_log == report.chain_log);
}
