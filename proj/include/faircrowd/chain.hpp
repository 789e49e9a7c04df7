#pragma once

#include <optional>
#include <string>

#include "faircrowd/codec.hpp"
#include "faircrowd/contract.hpp"
#include "faircrowd/sigma.hpp"

// Single-node simulated public blockchain: a block-height clock, submit-time
// validation (proof checks plus contract transitions), clock-driven contract
// firing at the timeout crossings, an append-only signature index, and a
// replayable line-delimited log.
namespace faircrowd::chain {

using contract::Coins;
using contract::Identity;

enum class TxKind : uint8_t { Create = 1, Accept = 2, Report = 3, ContractEvent = 4 };

struct Transaction {
    TxKind kind = TxKind::Create;
    Identity sender;
    Bytes payload;
    bool accepted = false;
    std::optional<Err> reject_reason;

    Bytes encode() const;
    static std::optional<Transaction> decode(std::span<const uint8_t> b);
};

struct CreatePayload {
    Bytes task_n;
    Bytes customer_pub;
    std::string description;
    Coins reward = 0;
    uint64_t t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    uint32_t n_min = 1;

    Bytes encode() const;
    static std::optional<CreatePayload> decode(std::span<const uint8_t> b);
};

struct AcceptPayload {
    Bytes task_n;
    Coins deposit = 0;

    Bytes encode() const;
    static std::optional<AcceptPayload> decode(std::span<const uint8_t> b);
};

struct ReportPayload {
    Bytes task_n;
    Bytes cipher;  // codec encodings
    Bytes homsig;
    Bytes resign;
    Bytes proof;

    Bytes encode() const;
    static std::optional<ReportPayload> decode(std::span<const uint8_t> b);
};

struct EventPayload {
    std::string op;
    Bytes task_n;

    Bytes encode() const;
    static std::optional<EventPayload> decode(std::span<const uint8_t> b);
};

struct Block {
    uint64_t height = 0;
    std::vector<Transaction> txs;
};

struct StorageReport {
    size_t on_chain = 0;
    size_t off_chain = 0;
};

class SimChain {
public:
    SimChain(pvas::PublicParams pp, contract::Ledger initial);

    uint64_t height() const { return sealed_; }  // last sealed block
    uint64_t now() const { return sealed_ + 1; } // height the next tx lands at

    // validates, applies effects, records the verdict, queues for the next
    // block; returns the rejection reason when rejected
    Res<void> submit(Transaction tx);

    Res<void> submit_create(const Identity& sender, const CreatePayload& p);
    Res<void> submit_accept(const Identity& sender, const AcceptPayload& p);
    Res<void> submit_report(const Identity& sender, const ReportPayload& p);

    const Block& advance_block();
    void advance_to(uint64_t height);

    const contract::CsFairCrowd& agreement() const { return contract_; }
    const pvas::PublicParams& params() const { return pp_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    // per (task, user): the on-chain (sigma_i, e_i) record
    using SignatureIndex = std::map<Bytes, std::map<Identity, std::pair<Bytes, Bytes>>>;
    const SignatureIndex& signature_index() const { return sig_index_; }

    Res<StorageReport> storage_report(const Bytes& task_n) const;

    // canonical encoding of (contract state, ledger, signature index)
    Bytes state_digest() const;

    std::string export_log() const;
    static Res<SimChain> replay(const std::string& log_text);

private:
    void fire_clock(uint64_t h);
    void push_event(const std::string& op, const Bytes& task_n, Res<void> outcome);
    Res<void> validate_and_apply(Transaction& tx);

    pvas::PublicParams pp_;
    contract::CsFairCrowd contract_;
    contract::Ledger initial_ledger_;
    std::vector<Block> blocks_;
    std::vector<Transaction> pending_;
    uint64_t sealed_ = 0;
    SignatureIndex sig_index_;

    struct TaskStorage {
        size_t on_chain_fixed = 0;  // create record
        size_t on_chain_users = 0;  // identities, deposits, states, (sigma, e)
        size_t off_chain = 0;       // ciphertexts, proofs, resign keys at the server
    };
    std::map<Bytes, TaskStorage> storage_;
};

}  // namespace faircrowd::chain
