#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "faircrowd/bytes.hpp"
#include "faircrowd/result.hpp"

// The CS-FairCrowd escrow contract: task lifecycle state machine over a
// block-height clock, with reward escrow, per-user deposits, and
// reward/penalty distribution. Coins are non-negative integers; every
// transition conserves total supply.
namespace faircrowd::contract {

using Coins = uint64_t;

// canonical public-key encoding; lexicographic byte order is the tie-break
// order everywhere
using Identity = Bytes;

enum class TaskState : uint8_t {
    INIT = 0,
    CREATED = 1,
    CLAIMED = 2,
    FULFILLED = 3,
    FINISHED = 4,
    UNFULFILLED = 5,
    ABORTED = 6,
    CLOSED = 7,
};

enum class UserState : uint8_t { ACCEPTED = 0, UPLOADED = 1 };

const char* task_state_name(TaskState s);

struct Ledger {
    std::map<Identity, Coins> balances;

    Coins balance(const Identity& id) const {
        auto it = balances.find(id);
        return it == balances.end() ? 0 : it->second;
    }
    Coins total() const {
        Coins t = 0;
        for (const auto& [id, v] : balances) t += v;
        return t;
    }
};

struct UserEntry {
    UserState state = UserState::ACCEPTED;
    Coins deposit = 0;
};

// what the contract keeps per report: (U_i, N, sigma_i, e_i, rk_i)
struct RupEntry {
    Identity user;
    Bytes sigma;
    Bytes e;
    Bytes rk;
};

struct TaskRecord {
    Identity customer;
    Bytes task_n;
    Bytes customer_pub;
    std::string description;
    Coins reward = 0;
    uint64_t t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    uint32_t n_min = 1;  // fulfillment predicate: |AU| >= n_min at claim
    TaskState state = TaskState::INIT;
    uint32_t accept_count = 0;
    std::map<Identity, UserEntry> users;  // AU, with per-user state
    std::vector<RupEntry> rup;

    // escrow bookkeeping (mirrored in the global escrow balance)
    Coins reward_escrow = 0;
    Coins deposit_escrow = 0;
    Coins held_forfeits = 0;  // degenerate penalty: released to customer at timer
    bool claim_failed = false;

    std::vector<Identity> accepted_users() const;  // AU, sorted
    std::vector<Identity> reported_users() const;  // RU, sorted
    bool all_reported() const;
};

struct TransitionRecord {
    std::string op;
    Identity actor;
    Bytes task_n;
    Coins amount = 0;
    TaskState prior = TaskState::INIT;
    TaskState next = TaskState::INIT;
    uint64_t at = 0;
    bool ok = false;
    Err err = Err::WrongState;  // meaningful only when !ok
};

class CsFairCrowd {
public:
    explicit CsFairCrowd(Ledger initial) : ledger_(std::move(initial)) {}

    Res<void> create(const Identity& customer, const Bytes& task_n, std::string_view description,
                     const Bytes& customer_pub, Coins reward, uint64_t t1, uint64_t t2, uint64_t t3,
                     uint64_t t4, uint32_t n_min, uint64_t now);
    Res<void> accept(const Identity& user, const Bytes& task_n, Coins deposit, uint64_t now);
    Res<void> claim(const Bytes& task_n, uint64_t now);
    Res<void> upload(const Identity& user, const Bytes& task_n, RupEntry rup, bool proof_valid,
                     uint64_t now);
    // shares == nullptr: deterministic equal split with lexicographic
    // remainder rule
    Res<void> reward_task(const Bytes& task_n, uint64_t now,
                          const std::map<Identity, Coins>* shares = nullptr);
    Res<void> penalty(const Bytes& task_n, uint64_t now);
    // claim-failed path: deposits go back to the accepted users at T3
    Res<void> refund_unclaimed(const Bytes& task_n, uint64_t now);
    Res<void> timer(const Bytes& task_n, uint64_t now);

    static std::map<Identity, Coins> equal_split(Coins total, const std::vector<Identity>& sorted_ids);

    const Ledger& ledger() const { return ledger_; }
    Coins escrow_balance() const { return ledger_.balance(escrow_id()); }
    static Identity escrow_id() { return Identity{}; }

    const TaskRecord* task(const Bytes& task_n) const;
    const std::map<Bytes, TaskRecord>& tasks() const { return tasks_; }
    const std::vector<TransitionRecord>& log() const { return log_; }

private:
    TaskRecord* find(const Bytes& task_n);
    void move_coins(const Identity& from, const Identity& to, Coins amount);
    Res<void> record(TransitionRecord rec, Res<void> outcome);

    Ledger ledger_;
    std::map<Bytes, TaskRecord> tasks_;
    std::vector<TransitionRecord> log_;
};

}  // namespace faircrowd::contract
