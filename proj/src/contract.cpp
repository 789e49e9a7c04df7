#include "faircrowd/contract.hpp"

#include <cassert>

namespace faircrowd::contract {

const char* task_state_name(TaskState s) {
    switch (s) {
        case TaskState::INIT: return "INIT";
        case TaskState::CREATED: return "CREATED";
        case TaskState::CLAIMED: return "CLAIMED";
        case TaskState::FULFILLED: return "FULFILLED";
        case TaskState::FINISHED: return "FINISHED";
        case TaskState::UNFULFILLED: return "UNFULFILLED";
        case TaskState::ABORTED: return "ABORTED";
        case TaskState::CLOSED: return "CLOSED";
    }
    return "?";
}

std::vector<Identity> TaskRecord::accepted_users() const {
    std::vector<Identity> out;
    out.reserve(users.size());
    for (const auto& [id, entry] : users) out.push_back(id);
    return out;
}

std::vector<Identity> TaskRecord::reported_users() const {
    std::vector<Identity> out;
    for (const auto& [id, entry] : users) {
        if (entry.state == UserState::UPLOADED) out.push_back(id);
    }
    return out;
}

bool TaskRecord::all_reported() const {
    for (const auto& [id, entry] : users) {
        if (entry.state != UserState::UPLOADED) return false;
    }
    return true;
}

TaskRecord* CsFairCrowd::find(const Bytes& task_n) {
    auto it = tasks_.find(task_n);
    return it == tasks_.end() ? nullptr : &it->second;
}

const TaskRecord* CsFairCrowd::task(const Bytes& task_n) const {
    auto it = tasks_.find(task_n);
    return it == tasks_.end() ? nullptr : &it->second;
}

void CsFairCrowd::move_coins(const Identity& from, const Identity& to, Coins amount) {
    if (amount == 0) return;
    Coins have = ledger_.balance(from);
    assert(have >= amount);
    ledger_.balances[from] = have - amount;
    ledger_.balances[to] = ledger_.balance(to) + amount;
}

Res<void> CsFairCrowd::record(TransitionRecord rec, Res<void> outcome) {
    rec.ok = outcome.ok();
    if (!outcome.ok()) rec.err = outcome.error();
    if (const TaskRecord* t = task(rec.task_n)) rec.next = t->state;
    log_.push_back(std::move(rec));
    return outcome;
}

std::map<Identity, Coins> CsFairCrowd::equal_split(Coins total, const std::vector<Identity>& sorted_ids) {
    std::map<Identity, Coins> out;
    if (sorted_ids.empty()) return out;
    Coins base = total / sorted_ids.size();
    Coins rem = total % sorted_ids.size();
    for (size_t i = 0; i < sorted_ids.size(); ++i) {
        out[sorted_ids[i]] = base + (i < rem ? 1 : 0);
    }
    return out;
}

Res<void> CsFairCrowd::create(const Identity& customer, const Bytes& task_n, std::string_view description,
                              const Bytes& customer_pub, Coins reward, uint64_t t1, uint64_t t2,
                              uint64_t t3, uint64_t t4, uint32_t n_min, uint64_t now) {
    TransitionRecord rec{"create", customer, task_n, reward, TaskState::INIT, TaskState::INIT, now,
                         false, Err::WrongState};
    auto run = [&]() -> Res<void> {
        if (tasks_.count(task_n)) return Err::WrongState;  // state != INIT
        if (!(t1 < t2 && t2 < t3 && t3 < t4)) return Err::BadSchedule;
        if (n_min < 1) return Err::BadSchedule;
        if (now > t1) return Err::TooLate;
        if (ledger_.balance(customer) < reward) return Err::InsufficientFunds;

        TaskRecord t;
        t.customer = customer;
        t.task_n = task_n;
        t.customer_pub = customer_pub;
        t.description = std::string(description);
        t.reward = reward;
        t.t1 = t1;
        t.t2 = t2;
        t.t3 = t3;
        t.t4 = t4;
        t.n_min = n_min;
        t.state = TaskState::CREATED;
        t.accept_count = 0;
        t.reward_escrow = reward;
        tasks_.emplace(task_n, std::move(t));
        move_coins(customer, escrow_id(), reward);
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::accept(const Identity& user, const Bytes& task_n, Coins deposit, uint64_t now) {
    TransitionRecord rec{"accept", user, task_n, deposit, TaskState::INIT, TaskState::INIT, now,
                         false, Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::CREATED) return Err::WrongState;
        if (now < t->t1 || now > t->t2) return Err::OutOfWindow;
        if (deposit == 0) return Err::NonpositiveDeposit;
        if (ledger_.balance(user) < deposit) return Err::InsufficientFunds;
        if (t->users.count(user)) return Err::AlreadyAccepted;

        t->users[user] = UserEntry{UserState::ACCEPTED, deposit};
        t->accept_count += 1;
        t->deposit_escrow += deposit;
        move_coins(user, escrow_id(), deposit);
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::claim(const Bytes& task_n, uint64_t now) {
    TransitionRecord rec{"claim", {}, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::CREATED) return Err::WrongState;
        if (now != t->t2) return Err::OutOfWindow;
        for (const auto& [id, entry] : t->users) {
            if (entry.state != UserState::ACCEPTED) return Err::WrongState;
        }
        if (t->users.size() < t->n_min) {
            // unfulfillable: refund path picks the task up at T3
            t->state = TaskState::UNFULFILLED;
            t->claim_failed = true;
            return Err::Unfulfillable;
        }
        t->state = TaskState::CLAIMED;
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::upload(const Identity& user, const Bytes& task_n, RupEntry rup, bool proof_valid,
                              uint64_t now) {
    TransitionRecord rec{"upload", user, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::CLAIMED) return Err::WrongState;
        if (now < t->t2 || now > t->t3) return Err::OutOfWindow;
        auto it = t->users.find(user);
        if (it == t->users.end()) return Err::NotAccepted;
        if (!proof_valid) return Err::InvalidProof;
        if (it->second.state == UserState::UPLOADED) return Err::AlreadyUploaded;

        it->second.state = UserState::UPLOADED;
        Coins deposit = it->second.deposit;
        rec.amount = deposit;
        t->deposit_escrow -= deposit;
        move_coins(escrow_id(), user, deposit);
        rup.user = user;
        t->rup.push_back(std::move(rup));
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::reward_task(const Bytes& task_n, uint64_t now,
                                   const std::map<Identity, Coins>* shares) {
    TransitionRecord rec{"reward", {}, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::CLAIMED) return Err::WrongState;
        if (now < t->t3 || now > t->t4) return Err::OutOfWindow;
        if (!t->all_reported() || t->users.empty()) return Err::WrongState;  // AU != RU

        std::vector<Identity> ru = t->reported_users();
        std::map<Identity, Coins> split = shares ? *shares : equal_split(t->reward, ru);
        // validate before crediting: keys exactly RU, total exactly $Reward
        if (split.size() != ru.size()) return Err::SharesMismatch;
        Coins sum = 0;
        for (const auto& id : ru) {
            auto it = split.find(id);
            if (it == split.end()) return Err::SharesMismatch;
            sum += it->second;
        }
        if (sum != t->reward) return Err::SharesMismatch;

        t->state = TaskState::FULFILLED;
        for (const auto& [id, share] : split) move_coins(escrow_id(), id, share);
        t->reward_escrow = 0;
        rec.amount = t->reward;
        t->state = TaskState::FINISHED;
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::penalty(const Bytes& task_n, uint64_t now) {
    TransitionRecord rec{"penalty", {}, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::CLAIMED) return Err::WrongState;
        if (now < t->t3 || now > t->t4) return Err::OutOfWindow;
        if (t->all_reported()) return Err::WrongState;  // RU not a strict subset of AU

        t->state = TaskState::UNFULFILLED;
        // forfeited deposits of AU \ RU redistribute to RU; with no reporters
        // they are held for the customer until the timer
        Coins forfeited = 0;
        for (const auto& [id, entry] : t->users) {
            if (entry.state != UserState::UPLOADED) forfeited += entry.deposit;
        }
        std::vector<Identity> ru = t->reported_users();
        rec.amount = forfeited;
        if (ru.empty()) {
            t->held_forfeits = forfeited;
        } else {
            auto split = equal_split(forfeited, ru);
            Coins total = 0;
            for (const auto& [id, share] : split) total += share;
            assert(total == forfeited);
            for (const auto& [id, share] : split) move_coins(escrow_id(), id, share);
        }
        t->deposit_escrow -= forfeited;
        if (!ru.empty()) {
            // nothing remains escrowed for deposits
            assert(t->deposit_escrow == 0);
        }
        t->state = TaskState::ABORTED;
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::refund_unclaimed(const Bytes& task_n, uint64_t now) {
    TransitionRecord rec{"refund", {}, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::UNFULFILLED || !t->claim_failed) return Err::WrongState;
        if (now < t->t3) return Err::TooEarly;
        Coins refunded = 0;
        for (auto& [id, entry] : t->users) {
            refunded += entry.deposit;
            move_coins(escrow_id(), id, entry.deposit);
        }
        t->deposit_escrow -= refunded;
        rec.amount = refunded;
        t->state = TaskState::ABORTED;
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

Res<void> CsFairCrowd::timer(const Bytes& task_n, uint64_t now) {
    TransitionRecord rec{"timer", {}, task_n, 0, TaskState::INIT, TaskState::INIT, now, false,
                         Err::WrongState};
    auto run = [&]() -> Res<void> {
        TaskRecord* t = find(task_n);
        if (!t) return Err::UnknownTask;
        rec.prior = t->state;
        if (t->state != TaskState::ABORTED) return Err::WrongState;
        if (now <= t->t4) return Err::TooEarly;
        Coins back = t->reward_escrow + t->held_forfeits;
        rec.amount = back;
        move_coins(escrow_id(), t->customer, back);
        t->reward_escrow = 0;
        t->held_forfeits = 0;
        t->state = TaskState::CLOSED;
        return Res<void>();
    };
    Res<void> outcome = run();
    return record(std::move(rec), outcome);
}

}  // namespace faircrowd::contract
