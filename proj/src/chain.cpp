#include "faircrowd/chain.hpp"

#include <sstream>

namespace faircrowd::chain {

namespace {
constexpr uint8_t NO_REASON = 0xff;
}

Bytes Transaction::encode() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(kind));
    w.var(sender);
    w.var(payload);
    w.u8(accepted ? 1 : 0);
    w.u8(reject_reason ? static_cast<uint8_t>(*reject_reason) : NO_REASON);
    return w.take();
}

std::optional<Transaction> Transaction::decode(std::span<const uint8_t> b) {
    ByteReader r(b);
    auto kind = r.u8();
    auto sender = r.var();
    auto payload = r.var();
    auto acc = r.u8();
    auto reason = r.u8();
    if (!kind || !sender || !payload || !acc || !reason || !r.done()) return std::nullopt;
    if (*kind < 1 || *kind > 4) return std::nullopt;
    Transaction tx;
    tx.kind = static_cast<TxKind>(*kind);
    tx.sender = *sender;
    tx.payload = *payload;
    tx.accepted = *acc == 1;
    if (*reason != NO_REASON) tx.reject_reason = static_cast<Err>(*reason);
    return tx;
}

Bytes CreatePayload::encode() const {
    ByteWriter w;
    w.var(task_n);
    w.var(customer_pub);
    w.str(description);
    w.u64(reward);
    w.u64(t1);
    w.u64(t2);
    w.u64(t3);
    w.u64(t4);
    w.u32(n_min);
    return w.take();
}

std::optional<CreatePayload> CreatePayload::decode(std::span<const uint8_t> b) {
    ByteReader r(b);
    CreatePayload p;
    auto n = r.var();
    auto pub = r.var();
    auto desc = r.var();
    auto reward = r.u64();
    auto t1 = r.u64(), t2 = r.u64(), t3 = r.u64(), t4 = r.u64();
    auto n_min = r.u32();
    if (!n || !pub || !desc || !reward || !t1 || !t2 || !t3 || !t4 || !n_min || !r.done()) {
        return std::nullopt;
    }
    p.task_n = *n;
    p.customer_pub = *pub;
    p.description.assign(desc->begin(), desc->end());
    p.reward = *reward;
    p.t1 = *t1;
    p.t2 = *t2;
    p.t3 = *t3;
    p.t4 = *t4;
    p.n_min = *n_min;
    return p;
}

Bytes AcceptPayload::encode() const {
    ByteWriter w;
    w.var(task_n);
    w.u64(deposit);
    return w.take();
}

std::optional<AcceptPayload> AcceptPayload::decode(std::span<const uint8_t> b) {
    ByteReader r(b);
    auto n = r.var();
    auto d = r.u64();
    if (!n || !d || !r.done()) return std::nullopt;
    return AcceptPayload{*n, *d};
}

Bytes ReportPayload::encode() const {
    ByteWriter w;
    w.var(task_n);
    w.var(cipher);
    w.var(homsig);
    w.var(resign);
    w.var(proof);
    return w.take();
}

std::optional<ReportPayload> ReportPayload::decode(std::span<const uint8_t> b) {
    ByteReader r(b);
    auto n = r.var();
    auto c = r.var();
    auto s = r.var();
    auto rk = r.var();
    auto pf = r.var();
    if (!n || !c || !s || !rk || !pf || !r.done()) return std::nullopt;
    return ReportPayload{*n, *c, *s, *rk, *pf};
}

Bytes EventPayload::encode() const {
    ByteWriter w;
    w.str(op);
    w.var(task_n);
    return w.take();
}

std::optional<EventPayload> EventPayload::decode(std::span<const uint8_t> b) {
    ByteReader r(b);
    auto op = r.var();
    auto n = r.var();
    if (!op || !n || !r.done()) return std::nullopt;
    EventPayload p;
    p.op.assign(op->begin(), op->end());
    p.task_n = *n;
    return p;
}

SimChain::SimChain(pvas::PublicParams pp, contract::Ledger initial)
    : pp_(std::move(pp)), contract_(initial), initial_ledger_(std::move(initial)) {
    blocks_.push_back(Block{0, {}});  // genesis
}

Res<void> SimChain::validate_and_apply(Transaction& tx) {
    const uint64_t at = now();
    switch (tx.kind) {
        case TxKind::Create: {
            auto p = CreatePayload::decode(tx.payload);
            if (!p) return Err::MalformedEncoding;
            if (p->customer_pub != tx.sender) return Err::MalformedEncoding;
            if (!gm::g2_from_bytes(p->customer_pub)) return Err::MalformedEncoding;
            return contract_.create(tx.sender, p->task_n, p->description, p->customer_pub, p->reward,
                                    p->t1, p->t2, p->t3, p->t4, p->n_min, at);
        }
        case TxKind::Accept: {
            auto p = AcceptPayload::decode(tx.payload);
            if (!p) return Err::MalformedEncoding;
            if (!gm::g2_from_bytes(tx.sender)) return Err::MalformedEncoding;
            return contract_.accept(tx.sender, p->task_n, p->deposit, at);
        }
        case TxKind::Report: {
            auto p = ReportPayload::decode(tx.payload);
            if (!p) return Err::MalformedEncoding;
            const contract::TaskRecord* t = contract_.task(p->task_n);
            if (!t) return Err::UnknownTask;
            auto cipher = codec::decode_cipher(p->cipher);
            if (!cipher) return Err::MalformedEncoding;
            auto homsig = codec::decode_homsig(p->homsig);
            if (!homsig) return Err::MalformedEncoding;
            auto resign = codec::decode_resign(p->resign);
            if (!resign) return Err::MalformedEncoding;
            auto proof = codec::decode_proof(p->proof);
            if (!proof) return Err::MalformedEncoding;
            auto user_pub = gm::g2_from_bytes(tx.sender);
            if (!user_pub) return Err::MalformedEncoding;
            auto customer_pub = gm::g2_from_bytes(t->customer_pub);
            if (!customer_pub) return Err::MalformedEncoding;

            pvas::UserReport report{*cipher, *homsig, *resign};
            auto st = sigma::make_statement(pvas::TaskId{p->task_n}, *customer_pub, *user_pub, report);
            bool proof_ok = sigma::verify_pk(pp_, st, *proof);
            if (!proof_ok) return Err::InvalidProof;

            contract::RupEntry rup;
            rup.user = tx.sender;
            rup.sigma = gm::g1_to_bytes(homsig->sigma);
            rup.e = gm::g2_to_bytes(homsig->e);
            rup.rk = gm::g2_to_bytes(resign->rk);
            auto res = contract_.upload(tx.sender, p->task_n, rup, proof_ok, at);
            if (res.ok()) {
                sig_index_[p->task_n][tx.sender] = {gm::g1_to_bytes(homsig->sigma),
                                                    gm::g2_to_bytes(homsig->e)};
                auto& st_acc = storage_[p->task_n];
                st_acc.on_chain_users += gm::G1_BYTES + gm::G2_BYTES;  // (sigma_i, e_i)
                st_acc.off_chain += p->cipher.size() + p->resign.size() + p->proof.size() +
                                    p->homsig.size();
            }
            return res;
        }
        case TxKind::ContractEvent:
            // node-generated only; a submitted one is invalid
            return Err::MalformedEncoding;
    }
    return Err::MalformedEncoding;
}

Res<void> SimChain::submit(Transaction tx) {
    auto res = validate_and_apply(tx);
    tx.accepted = res.ok();
    tx.reject_reason = res.ok() ? std::nullopt : std::optional<Err>(res.error());
    // storage accounting for accepted create/accept
    if (res.ok()) {
        if (tx.kind == TxKind::Create) {
            auto p = CreatePayload::decode(tx.payload);
            storage_[p->task_n].on_chain_fixed = p->encode().size() + 1 /*state*/ + 4 /*accept counter*/ +
                                                 8 /*reward escrow*/ + 8 /*deposit escrow*/;
        } else if (tx.kind == TxKind::Accept) {
            auto p = AcceptPayload::decode(tx.payload);
            storage_[p->task_n].on_chain_users += tx.sender.size() + 8 /*deposit*/ + 1 /*state*/;
        }
    }
    pending_.push_back(std::move(tx));
    if (!res.ok()) return res;
    return Res<void>();
}

Res<void> SimChain::submit_create(const Identity& sender, const CreatePayload& p) {
    Transaction tx;
    tx.kind = TxKind::Create;
    tx.sender = sender;
    tx.payload = p.encode();
    return submit(std::move(tx));
}

Res<void> SimChain::submit_accept(const Identity& sender, const AcceptPayload& p) {
    Transaction tx;
    tx.kind = TxKind::Accept;
    tx.sender = sender;
    tx.payload = p.encode();
    return submit(std::move(tx));
}

Res<void> SimChain::submit_report(const Identity& sender, const ReportPayload& p) {
    Transaction tx;
    tx.kind = TxKind::Report;
    tx.sender = sender;
    tx.payload = p.encode();
    return submit(std::move(tx));
}

void SimChain::push_event(const std::string& op, const Bytes& task_n, Res<void> outcome) {
    Transaction tx;
    tx.kind = TxKind::ContractEvent;
    tx.payload = EventPayload{op, task_n}.encode();
    tx.accepted = outcome.ok();
    tx.reject_reason = outcome.ok() ? std::nullopt : std::optional<Err>(outcome.error());
    blocks_.back().txs.push_back(std::move(tx));
}

void SimChain::fire_clock(uint64_t h) {
    // snapshot task ids first; transitions do not add tasks
    std::vector<Bytes> ids;
    for (const auto& [n, t] : contract_.tasks()) ids.push_back(n);
    for (const Bytes& n : ids) {
        const contract::TaskRecord* t = contract_.task(n);
        if (!t) continue;
        if (h == t->t2 && t->state == contract::TaskState::CREATED) {
            push_event("claim", n, contract_.claim(n, h));
        }
        if (h == t->t3) {
            if (t->state == contract::TaskState::CLAIMED) {
                if (t->all_reported()) {
                    push_event("reward", n, contract_.reward_task(n, h));
                } else {
                    push_event("penalty", n, contract_.penalty(n, h));
                }
            } else if (t->state == contract::TaskState::UNFULFILLED && t->claim_failed) {
                push_event("refund", n, contract_.refund_unclaimed(n, h));
            }
        }
        if (h == t->t4 + 1 && t->state == contract::TaskState::ABORTED) {
            push_event("timer", n, contract_.timer(n, h));
        }
    }
}

const Block& SimChain::advance_block() {
    uint64_t h = sealed_ + 1;
    blocks_.push_back(Block{h, std::move(pending_)});
    pending_.clear();
    sealed_ = h;
    fire_clock(h);
    return blocks_.back();
}

void SimChain::advance_to(uint64_t height) {
    while (sealed_ < height) advance_block();
}

Res<StorageReport> SimChain::storage_report(const Bytes& task_n) const {
    auto it = storage_.find(task_n);
    if (it == storage_.end()) return Err::UnknownTask;
    StorageReport rep;
    rep.on_chain = it->second.on_chain_fixed + it->second.on_chain_users;
    rep.off_chain = it->second.off_chain;
    return rep;
}

Bytes SimChain::state_digest() const {
    ByteWriter w;
    w.str("FairCrowd/state/v1");
    // ledger, sorted by identity
    const auto& led = contract_.ledger().balances;
    w.u32(static_cast<uint32_t>(led.size()));
    for (const auto& [id, coins] : led) {
        w.var(id);
        w.u64(coins);
    }
    // contract state, sorted by task id
    w.u32(static_cast<uint32_t>(contract_.tasks().size()));
    for (const auto& [n, t] : contract_.tasks()) {
        w.var(n);
        w.var(t.customer);
        w.var(t.customer_pub);
        w.str(t.description);
        w.u64(t.reward);
        w.u64(t.t1);
        w.u64(t.t2);
        w.u64(t.t3);
        w.u64(t.t4);
        w.u32(t.n_min);
        w.u8(static_cast<uint8_t>(t.state));
        w.u32(t.accept_count);
        w.u64(t.reward_escrow);
        w.u64(t.deposit_escrow);
        w.u64(t.held_forfeits);
        w.u8(t.claim_failed ? 1 : 0);
        w.u32(static_cast<uint32_t>(t.users.size()));
        for (const auto& [id, entry] : t.users) {
            w.var(id);
            w.u8(static_cast<uint8_t>(entry.state));
            w.u64(entry.deposit);
        }
        w.u32(static_cast<uint32_t>(t.rup.size()));
        for (const auto& rup : t.rup) {
            w.var(rup.user);
            w.var(rup.sigma);
            w.var(rup.e);
            w.var(rup.rk);
        }
    }
    // signature index
    w.u32(static_cast<uint32_t>(sig_index_.size()));
    for (const auto& [n, users] : sig_index_) {
        w.var(n);
        w.u32(static_cast<uint32_t>(users.size()));
        for (const auto& [id, se] : users) {
            w.var(id);
            w.var(se.first);
            w.var(se.second);
        }
    }
    return w.take();
}

std::string SimChain::export_log() const {
    std::ostringstream out;
    out << "FAIRCROWD-CHAIN v1\n";
    out << "P " << to_hex(codec::encode_params(pp_)) << "\n";
    for (const auto& [id, coins] : initial_ledger_.balances) {
        out << "L " << to_hex(id) << " " << coins << "\n";
    }
    for (size_t i = 1; i < blocks_.size(); ++i) {
        for (const auto& tx : blocks_[i].txs) out << "T " << to_hex(tx.encode()) << "\n";
        out << "B " << blocks_[i].height << "\n";
    }
    return out.str();
}

Res<SimChain> SimChain::replay(const std::string& log_text) {
    std::istringstream in(log_text);
    std::string line;
    if (!std::getline(in, line) || line != "FAIRCROWD-CHAIN v1") return Err::MalformedEncoding;

    std::optional<pvas::PublicParams> pp;
    contract::Ledger initial;
    std::optional<SimChain> chain;
    auto ensure_chain = [&]() -> bool {
        if (!chain) {
            if (!pp) return false;
            chain.emplace(*pp, initial);
        }
        return true;
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char tag = line[0];
        std::string rest = line.size() > 2 ? line.substr(2) : "";
        if (tag == 'P') {
            auto raw = from_hex(rest);
            if (!raw) return Err::MalformedEncoding;
            auto p = codec::decode_params(*raw);
            if (!p) return p.error();
            pp = *p;
        } else if (tag == 'L') {
            auto sp = rest.find(' ');
            if (sp == std::string::npos) return Err::MalformedEncoding;
            auto id = from_hex(rest.substr(0, sp));
            if (!id) return Err::MalformedEncoding;
            initial.balances[*id] = std::stoull(rest.substr(sp + 1));
        } else if (tag == 'T') {
            if (!ensure_chain()) return Err::MalformedEncoding;
            auto raw = from_hex(rest);
            if (!raw) return Err::MalformedEncoding;
            auto tx = Transaction::decode(*raw);
            if (!tx) return Err::MalformedEncoding;
            if (tx->kind == TxKind::ContractEvent) continue;  // regenerated by the clock
            Transaction fresh;
            fresh.kind = tx->kind;
            fresh.sender = tx->sender;
            fresh.payload = tx->payload;
            chain->submit(fresh);
            const Transaction& applied = chain->pending_.back();
            if (applied.accepted != tx->accepted || applied.reject_reason != tx->reject_reason) {
                return Err::ReplayDivergence;
            }
        } else if (tag == 'B') {
            if (!ensure_chain()) return Err::MalformedEncoding;
            chain->advance_block();
            if (chain->sealed_ != std::stoull(rest)) return Err::ReplayDivergence;
        } else {
            return Err::MalformedEncoding;
        }
    }
    if (!chain) return Err::MalformedEncoding;
    return std::move(*chain);
}

}  // namespace faircrowd::chain
