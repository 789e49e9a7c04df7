#include "faircrowd/actors.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "faircrowd/csv.hpp"

namespace faircrowd::actors {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
    auto t0 = Clock::now();
    f();
    return ms_since(t0);
}

}  // namespace

const char* Deviation::kind_name(Kind k) {
    switch (k) {
        case Kind::FreeRide: return "free_ride";
        case Kind::DoubleReport: return "double_report";
        case Kind::Sybil: return "sybil";
        case Kind::ReplayReport: return "replay_report";
        case Kind::ServerTamperSigma: return "server_tamper_sigma";
        case Kind::ServerTamperE: return "server_tamper_e";
        case Kind::ServerTamperC: return "server_tamper_c";
        case Kind::ServerTamperD: return "server_tamper_d";
        case Kind::CustomerAbandon: return "customer_abandon";
    }
    return "?";
}

std::optional<Deviation::Kind> Deviation::kind_from_name(std::string_view name) {
    using K = Deviation::Kind;
    for (K k : {K::FreeRide, K::DoubleReport, K::Sybil, K::ReplayReport, K::ServerTamperSigma,
                K::ServerTamperE, K::ServerTamperC, K::ServerTamperD, K::CustomerAbandon}) {
        if (name == kind_name(k)) return k;
    }
    return std::nullopt;
}

Res<void> Scenario::validate() const {
    if (n < 1 || l < 1) return Err::ScenarioInvalid;
    if (!(t1 >= 1 && t1 < t2 && t2 < t3 && t3 < t4)) return Err::ScenarioInvalid;
    if (t3 < t2 + 2) return Err::ScenarioInvalid;  // uploads land in (T2, T3]
    if (!weights.empty() && weights.size() != n) return Err::ScenarioInvalid;
    if (n_min < 1) return Err::ScenarioInvalid;
    if (reward < 1 || deposit < 1) return Err::ScenarioInvalid;
    if (bounds.per_dimension < 1 || bounds.aggregate < bounds.per_dimension) return Err::ScenarioInvalid;
    if (data.kind == DataSource::Kind::Synthetic && data.max_value > bounds.per_dimension) {
        return Err::ScenarioInvalid;
    }
    if (data.kind == DataSource::Kind::Csv && l != 1) return Err::ScenarioInvalid;
    // worst-case aggregate must stay inside the dlog bound
    uint64_t max_per_dim = data.kind == DataSource::Kind::Synthetic
                               ? (data.max_value > 0 ? data.max_value - 1 : 0)
                               : bounds.per_dimension - 1;
    unsigned __int128 worst = 0;
    for (uint32_t i = 0; i < n; ++i) worst += static_cast<unsigned __int128>(weight(i)) * max_per_dim;
    if (worst >= bounds.aggregate) return Err::ScenarioInvalid;
    for (const Deviation& d : deviations) {
        bool user_scoped = d.kind == Deviation::Kind::FreeRide || d.kind == Deviation::Kind::DoubleReport ||
                           d.kind == Deviation::Kind::Sybil || d.kind == Deviation::Kind::ReplayReport;
        if (user_scoped && d.user >= n) return Err::ScenarioInvalid;
        if (d.kind == Deviation::Kind::ReplayReport && d.user == 0) return Err::ScenarioInvalid;
    }
    return Res<void>();
}

std::string Scenario::to_json() const {
    json j;
    j["seed"] = seed;
    j["n"] = n;
    j["l"] = l;
    if (!weights.empty()) j["weights"] = weights;
    j["reward"] = reward;
    j["deposit"] = deposit;
    j["n_min"] = n_min;
    j["timeouts"] = {{"t1", t1}, {"t2", t2}, {"t3", t3}, {"t4", t4}};
    j["bounds"] = {{"per_dimension", bounds.per_dimension}, {"aggregate", bounds.aggregate}};
    j["description"] = description;
    if (data.kind == DataSource::Kind::Synthetic) {
        j["data"] = {{"kind", "synthetic"}, {"max_value", data.max_value}};
    } else {
        j["data"] = {{"kind", "csv"},
                     {"path", data.csv_path},
                     {"column", data.csv_column},
                     {"scale", data.csv_scale}};
    }
    json devs = json::array();
    for (const auto& d : deviations) {
        devs.push_back({{"kind", Deviation::kind_name(d.kind)}, {"user", d.user}});
    }
    if (!devs.empty()) j["deviations"] = devs;
    return j.dump(2);
}

Res<Scenario> Scenario::from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return Err::ScenarioInvalid;
    Scenario sc;
    try {
        if (j.contains("seed")) sc.seed = j["seed"].get<uint64_t>();
        if (j.contains("n")) sc.n = j["n"].get<uint32_t>();
        if (j.contains("l")) sc.l = j["l"].get<uint32_t>();
        if (j.contains("weights")) sc.weights = j["weights"].get<std::vector<uint64_t>>();
        if (j.contains("reward")) sc.reward = j["reward"].get<uint64_t>();
        if (j.contains("deposit")) sc.deposit = j["deposit"].get<uint64_t>();
        if (j.contains("n_min")) sc.n_min = j["n_min"].get<uint32_t>();
        if (j.contains("description")) sc.description = j["description"].get<std::string>();
        if (j.contains("timeouts")) {
            const auto& t = j["timeouts"];
            sc.t1 = t.at("t1").get<uint64_t>();
            sc.t2 = t.at("t2").get<uint64_t>();
            sc.t3 = t.at("t3").get<uint64_t>();
            sc.t4 = t.at("t4").get<uint64_t>();
        }
        if (j.contains("bounds")) {
            const auto& b = j["bounds"];
            if (b.contains("per_dimension")) sc.bounds.per_dimension = b["per_dimension"].get<uint64_t>();
            if (b.contains("aggregate")) sc.bounds.aggregate = b["aggregate"].get<uint64_t>();
        }
        if (j.contains("data")) {
            const auto& d = j["data"];
            std::string kind = d.value("kind", "synthetic");
            if (kind == "synthetic") {
                sc.data.kind = DataSource::Kind::Synthetic;
                if (d.contains("max_value")) sc.data.max_value = d["max_value"].get<uint64_t>();
            } else if (kind == "csv") {
                sc.data.kind = DataSource::Kind::Csv;
                sc.data.csv_path = d.at("path").get<std::string>();
                sc.data.csv_column = d.at("column").get<std::string>();
                sc.data.csv_scale = d.value("scale", 10u);
            } else {
                return Err::ScenarioInvalid;
            }
        }
        if (j.contains("deviations")) {
            for (const auto& dj : j["deviations"]) {
                Deviation d;
                auto kind = Deviation::kind_from_name(dj.at("kind").get<std::string>());
                if (!kind) return Err::ScenarioInvalid;
                d.kind = *kind;
                d.user = dj.value("user", 0u);
                sc.deviations.push_back(d);
            }
        }
    } catch (const json::exception&) {
        return Err::ScenarioInvalid;
    }
    auto ok = sc.validate();
    if (!ok.ok()) return ok.error();
    return sc;
}

Res<Scenario> Scenario::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Err::ScenarioInvalid;
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

namespace {

bool has_deviation(const Scenario& sc, Deviation::Kind kind, uint32_t user) {
    for (const auto& d : sc.deviations) {
        if (d.kind == kind && d.user == user) return true;
    }
    return false;
}

bool has_deviation(const Scenario& sc, Deviation::Kind kind) {
    for (const auto& d : sc.deviations) {
        if (d.kind == kind) return true;
    }
    return false;
}

}  // namespace

Res<World> run_service_initialization(const Scenario& sc, RunReport& report) {
    auto valid = sc.validate();
    if (!valid.ok()) return valid.error();

    World w;
    w.scenario = sc;
    Drbg root(sc.seed);

    // provider bootstraps the shared parameters
    Res<pvas::PublicParams> pp = Err::UnsupportedParameter;
    report.init.server_ms += timed([&] { pp = pvas::par_gen(256, sc.l, sc.bounds); });
    if (!pp.ok()) return pp.error();
    w.pp = *pp;

    Drbg customer_rng = root.fork("customer");
    Drbg server_rng = root.fork("server");
    report.init.customer_ms += timed([&] { w.customer = pvas::keygen_customer(w.pp, customer_rng); });
    report.init.server_ms += timed([&] { w.server = pvas::keygen_server(w.pp, server_rng); });
    double user_total = 0;
    for (uint32_t i = 0; i < sc.n; ++i) {
        Drbg urng = root.fork("user/" + std::to_string(i));
        user_total += timed([&] { w.users.push_back(pvas::keygen_user(w.pp, urng)); });
    }
    report.init.user_ms = user_total / sc.n;

    // sensing data
    if (sc.data.kind == DataSource::Kind::Synthetic) {
        Drbg drng = root.fork("data");
        for (uint32_t i = 0; i < sc.n; ++i) {
            std::vector<uint64_t> row;
            for (uint32_t j = 0; j < sc.l; ++j) row.push_back(drng.uniform(std::max<uint64_t>(sc.data.max_value, 1)));
            w.user_data.push_back(std::move(row));
        }
    } else {
        auto table = csv::read_file(sc.data.csv_path);
        if (!table.ok()) return table.error();
        auto values = csv::ingest_column(*table, sc.data.csv_column, sc.data.csv_scale,
                                         sc.bounds.per_dimension);
        if (!values.ok()) return values.error();
        if (values->size() < sc.n) return Err::ScenarioInvalid;
        for (uint32_t i = 0; i < sc.n; ++i) w.user_data.push_back({(*values)[i]});
    }

    // ledger and chain
    contract::Ledger initial;
    initial.balances[gm::g2_to_bytes(w.customer.pub)] = sc.reward;
    for (uint32_t i = 0; i < sc.n; ++i) initial.balances[gm::g2_to_bytes(w.users[i].pub)] = sc.deposit;
    initial.balances[gm::g2_to_bytes(w.server.pub)] = 0;
    w.chain.emplace(w.pp, initial);

    w.roles["customer"] = gm::g2_to_bytes(w.customer.pub);
    w.roles["server"] = gm::g2_to_bytes(w.server.pub);
    for (uint32_t i = 0; i < sc.n; ++i) w.roles["user" + std::to_string(i)] = gm::g2_to_bytes(w.users[i].pub);
    for (const auto& [label, id] : w.roles) report.initial_balances[label] = initial.balances[id];

    Drbg trng = root.fork("task");
    w.task = pvas::TaskId::random(trng);
    return w;
}

Res<void> run_task_releasing(World& w, RunReport& report) {
    const Scenario& sc = w.scenario;
    chain::CreatePayload p;
    p.task_n = w.task.n;
    p.customer_pub = gm::g2_to_bytes(w.customer.pub);
    p.description = sc.description;
    p.reward = sc.reward;
    p.t1 = sc.t1;
    p.t2 = sc.t2;
    p.t3 = sc.t3;
    p.t4 = sc.t4;
    p.n_min = sc.n_min;
    Res<void> sub = Err::ScenarioInvalid;
    report.releasing.customer_ms += timed([&] { sub = w.chain->submit_create(w.customer_id(), p); });
    if (!sub.ok()) return sub;
    w.chain->advance_to(sc.t1 - 1);
    return Res<void>();
}

namespace {

struct PendingReport {
    uint32_t user_index;
    pvas::UserReport report;
    chain::ReportPayload payload;
};

}  // namespace

Res<void> run_data_uploading(World& w, RunReport& report) {
    const Scenario& sc = w.scenario;
    auto& chain = *w.chain;

    // acceptance window: every scripted user deposits and accepts
    for (uint32_t i = 0; i < sc.n; ++i) {
        Res<void> res = Err::ScenarioInvalid;
        report.uploading.user_ms += timed([&] {
            res = chain.submit_accept(w.user_id(i), chain::AcceptPayload{w.task.n, sc.deposit});
        });
        if (!res.ok()) report.rejections.push_back({"accept/user" + std::to_string(i), err_name(res.error())});
    }
    chain.advance_to(sc.t2);  // claim fires here
    const contract::TaskRecord* t = chain.agreement().task(w.task.n);
    if (t) report.accepted_users = static_cast<uint32_t>(t->users.size());

    if (!t || t->state != contract::TaskState::CLAIMED) {
        // unfulfillable task: rewarding phase will watch the refund path
        return Res<void>();
    }

    // report generation and submission
    pvas::TaskContext tc(w.pp, w.customer.pub, w.task);
    Drbg root(sc.seed);
    std::vector<PendingReport> submitted;
    std::optional<chain::ReportPayload> last_payload;
    double user_total = 0;
    uint32_t signers = 0;
    for (uint32_t i = 0; i < sc.n; ++i) {
        if (has_deviation(sc, Deviation::Kind::FreeRide, i)) continue;

        if (has_deviation(sc, Deviation::Kind::ReplayReport, i)) {
            // copy the previous user's report wholesale, submitted as user i
            if (last_payload) {
                auto res = chain.submit_report(w.user_id(i), *last_payload);
                if (!res.ok()) {
                    report.rejections.push_back({"replay/user" + std::to_string(i), err_name(res.error())});
                }
            }
            continue;
        }

        Drbg urng = root.fork("enc/" + std::to_string(i));
        pvas::DataVector data{w.user_data[i]};
        chain::ReportPayload payload;
        pvas::UserReport pub_report;
        bool built = false;
        user_total += timed([&] {
            auto enc = pvas::sig_enc(w.pp, w.users[i], tc, data, urng);
            if (!enc.ok()) return;
            auto& [cb, sig, rk] = *enc;
            pub_report = pvas::UserReport{cb.public_part(), sig.public_part(), rk};
            auto st = sigma::make_statement(w.task, w.customer.pub, w.users[i].pub, pub_report);
            auto wit = sigma::make_witness(w.users[i], data, cb, sig);
            if (!wit.ok()) return;
            auto proof = sigma::prove(w.pp, st, *wit, urng, &tc);
            if (!proof.ok()) return;
            payload.task_n = w.task.n;
            payload.cipher = *codec::encode_cipher(pub_report.cipher);
            payload.homsig = *codec::encode_homsig(pub_report.sig);
            payload.resign = codec::encode_resign(pub_report.resign);
            payload.proof = codec::encode_proof(*proof);
            built = true;
        });
        ++signers;
        if (!built) return Err::ScenarioInvalid;

        if (has_deviation(sc, Deviation::Kind::Sybil, i)) {
            // upload under a never-accepted key first
            Drbg srng = root.fork("sybil/" + std::to_string(i));
            auto fresh = pvas::keygen_user(w.pp, srng);
            pvas::DataVector sdata{w.user_data[i]};
            auto enc2 = pvas::sig_enc(w.pp, fresh, tc, sdata, srng);
            auto& [cb2, sig2, rk2] = *enc2;
            pvas::UserReport rep2{cb2.public_part(), sig2.public_part(), rk2};
            auto st2 = sigma::make_statement(w.task, w.customer.pub, fresh.pub, rep2);
            auto wit2 = sigma::make_witness(fresh, sdata, cb2, sig2);
            auto proof2 = sigma::prove(w.pp, st2, *wit2, srng, &tc);
            chain::ReportPayload p2;
            p2.task_n = w.task.n;
            p2.cipher = *codec::encode_cipher(rep2.cipher);
            p2.homsig = *codec::encode_homsig(rep2.sig);
            p2.resign = codec::encode_resign(rep2.resign);
            p2.proof = codec::encode_proof(*proof2);
            auto res2 = chain.submit_report(gm::g2_to_bytes(fresh.pub), p2);
            if (!res2.ok()) {
                report.rejections.push_back({"sybil/user" + std::to_string(i), err_name(res2.error())});
            }
        }

        Res<void> res = Err::ScenarioInvalid;
        double val_ms = timed([&] { res = chain.submit_report(w.user_id(i), payload); });
        report.uploading.server_ms += val_ms;
        if (res.ok()) {
            submitted.push_back(PendingReport{i, pub_report, payload});
            last_payload = payload;
        } else {
            report.rejections.push_back({"report/user" + std::to_string(i), err_name(res.error())});
        }

        if (has_deviation(sc, Deviation::Kind::DoubleReport, i)) {
            auto res2 = chain.submit_report(w.user_id(i), payload);
            if (!res2.ok()) {
                report.rejections.push_back({"double/user" + std::to_string(i), err_name(res2.error())});
            }
        }
    }
    if (signers) report.uploading.user_ms += user_total / signers;
    chain.advance_to(sc.t3 - 1);

    t = chain.agreement().task(w.task.n);
    if (t) report.reported_users = static_cast<uint32_t>(t->reported_users().size());

    // server-side aggregation over the recorded reports
    if (!submitted.empty()) {
        std::vector<pvas::UserReport> inputs;
        pvas::WeightVector weights;
        for (const auto& pr : submitted) {
            inputs.push_back(pr.report);
            weights.w.push_back(sc.weight(pr.user_index));
        }
        w.agg_weights = weights.w;
        Res<pvas::AggregateBundle> agg = Err::EmptyInput;
        report.server_aggregate_ms = timed([&] { agg = pvas::aggregate(w.pp, w.server, inputs, weights); });
        report.uploading.server_ms += report.server_aggregate_ms;
        if (!agg.ok()) return agg.error();
        // scripted server misbehavior
        if (has_deviation(sc, Deviation::Kind::ServerTamperSigma)) {
            agg->sigma = agg->sigma * gm::pairing(w.pp.ctx.g, w.pp.ctx.h);
        }
        if (has_deviation(sc, Deviation::Kind::ServerTamperE)) agg->e = agg->e.add(w.pp.ctx.h);
        if (has_deviation(sc, Deviation::Kind::ServerTamperC)) agg->c[0] = agg->c[0].add(w.pp.ctx.h_vec[0]);
        if (has_deviation(sc, Deviation::Kind::ServerTamperD)) agg->d[0] = agg->d[0].add(w.pp.ctx.h);
        w.aggregate = *agg;
        for (const auto& pr : submitted) w.submitted_indices.push_back(pr.user_index);
    }
    return Res<void>();
}

Res<void> run_user_rewarding(World& w, RunReport& report) {
    const Scenario& sc = w.scenario;
    auto& chain = *w.chain;
    chain.advance_to(sc.t3);  // reward or penalty (or refund) fires

    if (w.aggregate && !has_deviation(sc, Deviation::Kind::CustomerAbandon)) {
        report.customer_decrypt_verify_ms = timed([&] {
            auto dec = pvas::decrypt(w.pp, w.customer, *w.aggregate);
            report.decrypt_ok = dec.ok();
            if (dec.ok()) {
                report.result = *dec;
                report.verify_accepted =
                    pvas::verify(w.pp, w.customer, w.server.pub, w.task, *w.aggregate, *dec);
            } else {
                report.verify_accepted = false;
            }
        });
        report.rewarding.customer_ms += report.customer_decrypt_verify_ms;
    }

    chain.advance_to(sc.t4 + 1);  // timer closes aborted tasks

    const contract::TaskRecord* t = chain.agreement().task(w.task.n);
    if (t) report.final_state = t->state;
    for (const auto& [label, id] : w.roles) {
        report.final_balances[label] = chain.agreement().ledger().balance(id);
    }
    report.conservation_ok = true;  // verified by the caller via totals
    auto storage = chain.storage_report(w.task.n);
    if (storage.ok()) report.storage = *storage;
    return Res<void>();
}

RunReport run_scenario(const Scenario& sc) {
    RunReport report;
    auto world = run_service_initialization(sc, report);
    if (!world.ok()) {
        report.failure = err_name(world.error());
        return report;
    }
    World& w = *world;
    contract::Coins total_before = w.chain->agreement().ledger().total();

    auto rel = run_task_releasing(w, report);
    if (!rel.ok()) {
        report.failure = std::string("releasing: ") + err_name(rel.error());
        return report;
    }
    auto upl = run_data_uploading(w, report);
    if (!upl.ok()) {
        report.failure = std::string("uploading: ") + err_name(upl.error());
        return report;
    }
    auto rew = run_user_rewarding(w, report);
    if (!rew.ok()) {
        report.failure = std::string("rewarding: ") + err_name(rew.error());
        return report;
    }

    contract::Coins total_after = w.chain->agreement().ledger().total();
    report.conservation_ok = total_before == total_after;
    report.checks.push_back({"conservation", report.conservation_ok});
    bool closed = report.final_state == contract::TaskState::FINISHED ||
                  report.final_state == contract::TaskState::CLOSED;
    report.checks.push_back({"task closed", closed});

    report.chain_log = w.chain->export_log();
    report.final_digest = w.chain->state_digest();
    report.scenario_ok = true;
    report.world = std::make_shared<World>(std::move(w));
    return report;
}

std::vector<AttackCase> attack_suite(uint64_t seed) {
    std::vector<AttackCase> cases;
    auto base = [&](uint64_t salt) {
        Scenario sc;
        sc.seed = seed + salt;
        sc.n = 4;
        sc.l = 1;
        sc.reward = 1000;
        sc.deposit = 60;
        sc.data.max_value = 500;
        return sc;
    };
    auto share_of = [](contract::Coins reward, const std::vector<contract::Identity>& ids,
                       const contract::Identity& who) {
        auto split = contract::CsFairCrowd::equal_split(reward, ids);
        return split[who];
    };

    {
        AttackCase c{"honest-baseline", base(0), nullptr};
        c.judge = [share_of](const World& w, RunReport& r) {
            r.checks.push_back({"zero rejections", r.rejections.empty()});
            r.checks.push_back({"verify accepts", r.verify_accepted});
            r.checks.push_back({"state FINISHED", r.final_state == contract::TaskState::FINISHED});
            std::vector<contract::Identity> ru;
            for (uint32_t i = 0; i < w.scenario.n; ++i) ru.push_back(w.user_id(i));
            std::sort(ru.begin(), ru.end());
            bool shares_ok = true;
            contract::Coins total = 0;
            for (uint32_t i = 0; i < w.scenario.n; ++i) {
                contract::Coins share = share_of(w.scenario.reward, ru, w.user_id(i));
                total += share;
                shares_ok = shares_ok && r.final_balances.at("user" + std::to_string(i)) ==
                                             w.scenario.deposit + share;
            }
            r.checks.push_back({"each user holds deposit + share", shares_ok});
            r.checks.push_back({"shares sum to reward", total == w.scenario.reward});
            r.checks.push_back({"customer paid exactly the reward", r.final_balances.at("customer") == 0});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"payment-escaping", base(1), nullptr};
        c.scenario.deviations.push_back({Deviation::Kind::CustomerAbandon, 0});
        c.judge = [](const World& w, RunReport& r) {
            // the customer walked away after create; escrow still pays
            r.checks.push_back({"state FINISHED", r.final_state == contract::TaskState::FINISHED});
            r.checks.push_back({"customer cannot reclaim the reward", r.final_balances.at("customer") == 0});
            contract::Coins users_total = 0;
            for (uint32_t i = 0; i < w.scenario.n; ++i) {
                users_total += r.final_balances.at("user" + std::to_string(i));
            }
            r.checks.push_back({"reward fully distributed to reporters",
                                users_total == w.scenario.reward + 4ull * w.scenario.deposit});
            r.checks.push_back({"escrow drained",
                                w.chain->agreement().escrow_balance() == 0});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"payment-reduction", base(2), nullptr};
        c.judge = [](const World& w, RunReport& r) {
            r.checks.push_back({"no operation credits the server", r.final_balances.at("server") == 0});
            r.checks.push_back({"state FINISHED", r.final_state == contract::TaskState::FINISHED});
            contract::Coins users_total = 0;
            for (uint32_t i = 0; i < w.scenario.n; ++i) {
                users_total += r.final_balances.at("user" + std::to_string(i));
            }
            r.checks.push_back({"full reward reached the users",
                                users_total == w.scenario.reward + 4ull * w.scenario.deposit});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"free-riding", base(3), nullptr};
        c.scenario.deviations.push_back({Deviation::Kind::FreeRide, 1});
        c.judge = [share_of](const World& w, RunReport& r) {
            r.checks.push_back({"penalty path (task CLOSED)", r.final_state == contract::TaskState::CLOSED});
            r.checks.push_back({"free rider forfeits the deposit",
                                r.final_balances.at("user1") == 0});
            std::vector<contract::Identity> ru;
            for (uint32_t i = 0; i < w.scenario.n; ++i) {
                if (i != 1) ru.push_back(w.user_id(i));
            }
            std::sort(ru.begin(), ru.end());
            bool forfeits_ok = true;
            contract::Coins redistributed = 0;
            for (uint32_t i = 0; i < w.scenario.n; ++i) {
                if (i == 1) continue;
                contract::Coins gain = share_of(w.scenario.deposit, ru, w.user_id(i));
                redistributed += gain;
                forfeits_ok = forfeits_ok && r.final_balances.at("user" + std::to_string(i)) ==
                                                 w.scenario.deposit + gain;
            }
            r.checks.push_back({"forfeited deposit redistributed to reporters", forfeits_ok});
            r.checks.push_back({"redistribution total equals the forfeit",
                                redistributed == w.scenario.deposit});
            r.checks.push_back({"timer refunds the reward to the customer",
                                r.final_balances.at("customer") == w.scenario.reward});
            r.checks.push_back({"free rider got no share", r.final_balances.at("user1") == 0});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"double-reporting", base(4), nullptr};
        c.scenario.deviations.push_back({Deviation::Kind::DoubleReport, 2});
        c.judge = [share_of](const World& w, RunReport& r) {
            bool rejected = false;
            for (const auto& [label, reason] : r.rejections) {
                if (label == "double/user2" && reason == "AlreadyUploaded") rejected = true;
            }
            r.checks.push_back({"second report rejected (AlreadyUploaded)", rejected});
            r.checks.push_back({"state FINISHED", r.final_state == contract::TaskState::FINISHED});
            std::vector<contract::Identity> ru;
            for (uint32_t i = 0; i < w.scenario.n; ++i) ru.push_back(w.user_id(i));
            std::sort(ru.begin(), ru.end());
            contract::Coins share = share_of(w.scenario.reward, ru, w.user_id(2));
            r.checks.push_back({"double reporter rewarded exactly once",
                                r.final_balances.at("user2") == w.scenario.deposit + share});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"sybil", base(5), nullptr};
        c.scenario.deviations.push_back({Deviation::Kind::Sybil, 0});
        c.judge = [share_of](const World& w, RunReport& r) {
            bool rejected = false;
            for (const auto& [label, reason] : r.rejections) {
                if (label == "sybil/user0" && reason == "NotAccepted") rejected = true;
            }
            r.checks.push_back({"foreign-key upload rejected (NotAccepted)", rejected});
            r.checks.push_back({"state FINISHED", r.final_state == contract::TaskState::FINISHED});
            std::vector<contract::Identity> ru;
            for (uint32_t i = 0; i < w.scenario.n; ++i) ru.push_back(w.user_id(i));
            std::sort(ru.begin(), ru.end());
            contract::Coins share = share_of(w.scenario.reward, ru, w.user_id(0));
            r.checks.push_back({"sybil user rewarded exactly once",
                                r.final_balances.at("user0") == w.scenario.deposit + share});
        };
        cases.push_back(std::move(c));
    }
    {
        AttackCase c{"server-tamper", base(6), nullptr};
        c.scenario.deviations.push_back({Deviation::Kind::ServerTamperSigma, 0});
        c.judge = [](const World& w, RunReport& r) {
            (void)w;
            r.checks.push_back({"customer verification rejects the tampered aggregate",
                                !r.verify_accepted});
            r.checks.push_back({"decrypt still recovers the data (ciphertexts untouched)", r.decrypt_ok});
        };
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace faircrowd::actors
