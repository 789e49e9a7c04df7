#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "faircrowd/chain.hpp"

// Protocol roles and scenario orchestration: the four protocol phases
// (service initialization, task releasing, data uploading, user rewarding)
// over the simulated chain, plus scripted adversaries for the attack suite.
namespace faircrowd::actors {

struct Deviation {
    enum class Kind {
        FreeRide,           // accept, never upload
        DoubleReport,       // submit the report twice
        Sybil,              // upload under a fresh key not used at accept
        ReplayReport,       // resubmit another user's report as one's own
        ServerTamperSigma,  // server perturbs the aggregate signature
        ServerTamperE,
        ServerTamperC,
        ServerTamperD,
        CustomerAbandon,    // customer never decrypts/verifies
    };
    Kind kind = Kind::FreeRide;
    uint32_t user = 0;

    static const char* kind_name(Kind k);
    static std::optional<Kind> kind_from_name(std::string_view name);
};

struct DataSource {
    enum class Kind { Synthetic, Csv } kind = Kind::Synthetic;
    uint64_t max_value = 1000;  // synthetic: uniform in [0, max_value)
    std::string csv_path;
    std::string csv_column;
    uint32_t csv_scale = 10;
};

struct Scenario {
    uint64_t seed = 1;
    uint32_t n = 4;
    uint32_t l = 1;
    std::vector<uint64_t> weights;  // empty = all ones
    DataSource data;
    contract::Coins reward = 1000;
    contract::Coins deposit = 50;
    uint32_t n_min = 1;
    uint64_t t1 = 2, t2 = 4, t3 = 7, t4 = 9;
    pvas::PlaintextBounds bounds;
    std::string description = "sensing task";
    std::vector<Deviation> deviations;

    Res<void> validate() const;
    uint64_t weight(size_t i) const { return weights.empty() ? 1 : weights[i]; }

    std::string to_json() const;
    static Res<Scenario> from_json(const std::string& text);
    static Res<Scenario> from_json_file(const std::string& path);
};

struct PhaseTimes {
    double user_ms = 0;  // mean per user
    double server_ms = 0;
    double customer_ms = 0;
};

struct World;

struct RunReport {
    bool scenario_ok = false;
    std::string failure;  // populated when a phase could not run at all

    PhaseTimes init, releasing, uploading, rewarding;
    double server_aggregate_ms = 0;  // isolated aggregation cost (scalability metric)
    double customer_decrypt_verify_ms = 0;

    uint32_t accepted_users = 0;  // |AU|
    uint32_t reported_users = 0;  // |RU|
    std::vector<std::pair<std::string, std::string>> rejections;  // label -> reason
    bool decrypt_ok = false;
    bool verify_accepted = false;
    std::vector<uint64_t> result;

    contract::TaskState final_state = contract::TaskState::INIT;
    std::map<std::string, contract::Coins> initial_balances;  // by role label
    std::map<std::string, contract::Coins> final_balances;
    bool conservation_ok = false;
    chain::StorageReport storage;

    std::vector<std::pair<std::string, bool>> checks;  // asserted properties
    std::string chain_log;
    Bytes final_digest;
    std::shared_ptr<World> world;  // post-run world, for attack judges and tests

    bool all_checks_passed() const {
        for (const auto& [name, ok] : checks) {
            if (!ok) return false;
        }
        return scenario_ok;
    }
};

// The world after service initialization: everything every role holds.
struct World {
    Scenario scenario;
    pvas::PublicParams pp;
    pvas::CustomerKeyPair customer;
    pvas::ServerKeyPair server;
    std::vector<pvas::UserKeyPair> users;
    pvas::TaskId task;
    std::optional<chain::SimChain> chain;
    std::vector<std::vector<uint64_t>> user_data;
    std::map<std::string, contract::Identity> roles;  // label -> identity

    // filled in by the uploading phase
    std::optional<pvas::AggregateBundle> aggregate;
    std::vector<uint64_t> agg_weights;
    std::vector<uint32_t> submitted_indices;  // users whose reports were accepted, in order

    contract::Identity customer_id() const { return gm::g2_to_bytes(customer.pub); }
    contract::Identity user_id(size_t i) const { return gm::g2_to_bytes(users[i].pub); }
    contract::Identity server_id() const { return gm::g2_to_bytes(server.pub); }
};

// Four protocol phases, runnable separately (each fills in timings) or via
// run_scenario.
Res<World> run_service_initialization(const Scenario& sc, RunReport& report);
Res<void> run_task_releasing(World& w, RunReport& report);
Res<void> run_data_uploading(World& w, RunReport& report);
Res<void> run_user_rewarding(World& w, RunReport& report);

RunReport run_scenario(const Scenario& sc);

// named attack scenarios with their pass conditions evaluated into checks
struct AttackCase {
    std::string name;
    Scenario scenario;
    std::function<void(const World&, RunReport&)> judge;
};
std::vector<AttackCase> attack_suite(uint64_t seed);

}  // namespace faircrowd::actors
