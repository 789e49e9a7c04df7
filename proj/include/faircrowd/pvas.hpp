#pragma once

#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "faircrowd/pairing.hpp"
#include "faircrowd/result.hpp"
#include "faircrowd/rng.hpp"

// The six-operation private and verifiable aggregate statistics scheme:
// vector ElGamal over G2 for the data, BLS-style homomorphic signatures with
// proxy re-signing for designated-verifier correctness proofs.
namespace faircrowd::pvas {

using gm::Fr;
using gm::G1;
using gm::G2;
using gm::GT;

struct PlaintextBounds {
    uint64_t per_dimension = 1ULL << 20;  // each m_ij strictly below
    uint64_t aggregate = 1ULL << 32;      // each sum_i m_ij w_i strictly below
};

struct PublicParams {
    gm::PairingContext ctx;
    uint32_t lambda = 256;
    PlaintextBounds bounds;

    uint32_t l() const { return ctx.l; }
};

Res<PublicParams> par_gen(uint32_t lambda, uint32_t l, PlaintextBounds bounds = {});

struct CustomerKeyPair {
    Fr secret;  // a
    G2 pub;     // A = h^a
};
struct UserKeyPair {
    Fr secret;  // u_i
    G2 pub;     // U_i = h^(u_i)
};
struct ServerKeyPair {
    Fr secret;  // v
    G2 pub;     // Lambda = h^v
};

CustomerKeyPair keygen_customer(const PublicParams& pp, Drbg& rng);
UserKeyPair keygen_user(const PublicParams& pp, Drbg& rng);
ServerKeyPair keygen_server(const PublicParams& pp, Drbg& rng);

struct DataVector {
    std::vector<uint64_t> m;
};

struct TaskId {
    Bytes n;

    static TaskId random(Drbg& rng) {
        TaskId t;
        t.n.resize(16);
        rng.fill(t.n);
        return t;
    }
    bool operator==(const TaskId& o) const { return n == o.n; }
};

// Per-user ciphertext. The randomness is the encryption witness; it exists
// only in the producing user's copy and is never serialized (the codec
// refuses it).
struct CipherBundle {
    std::vector<G2> c;
    std::vector<G2> d;
    std::optional<std::vector<Fr>> randomness;

    bool has_witness() const { return randomness.has_value(); }
    CipherBundle public_part() const { return {c, d, std::nullopt}; }
};

struct HomSig {
    G1 sigma;                // W^(u_i)
    G2 e;                    // h^tau
    G1 w_commit;             // W = H(N||A)^tau * prod g_j^(m_ij)
    std::optional<Fr> tau;   // witness, user-local only

    bool has_witness() const { return tau.has_value(); }
    HomSig public_part() const { return {sigma, e, w_commit, std::nullopt}; }
};

struct ResignKey {
    G2 rk;  // A^(u_i^-1)
};

// What leaves a user: public parts only.
struct UserReport {
    CipherBundle cipher;
    HomSig sig;
    ResignKey resign;
};

// Integer weights of the linear function f. The aggregate bound contract
// (sum of w_i * per-dimension bound over all users below the dlog bound)
// keeps decryption feasible, so weights are small integers by construction.
struct WeightVector {
    std::vector<uint64_t> w;

    static WeightVector uniform(size_t n) { return {std::vector<uint64_t>(n, 1)}; }
};

struct AggregateBundle {
    std::vector<G2> c;
    std::vector<G2> d;
    GT sigma;
    G2 e;
};

// Precomputation shared by every signer of one (customer, task) pair.
struct TaskContext {
    G2 customer_pub;
    gm::FixedBase<G2> a_tbl;
    G1 hna;  // H(N || A)

    TaskContext(const PublicParams& pp, const G2& customer_pub, const TaskId& task);
};

// H(N || A) transcript bytes (shared with the sigma module's statement)
Bytes task_binding_bytes(const TaskId& task, const G2& customer_pub);

Res<std::tuple<CipherBundle, HomSig, ResignKey>> sig_enc(const PublicParams& pp, const UserKeyPair& user,
                                                         const TaskContext& tc, const DataVector& data,
                                                         Drbg& rng);
Res<std::tuple<CipherBundle, HomSig, ResignKey>> sig_enc(const PublicParams& pp, const UserKeyPair& user,
                                                         const G2& customer_pub, const TaskId& task,
                                                         const DataVector& data, Drbg& rng);

Res<AggregateBundle> aggregate(const PublicParams& pp, const ServerKeyPair& server,
                               std::span<const UserReport> inputs, const WeightVector& weights);

// Recovers sum_i m_ij w_i per dimension. On NotInRange, *failed_dim (when
// given) names the first dimension whose bounded dlog failed.
Res<std::vector<uint64_t>> decrypt(const PublicParams& pp, const CustomerKeyPair& customer,
                                   const AggregateBundle& agg, uint32_t* failed_dim = nullptr);

// Designated-verifier check of a claimed statistical result. Reject is a
// value, not an error.
bool verify(const PublicParams& pp, const CustomerKeyPair& customer, const G2& server_pub, const TaskId& task,
            const AggregateBundle& agg, std::span<const uint64_t> result);

}  // namespace faircrowd::pvas
