#pragma once

#include <span>
#include <vector>

#include "faircrowd/pvas.hpp"

// Non-interactive AND-composed Schnorr proof that one user's ciphertext,
// signature commitment, and re-sign key are mutually consistent:
//   (R1) c_j = h_j^(m_j) A^(r_j)        for each dimension j
//   (R2) d_j = h^(r_j)
//   (R3) W   = H(N||A)^tau prod g_j^(m_j)
//   (R4) e   = h^tau
//   (R5) rk  = A^w                       with w = u^-1
//   (R6) h   = U^w
// One shared challenge, one response per witness component; the shared
// responses for m_j are what ties the encrypted and signed messages together.
// sigma = W^u is enforced by the verifier-side pairing check
// e(sigma, h) = e(W, U).
namespace faircrowd::sigma {

using gm::Fr;
using gm::G1;
using gm::G2;

struct PkStatement {
    Bytes task_n;
    G2 customer_pub;  // A
    G2 user_pub;      // U_i
    std::vector<G2> c;
    std::vector<G2> d;
    G1 w_commit;
    G2 e;
    G1 sig;
    G2 rk;
};

PkStatement make_statement(const pvas::TaskId& task, const G2& customer_pub, const G2& user_pub,
                           const pvas::UserReport& report);

struct PkWitness {
    std::vector<uint64_t> m;
    std::vector<Fr> r;
    Fr tau;
    Fr w;  // u^-1
};

// Assembles the witness from a user's local (witness-bearing) outputs.
Res<PkWitness> make_witness(const pvas::UserKeyPair& user, const pvas::DataVector& data,
                            const pvas::CipherBundle& cipher, const pvas::HomSig& sig);

struct ConsistencyProof {
    std::vector<G2> t_c;  // R1 commitments
    std::vector<G2> t_d;  // R2
    G1 t_w;               // R3
    G2 t_e;               // R4
    G2 t_rk;              // R5
    G2 t_u;               // R6
    Fr challenge;
    std::vector<Fr> s_m;
    std::vector<Fr> s_r;
    Fr s_tau;
    Fr s_w;
};

Res<ConsistencyProof> prove(const pvas::PublicParams& pp, const PkStatement& st, const PkWitness& wit,
                            Drbg& rng, const pvas::TaskContext* tc = nullptr);

bool verify_pk(const pvas::PublicParams& pp, const PkStatement& st, const ConsistencyProof& proof);

// Fiat-Shamir challenge over the canonical transcript; exposed for the
// challenge-binding tests.
Fr transcript_challenge(const pvas::PublicParams& pp, const PkStatement& st, const ConsistencyProof& proof);

// encoded proof size in bytes for dimension l (codec format, incl. header)
size_t proof_encoded_size(uint32_t l);

}  // namespace faircrowd::sigma
