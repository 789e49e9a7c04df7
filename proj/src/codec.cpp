#include "faircrowd/codec.hpp"

namespace faircrowd::codec {

namespace {

void header(ByteWriter& w, Tag tag) {
    w.u8(static_cast<uint8_t>(tag));
    w.u8(FORMAT_VERSION);
}

// checks tag and version; MalformedEncoding on wrong tag, VersionMismatch on
// wrong version
Res<ByteReader> open(std::span<const uint8_t> b, Tag tag) {
    ByteReader r(b);
    auto t = r.u8();
    auto v = r.u8();
    if (!t || !v || *t != static_cast<uint8_t>(tag)) return Err::MalformedEncoding;
    if (*v != FORMAT_VERSION) return Err::VersionMismatch;
    return r;
}

void put_g1(ByteWriter& w, const gm::G1& p) { w.raw(gm::g1_to_bytes(p)); }
void put_g2(ByteWriter& w, const gm::G2& p) { w.raw(gm::g2_to_bytes(p)); }
void put_fr(ByteWriter& w, const gm::Fr& s) { w.raw(s.bytes()); }

std::optional<gm::G1> get_g1(ByteReader& r) {
    auto raw = r.raw(gm::G1_BYTES);
    if (!raw) return std::nullopt;
    return gm::g1_from_bytes(*raw);
}
std::optional<gm::G2> get_g2(ByteReader& r) {
    auto raw = r.raw(gm::G2_BYTES);
    if (!raw) return std::nullopt;
    return gm::g2_from_bytes(*raw);
}
std::optional<gm::GT> get_gt(ByteReader& r) {
    auto raw = r.raw(gm::GT_BYTES);
    if (!raw) return std::nullopt;
    return gm::gt_from_bytes(*raw);
}
std::optional<gm::Fr> get_fr(ByteReader& r) {
    auto raw = r.raw(gm::FR_BYTES);
    if (!raw) return std::nullopt;
    return gm::Fr::from_bytes(*raw);
}

constexpr uint32_t MAX_DIMENSION = 4096;

}  // namespace

Bytes encode_params(const pvas::PublicParams& pp) {
    ByteWriter w;
    header(w, Tag::Params);
    w.u32(pp.lambda);
    w.u32(pp.l());
    w.u64(pp.bounds.per_dimension);
    w.u64(pp.bounds.aggregate);
    return w.take();
}

Res<pvas::PublicParams> decode_params(std::span<const uint8_t> b) {
    auto r = open(b, Tag::Params);
    if (!r) return r.error();
    auto lambda = r->u32();
    auto l = r->u32();
    auto per_dim = r->u64();
    auto agg = r->u64();
    if (!lambda || !l || !per_dim || !agg || !r->done()) return Err::MalformedEncoding;
    if (*l < 1 || *l > MAX_DIMENSION) return Err::MalformedEncoding;
    auto pp = pvas::par_gen(*lambda, *l, pvas::PlaintextBounds{*per_dim, *agg});
    if (!pp) return pp.error();
    return *pp;
}

Res<Bytes> encode_cipher(const pvas::CipherBundle& cb) {
    if (cb.has_witness()) return Err::SecretFieldPresent;
    if (cb.c.size() != cb.d.size()) return Err::DimensionMismatch;
    ByteWriter w;
    header(w, Tag::Cipher);
    w.u32(static_cast<uint32_t>(cb.c.size()));
    for (const auto& x : cb.c) put_g2(w, x);
    for (const auto& x : cb.d) put_g2(w, x);
    return w.take();
}

Res<pvas::CipherBundle> decode_cipher(std::span<const uint8_t> b) {
    auto r = open(b, Tag::Cipher);
    if (!r) return r.error();
    auto l = r->u32();
    if (!l || *l < 1 || *l > MAX_DIMENSION) return Err::MalformedEncoding;
    pvas::CipherBundle cb;
    cb.c.reserve(*l);
    cb.d.reserve(*l);
    for (uint32_t j = 0; j < *l; ++j) {
        auto x = get_g2(*r);
        if (!x) return Err::MalformedEncoding;
        cb.c.push_back(*x);
    }
    for (uint32_t j = 0; j < *l; ++j) {
        auto x = get_g2(*r);
        if (!x) return Err::MalformedEncoding;
        cb.d.push_back(*x);
    }
    if (!r->done()) return Err::MalformedEncoding;
    return cb;
}

Res<Bytes> encode_homsig(const pvas::HomSig& s) {
    if (s.has_witness()) return Err::SecretFieldPresent;
    ByteWriter w;
    header(w, Tag::HomSig);
    put_g1(w, s.sigma);
    put_g2(w, s.e);
    put_g1(w, s.w_commit);
    return w.take();
}

Res<pvas::HomSig> decode_homsig(std::span<const uint8_t> b) {
    auto r = open(b, Tag::HomSig);
    if (!r) return r.error();
    auto sig = get_g1(*r);
    auto e = get_g2(*r);
    auto wc = get_g1(*r);
    if (!sig || !e || !wc || !r->done()) return Err::MalformedEncoding;
    return pvas::HomSig{*sig, *e, *wc, std::nullopt};
}

Bytes encode_resign(const pvas::ResignKey& rk) {
    ByteWriter w;
    header(w, Tag::Resign);
    put_g2(w, rk.rk);
    return w.take();
}

Res<pvas::ResignKey> decode_resign(std::span<const uint8_t> b) {
    auto r = open(b, Tag::Resign);
    if (!r) return r.error();
    auto rk = get_g2(*r);
    if (!rk || !r->done()) return Err::MalformedEncoding;
    return pvas::ResignKey{*rk};
}

Bytes encode_aggregate(const pvas::AggregateBundle& agg) {
    ByteWriter w;
    header(w, Tag::Aggregate);
    w.u32(static_cast<uint32_t>(agg.c.size()));
    for (const auto& x : agg.c) put_g2(w, x);
    for (const auto& x : agg.d) put_g2(w, x);
    w.raw(gm::gt_to_bytes(agg.sigma));
    put_g2(w, agg.e);
    return w.take();
}

Res<pvas::AggregateBundle> decode_aggregate(std::span<const uint8_t> b) {
    auto r = open(b, Tag::Aggregate);
    if (!r) return r.error();
    auto l = r->u32();
    if (!l || *l < 1 || *l > MAX_DIMENSION) return Err::MalformedEncoding;
    pvas::AggregateBundle agg;
    for (uint32_t j = 0; j < *l; ++j) {
        auto x = get_g2(*r);
        if (!x) return Err::MalformedEncoding;
        agg.c.push_back(*x);
    }
    for (uint32_t j = 0; j < *l; ++j) {
        auto x = get_g2(*r);
        if (!x) return Err::MalformedEncoding;
        agg.d.push_back(*x);
    }
    auto sig = get_gt(*r);
    auto e = get_g2(*r);
    if (!sig || !e || !r->done()) return Err::MalformedEncoding;
    agg.sigma = *sig;
    agg.e = *e;
    return agg;
}

Bytes encode_proof(const sigma::ConsistencyProof& proof) {
    ByteWriter w;
    header(w, Tag::Proof);
    w.u32(static_cast<uint32_t>(proof.t_c.size()));
    for (const auto& x : proof.t_c) put_g2(w, x);
    for (const auto& x : proof.t_d) put_g2(w, x);
    put_g1(w, proof.t_w);
    put_g2(w, proof.t_e);
    put_g2(w, proof.t_rk);
    put_g2(w, proof.t_u);
    put_fr(w, proof.challenge);
    for (const auto& s : proof.s_m) put_fr(w, s);
    for (const auto& s : proof.s_r) put_fr(w, s);
    put_fr(w, proof.s_tau);
    put_fr(w, proof.s_w);
    return w.take();
}

Res<sigma::ConsistencyProof> decode_proof(std::span<const uint8_t> b) {
    auto r = open(b, Tag::Proof);
    if (!r) return r.error();
    auto l = r->u32();
    if (!l || *l < 1 || *l > MAX_DIMENSION) return Err::MalformedEncoding;
    sigma::ConsistencyProof p;
    auto get_g2_vec = [&](std::vector<gm::G2>& out) {
        for (uint32_t j = 0; j < *l; ++j) {
            auto x = get_g2(*r);
            if (!x) return false;
            out.push_back(*x);
        }
        return true;
    };
    if (!get_g2_vec(p.t_c) || !get_g2_vec(p.t_d)) return Err::MalformedEncoding;
    auto tw = get_g1(*r);
    auto te = get_g2(*r);
    auto trk = get_g2(*r);
    auto tu = get_g2(*r);
    auto ch = get_fr(*r);
    if (!tw || !te || !trk || !tu || !ch) return Err::MalformedEncoding;
    p.t_w = *tw;
    p.t_e = *te;
    p.t_rk = *trk;
    p.t_u = *tu;
    p.challenge = *ch;
    for (uint32_t j = 0; j < *l; ++j) {
        auto s = get_fr(*r);
        if (!s) return Err::MalformedEncoding;
        p.s_m.push_back(*s);
    }
    for (uint32_t j = 0; j < *l; ++j) {
        auto s = get_fr(*r);
        if (!s) return Err::MalformedEncoding;
        p.s_r.push_back(*s);
    }
    auto stau = get_fr(*r);
    auto sw = get_fr(*r);
    if (!stau || !sw || !r->done()) return Err::MalformedEncoding;
    p.s_tau = *stau;
    p.s_w = *sw;
    return p;
}

}  // namespace faircrowd::codec
