#pragma once

#include <map>

#include "faircrowd/pvas.hpp"

namespace faircrowd::testing {

// params are deterministic per l; cache across test cases
inline const pvas::PublicParams& params_for(uint32_t l,
                                            pvas::PlaintextBounds bounds = {}) {
    static std::map<std::tuple<uint32_t, uint64_t, uint64_t>, pvas::PublicParams> cache;
    auto key = std::make_tuple(l, bounds.per_dimension, bounds.aggregate);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto pp = pvas::par_gen(256, l, bounds);
        it = cache.emplace(key, *pp).first;
    }
    return it->second;
}

// plaintext oracle: the aggregate each dimension must decrypt to
inline std::vector<uint64_t> plaintext_aggregate(const std::vector<std::vector<uint64_t>>& data,
                                                 const std::vector<uint64_t>& weights) {
    std::vector<uint64_t> out(data.empty() ? 0 : data[0].size(), 0);
    for (size_t i = 0; i < data.size(); ++i) {
        for (size_t j = 0; j < data[i].size(); ++j) out[j] += data[i][j] * weights[i];
    }
    return out;
}

}  // namespace faircrowd::testing
