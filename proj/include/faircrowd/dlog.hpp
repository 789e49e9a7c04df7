#pragma once

#include <cstdint>
#include <optional>

#include "faircrowd/pairing.hpp"

namespace faircrowd::gm {

// Outcome of a bounded discrete-log search. `value` is empty when no exponent
// x with base^x = target, 0 <= x <= bound was found (NotInRange); `steps`
// counts group operations spent, which the benchmarks use to check the
// sqrt-of-bound growth law.
struct DlogResult {
    std::optional<uint64_t> value;
    uint64_t steps = 0;

    bool ok() const { return value.has_value(); }
};

// Pollard's lambda (kangaroo) over the interval [0, bound]: tame kangaroo from
// base^bound, wild from target, power-of-two jump table with mean jump about
// sqrt(bound)/2, distinguished-point traps, and a step budget of
// 20*sqrt(bound) before reporting NotInRange.
DlogResult dlog_bounded(const G2& base, const G2& target, uint64_t bound);

// Deterministic baby-step giant-step with ~sqrt(bound) table space; the
// independent oracle dlog_bounded is tested against.
DlogResult dlog_bsgs(const G2& base, const G2& target, uint64_t bound);

}  // namespace faircrowd::gm
