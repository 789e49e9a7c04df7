#pragma once

#include <vector>

#include "faircrowd/actors.hpp"

namespace faircrowd::bench {

struct LinFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchPoint {
    uint32_t n = 0;
    actors::PhaseTimes init, releasing, uploading, rewarding;
    double server_aggregate_ms = 0;
    double customer_decrypt_verify_ms = 0;
};

struct BenchResult {
    std::vector<BenchPoint> points;
    LinFit server_fit;          // aggregation time vs n
    double customer_ratio = 0;  // max/min of decrypt+verify across n
};

// honest scenarios at each n, `reps` repetitions, medians reported
BenchResult run_bench(const std::vector<uint32_t>& ns, uint32_t l, uint64_t seed, int reps);

}  // namespace faircrowd::bench
