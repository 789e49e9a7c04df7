#include "faircrowd/bench.hpp"

#include <algorithm>
#include <cmath>

namespace faircrowd::bench {

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinFit fit;
    size_t n = xs.size();
    if (n < 2 || ys.size() != n) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, mean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double pred = fit.slope * xs[i] + fit.intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

}  // namespace

BenchResult run_bench(const std::vector<uint32_t>& ns, uint32_t l, uint64_t seed, int reps) {
    BenchResult out;
    for (uint32_t n : ns) {
        std::vector<double> agg_ms, cust_ms;
        BenchPoint point;
        point.n = n;
        for (int rep = 0; rep < reps; ++rep) {
            actors::Scenario sc;
            sc.seed = seed + 1000ull * n + rep;
            sc.n = n;
            sc.l = l;
            sc.reward = 100ull * n;
            sc.deposit = 10;
            sc.data.max_value = 100;
            auto report = actors::run_scenario(sc);
            if (!report.scenario_ok || !report.verify_accepted) continue;
            agg_ms.push_back(report.server_aggregate_ms);
            cust_ms.push_back(report.customer_decrypt_verify_ms);
            if (rep == 0) {
                point.init = report.init;
                point.releasing = report.releasing;
                point.uploading = report.uploading;
                point.rewarding = report.rewarding;
            }
        }
        point.server_aggregate_ms = median(agg_ms);
        point.customer_decrypt_verify_ms = median(cust_ms);
        out.points.push_back(point);
    }
    std::vector<double> xs, ys;
    double cmin = 1e300, cmax = 0;
    for (const auto& p : out.points) {
        xs.push_back(p.n);
        ys.push_back(p.server_aggregate_ms);
        cmin = std::min(cmin, p.customer_decrypt_verify_ms);
        cmax = std::max(cmax, p.customer_decrypt_verify_ms);
    }
    out.server_fit = linear_fit(xs, ys);
    out.customer_ratio = cmin > 0 ? cmax / cmin : 0;
    return out;
}

}  // namespace faircrowd::bench
