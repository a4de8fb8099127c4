#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dvs/metrics.hpp"
#include "dvs/series.hpp"
#include "dvs/training.hpp"

namespace dvs {

enum class Method { DvsCnn, Cnn, DvsAnn, Ann, Sma, Ses, Linear, VgWalk };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

// true for the trained networks, false for the closed-form forecasters
bool method_is_learned(Method m);

struct MethodRun {
    Method method = Method::Sma;
    std::uint64_t seed = 0;
    std::vector<double> predictions;   // raw scale, one per test window
    MetricReport metrics;
    std::vector<double> loss_curve;    // empty for closed-form methods
};

struct MethodSummary {
    Method method = Method::Sma;
    std::vector<MethodRun> runs;  // one per seed for learned methods, else one
    MetricReport median;          // elementwise median across runs
};

struct CompareResult {
    std::vector<MethodSummary> methods;
    std::vector<std::uint64_t> seeds;
};

double median(std::vector<double> xs);

// Every method evaluated on the same chronological test split. Learned
// methods are retrained once per seed; independent runs may execute
// concurrently.
CompareResult compare_methods(const WindowSet& train, const WindowSet& test,
                              const std::vector<Method>& methods, const TrainConfig& base_cfg,
                              const std::vector<std::uint64_t>& seeds);

std::string comparison_to_json(const CompareResult& result);
std::string comparison_to_text(const CompareResult& result);

}  // namespace dvs
