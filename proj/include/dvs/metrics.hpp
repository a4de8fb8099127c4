#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dvs {

// The five error measures, computed exactly as defined: MAPE divides by the
// signed actual value and SMAPE by the unsigned sum of forecast and actual.
// Division hazards flag the affected metric instead of throwing so one bad
// denominator does not void the rest of the report.
struct MetricReport {
    std::size_t n = 0;
    double mad = 0.0;
    double mape = 0.0;
    double smape = 0.0;
    double rmse = 0.0;
    double nrmse = 0.0;
    bool mape_defined = true;    // false when some actual is exactly 0
    bool smape_defined = true;   // false when some pred+actual is exactly 0
    bool nrmse_defined = true;   // false when actuals have zero range
    bool negative_denominator = false;  // some SMAPE or MAPE denominator < 0

    std::vector<std::string> flags() const;
};

enum class SmapeMode {
    AsPrinted,   // denominator pred + actual
    Absolute,    // denominator |pred| + |actual|, for cross-tool comparison
};

MetricReport evaluate_metrics(const std::vector<double>& preds,
                              const std::vector<double>& actuals,
                              SmapeMode mode = SmapeMode::AsPrinted);

std::string metrics_to_json(const MetricReport& report);

}  // namespace dvs
