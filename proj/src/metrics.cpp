#include "dvs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "dvs/errors.hpp"

namespace dvs {

std::vector<std::string> MetricReport::flags() const {
    std::vector<std::string> out;
    if (!mape_defined) out.push_back("mape_undefined_zero_actual");
    if (!smape_defined) out.push_back("smape_undefined_zero_denominator");
    if (!nrmse_defined) out.push_back("nrmse_undefined_zero_range");
    if (negative_denominator) out.push_back("negative_denominator");
    return out;
}

MetricReport evaluate_metrics(const std::vector<double>& preds,
                              const std::vector<double>& actuals,
                              SmapeMode mode) {
    if (preds.size() != actuals.size()) {
        throw LengthMismatchError("preds has " + std::to_string(preds.size()) + " entries, actuals " +
                                  std::to_string(actuals.size()));
    }
    if (preds.empty()) {
        throw LengthMismatchError("cannot evaluate metrics on empty sequences");
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!std::isfinite(preds[i]) || !std::isfinite(actuals[i])) {
            throw NonFiniteError("non-finite entry at index " + std::to_string(i));
        }
    }

    MetricReport r;
    r.n = preds.size();
    const double n = static_cast<double>(r.n);

    double abs_sum = 0.0, sq_sum = 0.0, mape_sum = 0.0, smape_sum = 0.0;
    double y_min = actuals[0], y_max = actuals[0];
    for (std::size_t i = 0; i < r.n; ++i) {
        const double diff = preds[i] - actuals[i];
        abs_sum += std::fabs(diff);
        sq_sum += diff * diff;

        if (actuals[i] == 0.0) {
            r.mape_defined = false;
        } else {
            mape_sum += std::fabs(diff) / actuals[i];
        }

        const double denom = (mode == SmapeMode::AsPrinted)
                                 ? preds[i] + actuals[i]
                                 : std::fabs(preds[i]) + std::fabs(actuals[i]);
        if (denom == 0.0) {
            r.smape_defined = false;
        } else {
            if (denom < 0.0) r.negative_denominator = true;
            smape_sum += std::fabs(diff) / denom;
        }

        y_min = std::min(y_min, actuals[i]);
        y_max = std::max(y_max, actuals[i]);
    }

    r.mad = abs_sum / n;
    r.rmse = std::sqrt(sq_sum / n);
    r.mape = r.mape_defined ? mape_sum / n : std::numeric_limits<double>::quiet_NaN();
    r.smape = r.smape_defined ? 2.0 * smape_sum / n : std::numeric_limits<double>::quiet_NaN();
    if (y_max == y_min) {
        r.nrmse_defined = false;
        r.nrmse = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.nrmse = r.rmse / (y_max - y_min);
    }
    return r;
}

std::string metrics_to_json(const MetricReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["mad"] = report.mad;
    j["mape"] = report.mape_defined ? nlohmann::json(report.mape) : nlohmann::json(nullptr);
    j["smape"] = report.smape_defined ? nlohmann::json(report.smape) : nlohmann::json(nullptr);
    j["rmse"] = report.rmse;
    j["nrmse"] = report.nrmse_defined ? nlohmann::json(report.nrmse) : nlohmann::json(nullptr);
    j["flags"] = report.flags();
    return j.dump(2);
}

}  // namespace dvs
