#include "dvs/compare.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "dvs/baselines.hpp"
#include "dvs/errors.hpp"

namespace dvs {

Method method_from_name(const std::string& name) {
    if (name == "dvs-cnn") return Method::DvsCnn;
    if (name == "cnn") return Method::Cnn;
    if (name == "dvs-ann") return Method::DvsAnn;
    if (name == "ann") return Method::Ann;
    if (name == "sma") return Method::Sma;
    if (name == "ses") return Method::Ses;
    if (name == "linear") return Method::Linear;
    if (name == "vg-walk") return Method::VgWalk;
    throw ConfigError("unknown method: " + name + " (out of scope)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::DvsCnn: return "dvs-cnn";
        case Method::Cnn: return "cnn";
        case Method::DvsAnn: return "dvs-ann";
        case Method::Ann: return "ann";
        case Method::Sma: return "sma";
        case Method::Ses: return "ses";
        case Method::Linear: return "linear";
        case Method::VgWalk: return "vg-walk";
    }
    return "?";
}

bool method_is_learned(Method m) {
    switch (m) {
        case Method::DvsCnn:
        case Method::Cnn:
        case Method::DvsAnn:
        case Method::Ann:
            return true;
        default:
            return false;
    }
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw LengthError("median of empty sequence");
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

namespace {

std::vector<double> test_targets(const WindowSet& test) {
    std::vector<double> y;
    y.reserve(test.size());
    for (const Window& w : test.windows) y.push_back(w.target);
    return y;
}

MethodRun run_one(Method m, const WindowSet& train_set, const WindowSet& test_set,
                  const TrainConfig& base_cfg, std::uint64_t seed) {
    MethodRun run;
    run.method = m;
    run.seed = seed;
    run.predictions.reserve(test_set.size());

    switch (m) {
        case Method::Sma:
            for (const Window& w : test_set.windows) run.predictions.push_back(sma_forecast(w.input, 1));
            break;
        case Method::Ses: {
            const double alpha = fit_ses_alpha(train_set);
            for (const Window& w : test_set.windows) run.predictions.push_back(ses_forecast(w.input, alpha));
            break;
        }
        case Method::Linear: {
            const LinearWindowModel model = fit_linear(train_set);
            for (const Window& w : test_set.windows) run.predictions.push_back(model.predict(w.input));
            break;
        }
        case Method::VgWalk: {
            const RandomWalkConfig walk_cfg;
            for (const Window& w : test_set.windows) {
                run.predictions.push_back(vg_randomwalk_forecast(w.input, walk_cfg));
            }
            break;
        }
        case Method::DvsCnn:
        case Method::Cnn:
        case Method::DvsAnn:
        case Method::Ann: {
            TrainConfig cfg = base_cfg;
            cfg.seed = seed;
            cfg.use_dvs = (m == Method::DvsCnn || m == Method::DvsAnn);
            const int len = static_cast<int>(train_set.window_len);
            LayerStack stack = (m == Method::DvsCnn)                      ? build_dvs_cnn(len)
                               : (m == Method::Cnn)                       ? build_ablation_cnn(len)
                                                                          : build_ablation_ann(len);
            auto [model, report] = train(std::move(stack), train_set, cfg);
            run.predictions = predict(model, test_set);
            run.loss_curve = std::move(report.iteration_loss);
            break;
        }
    }
    run.metrics = evaluate_metrics(run.predictions, test_targets(test_set));
    return run;
}

MetricReport elementwise_median(const std::vector<MethodRun>& runs) {
    auto collect = [&runs](auto field) {
        std::vector<double> xs;
        xs.reserve(runs.size());
        for (const MethodRun& r : runs) xs.push_back(field(r.metrics));
        return median(std::move(xs));
    };
    MetricReport med = runs.front().metrics;
    med.mad = collect([](const MetricReport& r) { return r.mad; });
    med.rmse = collect([](const MetricReport& r) { return r.rmse; });
    for (const MethodRun& r : runs) {
        med.mape_defined = med.mape_defined && r.metrics.mape_defined;
        med.smape_defined = med.smape_defined && r.metrics.smape_defined;
        med.nrmse_defined = med.nrmse_defined && r.metrics.nrmse_defined;
        med.negative_denominator = med.negative_denominator || r.metrics.negative_denominator;
    }
    if (med.mape_defined) med.mape = collect([](const MetricReport& r) { return r.mape; });
    if (med.smape_defined) med.smape = collect([](const MetricReport& r) { return r.smape; });
    if (med.nrmse_defined) med.nrmse = collect([](const MetricReport& r) { return r.nrmse; });
    return med;
}

}  // namespace

CompareResult compare_methods(const WindowSet& train_set, const WindowSet& test_set,
                              const std::vector<Method>& methods, const TrainConfig& base_cfg,
                              const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw ConfigError("compare needs at least one seed");
    if (test_set.empty()) throw ConfigError("compare needs a non-empty test split");

    CompareResult result;
    result.seeds = seeds;

    struct Job {
        std::size_t method_index;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (method_is_learned(methods[mi])) {
            for (std::uint64_t s : seeds) jobs.push_back({mi, s});
        } else {
            jobs.push_back({mi, seeds.front()});
        }
    }

    // Independent (method, seed) runs; results land in a fixed slot each so
    // scheduling cannot change the output.
    std::vector<MethodRun> outcomes(jobs.size());
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) break;
            outcomes[i] = run_one(methods[jobs[i].method_index], train_set, test_set, base_cfg,
                                  jobs[i].seed);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers && t < jobs.size(); ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    result.methods.resize(methods.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi) result.methods[mi].method = methods[mi];
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        result.methods[jobs[i].method_index].runs.push_back(std::move(outcomes[i]));
    }
    for (MethodSummary& summary : result.methods) {
        summary.median = elementwise_median(summary.runs);
    }
    return result;
}

namespace {

nlohmann::json metrics_json(const MetricReport& r) {
    return nlohmann::json::parse(metrics_to_json(r));
}

}  // namespace

std::string comparison_to_json(const CompareResult& result) {
    nlohmann::json j;
    j["seeds"] = result.seeds;
    j["methods"] = nlohmann::json::array();
    for (const MethodSummary& summary : result.methods) {
        nlohmann::json m;
        m["name"] = method_name(summary.method);
        m["median"] = metrics_json(summary.median);
        m["per_seed"] = nlohmann::json::array();
        for (const MethodRun& run : summary.runs) {
            m["per_seed"].push_back({{"seed", run.seed}, {"metrics", metrics_json(run.metrics)}});
        }
        j["methods"].push_back(std::move(m));
    }
    return j.dump(2);
}

std::string comparison_to_text(const CompareResult& result) {
    char line[256];
    std::string out;
    std::snprintf(line, sizeof(line), "%-10s %12s %12s %12s %12s %12s\n", "method", "MAD", "MAPE",
                  "SMAPE", "RMSE", "NRMSE");
    out += line;
    auto cell = [](double v, bool defined) {
        char buf[32];
        if (defined) {
            std::snprintf(buf, sizeof(buf), "%12.6g", v);
        } else {
            std::snprintf(buf, sizeof(buf), "%12s", "n/a");
        }
        return std::string(buf);
    };
    for (const MethodSummary& summary : result.methods) {
        const MetricReport& r = summary.median;
        std::snprintf(line, sizeof(line), "%-10s %s %s %s %s %s\n", method_name(summary.method).c_str(),
                      cell(r.mad, true).c_str(), cell(r.mape, r.mape_defined).c_str(),
                      cell(r.smape, r.smape_defined).c_str(), cell(r.rmse, true).c_str(),
                      cell(r.nrmse, r.nrmse_defined).c_str());
        out += line;
    }
    return out;
}

}  // namespace dvs
