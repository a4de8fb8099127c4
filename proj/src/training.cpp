#include "dvs/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dvs/errors.hpp"
#include "dvs/rng.hpp"
#include "dvs/visibility.hpp"

namespace dvs {

void TrainConfig::validate() const {
    std::vector<std::string> problems;
    if (iterations < 1) problems.push_back("iterations must be >= 1");
    if (!(lr_max > 0.0)) problems.push_back("lr_max must be positive");
    if (!(lr_min > 0.0)) problems.push_back("lr_min must be positive");
    if (lr_min > lr_max) problems.push_back("lr_min must not exceed lr_max");
    if (clr_cycle_len < 1) problems.push_back("clr_cycle_len must be >= 1");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) problems.push_back("adam_beta1 must lie in (0,1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) problems.push_back("adam_beta2 must lie in (0,1)");
    if (!(adam_eps > 0.0)) problems.push_back("adam_eps must be positive");
    if (!problems.empty()) {
        std::string msg = "invalid training config:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
}

std::pair<double, double> mse_loss(double pred, double target) {
    const double diff = pred - target;
    return {diff * diff, 2.0 * diff};
}

double clr_lr(long iter, const TrainConfig& cfg) {
    const long cycle = cfg.clr_cycle_len;
    const double p = static_cast<double>(iter % cycle) / static_cast<double>(cycle);
    return cfg.lr_min + (cfg.lr_max - cfg.lr_min) * (1.0 - std::fabs(2.0 * p - 1.0));
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr, const TrainConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw DimensionMismatchError("adam_step sizes disagree");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g;
        state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
        if (!std::isfinite(params[i])) {
            throw NonFiniteError("parameter " + std::to_string(i) + " overflowed during adam_step");
        }
    }
}

namespace {

Standardizer fit_standardizer(const std::vector<std::vector<double>>& inputs,
                              const std::vector<double>& targets) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& x : inputs) {
        sum = std::accumulate(x.begin(), x.end(), sum);
        count += x.size();
    }
    sum = std::accumulate(targets.begin(), targets.end(), sum);
    count += targets.size();

    Standardizer s;
    s.mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (const auto& x : inputs) {
        for (double v : x) sq += (v - s.mean) * (v - s.mean);
    }
    for (double v : targets) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(count));
    if (!(s.stddev > 0.0)) s.stddev = 1.0;
    return s;
}

std::vector<double> pipeline_input(const std::vector<double>& raw, bool use_dvs,
                                   const Standardizer& scaler) {
    std::vector<double> x = use_dvs ? dvs_transform(raw).z : raw;
    for (double& v : x) v = scaler.apply(v);
    return x;
}

}  // namespace

std::pair<Forecaster, TrainReport> train(LayerStack stack, const WindowSet& train_set,
                                         const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) throw ConfigError("training window set is empty");
    if (static_cast<int>(train_set.window_len) != stack.input_len()) {
        throw ShapeError("windows have length " + std::to_string(train_set.window_len) +
                         " but network expects " + std::to_string(stack.input_len()));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t m = train_set.size();

    // The transform and scaling do not depend on the parameters, so the
    // whole dataset is prepared once up front.
    std::vector<std::vector<double>> raw_inputs(m);
    std::vector<double> targets(m);
    for (std::size_t i = 0; i < m; ++i) {
        raw_inputs[i] = cfg.use_dvs ? dvs_transform(train_set.windows[i].input).z
                                    : train_set.windows[i].input;
        targets[i] = train_set.windows[i].target;
    }
    Standardizer scaler = fit_standardizer(raw_inputs, targets);
    for (auto& x : raw_inputs) {
        for (double& v : x) v = scaler.apply(v);
    }
    for (double& y : targets) y = scaler.apply(y);

    stack.initialize_params(cfg.seed);
    AdamState state(stack.param_count());
    Rng order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);

    TrainReport report;
    report.config = cfg;
    report.iteration_loss.reserve(static_cast<std::size_t>(cfg.iterations));

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        const double lr = clr_lr(iter, cfg);
        if (cfg.shuffle) {
            for (std::size_t i = m; i > 1; --i) {
                std::swap(order[i - 1], order[order_rng.below(i)]);
            }
        }
        double loss_sum = 0.0;
        for (std::size_t idx : order) {
            auto [pred, tape] = forward(stack, raw_inputs[idx]);
            auto [loss, dloss] = mse_loss(pred, targets[idx]);
            loss_sum += loss;
            std::vector<double> grads = backward(stack, tape, dloss);
            adam_step(stack.params(), grads, state, lr, cfg);
        }
        report.iteration_loss.push_back(loss_sum / static_cast<double>(m));
    }

    report.final_params = stack.params();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Forecaster model{std::move(stack), scaler, cfg.use_dvs};
    return {std::move(model), std::move(report)};
}

std::vector<double> predict(const Forecaster& model, const WindowSet& windows) {
    if (windows.empty()) return {};
    if (static_cast<int>(windows.window_len) != model.net.input_len()) {
        throw ShapeError("windows have length " + std::to_string(windows.window_len) +
                         " but network expects " + std::to_string(model.net.input_len()));
    }
    std::vector<double> preds;
    preds.reserve(windows.size());
    for (const Window& w : windows.windows) {
        auto [pred, tape] = forward(model.net, pipeline_input(w.input, model.use_dvs, model.scaler));
        preds.push_back(model.scaler.invert(pred));
    }
    return preds;
}

std::string train_config_to_json(const TrainConfig& cfg) {
    nlohmann::json j;
    j["iterations"] = cfg.iterations;
    j["lr_max"] = cfg.lr_max;
    j["lr_min"] = cfg.lr_min;
    j["clr_cycle_len"] = cfg.clr_cycle_len;
    j["adam_beta1"] = cfg.adam_beta1;
    j["adam_beta2"] = cfg.adam_beta2;
    j["adam_eps"] = cfg.adam_eps;
    j["seed"] = cfg.seed;
    j["use_dvs"] = cfg.use_dvs;
    j["shuffle"] = cfg.shuffle;
    return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TrainConfig cfg;
    std::vector<std::string> problems;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "iterations") cfg.iterations = value.get<int>();
            else if (key == "lr_max") cfg.lr_max = value.get<double>();
            else if (key == "lr_min") cfg.lr_min = value.get<double>();
            else if (key == "clr_cycle_len") cfg.clr_cycle_len = value.get<int>();
            else if (key == "adam_beta1") cfg.adam_beta1 = value.get<double>();
            else if (key == "adam_beta2") cfg.adam_beta2 = value.get<double>();
            else if (key == "adam_eps") cfg.adam_eps = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "use_dvs") cfg.use_dvs = value.get<bool>();
            else if (key == "shuffle") cfg.shuffle = value.get<bool>();
            else problems.push_back("unknown key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            problems.push_back("key '" + key + "' has the wrong type");
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid training config:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    cfg.validate();
    return cfg;
}

std::string forecaster_to_json(const Forecaster& model) {
    nlohmann::json j;
    j["network"] = nlohmann::json::parse(stack_to_json(model.net));
    j["scaler"] = {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}};
    j["use_dvs"] = model.use_dvs;
    return j.dump(2);
}

Forecaster forecaster_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Forecaster model{stack_from_json(j.at("network").dump()), Standardizer{}, true};
    model.scaler.mean = j.at("scaler").at("mean").get<double>();
    model.scaler.stddev = j.at("scaler").at("stddev").get<double>();
    model.use_dvs = j.at("use_dvs").get<bool>();
    return model;
}

std::string train_report_to_json(const TrainReport& report, const std::string& model_path) {
    nlohmann::json j;
    j["loss_curve"] = report.iteration_loss;
    j["wall_seconds"] = report.wall_seconds;
    j["config"] = nlohmann::json::parse(train_config_to_json(report.config));
    j["model_path"] = model_path;
    return j.dump(2);
}

}  // namespace dvs
