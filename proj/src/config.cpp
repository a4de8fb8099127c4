#include "dvs/config.hpp"

#include <json.hpp>

#include "dvs/errors.hpp"

namespace dvs {

void RunConfig::validate() const {
    std::vector<std::string> problems;
    if (window_len < 1) problems.push_back("window_len must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        problems.push_back("train_fraction must lie in (0,1)");
    }
    try {
        train.validate();
    } catch (const ConfigError& e) {
        problems.push_back(e.what());
    }
    if (!problems.empty()) {
        std::string msg = "invalid run config:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
}

RunConfig run_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    std::vector<std::string> problems;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "iterations") cfg.train.iterations = value.get<int>();
            else if (key == "lr_max") cfg.train.lr_max = value.get<double>();
            else if (key == "lr_min") cfg.train.lr_min = value.get<double>();
            else if (key == "clr_cycle_len") cfg.train.clr_cycle_len = value.get<int>();
            else if (key == "adam_beta1") cfg.train.adam_beta1 = value.get<double>();
            else if (key == "adam_beta2") cfg.train.adam_beta2 = value.get<double>();
            else if (key == "adam_eps") cfg.train.adam_eps = value.get<double>();
            else if (key == "seed") cfg.train.seed = value.get<std::uint64_t>();
            else if (key == "use_dvs") cfg.train.use_dvs = value.get<bool>();
            else if (key == "shuffle") cfg.train.shuffle = value.get<bool>();
            else if (key == "window_len") cfg.window_len = value.get<int>();
            else if (key == "train_fraction") cfg.train_fraction = value.get<double>();
            else if (key == "drop_last") cfg.drop_last = value.get<bool>();
            else problems.push_back("unknown key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            problems.push_back("key '" + key + "' has the wrong type");
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid run config:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    cfg.validate();
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::parse(train_config_to_json(cfg.train));
    j["window_len"] = cfg.window_len;
    j["train_fraction"] = cfg.train_fraction;
    j["drop_last"] = cfg.drop_last;
    return j.dump(2);
}

}  // namespace dvs
