#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dvs/network.hpp"
#include "dvs/series.hpp"

namespace dvs {

// Training protocol: fixed iteration budget, triangular cyclic learning
// rate between lr_min and lr_max, Adam updates, batch size 1 in
// chronological window order unless shuffle is set.
struct TrainConfig {
    int iterations = 100;
    double lr_max = 1e-4;
    double lr_min = 1e-12;
    int clr_cycle_len = 20;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    bool use_dvs = true;
    bool shuffle = false;

    // Throws ConfigError naming every invalid field at once.
    void validate() const;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// z-score scaling fitted on training data only; zero-variance data keeps
// stddev 1 so constants pass through unchanged.
struct Standardizer {
    double mean = 0.0;
    double stddev = 1.0;

    double apply(double x) const { return (x - mean) / stddev; }
    double invert(double z) const { return mean + stddev * z; }
};

struct TrainReport {
    std::vector<double> iteration_loss;  // mean per iteration, standardized units
    std::vector<double> final_params;
    TrainConfig config;
    double wall_seconds = 0.0;
};

// A trained network plus everything needed to reproduce its input pipeline.
struct Forecaster {
    LayerStack net;
    Standardizer scaler;
    bool use_dvs = true;
};

// loss = (pred - target)^2 and its derivative with respect to pred
std::pair<double, double> mse_loss(double pred, double target);

// triangular schedule: lr_min at cycle start and end, lr_max at mid-cycle
double clr_lr(long iter, const TrainConfig& cfg);

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr, const TrainConfig& cfg);

// Deterministic given (seed, data, config). Each window input runs through
// the visibility transform when cfg.use_dvs is set, then z-scoring with
// statistics pooled over the transformed training inputs and targets.
std::pair<Forecaster, TrainReport> train(LayerStack stack, const WindowSet& train_set,
                                         const TrainConfig& cfg);

// One raw-scale prediction per window, same pipeline as training.
std::vector<double> predict(const Forecaster& model, const WindowSet& windows);

std::string train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);

std::string forecaster_to_json(const Forecaster& model);
Forecaster forecaster_from_json(const std::string& text);

std::string train_report_to_json(const TrainReport& report, const std::string& model_path);

}  // namespace dvs
