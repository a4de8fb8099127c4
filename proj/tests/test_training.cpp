#include <doctest.h>

#include <cmath>

#include "dvs/errors.hpp"
#include "dvs/network.hpp"
#include "dvs/rng.hpp"
#include "dvs/series.hpp"
#include "dvs/training.hpp"

using namespace dvs;

namespace {

WindowSet constant_windows(double value, std::size_t length, std::size_t w) {
    return make_windows(std::vector<double>(length, value), w);
}

TrainConfig quick_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.iterations = 5;
    cfg.lr_min = 1e-6;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("mse loss and derivative") {
    CHECK(mse_loss(3, 3) == std::pair<double, double>{0, 0});
    CHECK(mse_loss(5, 3) == std::pair<double, double>{4, 4});
    CHECK(mse_loss(0, -2) == std::pair<double, double>{4, 4});
}

TEST_CASE("triangular learning rate schedule") {
    TrainConfig cfg;
    cfg.lr_min = 1e-12;
    cfg.lr_max = 1e-4;
    cfg.clr_cycle_len = 20;
    CHECK(clr_lr(0, cfg) == cfg.lr_min);
    CHECK(std::fabs(clr_lr(10, cfg) - cfg.lr_max) < 1e-12);
    CHECK(clr_lr(20, cfg) == cfg.lr_min);
    CHECK(clr_lr(5, cfg) == doctest::Approx(cfg.lr_min + (cfg.lr_max - cfg.lr_min) * 0.5));
}

TEST_CASE("adam leaves parameters alone on zero gradient") {
    TrainConfig cfg;
    std::vector<double> params = {1.0, -2.0};
    AdamState state(2);
    adam_step(params, {0.0, 0.0}, state, 0.1, cfg);
    CHECK(params == std::vector<double>{1.0, -2.0});
    CHECK(state.t == 1);
}

TEST_CASE("adam first step is close to minus lr times sign") {
    TrainConfig cfg;
    std::vector<double> params = {0.0};
    AdamState state(1);
    adam_step(params, {1.0}, state, 0.1, cfg);
    CHECK(params[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam with zero lr advances moments but not parameters") {
    TrainConfig cfg;
    std::vector<double> params = {0.5};
    AdamState state(1);
    adam_step(params, {2.0}, state, 0.0, cfg);
    adam_step(params, {2.0}, state, 0.0, cfg);
    CHECK(params[0] == 0.5);
    CHECK(state.t == 2);
    CHECK(state.m[0] > 0.0);
    CHECK(state.v[0] > 0.0);
}

TEST_CASE("config validation lists every problem at once") {
    TrainConfig cfg;
    cfg.iterations = 0;
    cfg.lr_min = 1.0;
    cfg.lr_max = 0.5;
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("iterations") != std::string::npos);
        CHECK(what.find("lr_min") != std::string::npos);
    }
}

TEST_CASE("config json rejects unknown keys") {
    CHECK_THROWS_AS(train_config_from_json(R"({"iterations": 10, "learning_rate": 0.1})"), ConfigError);
    TrainConfig cfg = train_config_from_json(R"({"iterations": 10, "seed": 3, "use_dvs": false})");
    CHECK(cfg.iterations == 10);
    CHECK(cfg.seed == 3);
    CHECK_FALSE(cfg.use_dvs);
}

TEST_CASE("a constant series is learned immediately") {
    WindowSet ws = constant_windows(5.0, 40, 12);
    auto [model, report] = train(build_dvs_cnn(12), ws, quick_config(7));
    CHECK(report.iteration_loss.back() < 1e-6);

    std::vector<double> preds = predict(model, ws);
    for (double p : preds) CHECK(std::fabs(p - 5.0) < 1e-3);
}

TEST_CASE("training is bit-deterministic given the seed") {
    SynthSpec spec;
    spec.length = 60;
    spec.trend_slope = 2.0;
    spec.seasonal_amplitude = 5.0;
    spec.seasonal_period = 7.0;
    spec.noise_sigma = 1.0;
    spec.seed = 11;
    WindowSet ws = make_windows(synth_series(spec), 10);

    auto [m1, r1] = train(build_dvs_cnn(10), ws, quick_config(3));
    auto [m2, r2] = train(build_dvs_cnn(10), ws, quick_config(3));
    CHECK(r1.iteration_loss == r2.iteration_loss);
    CHECK(r1.final_params == r2.final_params);

    auto [m3, r3] = train(build_dvs_cnn(10), ws, quick_config(4));
    CHECK(r1.final_params != r3.final_params);
}

TEST_CASE("shuffled training is still seed-deterministic") {
    WindowSet ws = constant_windows(2.0, 40, 6);
    TrainConfig cfg = quick_config(9);
    cfg.shuffle = true;
    auto [m1, r1] = train(build_ablation_ann(6), ws, cfg);
    auto [m2, r2] = train(build_ablation_ann(6), ws, cfg);
    CHECK(r1.final_params == r2.final_params);
}

TEST_CASE("on a constant series the visibility transform is the identity, so the ablation switch changes nothing") {
    WindowSet ws = constant_windows(5.0, 40, 10);
    TrainConfig with = quick_config(21);
    with.use_dvs = true;
    TrainConfig without = quick_config(21);
    without.use_dvs = false;
    auto [m1, r1] = train(build_dvs_cnn(10), ws, with);
    auto [m2, r2] = train(build_dvs_cnn(10), ws, without);
    CHECK(r1.iteration_loss == r2.iteration_loss);
    CHECK(r1.final_params == r2.final_params);
}

TEST_CASE("loss decreases on a noise-free trend") {
    SynthSpec spec;
    spec.length = 120;
    spec.trend_slope = 10.0;
    spec.seasonal_amplitude = 40.0;
    spec.seasonal_period = 12.0;
    spec.base_level = 1000.0;
    WindowSet ws = make_windows(synth_series(spec), 12);
    TrainConfig cfg = quick_config(1);
    cfg.iterations = 40;
    auto [model, report] = train(build_dvs_cnn(12), ws, cfg);
    CHECK(report.iteration_loss.back() < report.iteration_loss.front());
}

TEST_CASE("standardizer round trip") {
    Standardizer s{123.4, 56.7};
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-1e4, 1e4);
        const double back = s.invert(s.apply(x));
        CHECK(std::fabs(back - x) <= 1e-12 * std::max(1.0, std::fabs(x)));
    }
}

TEST_CASE("rejected configs never start training") {
    WindowSet ws = constant_windows(1.0, 20, 4);
    TrainConfig cfg = quick_config(1);
    cfg.iterations = 0;
    CHECK_THROWS_AS(train(build_ablation_ann(4), ws, cfg), ConfigError);
}

TEST_CASE("predict on an empty window set returns nothing") {
    WindowSet ws = constant_windows(5.0, 40, 12);
    auto [model, report] = train(build_dvs_cnn(12), ws, quick_config(7));
    WindowSet empty;
    empty.window_len = 12;
    CHECK(predict(model, empty).empty());
}

TEST_CASE("predict rejects mismatched window lengths") {
    auto [model, report] = train(build_dvs_cnn(12), constant_windows(5.0, 40, 12), quick_config(7));
    WindowSet wrong = constant_windows(5.0, 40, 13);
    CHECK_THROWS_AS(predict(model, wrong), ShapeError);
}

TEST_CASE("forecaster json round trip preserves behaviour") {
    SynthSpec spec;
    spec.length = 50;
    spec.trend_slope = 3.0;
    spec.noise_sigma = 2.0;
    spec.seed = 19;
    WindowSet ws = make_windows(synth_series(spec), 8);
    auto [model, report] = train(build_ablation_ann(8), ws, quick_config(5));

    Forecaster back = forecaster_from_json(forecaster_to_json(model));
    CHECK(predict(back, ws) == predict(model, ws));
}

TEST_CASE("train report json references the model path") {
    auto [model, report] = train(build_dvs_cnn(12), constant_windows(1.0, 40, 12), quick_config(2));
    std::string j = train_report_to_json(report, "model.json");
    CHECK(j.find("\"model_path\": \"model.json\"") != std::string::npos);
    CHECK(j.find("loss_curve") != std::string::npos);
}
