#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dvs/baselines.hpp"
#include "dvs/errors.hpp"
#include "dvs/rng.hpp"
#include "dvs/series.hpp"

using namespace dvs;

TEST_CASE("sma basics") {
    CHECK(sma_forecast({1, 2, 3}, 1) == 3.0);
    CHECK(sma_forecast({1, 2, 3}, 3) == 2.0);
    CHECK_THROWS_AS(sma_forecast({5}, 2), KTooLargeError);
}

TEST_CASE("sma with k=1 is the last value on random windows") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> w(1 + rng.below(20));
        for (double& x : w) x = rng.uniform(-100, 100);
        CHECK(sma_forecast(w, 1) == w.back());
    }
}

TEST_CASE("ses level recursion") {
    CHECK(ses_forecast({2, 4}, 0.5) == 3.0);
    CHECK(ses_forecast({7, 7, 7}, 0.3) == 7.0);
}

TEST_CASE("ses with alpha 1 degenerates to the last value") {
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> w(1 + rng.below(15));
        for (double& x : w) x = rng.uniform(-10, 10);
        CHECK(ses_forecast(w, 1.0) == sma_forecast(w, 1));
    }
}

TEST_CASE("ses alpha grid fit prefers responsive smoothing on a trend") {
    std::vector<double> v(60);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * static_cast<double>(i);
    const double alpha = fit_ses_alpha(make_windows(v, 8));
    CHECK(alpha > 0.9);  // on a steep trend the best level tracks the newest value
}

TEST_CASE("linear fit recovers an exact line") {
    std::vector<double> v(40);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * static_cast<double>(i);
    WindowSet ws = make_windows(v, 5);
    LinearWindowModel model = fit_linear(ws);
    for (const Window& w : ws.windows) {
        CHECK(std::fabs(model.predict(w.input) - w.target) < 1e-8);
    }
}

TEST_CASE("a single underdetermined window is still interpolated") {
    WindowSet ws;
    ws.window_len = 1;
    ws.source_len = 2;
    ws.windows.push_back({{3.0}, 6.0});
    LinearWindowModel model = fit_linear(ws);
    CHECK(std::fabs(model.weights[0] * 3.0 + model.bias - 6.0) <= 1e-8);
}

TEST_CASE("zero-variance inputs fall back to the mean target") {
    WindowSet ws;
    ws.window_len = 3;
    ws.source_len = 10;
    for (int i = 0; i < 6; ++i) ws.windows.push_back({{4.0, 4.0, 4.0}, 9.0});
    LinearWindowModel model = fit_linear(ws);
    for (double w : model.weights) CHECK(std::fabs(w) < 1e-6);
    CHECK(model.bias == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("restart walk similarity is a probability distribution") {
    Rng rng(11);
    RandomWalkConfig cfg;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> w(3 + rng.below(30));
        for (double& x : w) x = rng.uniform(0, 50);
        AdjacencyMatrix adj = visibility_adjacency(w);
        std::vector<double> sim = restart_walk_similarity(adj, w.size() - 1, cfg);
        const double total = std::accumulate(sim.begin(), sim.end(), 0.0);
        CHECK(std::fabs(total - 1.0) < 1e-9);
        for (double s : sim) CHECK(s >= 0.0);
    }
}

TEST_CASE("walk forecast continues a strictly linear window exactly") {
    std::vector<double> w(10);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i + 1);
    RandomWalkConfig cfg;
    CHECK(std::fabs(vg_randomwalk_forecast(w, cfg) - 11.0) < 1e-9);
}

TEST_CASE("walk forecast of a constant window is the constant") {
    RandomWalkConfig cfg;
    CHECK(vg_randomwalk_forecast(std::vector<double>(12, 3.25), cfg) ==
          doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("top_k 1 returns the single best node's extrapolation") {
    Rng rng(17);
    std::vector<double> w(15);
    for (double& x : w) x = rng.uniform(0, 10);

    RandomWalkConfig cfg;
    cfg.top_k = 1;
    const double got = vg_randomwalk_forecast(w, cfg);

    AdjacencyMatrix adj = visibility_adjacency(w);
    std::vector<double> sim = restart_walk_similarity(adj, w.size() - 1, cfg);
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (sim[i] > sim[best]) best = i;
    }
    const std::size_t last = w.size() - 1;
    const double expected = w[last] + (w[last] - w[best]) / static_cast<double>(last - best);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("walk forecast is shift equivariant") {
    Rng rng(23);
    RandomWalkConfig cfg;
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> w(8 + rng.below(20));
        for (double& x : w) x = rng.uniform(0, 10);
        const double beta = rng.uniform(-50, 50);
        std::vector<double> shifted(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) shifted[i] = w[i] + beta;
        CHECK(std::fabs(vg_randomwalk_forecast(shifted, cfg) -
                        (vg_randomwalk_forecast(w, cfg) + beta)) < 1e-9);
    }
}

TEST_CASE("walk forecast needs at least 3 points") {
    RandomWalkConfig cfg;
    CHECK_THROWS_AS(vg_randomwalk_forecast({1.0, 2.0}, cfg), LengthError);
}
