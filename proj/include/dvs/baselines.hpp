#pragma once

#include <cstddef>
#include <vector>

#include "dvs/series.hpp"
#include "dvs/visibility.hpp"

namespace dvs {

struct LinearWindowModel {
    std::vector<double> weights;
    double bias = 0.0;

    double predict(const std::vector<double>& window) const;
};

// Parameters of the reconstructed visibility + restart-walk forecaster.
// The published description of that method leaves all of these open; the
// defaults here are a documented approximation, not a claim of fidelity.
struct RandomWalkConfig {
    double restart_prob = 0.15;
    int max_steps = 10000;
    double convergence_tol = 1e-10;
    int top_k = 5;
};

// mean of the last k values
double sma_forecast(const std::vector<double>& window, std::size_t k);

// simple exponential smoothing, level recursion seeded at the first value
double ses_forecast(const std::vector<double>& window, double alpha);

// grid search over {0.01, ..., 0.99} minimizing one-step squared error
double fit_ses_alpha(const WindowSet& train);

// Least squares on centered inputs via normal equations; falls back to a
// ridge diagonal (1e-8) when the system is rank deficient.
LinearWindowModel fit_linear(const WindowSet& train);

// Restart-walk similarity of every node to `source`; always a probability
// distribution over nodes.
std::vector<double> restart_walk_similarity(const AdjacencyMatrix& adj, std::size_t source,
                                            const RandomWalkConfig& cfg);

// Prior-method reconstruction: visibility graph, restart-walk similarity to
// the last node, then a similarity-weighted average of two-point linear
// extrapolations through each selected node and the last node.
double vg_randomwalk_forecast(const std::vector<double>& window, const RandomWalkConfig& cfg);

}  // namespace dvs
