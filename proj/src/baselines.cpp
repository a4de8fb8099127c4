#include "dvs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dvs/errors.hpp"

namespace dvs {

double LinearWindowModel::predict(const std::vector<double>& window) const {
    if (window.size() != weights.size()) {
        throw ShapeError("window has " + std::to_string(window.size()) + " entries, model expects " +
                         std::to_string(weights.size()));
    }
    double acc = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * window[i];
    return acc;
}

double sma_forecast(const std::vector<double>& window, std::size_t k) {
    if (k == 0) throw KTooLargeError("k must be positive");
    if (k > window.size()) {
        throw KTooLargeError("k=" + std::to_string(k) + " exceeds window length " +
                             std::to_string(window.size()));
    }
    double sum = 0.0;
    for (std::size_t i = window.size() - k; i < window.size(); ++i) sum += window[i];
    return sum / static_cast<double>(k);
}

double ses_forecast(const std::vector<double>& window, double alpha) {
    if (window.empty()) throw LengthError("ses needs a non-empty window");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
    double level = window[0];
    for (std::size_t i = 1; i < window.size(); ++i) {
        level = alpha * window[i] + (1.0 - alpha) * level;
    }
    return level;
}

double fit_ses_alpha(const WindowSet& train) {
    if (train.empty()) throw ConfigError("cannot fit alpha on an empty window set");
    double best_alpha = 0.01;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int step = 1; step <= 99; ++step) {
        const double alpha = static_cast<double>(step) / 100.0;
        double sse = 0.0;
        for (const Window& w : train.windows) {
            const double diff = ses_forecast(w.input, alpha) - w.target;
            sse += diff * diff;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

namespace {

// Gaussian elimination with partial pivoting; returns false on a pivot at
// or below min_pivot.
bool solve_inplace(std::vector<double>& a, std::vector<double>& rhs, std::size_t n,
                   double min_pivot) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) pivot = row;
        }
        if (std::fabs(a[pivot * n + col]) <= min_pivot) return false;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
            std::swap(rhs[col], rhs[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
            rhs[row] -= f * rhs[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double acc = rhs[col];
        for (std::size_t j = col + 1; j < n; ++j) acc -= a[col * n + j] * rhs[j];
        rhs[col] = acc / a[col * n + col];
    }
    return true;
}

}  // namespace

LinearWindowModel fit_linear(const WindowSet& train) {
    if (train.empty()) throw ConfigError("cannot fit on an empty window set");
    const std::size_t w = train.window_len;
    const std::size_t m = train.size();

    std::vector<double> x_mean(w, 0.0);
    double y_mean = 0.0;
    for (const Window& win : train.windows) {
        for (std::size_t j = 0; j < w; ++j) x_mean[j] += win.input[j];
        y_mean += win.target;
    }
    for (double& v : x_mean) v /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);

    // Gram matrix and right-hand side of the centered normal equations.
    std::vector<double> gram(w * w, 0.0);
    std::vector<double> rhs(w, 0.0);
    for (const Window& win : train.windows) {
        const double yc = win.target - y_mean;
        for (std::size_t i = 0; i < w; ++i) {
            const double xi = win.input[i] - x_mean[i];
            rhs[i] += xi * yc;
            for (std::size_t j = i; j < w; ++j) {
                gram[i * w + j] += xi * (win.input[j] - x_mean[j]);
            }
        }
    }
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < i; ++j) gram[i * w + j] = gram[j * w + i];
    }
    for (double v : gram) {
        if (!std::isfinite(v)) throw SingularSystemError("non-finite normal equations");
    }

    double scale = 0.0;
    for (double v : gram) scale = std::max(scale, std::fabs(v));

    std::vector<double> a = gram;
    std::vector<double> beta = rhs;
    if (!solve_inplace(a, beta, w, 1e-12 * (scale + 1.0))) {
        // Rank deficient: retry with the ridge diagonal, where any nonzero
        // pivot is acceptable (the shifted matrix is positive definite).
        constexpr double ridge = 1e-8;
        a = gram;
        beta = rhs;
        for (std::size_t i = 0; i < w; ++i) a[i * w + i] += ridge;
        if (!solve_inplace(a, beta, w, 0.0)) {
            throw SingularSystemError("normal equations unsolvable even with ridge fallback");
        }
    }
    for (double v : beta) {
        if (!std::isfinite(v)) throw SingularSystemError("non-finite regression solution");
    }

    LinearWindowModel model;
    model.weights = std::move(beta);
    model.bias = y_mean;
    for (std::size_t i = 0; i < w; ++i) model.bias -= model.weights[i] * x_mean[i];
    return model;
}

std::vector<double> restart_walk_similarity(const AdjacencyMatrix& adj, std::size_t source,
                                            const RandomWalkConfig& cfg) {
    const std::size_t n = adj.n;
    if (source >= n) throw LengthError("walk source out of range");
    std::vector<std::size_t> deg = node_degrees(adj);

    std::vector<double> s(n, 0.0), next(n, 0.0);
    s[source] = 1.0;
    for (int step = 0; step < cfg.max_steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            if (s[u] == 0.0) continue;
            const double share = (1.0 - cfg.restart_prob) * s[u] / static_cast<double>(deg[u]);
            for (std::size_t v = 0; v < n; ++v) {
                if (adj.at(u, v)) next[v] += share;
            }
        }
        next[source] += cfg.restart_prob;
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(next[i] - s[i]));
        s.swap(next);
        if (delta < cfg.convergence_tol) break;
    }
    return s;
}

double vg_randomwalk_forecast(const std::vector<double>& window, const RandomWalkConfig& cfg) {
    if (window.size() < 3) {
        throw LengthError("walk forecast needs at least 3 points, got " + std::to_string(window.size()));
    }
    const std::size_t n = window.size();
    const std::size_t last = n - 1;

    AdjacencyMatrix adj = visibility_adjacency(window);
    std::vector<double> sim = restart_walk_similarity(adj, last, cfg);

    std::vector<std::size_t> nodes(n - 1);
    std::iota(nodes.begin(), nodes.end(), 0);
    std::stable_sort(nodes.begin(), nodes.end(),
                     [&sim](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_k), nodes.size());

    double mass = 0.0, acc = 0.0;
    for (std::size_t r = 0; r < take; ++r) {
        const std::size_t i = nodes[r];
        // line through (i, v_i) and (last, v_last), evaluated one step ahead
        const double extrap =
            window[last] + (window[last] - window[i]) / static_cast<double>(last - i);
        acc += sim[i] * extrap;
        mass += sim[i];
    }
    if (!(mass > 0.0)) throw DegenerateWalkError("similarity mass of the selected nodes is zero");
    return acc / mass;
}

}  // namespace dvs
