#include "dvs/visibility.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include <json.hpp>

#include "dvs/errors.hpp"

namespace dvs {

namespace {

void check_input(const std::vector<double>& values, const std::vector<double>& abscissae) {
    if (values.size() < 2) {
        throw LengthError("visibility needs at least 2 points, got " + std::to_string(values.size()));
    }
    if (abscissae.size() != values.size()) {
        throw DimensionMismatchError("abscissae and values differ in length");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || !std::isfinite(abscissae[i])) {
            throw NonFiniteError("non-finite entry at index " + std::to_string(i));
        }
        if (i > 0 && abscissae[i] <= abscissae[i - 1]) {
            throw OrderError(i + 2, "abscissae not strictly increasing");
        }
    }
}

std::vector<double> index_abscissae(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
    return x;
}

// Emits every visible pair (i, j), i < j, exactly once. For each right
// endpoint j the left scan keeps the argmax of the backward slope
// (v[t]-v[j])/(x[j]-x[t]); node i is visible iff its slope strictly beats
// that maximum. Slopes are compared by cross-multiplication so no division
// enters the decision. Once the running maximum is non-negative and even
// the prefix maximum value cannot clear the chord, nothing further left
// can be visible and the scan stops early.
template <typename Emit>
void scan_pairs(const std::vector<double>& v, const std::vector<double>& x, Emit&& emit) {
    const std::size_t n = v.size();
    std::vector<double> prefix_max(n);
    prefix_max[0] = v[0];
    for (std::size_t i = 1; i < n; ++i) prefix_max[i] = std::max(prefix_max[i - 1], v[i]);

    for (std::size_t j = 1; j < n; ++j) {
        emit(j - 1, j);  // neighbours in time always see each other
        std::size_t th = j - 1;
        for (std::size_t i = j - 1; i-- > 0;) {
            const double dxi = x[j] - x[i];
            const double dxt = x[j] - x[th];
            if ((v[i] - v[j]) * dxt > (v[th] - v[j]) * dxi) {
                emit(i, j);
                th = i;
            }
            if (i == 0) break;
            if (v[th] >= v[j]) {
                const double dxn = x[j] - x[i - 1];
                if ((prefix_max[i - 1] - v[j]) * (x[j] - x[th]) <= (v[th] - v[j]) * dxn) break;
            }
        }
    }
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyMatrix::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (at(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

AdjacencyMatrix visibility_adjacency(const std::vector<double>& values) {
    return visibility_adjacency(values, index_abscissae(values.size()));
}

AdjacencyMatrix visibility_adjacency(const std::vector<double>& values,
                                     const std::vector<double>& abscissae) {
    check_input(values, abscissae);
    AdjacencyMatrix adj;
    adj.n = values.size();
    adj.a.assign(adj.n * adj.n, 0);
    scan_pairs(values, abscissae, [&adj](std::size_t i, std::size_t j) { adj.set(i, j); });
    return adj;
}

std::vector<std::size_t> node_degrees(const AdjacencyMatrix& a) {
    std::vector<std::size_t> deg(a.n, 0);
    for (std::size_t i = 0; i < a.n; ++i) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < a.n; ++j) d += a.a[i * a.n + j];
        deg[i] = d;
    }
    return deg;
}

EnhancedMatrix enhanced_matrix(const AdjacencyMatrix& a, const std::vector<double>& values) {
    if (values.size() != a.n) {
        throw DimensionMismatchError("adjacency is " + std::to_string(a.n) + " nodes but series has " +
                                     std::to_string(values.size()));
    }
    EnhancedMatrix em;
    em.n = a.n;
    em.degrees = node_degrees(a);
    em.b.assign(a.n * a.n, 0.0);
    for (std::size_t i = 0; i < a.n; ++i) {
        const double deg = static_cast<double>(em.degrees[i]);
        for (std::size_t j = 0; j < a.n; ++j) {
            if (a.at(i, j)) em.b[i * a.n + j] = values[j] / deg;
        }
    }
    return em;
}

ZipSeries dvs_compress(const EnhancedMatrix& b) {
    ZipSeries zs;
    zs.z.assign(b.n, 0.0);
    for (std::size_t i = 0; i < b.n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < b.n; ++j) sum += b.b[i * b.n + j];
        zs.z[i] = sum;
    }
    return zs;
}

ZipSeries dvs_transform(const std::vector<double>& values) {
    return dvs_transform(values, index_abscissae(values.size()));
}

ZipSeries dvs_transform(const std::vector<double>& values, const std::vector<double>& abscissae) {
    check_input(values, abscissae);
    const std::size_t n = values.size();
    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> cnt(n, 0);
    scan_pairs(values, abscissae, [&](std::size_t i, std::size_t j) {
        sum[i] += values[j];
        sum[j] += values[i];
        ++cnt[i];
        ++cnt[j];
    });
    ZipSeries zs;
    zs.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        zs.z[i] = sum[i] / static_cast<double>(cnt[i]);
    }
    return zs;
}

std::string adjacency_to_json(const AdjacencyMatrix& a) {
    nlohmann::json j;
    j["n"] = a.n;
    auto edges = nlohmann::json::array();
    for (auto [i, k] : a.edges()) edges.push_back({i, k});
    j["edges"] = std::move(edges);
    return j.dump(2);
}

std::string adjacency_to_csv(const AdjacencyMatrix& a) {
    std::string out;
    out.reserve(a.n * (2 * a.n + 1));
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = 0; j < a.n; ++j) {
            if (j > 0) out += ',';
            out += a.at(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

std::string evg_to_csv(const EnhancedMatrix& b) {
    std::string out;
    for (std::size_t i = 0; i < b.n; ++i) {
        for (std::size_t j = 0; j < b.n; ++j) {
            if (j > 0) out += ',';
            out += format_real(b.at(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string zip_to_csv(const ZipSeries& z) {
    std::string out = "index,zip\n";
    for (std::size_t i = 0; i < z.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_real(z.z[i]);
        out += '\n';
    }
    return out;
}

}  // namespace dvs
