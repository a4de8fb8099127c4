#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dvs {

// Boolean visibility matrix. Symmetric, zero diagonal, and every
// adjacent-in-time pair (i, i+1) is connected.
struct AdjacencyMatrix {
    std::size_t n = 0;
    std::vector<std::uint8_t> a;  // row-major n*n

    bool at(std::size_t i, std::size_t j) const { return a[i * n + j] != 0; }
    void set(std::size_t i, std::size_t j) { a[i * n + j] = 1; a[j * n + i] = 1; }

    // edges as (i, j) with i < j, lexicographic
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
};

// Value-weighted, degree-normalized visibility matrix. Asymmetric in
// general: entry (i, j) carries the value seen at j scaled by 1/degree(i).
struct EnhancedMatrix {
    std::size_t n = 0;
    std::vector<double> b;  // row-major n*n
    std::vector<std::size_t> degrees;

    double at(std::size_t i, std::size_t j) const { return b[i * n + j]; }
};

// Row-compressed enhanced matrix: one entry per node, the mean of the
// values that node can see.
struct ZipSeries {
    std::vector<double> z;

    std::size_t size() const { return z.size(); }
};

// Natural visibility: i sees j iff every intermediate point lies strictly
// below the chord from i to j; a point exactly on the chord blocks.
// O(n^2) worst case, single left scan with a running slope maximum per
// right endpoint. Abscissae default to the integer index; pass times for
// irregular spacing.
AdjacencyMatrix visibility_adjacency(const std::vector<double>& values);
AdjacencyMatrix visibility_adjacency(const std::vector<double>& values,
                                     const std::vector<double>& abscissae);

std::vector<std::size_t> node_degrees(const AdjacencyMatrix& a);

EnhancedMatrix enhanced_matrix(const AdjacencyMatrix& a, const std::vector<double>& values);

ZipSeries dvs_compress(const EnhancedMatrix& b);

// Full transform without materializing the n*n matrices: each output entry
// is the mean of the values visible from that node. Identical result to
// dvs_compress(enhanced_matrix(visibility_adjacency(values), values)) up
// to summation-order rounding.
ZipSeries dvs_transform(const std::vector<double>& values);
ZipSeries dvs_transform(const std::vector<double>& values, const std::vector<double>& abscissae);

std::string adjacency_to_json(const AdjacencyMatrix& a);
std::string adjacency_to_csv(const AdjacencyMatrix& a);
std::string evg_to_csv(const EnhancedMatrix& b);
std::string zip_to_csv(const ZipSeries& z);

}  // namespace dvs
