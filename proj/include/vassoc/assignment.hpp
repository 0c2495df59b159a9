// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vassoc {

/// Dense rows x cols score matrix; for affinities every entry is a cosine
/// similarity in [-1, 1].
struct AffinityMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    AffinityMatrix() = default;
    AffinityMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct MatchPair {
    std::size_t row = 0;
    std::size_t col = 0;

    auto operator<=>(const MatchPair&) const = default;
};

/// Cosine similarity; zero when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// Maximum-total-score one-to-one assignment of min(rows, cols) pairs,
/// returned sorted by row. Among optimal assignments the lexicographically
/// smallest pair list is returned.
std::vector<MatchPair> hungarian(const AffinityMatrix& scores);

/// Sum of the chosen entries, accumulated in row order.
double assignment_total(const AffinityMatrix& scores, std::span<const MatchPair> pairs);

} // namespace vassoc
