// SPDX-License-Identifier: Apache-2.0
#include "vassoc/assignment.hpp"

#include "vassoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vassoc {

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(Errc::dimension_mismatch, "cosine of vectors with different lengths");
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double assignment_total(const AffinityMatrix& scores, std::span<const MatchPair> pairs) {
    double total = 0.0;
    for (const auto& p : pairs) {
        total += scores.at(p.row, p.col);
    }
    return total;
}

std::vector<MatchPair> hungarian(const AffinityMatrix& scores) {
    if (scores.rows == 0 || scores.cols == 0) {
        return {};
    }
    double top = -std::numeric_limits<double>::infinity();
    for (double s : scores.values) {
        if (!std::isfinite(s)) {
            throw Error(Errc::invalid_argument, "assignment scores must be finite");
        }
        top = std::max(top, s);
    }

    // Maximisation as minimisation of (top - score) on a zero-padded square matrix.
    const std::size_t n = std::max(scores.rows, scores.cols);
    std::vector<double> cost(n * n, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < scores.rows; ++i) {
        for (std::size_t j = 0; j < scores.cols; ++j) {
            cost[i * n + j] = top - scores.at(i, j);
            scale = std::max(scale, cost[i * n + j]);
        }
    }

    // Shortest augmenting path with potentials, 1-based with a virtual column 0.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> col_of_row(n), row_of_col(n);
    for (std::size_t j = 1; j <= n; ++j) {
        row_of_col[j - 1] = p[j] - 1;
        col_of_row[p[j] - 1] = j - 1;
    }

    // Every optimal assignment lives on the zero-reduced-cost edges of an
    // optimal dual, so the lexicographic tie-break only searches those.
    const double eps = 1e-9 * (1.0 + scale);
    auto tight = [&](std::size_t i, std::size_t j) {
        return cost[i * n + j] - u[i + 1] - v[j + 1] <= eps;
    };

    std::vector<char> locked(n, 0);
    std::vector<char> visited(n, 0);
    for (std::size_t i = 0; i < scores.rows; ++i) {
        const std::size_t target = col_of_row[i];
        for (std::size_t c = 0; c < target; ++c) {
            if (!tight(i, c) || locked[row_of_col[c]]) {
                continue;
            }
            std::fill(visited.begin(), visited.end(), 0);
            // Move the current owner of `c` along an alternating path that
            // ends by freeing `target` for it.
            std::function<bool(std::size_t)> reroute = [&](std::size_t r) -> bool {
                for (std::size_t x = 0; x < n; ++x) {
                    if (visited[x] || x == c || !tight(r, x)) {
                        continue;
                    }
                    visited[x] = 1;
                    if (x != target) {
                        const std::size_t owner = row_of_col[x];
                        if (locked[owner] || owner == i || !reroute(owner)) {
                            continue;
                        }
                    }
                    col_of_row[r] = x;
                    row_of_col[x] = r;
                    return true;
                }
                return false;
            };
            if (reroute(row_of_col[c])) {
                col_of_row[i] = c;
                row_of_col[c] = i;
                break;
            }
        }
        locked[i] = 1;
    }

    std::vector<MatchPair> out;
    for (std::size_t i = 0; i < scores.rows; ++i) {
        if (col_of_row[i] < scores.cols) {
            out.push_back({i, col_of_row[i]});
        }
    }
    return out;
}

} // namespace vassoc
