#include "vallearn/matching.hpp"

#include <limits>

#include "vallearn/error.hpp"

namespace vallearn {

MatchingResult max_weight_bipartite_matching(const std::vector<std::vector<double>>& weights) {
    const std::size_t rows = weights.size();
    std::size_t cols = 0;
    for (const auto& row : weights) {
        if (cols == 0) cols = row.size();
        if (row.size() != cols) throw Error("matching: ragged weight matrix");
    }
    MatchingResult result;
    result.match.assign(rows, -1);
    if (rows == 0 || cols == 0) return result;

    // Pad to square and minimize cost = -weight; pad entries cost 0, which
    // plays the role of "leave unmatched" because weights are nonnegative.
    const std::size_t s = std::max(rows, cols);
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](std::size_t r, std::size_t c) -> double {
        if (r < rows && c < cols) return -weights[r][c];
        return 0.0;
    };

    // Shortest augmenting paths with potentials (1-indexed scratch arrays).
    std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0);
    std::vector<std::size_t> p(s + 1, 0), way(s + 1, 0);
    for (std::size_t i = 1; i <= s; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(s + 1, inf);
        std::vector<char> used(s + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= s; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= s; ++j) {
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
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    for (std::size_t j = 1; j <= s; ++j) {
        std::size_t i = p[j];
        if (i == 0 || i > rows || j > cols) continue;
        double w = weights[i - 1][j - 1];
        if (w > 0.0) {
            result.match[i - 1] = static_cast<int>(j - 1);
            result.total += w;
        }
    }
    return result;
}

}  // namespace vallearn
