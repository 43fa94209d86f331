#pragma once

#include <cstdint>
#include <vector>

namespace vallearn {

struct MatchingResult {
    double total = 0.0;
    // match[r] = column matched to row r, or -1 when the row is left out
    // (matched to a zero-weight pad slot).
    std::vector<int> match;
};

// Maximum-weight bipartite matching with nonnegative weights; rows and
// columns may stay unmatched.  weights[r][c] is the gain of pairing row r
// with column c.  Augmenting-path algorithm with dual potentials on the
// zero-padded square matrix; only additions and comparisons touch the
// weights, so integer inputs are handled exactly.
MatchingResult max_weight_bipartite_matching(const std::vector<std::vector<double>>& weights);

}  // namespace vallearn
