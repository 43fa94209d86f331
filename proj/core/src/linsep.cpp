#include "vallearn/linsep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <map>

#include "vallearn/error.hpp"

namespace vallearn {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kStallTol = 1e-6;      // window gain below this counts as creep
constexpr std::size_t kCreepWindows = 8;  // creeping windows tolerated before a rebuild
constexpr std::size_t kStaleLimit = 50;   // stale windows before accepting the incumbent
constexpr std::size_t kMaxPivots = 1000000;
constexpr std::size_t kStallWindow = 100;   // pivots per objective-progress check
constexpr std::size_t kRefreshEvery = 4096; // routine tableau rebuild period

// Dense tableau simplex over rows of  (transformed A | rhs)  with an
// explicit reduced-cost row.  Columns: structural, then slacks, then
// artificials for rows whose rhs started negative.
class Simplex {
public:
    Simplex(const std::vector<double>& objective, const std::vector<LpConstraint>& constraints)
        : nvars_(objective.size()), nrows_(constraints.size()) {
        nslack_ = nrows_;
        std::vector<std::size_t> artificial_rows;
        for (std::size_t i = 0; i < nrows_; ++i)
            if (constraints[i].bound < 0.0) artificial_rows.push_back(i);
        nart_ = artificial_rows.size();
        ncols_ = nvars_ + nslack_ + nart_;

        tableau_.assign(nrows_, std::vector<double>(ncols_ + 1, 0.0));
        basis_.resize(nrows_);
        std::size_t art = 0;
        for (std::size_t i = 0; i < nrows_; ++i) {
            const auto& c = constraints[i];
            if (c.coeffs.size() != nvars_)
                throw Error("lp_maximize: constraint " + std::to_string(i) + " has " +
                            std::to_string(c.coeffs.size()) + " coefficients, expected " +
                            std::to_string(nvars_));
            const double sign = c.bound < 0.0 ? -1.0 : 1.0;
            auto& row = tableau_[i];
            for (std::size_t j = 0; j < nvars_; ++j) row[j] = sign * c.coeffs[j];
            row[nvars_ + i] = sign;  // slack
            row[ncols_] = sign * c.bound;
            if (sign < 0.0) {
                basis_[i] = nvars_ + nslack_ + art;
                row[basis_[i]] = 1.0;
                ++art;
            } else {
                basis_[i] = nvars_ + i;
            }
        }
        dead_.assign(ncols_, 0);
        objective_ = objective;
        orig_ = tableau_;
    }

    LpStatus solve() {
        if (nart_ > 0) {
            // Phase I: drive the artificial variables to zero.
            std::vector<double> phase1(ncols_, 0.0);
            for (std::size_t j = nvars_ + nslack_; j < ncols_; ++j) phase1[j] = -1.0;
            load_costs(phase1);
            if (run() == LpStatus::Unbounded)
                throw Error("lp_maximize: phase-1 objective unbounded");
            if (objective_value_ < -kPivotTol) {
                // Rebuild before concluding: a stale tableau can under-
                // report the phase-1 optimum and fake infeasibility.
                refactorize();
                if (run() == LpStatus::Unbounded)
                    throw Error("lp_maximize: phase-1 objective unbounded");
                if (objective_value_ < -kPivotTol) return LpStatus::Infeasible;
            }
            for (std::size_t j = nvars_ + nslack_; j < ncols_; ++j) dead_[j] = 1;
            for (std::size_t i = 0; i < nrows_; ++i) {
                if (basis_[i] < nvars_ + nslack_) continue;
                if (!pivot_out_artificial(i)) {
                    // Redundant row: every live coefficient is zero.
                    for (std::size_t j = 0; j <= ncols_; ++j) tableau_[i][j] = 0.0;
                    redundant_.push_back(i);
                }
            }
        }
        std::vector<double> full(ncols_, 0.0);
        for (std::size_t j = 0; j < nvars_; ++j) full[j] = objective_[j];
        load_costs(full);
        return run();
    }

    std::vector<double> solution() const {
        std::vector<double> x(nvars_, 0.0);
        for (std::size_t i = 0; i < nrows_; ++i)
            if (basis_[i] < nvars_) x[basis_[i]] = tableau_[i][ncols_];
        return x;
    }

    // Multiplier of original constraint i = negated reduced cost of its
    // slack column (row re-signing cancels in the derivation).
    std::vector<double> duals() const {
        std::vector<double> y(nrows_, 0.0);
        for (std::size_t i = 0; i < nrows_; ++i) {
            if (std::find(redundant_.begin(), redundant_.end(), i) != redundant_.end()) continue;
            y[i] = -cost_row_[nvars_ + i];
        }
        return y;
    }

    double objective_value() const { return objective_value_; }

private:
    void load_costs(const std::vector<double>& costs) {
        if (&costs != &loaded_costs_) loaded_costs_ = costs;
        cost_row_.assign(ncols_ + 1, 0.0);
        for (std::size_t j = 0; j < ncols_; ++j) cost_row_[j] = costs[j];
        objective_value_ = 0.0;
        for (std::size_t i = 0; i < nrows_; ++i) {
            const double cb = costs[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) cost_row_[j] -= cb * tableau_[i][j];
        }
        objective_value_ = -cost_row_[ncols_];
        cost_row_[ncols_] = 0.0;
    }

    LpStatus run() {
        // Dantzig's rule (largest reduced cost) with safeguards for long
        // runs.  Accumulated pivot roundoff can leave phantom positive
        // reduced costs that make the iteration orbit the optimum, so the
        // tableau is rebuilt from the original data whenever a window of
        // pivots leaves the objective frozen; after a rebuild, a scan
        // finding no positive reduced cost is a clean optimality
        // certificate.  An orbit can also creep -- per-window gains above
        // pivot tolerance but far too small to ever finish -- so a run of
        // creeping windows forces a rebuild as well.  Either symptom, when
        // repeated, switches the entering rule to Bland's (first eligible
        // column), which cannot cycle; only material progress switches it
        // back, otherwise creep would flip the rule forever.
        bool bland = false;
        bool unbounded_retry = false;
        std::size_t frozen_windows = 0;
        std::size_t creep_windows = 0;
        std::size_t stale_windows = 0;
        double window_obj = objective_value_;
        for (std::size_t step = 0; step < kMaxPivots; ++step) {
            if (step % kStallWindow == kStallWindow - 1) {
                const double gain = objective_value_ - window_obj;
                const double scale = 1.0 + std::fabs(window_obj);
                if (gain <= kStallTol * scale) {
                    // A long treadmill on rebuilt data means the remaining
                    // reduced costs are below what double precision can
                    // certify on a degenerate optimal face; take the
                    // incumbent.  Callers re-check the solution they build
                    // from it, so the cost of accepting here is bounded.
                    if (++stale_windows >= kStaleLimit) return LpStatus::Optimal;
                } else {
                    stale_windows = 0;
                }
                if (gain <= kPivotTol * scale) {
                    refactorize();
                    creep_windows = 0;
                    if (++frozen_windows >= 2) bland = true;
                } else if (gain <= kStallTol * scale) {
                    frozen_windows = 0;
                    if (++creep_windows >= kCreepWindows) {
                        refactorize();
                        creep_windows = 0;
                        bland = true;
                    }
                } else {
                    frozen_windows = 0;
                    creep_windows = 0;
                    bland = false;
                }
                window_obj = objective_value_;
            } else if (step % kRefreshEvery == kRefreshEvery - 1) {
                refactorize();
            }

            std::size_t enter = ncols_;
            if (bland) {
                for (std::size_t j = 0; j < ncols_; ++j) {
                    if (!dead_[j] && cost_row_[j] > kPivotTol) {
                        enter = j;
                        break;
                    }
                }
            } else {
                double best_cost = kPivotTol;
                for (std::size_t j = 0; j < ncols_; ++j) {
                    if (!dead_[j] && cost_row_[j] > best_cost) {
                        best_cost = cost_row_[j];
                        enter = j;
                    }
                }
            }
            if (enter == ncols_) return LpStatus::Optimal;

            std::size_t leave = nrows_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < nrows_; ++i) {
                const double a = tableau_[i][enter];
                if (a <= kPivotTol) continue;
                const double ratio = tableau_[i][ncols_] / a;
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol &&
                     (leave == nrows_ || basis_[i] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == nrows_) {
                // An all-nonpositive pivot column in a stale tableau can be
                // pure roundoff; trust the verdict only on rebuilt data.
                if (unbounded_retry) return LpStatus::Unbounded;
                unbounded_retry = true;
                refactorize();
                continue;
            }
            unbounded_retry = false;
            pivot(leave, enter);
        }
        throw Error("lp_maximize: pivot limit exceeded");
    }

    // Rebuild the tableau rows as basis^{-1} applied to the original system,
    // purging the roundoff accumulated by pivoting, and reload the reduced-
    // cost row.  Leaves the tableau untouched when the basis matrix cannot
    // be inverted cleanly or a rebuilt basic value comes out meaningfully
    // negative (both signal worse corruption than the rebuild could fix).
    bool refactorize() {
        std::vector<std::size_t> live;
        live.reserve(nrows_);
        for (std::size_t i = 0; i < nrows_; ++i)
            if (std::find(redundant_.begin(), redundant_.end(), i) == redundant_.end())
                live.push_back(i);
        const std::size_t R = live.size();
        if (R == 0) return true;
        const std::size_t width = R + ncols_ + 1;
        std::vector<std::vector<double>> aug(R, std::vector<double>(width));
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t c = 0; c < R; ++c) aug[r][c] = orig_[live[r]][basis_[live[c]]];
            for (std::size_t j = 0; j <= ncols_; ++j) aug[r][R + j] = orig_[live[r]][j];
        }
        for (std::size_t col = 0; col < R; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < R; ++r)
                if (std::fabs(aug[r][col]) > std::fabs(aug[piv][col])) piv = r;
            if (std::fabs(aug[piv][col]) < 1e-12) return false;
            std::swap(aug[piv], aug[col]);
            const double inv = 1.0 / aug[col][col];
            for (std::size_t j = col; j < width; ++j) aug[col][j] *= inv;
            for (std::size_t r = 0; r < R; ++r) {
                if (r == col) continue;
                const double f = aug[r][col];
                if (f == 0.0) continue;
                for (std::size_t j = col; j < width; ++j) aug[r][j] -= f * aug[col][j];
            }
        }
        for (std::size_t r = 0; r < R; ++r) {
            double rhs = aug[r][R + ncols_];
            if (rhs < 0.0) {
                if (rhs < -1e-9) return false;
                rhs = 0.0;
            }
            aug[r][R + ncols_] = rhs;
        }
        for (std::size_t r = 0; r < R; ++r) {
            auto& row = tableau_[live[r]];
            for (std::size_t j = 0; j <= ncols_; ++j) row[j] = aug[r][R + j];
        }
        // Pin the basis columns to an exact identity.
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t c = 0; c < R; ++c)
                tableau_[live[r]][basis_[live[c]]] = (r == c) ? 1.0 : 0.0;
        load_costs(loaded_costs_);
        return true;
    }

    bool pivot_out_artificial(std::size_t row) {
        for (std::size_t j = 0; j < nvars_ + nslack_; ++j) {
            if (!dead_[j] && std::fabs(tableau_[row][j]) > kPivotTol) {
                pivot(row, j);
                return true;
            }
        }
        return false;
    }

    void pivot(std::size_t row, std::size_t col) {
        auto& prow = tableau_[row];
        const double inv = 1.0 / prow[col];
        for (std::size_t j = 0; j <= ncols_; ++j) prow[j] *= inv;
        prow[col] = 1.0;
        for (std::size_t i = 0; i < nrows_; ++i) {
            if (i == row) continue;
            const double factor = tableau_[i][col];
            if (factor == 0.0) continue;
            auto& target = tableau_[i];
            for (std::size_t j = 0; j <= ncols_; ++j) target[j] -= factor * prow[j];
            target[col] = 0.0;
        }
        const double cfactor = cost_row_[col];
        if (cfactor != 0.0) {
            objective_value_ += cfactor * prow[ncols_];
            for (std::size_t j = 0; j <= ncols_; ++j) cost_row_[j] -= cfactor * prow[j];
            cost_row_[col] = 0.0;
        }
        basis_[row] = col;
    }

    std::size_t nvars_, nrows_, nslack_ = 0, nart_ = 0, ncols_ = 0;
    std::vector<std::vector<double>> tableau_;
    std::vector<std::vector<double>> orig_;  // pristine rows for refactorization
    std::vector<double> cost_row_;
    std::vector<double> loaded_costs_;
    std::vector<double> objective_;
    std::vector<std::size_t> basis_;
    std::vector<char> dead_;
    std::vector<std::size_t> redundant_;
    double objective_value_ = 0.0;
};

}  // namespace

LpResult lp_maximize(const std::vector<double>& objective,
                     const std::vector<LpConstraint>& constraints, bool nonneg) {
    if (!nonneg) {
        // Split x = x+ - x- and recurse on the nonnegative program.
        std::vector<double> obj2;
        obj2.reserve(objective.size() * 2);
        for (double c : objective) {
            obj2.push_back(c);
            obj2.push_back(-c);
        }
        std::vector<LpConstraint> cons2(constraints.size());
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            cons2[i].bound = constraints[i].bound;
            cons2[i].coeffs.reserve(objective.size() * 2);
            for (double a : constraints[i].coeffs) {
                cons2[i].coeffs.push_back(a);
                cons2[i].coeffs.push_back(-a);
            }
        }
        LpResult split = lp_maximize(obj2, cons2, true);
        if (split.status == LpStatus::Optimal) {
            std::vector<double> x(objective.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = split.x[2 * j] - split.x[2 * j + 1];
            split.x = std::move(x);
        }
        return split;
    }

    Simplex simplex(objective, constraints);
    LpResult result;
    result.status = simplex.solve();
    if (result.status == LpStatus::Optimal) {
        result.x = simplex.solution();
        result.value = 0.0;
        for (std::size_t j = 0; j < objective.size(); ++j)
            result.value += objective[j] * result.x[j];
        result.duals = simplex.duals();
    }
    return result;
}

SeparatorSolution solve_consistent_separator(const SeparatorProblem& problem) {
    const std::size_t d = problem.dim;
    for (const auto& pt : problem.points) {
        if (pt.x.size() != d + 1)
            throw Error("separator: point has " + std::to_string(pt.x.size()) +
                        " coordinates, expected dim+1 = " + std::to_string(d + 1));
        if (pt.label != 1 && pt.label != -1)
            throw Error("separator: label must be +1 or -1");
    }
    std::vector<char> zeroed(d, 0);
    for (std::size_t j : problem.zero_coords) {
        if (j >= d) throw Error("zero_coords: index " + std::to_string(j) + " out of range");
        zeroed[j] = 1;
    }

    SeparatorSolution sol;
    sol.w.assign(d, 0.0);
    sol.z = 1.0;
    if (problem.points.empty()) {
        sol.feasible = true;
        return sol;
    }

    // Deduplicate identical labeled points.
    std::map<std::pair<std::vector<double>, int>, char> seen;
    std::vector<const LabeledPoint*> pts;
    for (const auto& pt : problem.points)
        if (seen.emplace(std::make_pair(pt.x, pt.label), 1).second) pts.push_back(&pt);
    const std::size_t m = pts.size();

    // Group active feature columns that look identical across all points;
    // one LP variable per group stands for the group's total weight.
    std::map<std::vector<double>, std::vector<std::size_t>> groups_by_col;
    for (std::size_t j = 0; j < d; ++j) {
        if (zeroed[j]) continue;
        std::vector<double> col(m);
        bool nonzero = false;
        for (std::size_t i = 0; i < m; ++i) {
            col[i] = pts[i]->x[j];
            nonzero = nonzero || col[i] != 0.0;
        }
        if (nonzero) groups_by_col[std::move(col)].push_back(j);
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<double>> group_cols;
    for (auto& [col, members] : groups_by_col) {
        group_cols.push_back(col);
        groups.push_back(members);
    }
    const std::size_t G = groups.size();

    // Margin system over v = (group weights, z - 1), normalized per row so
    // coefficient magnitudes stay near 1:
    //   label * (w·x - (1 + z') * t) >= row_scale >= 1.
    std::vector<std::vector<double>> C(m, std::vector<double>(G + 1));
    std::vector<double> r(m);
    std::vector<double> row_scale(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double label = pts[i]->label;
        const double t = pts[i]->x[d];
        double scale = std::max(1.0, std::fabs(t));
        for (std::size_t g = 0; g < G; ++g)
            scale = std::max(scale, std::fabs(group_cols[g][i]));
        for (std::size_t g = 0; g < G; ++g) C[i][g] = label * group_cols[g][i] / scale;
        C[i][G] = -label * t / scale;
        r[i] = (1.0 + label * t) / scale;
        row_scale[i] = scale;
    }

    // Solve min sum(v_g) subject to C v >= r, v >= 0 on a working subset of
    // rows: large point lists make the one-shot tableau crawl, while the
    // rows active at the optimum are few.  Each round solves the subset
    // system (directly when it is small, through the dual otherwise) and
    // pulls in the most violated remaining rows; a subset optimum feasible
    // for every row is optimal for the full system, and an infeasible
    // subset already certifies full infeasibility.
    constexpr std::size_t kDirectRows = 600;
    constexpr std::size_t kCutBatch = 128;
    std::vector<std::size_t> active;
    std::vector<char> in_active(m, 0);
    if (m <= kDirectRows) {
        active.resize(m);
        for (std::size_t i = 0; i < m; ++i) active[i] = i;
        std::fill(in_active.begin(), in_active.end(), 1);
    } else {
        const std::size_t step = std::max<std::size_t>(1, m / 400);
        for (std::size_t i = 0; i < m; i += step) {
            active.push_back(i);
            in_active[i] = 1;
        }
    }

    // A remaining row counts as violated once its slack, mapped back to the
    // original margin scale, could threaten the 1e-7 margin check below; the
    // floor keeps the threshold above dot-product roundoff.
    auto violation = [&](std::size_t i, const std::vector<double>& v) {
        double lhs = 0.0;
        for (std::size_t q = 0; q <= G; ++q) lhs += C[i][q] * v[q];
        const double gap = r[i] - lhs;
        return gap > std::max(1e-8 / row_scale[i], 1e-12) ? gap : 0.0;
    };

    // Solving the subset system through the primal keeps every intermediate
    // iterate feasible for the subset, so even a solve that stops on a
    // degenerate optimal face hands back a usable point.
    auto solve_primal = [&](const std::vector<std::size_t>& act)
        -> std::optional<std::vector<double>> {
        std::vector<double> obj(G + 1, -1.0);
        obj[G] = 0.0;
        std::vector<LpConstraint> rows(act.size());
        for (std::size_t k = 0; k < act.size(); ++k) {
            rows[k].coeffs.resize(G + 1);
            for (std::size_t q = 0; q <= G; ++q) rows[k].coeffs[q] = -C[act[k]][q];
            rows[k].bound = -r[act[k]];
        }
        LpResult lp = lp_maximize(obj, rows, true);
        if (lp.status == LpStatus::Infeasible) return std::nullopt;
        if (lp.status != LpStatus::Optimal)
            throw Error("separator: primal LP ended in unexpected state");
        return lp.x;
    };

    std::vector<double> v;
    for (;;) {
        const std::size_t a = active.size();
        bool have_v = false;
        if (G + 1 <= a) {
            // Fewer variables than rows: the dual tableau is smaller.  Its
            // multipliers only solve the subset system when the solve ends
            // at a true optimum, so verify them and fall back to the primal
            // when they fail; an unbounded claim (= subset infeasibility) is
            // re-certified by the primal's phase 1 as well.
            std::vector<double> dual_obj(a);
            for (std::size_t k = 0; k < a; ++k) dual_obj[k] = r[active[k]];
            std::vector<LpConstraint> rows(G + 1);
            for (std::size_t q = 0; q <= G; ++q) {
                rows[q].coeffs.resize(a);
                for (std::size_t k = 0; k < a; ++k) rows[q].coeffs[k] = C[active[k]][q];
                rows[q].bound = q < G ? 1.0 : 0.0;
            }
            LpResult lp = lp_maximize(dual_obj, rows, true);
            if (lp.status == LpStatus::Optimal) {
                v = lp.duals;
                have_v = true;
                for (std::size_t k = 0; k < a && have_v; ++k)
                    if (violation(active[k], v) > 0.0) have_v = false;
            } else if (lp.status != LpStatus::Unbounded) {
                throw Error("separator: dual LP ended in unexpected state");
            }
        }
        if (!have_v) {
            std::optional<std::vector<double>> px = solve_primal(active);
            if (!px) return sol;
            v = std::move(*px);
        }
        if (a == m) break;

        std::vector<std::pair<double, std::size_t>> violated;
        for (std::size_t i = 0; i < m; ++i) {
            if (in_active[i]) continue;
            if (const double gap = violation(i, v); gap > 0.0) violated.emplace_back(gap, i);
        }
        if (violated.empty()) break;
        const std::size_t take = std::min(kCutBatch, violated.size());
        std::partial_sort(violated.begin(), violated.begin() + take, violated.end(),
                          [](const std::pair<double, std::size_t>& x,
                             const std::pair<double, std::size_t>& y) { return x.first > y.first; });
        for (std::size_t k = 0; k < take; ++k) {
            active.push_back(violated[k].second);
            in_active[violated[k].second] = 1;
        }
    }

    for (std::size_t g = 0; g < G; ++g) {
        const double share = std::max(0.0, v[g]) / static_cast<double>(groups[g].size());
        for (std::size_t j : groups[g]) sol.w[j] = share;
    }
    sol.z = 1.0 + std::max(0.0, v[G]);

    for (const auto& pt : problem.points) {
        double margin = -sol.z * pt.x[d];
        for (std::size_t j = 0; j < d; ++j) margin += sol.w[j] * pt.x[j];
        margin *= pt.label;
        if (margin < 1.0 - 1e-7)
            throw Error("separator: solver returned a separator violating its own margins");
    }
    sol.feasible = true;
    return sol;
}

}  // namespace vallearn
