// Copyright 2026 The qmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMM_SNAKE_HPP
#define QMM_SNAKE_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qmm/constraints.hpp"
#include "qmm/merge.hpp"

namespace qmm {

/// Links of a snake; only neighbours may overlap.
struct SnakeSpec {
    std::vector<DensityOperator> links;
};

inline void check_support_condition(const SnakeSpec &spec) {
    const auto &l = spec.links;
    for (size_t i = 0; i < l.size(); i++) {
        for (size_t j = i + 2; j < l.size(); j++) {
            if (!l[i].region().disjoint(l[j].region())) {
                throw Error(ErrorCode::SupportConditionViolated,
                            "links " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            }
        }
    }
}

/// ((rho_1 |> rho_2) |> rho_3) ... , after certifying each neighbouring pair with max_merge.
inline MergeOutcome build_snake(const SnakeSpec &spec, const Tolerances &tol = {}, bool certify = true) {
    if (spec.links.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty snake");
    }
    check_support_condition(spec);
    const auto &l = spec.links;
    if (certify) {
        for (size_t i = 0; i + 1 < l.size(); i++) {
            MergeOutcome pair = max_merge(l[i], l[i + 1], tol);
            if (pair.is_nil()) {
                return pair;
            }
        }
    }
    MergeOutcome state(l.front());
    for (size_t i = 1; i < l.size(); i++) {
        state = right_merge(state, MergeOutcome(l[i]), tol);
    }
    return state;
}

/// ((rho_N |> rho_{N-1}) |> ...) |> rho_1.
inline MergeOutcome build_snake_reversed(const SnakeSpec &spec, const Tolerances &tol = {}) {
    check_support_condition(spec);
    MergeOutcome state(spec.links.back());
    for (size_t i = spec.links.size() - 1; i-- > 0;) {
        state = right_merge(state, MergeOutcome(spec.links[i]), tol);
    }
    return state;
}

/// sum_i S(rho_i) - sum_i S(rho_i restricted to the overlap with rho_{i+1}).
inline double snake_entropy_closed_form(const SnakeSpec &spec) {
    double s = 0;
    const auto &l = spec.links;
    for (size_t i = 0; i < l.size(); i++) {
        s += von_neumann_entropy(l[i]);
        if (i + 1 < l.size()) {
            Region common = l[i].region() & l[i + 1].region();
            if (!common.empty()) {
                s -= von_neumann_entropy(reduce(l[i], common));
            }
        }
    }
    return s;
}

inline void require_columns(int n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "need at least 2 columns, got " + std::to_string(n));
    }
}

/// 2x1 marginals anchored at (x, y), x = 2..n.
inline SnakeSpec level1_links(const MarginalSet &ms, int n, int y) {
    require_columns(n);
    SnakeSpec spec;
    for (int x = 2; x <= n; x++) {
        spec.links.push_back(marginal_of(ms, anchor(shapes::s21(), {x, y})));
    }
    return spec;
}

/// 2x2 marginals anchored at (x, y), x = 2..n; the strip covers rows y and y+1.
inline SnakeSpec level2_links(const MarginalSet &ms, int n, int y) {
    require_columns(n);
    SnakeSpec spec;
    for (int x = 2; x <= n; x++) {
        spec.links.push_back(marginal_of(ms, anchor(shapes::s22(), {x, y})));
    }
    return spec;
}

inline MergeOutcome level1_snake(const MarginalSet &ms, int n, int y, const Tolerances &tol = {}) {
    return build_snake(level1_links(ms, n, y), tol);
}

inline MergeOutcome level2_snake(const MarginalSet &ms, int n, int y, const Tolerances &tol = {}) {
    return build_snake(level2_links(ms, n, y), tol);
}

/// Adds row y+1 by right-merging the 2x2 marginals anchored at (2,y), ..., (n,y).
inline MergeOutcome extend_up(const MergeOutcome &state, const MarginalSet &ms, int y, int n, const Tolerances &tol = {}) {
    if (state.is_nil()) {
        return state;
    }
    if (state->region().max_y() != y) {
        throw Error(ErrorCode::PreconditionViolated, "top row of the state is not row " + std::to_string(y));
    }
    MergeOutcome out = state;
    for (int x = 2; x <= n; x++) {
        out = right_merge(out, MergeOutcome(marginal_of(ms, anchor(shapes::s22(), {x, y}))), tol);
    }
    return out;
}

/// Adds row y-1 by right-merging the 2x2 marginals anchored at (n,y-1), ..., (2,y-1).
inline MergeOutcome extend_down(const MergeOutcome &state, const MarginalSet &ms, int y, int n,
                                const Tolerances &tol = {}) {
    if (state.is_nil()) {
        return state;
    }
    if (state->region().min_y() != y) {
        throw Error(ErrorCode::PreconditionViolated, "bottom row of the state is not row " + std::to_string(y));
    }
    MergeOutcome out = state;
    for (int x = n; x >= 2; x--) {
        out = right_merge(out, MergeOutcome(marginal_of(ms, anchor(shapes::s22(), {x, y - 1}))), tol);
    }
    return out;
}

inline double distance_or_inf(const MergeOutcome &a, const MergeOutcome &b) {
    if (a.is_nil() || b.is_nil()) {
        return std::numeric_limits<double>::infinity();
    }
    return trace_distance(*a, *b);
}

inline MergeOutcome trace_out(const MergeOutcome &a, const Region &drop) {
    if (a.is_nil()) {
        return a;
    }
    return partial_trace(*a, drop);
}

/// Row reductions of a level-2 snake are level-1 snakes, and extending a level-1 snake
/// up or down gives the level-2 snake.
inline Report check_level_maps(const MarginalSet &ms, int n, double tol, const Tolerances &t = {}) {
    const int y = 1;
    MergeOutcome l2 = level2_snake(ms, n, y, t);
    MergeOutcome l1_bottom = level1_snake(ms, n, y, t);
    MergeOutcome l1_top = level1_snake(ms, n, y + 1, t);
    Report rep;
    rep.add(CheckRecord::judge("level2_trace_bottom_is_level1_top",
                               distance_or_inf(trace_out(l2, window(1, y, n, 1)), l1_top), tol));
    rep.add(CheckRecord::judge("level2_trace_top_is_level1_bottom",
                               distance_or_inf(trace_out(l2, window(1, y + 1, n, 1)), l1_bottom), tol));
    rep.add(CheckRecord::judge("extend_up_level1_is_level2", distance_or_inf(extend_up(l1_bottom, ms, y, n, t), l2), tol));
    rep.add(CheckRecord::judge("extend_down_level1_is_level2",
                               distance_or_inf(extend_down(l1_top, ms, y + 1, n, t), l2), tol));
    return rep;
}

/// Extending the level-2 snake at row 1 upward equals extending the one at row 2 downward.
inline Report check_twist(const MarginalSet &ms, int n, double tol, const Tolerances &t = {}) {
    const int y = 2;
    MergeOutcome up = extend_up(level2_snake(ms, n, y - 1, t), ms, y, n, t);
    MergeOutcome down = extend_down(level2_snake(ms, n, y, t), ms, y, n, t);
    Report rep;
    rep.add(CheckRecord::judge("twist", distance_or_inf(up, down), tol));
    return rep;
}

/// Overlapping level-2 snakes max-merge into their right-merge.
inline Report check_row_merge(const MarginalSet &ms, int n, double tol, const Tolerances &t = {}) {
    MergeOutcome a = level2_snake(ms, n, 1, t);
    MergeOutcome b = level2_snake(ms, n, 2, t);
    MergeOutcome mx = max_merge(a, b, t);
    Report rep;
    rep.add(CheckRecord::judge("row_merge", distance_or_inf(mx, right_merge(a, b, t)), tol,
                               mx.is_nil() ? std::string("max_merge nil: ") + nil_reason_name(mx.reason()) : ""));
    return rep;
}

enum class Provenance { SnakeOfSnakes, Sequential };

inline const char *provenance_name(Provenance p) {
    return p == Provenance::SnakeOfSnakes ? "snake-of-snakes" : "sequential";
}

struct GlobalState {
    MergeOutcome state;
    int n_cols;
    int n_rows;
    Provenance provenance;

    bool ok() const {
        return !state.is_nil();
    }
};

inline void require_global_size(const MarginalSet &ms, int n, int m) {
    if (n < 2 || m < 2) {
        throw Error(ErrorCode::InvalidArgument, "N and M must be at least 2");
    }
    check_size(ms.site_dimension(), (size_t)n * (size_t)m);
}

/// The snake of level-2 snakes at rows 1..m-1, on columns 1..n and rows 1..m.
inline GlobalState build_global(const MarginalSet &ms, int n, int m, const Tolerances &tol = {}, bool certify = true) {
    require_global_size(ms, n, m);
    std::vector<DensityOperator> rows;
    for (int y = 1; y <= m - 1; y++) {
        MergeOutcome s = level2_snake(ms, n, y, tol);
        if (s.is_nil()) {
            return {s, n, m, Provenance::SnakeOfSnakes};
        }
        rows.push_back(*s);
    }
    return {build_snake({rows}, tol, certify), n, m, Provenance::SnakeOfSnakes};
}

/// Row-by-row upward extension of the level-1 snake at row 1.
inline GlobalState build_global_sequential(const MarginalSet &ms, int n, int m, const Tolerances &tol = {}) {
    require_global_size(ms, n, m);
    MergeOutcome s = level1_snake(ms, n, 1, tol);
    for (int y = 1; y <= m - 1; y++) {
        s = extend_up(s, ms, y, n, tol);
    }
    return {s, n, m, Provenance::Sequential};
}

/// Largest trace distance between a translated 2x2 reduction of the state and m22.
inline double global_consistency(const GlobalState &g, const MarginalSet &ms) {
    if (!g.ok()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0;
    for (int y = 1; y <= g.n_rows - 1; y++) {
        for (int x = 2; x <= g.n_cols; x++) {
            Region r = anchor(shapes::s22(), {x, y});
            worst = std::max(worst, trace_distance(reduce(*g.state, r), marginal_of(ms, r)));
        }
    }
    return worst;
}

/// (N-1)(M-1)S(2x2) + (N-2)(M-2)S(1x1) - (N-2)(M-1)S(1x2) - (N-1)(M-2)S(2x1),
/// with entropies read off `cluster` (any operator containing a 2x2 block).
inline double max_entropy(const DensityOperator &cluster, int n, int m) {
    if (n < 2 || m < 2) {
        throw Error(ErrorCode::InvalidArgument, "N and M must be at least 2");
    }
    double s22 = entropy_in_cluster(cluster, shapes::s22());
    double s11 = entropy_in_cluster(cluster, shapes::s11());
    double s12 = entropy_in_cluster(cluster, shapes::s12());
    double s21 = entropy_in_cluster(cluster, shapes::s21());
    return (n - 1.0) * (m - 1.0) * s22 + (n - 2.0) * (m - 2.0) * s11 - (n - 2.0) * (m - 1.0) * s12 -
           (n - 1.0) * (m - 2.0) * s21;
}

inline double max_entropy(const MarginalSet &ms, int n, int m) {
    return max_entropy(ms.m33(), n, m);
}

/// S(2x2) - S(L-tromino), bits per site.
inline double max_entropy_density(const DensityOperator &cluster) {
    return entropy_in_cluster(cluster, shapes::s22()) - entropy_in_cluster(cluster, shapes::l_tromino());
}

inline double max_entropy_density(const MarginalSet &ms) {
    return max_entropy_density(ms.m33());
}

/// f <= Tr(h m22) - s ln2 / beta, with s the maximum entropy density.
inline double free_energy_upper_bound(const DensityOperator &m22, double density, const Matrix &h, double beta,
                                      double tol_herm = 1e-10) {
    if (!(beta > 0)) {
        throw Error(ErrorCode::NonpositiveBeta, "beta must be positive");
    }
    if (h.rows() != m22.matrix().rows() || h.cols() != h.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "h must act on the 2x2 cluster");
    }
    double herm = h.rows() ? (h - h.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (herm > tol_herm) {
        throw Error(ErrorCode::NotHermitian, "h is not Hermitian", herm);
    }
    double energy = (h * m22.matrix()).trace().real();
    return energy - density * std::numbers::ln2 / beta;
}

inline double free_energy_upper_bound(const MarginalSet &ms, const Matrix &h, double beta, double tol_herm = 1e-10) {
    return free_energy_upper_bound(ms.m22(), max_entropy_density(ms), h, beta, tol_herm);
}

/// Equality case of the row-by-row SSA bound
/// S(rows 1..k+1) <= S(rows 1..k) + (N-1)S(2x2) - (N-2)S(L) - S(2x1).
inline Report ssa_chain_check(const GlobalState &g, const MarginalSet &ms, double tol) {
    Report rep;
    if (!g.ok()) {
        rep.add(CheckRecord::judge("ssa_chain", std::numeric_limits<double>::infinity(), tol, "nil state"));
        return rep;
    }
    const int n = g.n_cols;
    const Region &full = g.state->region();
    const int y0 = full.min_y();
    double step = (n - 1.0) * entropy_of_shape(ms, shapes::s22()) - (n - 2.0) * entropy_of_shape(ms, shapes::l_tromino()) -
                  entropy_of_shape(ms, shapes::s21());
    double prev = von_neumann_entropy(reduce(*g.state, window(full.min_x(), y0, n, 1)));
    for (int k = 1; k < g.n_rows; k++) {
        Region rows = window(full.min_x(), y0, n, k + 1);
        double cur = rows == full ? von_neumann_entropy(*g.state) : von_neumann_entropy(reduce(*g.state, rows));
        rep.add(CheckRecord::judge("ssa_chain_step_" + std::to_string(k), std::abs(cur - (prev + step)), tol));
        prev = cur;
    }
    return rep;
}

}  // namespace qmm

#endif
