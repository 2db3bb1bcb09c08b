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

#ifndef QMM_VERIFY_HPP
#define QMM_VERIFY_HPP

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qmm/constraints.hpp"
#include "qmm/merge.hpp"

namespace qmm {

/// Expression over marginals: marginal(region), reduce, right_merge, max_merge, tensor.
struct Expr {
    enum class Op { Marginal, Reduce, RightMerge, MaxMerge, Tensor };
    Op op;
    Region region;  // Marginal and Reduce
    std::vector<std::shared_ptr<const Expr>> args;

    /// Support of the value.
    Region support() const {
        switch (op) {
            case Op::Marginal:
            case Op::Reduce:
                return region;
            default:
                return args[0]->support() | args[1]->support();
        }
    }
    /// Largest support met while evaluating.
    size_t peak_sites() const {
        size_t m = support().size();
        for (const auto &a : args) {
            m = std::max(m, a->peak_sites());
        }
        return m;
    }
};

using ExprPtr = std::shared_ptr<const Expr>;

inline ExprPtr mg(Region r) {
    return std::make_shared<Expr>(Expr{Expr::Op::Marginal, std::move(r), {}});
}
inline ExprPtr red(ExprPtr a, Region keep) {
    return std::make_shared<Expr>(Expr{Expr::Op::Reduce, std::move(keep), {std::move(a)}});
}
inline ExprPtr rm(ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{Expr::Op::RightMerge, {}, {std::move(a), std::move(b)}});
}
inline ExprPtr mx(ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{Expr::Op::MaxMerge, {}, {std::move(a), std::move(b)}});
}
inline ExprPtr ten(ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{Expr::Op::Tensor, {}, {std::move(a), std::move(b)}});
}
inline ExprPtr rm(Region a, Region b) {
    return rm(mg(std::move(a)), mg(std::move(b)));
}
inline ExprPtr mx(Region a, Region b) {
    return mx(mg(std::move(a)), mg(std::move(b)));
}

class Evaluator {
   public:
    Evaluator(const MarginalSet &ms, const Tolerances &tol) : ms_(ms), tol_(tol) {
    }

    MergeOutcome eval(const ExprPtr &e) {
        if (auto it = memo_.find(e.get()); it != memo_.end()) {
            return it->second;
        }
        MergeOutcome out = compute(*e);
        memo_.emplace(e.get(), out);
        return out;
    }

   private:
    MergeOutcome compute(const Expr &e) {
        switch (e.op) {
            case Expr::Op::Marginal:
                return marginal_of(ms_, e.region);
            case Expr::Op::Reduce: {
                MergeOutcome a = eval(e.args[0]);
                return a.is_nil() ? a : MergeOutcome(reduce(*a, e.region));
            }
            case Expr::Op::RightMerge:
                return right_merge(eval(e.args[0]), eval(e.args[1]), tol_);
            case Expr::Op::MaxMerge:
                return max_merge(eval(e.args[0]), eval(e.args[1]), tol_);
            case Expr::Op::Tensor: {
                MergeOutcome a = eval(e.args[0]);
                MergeOutcome b = eval(e.args[1]);
                if (a.is_nil()) {
                    return a;
                }
                if (b.is_nil()) {
                    return b;
                }
                return tensor(*a, *b);
            }
        }
        throw Error(ErrorCode::InvalidArgument, "bad expression");
    }

    const MarginalSet &ms_;
    Tolerances tol_;
    std::map<const Expr *, MergeOutcome> memo_;
};

struct CatalogEntry {
    enum class Kind { Entropy, Operator };
    std::string id;
    Kind kind;
    /// Entropy: sum coeff * S(expr) must vanish.
    std::vector<std::pair<double, ExprPtr>> terms;
    /// Operator: every expression must evaluate to the same operator.
    std::vector<ExprPtr> exprs;

    size_t peak_sites() const {
        size_t m = 0;
        for (const auto &t : terms) {
            m = std::max(m, t.second->peak_sites());
        }
        for (const auto &e : exprs) {
            m = std::max(m, e->peak_sites());
        }
        return m;
    }
};

/// |sum coeff * S(expr)| in bits; infinite if any term is nil.
inline double check_entropy_identity(const CatalogEntry &entry, const MarginalSet &ms, const Tolerances &tol = {}) {
    Evaluator ev(ms, tol);
    double r = 0;
    for (const auto &[c, e] : entry.terms) {
        MergeOutcome v = ev.eval(e);
        if (v.is_nil()) {
            return std::numeric_limits<double>::infinity();
        }
        r += c * von_neumann_entropy(*v);
    }
    return std::abs(r);
}

/// Largest trace distance between the first expression and each of the others.
inline double check_operator_identity(const CatalogEntry &entry, const MarginalSet &ms, const Tolerances &tol = {}) {
    Evaluator ev(ms, tol);
    MergeOutcome first = ev.eval(entry.exprs.front());
    if (first.is_nil()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0;
    for (size_t k = 1; k < entry.exprs.size(); k++) {
        MergeOutcome v = ev.eval(entry.exprs[k]);
        if (v.is_nil()) {
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, trace_distance_within(*first, *v, tol.tol_consistency));
    }
    return worst;
}

namespace catalog_detail {

using E = CatalogEntry;

inline E ent(std::string id, std::vector<std::pair<double, ExprPtr>> terms) {
    return {std::move(id), E::Kind::Entropy, std::move(terms), {}};
}
inline E op(std::string id, std::vector<ExprPtr> exprs) {
    return {std::move(id), E::Kind::Operator, {}, std::move(exprs)};
}
inline Region B(int w, int h, int x, int y) {
    return blocks({{w, h, x, y}});
}
inline Region C(int x, int y) {
    return Region{{x, y}};
}
inline const Region L = Region{{0, 0}, {1, 0}, {0, 1}};
inline const Region SKEW = Region{{0, 1}, {1, 1}, {1, 0}};

/// S(lhs) = S(a) + S(b) - S(c)
inline E ent3(std::string id, ExprPtr lhs, ExprPtr a, ExprPtr b, ExprPtr c) {
    return ent(std::move(id), {{1, std::move(lhs)}, {-1, std::move(a)}, {-1, std::move(b)}, {1, std::move(c)}});
}
inline E ent3(std::string id, Region lhs, Region a, Region b, Region c) {
    return ent3(std::move(id), mg(std::move(lhs)), mg(std::move(a)), mg(std::move(b)), mg(std::move(c)));
}

inline std::vector<E> descendants() {
    Region s22 = B(2, 2, 0, 0), s21 = B(2, 1, 0, 0), s12 = B(1, 2, 0, 0), s11 = C(0, 0);
    Region s32 = B(3, 2, 0, 0), s23 = B(2, 3, 0, 0), s33 = B(3, 3, 0, 0);
    Region stair1 = B(2, 3, 0, 0) | B(1, 2, 2, 0);
    Region stair1b = B(3, 2, 0, 0) | B(2, 1, 0, 2);
    Region stair2 = B(3, 2, 0, 1) | B(2, 1, 1, 0);
    return {
        ent("descendants.3x2", {{1, mg(s32)}, {-2, mg(s22)}, {1, mg(s12)}}),
        ent("descendants.2x3", {{1, mg(s23)}, {-2, mg(s22)}, {1, mg(s21)}}),
        ent3("descendants.staircase_from_3x2", stair1, s32, s22, s21),
        ent3("descendants.staircase_from_2x3", stair1, s23, s22, s12),
        ent3("descendants.3x3_from_staircase", s33, stair1b, s22, L),
        ent3("descendants.lower_staircase_from_2x3", stair2, s23, s22, s12),
        ent3("descendants.lower_staircase_from_3x2", stair2, s32, s22, s21),
        ent3("descendants.3x3_from_lower_staircase", s33, stair2, s22, SKEW),
        ent("descendants.3x1", {{1, mg(B(3, 1, 0, 0))}, {-2, mg(s21)}, {1, mg(s11)}}),
        ent("descendants.1x3", {{1, mg(B(1, 3, 0, 0))}, {-2, mg(s12)}, {1, mg(s11)}}),
    };
}

/// Level-2 snakes reduce to level-1 snakes.
inline std::vector<E> rows_to_row() {
    Region s22 = B(2, 2, 0, 0), s21 = B(2, 1, 0, 0), s12 = B(1, 2, 0, 0), s11 = C(0, 0);
    Region r1 = B(2, 1, 0, 1) | C(1, 0);
    Region r2 = B(2, 1, 1, 0) | C(1, 1);
    return {
        ent3("rows_to_row.square_plus_corner", B(2, 2, 1, 0) | C(0, 1), B(1, 2, 1, 0) | C(0, 1), B(2, 2, 1, 0),
             B(1, 2, 1, 0)),
        ent3("rows_to_row.bent_row", B(3, 1, 0, 1) | C(2, 0), r1, s21, s11),
        ent3("rows_to_row.row_plus_domino", B(3, 1, 0, 0) | B(2, 1, 0, 1), L, s22, s12),
        ent3("rows_to_row.row_plus_cell", B(3, 1, 0, 0) | C(0, 1), L, s21, s11),
        ent3("rows_to_row.square_plus_upper_cell", B(2, 2, 1, 0) | C(0, 1), s22, s21, s11),
        ent3("rows_to_row.square_plus_side_cell", B(2, 2, 0, 0) | C(2, 0), s22, s21, s11),
        op("rows_to_row.upper_rectangle",
           {mx(r1, B(2, 2, 1, 0)), rm(r1, B(2, 2, 1, 0)), mx(B(2, 1, 0, 1), B(2, 2, 1, 0)),
            rm(B(2, 1, 0, 1), B(2, 2, 1, 0))}),
        op("rows_to_row.upper_initial",
           {mg(B(3, 1, 0, 1) | C(2, 0)), mx(B(2, 1, 1, 1) | C(2, 0), B(2, 1, 0, 1)), rm(B(2, 1, 1, 1) | C(2, 0), B(2, 1, 0, 1))}),
        op("rows_to_row.lower_rectangle",
           {mx(r2, B(2, 2, 0, 0)), rm(r2, B(2, 2, 0, 0)), mx(B(2, 1, 1, 0), B(2, 2, 0, 0)),
            rm(B(2, 1, 1, 0), B(2, 2, 0, 0))}),
        op("rows_to_row.lower_initial", {mg(B(3, 1, 0, 0) | C(0, 1)), mx(L, B(2, 1, 1, 0)), rm(L, B(2, 1, 1, 0))}),
    };
}

/// Level-1 snakes extend to level-2 snakes: basic merges and the four composites.
inline std::vector<E> row_to_rows() {
    Region s22 = B(2, 2, 0, 0), s21 = B(2, 1, 0, 0), s12 = B(1, 2, 0, 0), s11 = C(0, 0);
    Region sq_side = B(2, 2, 0, 0) | C(2, 0);
    Region sq_corner = B(2, 2, 1, 0) | C(0, 1);
    ExprPtr c1 = rm(sq_side, B(2, 1, 2, 0));
    ExprPtr c2 = rm(B(2, 2, 1, 0) | C(3, 0), B(2, 2, 0, 0));
    ExprPtr c3 = rm(B(2, 2, 2, 0) | C(1, 1), B(2, 1, 0, 1));
    ExprPtr c4 = rm(sq_corner, B(2, 2, 2, 0));
    Region hook = B(3, 1, 0, 0) | C(0, 1);
    Region hook_r = B(3, 1, 0, 1) | C(2, 0);
    return {
        op("row_to_rows.square_with_side_cell", {mg(sq_side), mx(B(3, 1, 0, 0), s22), rm(B(3, 1, 0, 0), s22)}),
        op("row_to_rows.square_with_corner_cell",
           {mg(sq_corner), mx(B(3, 1, 0, 1), B(2, 2, 1, 0)), rm(B(3, 1, 0, 1), B(2, 2, 1, 0))}),
        op("row_to_rows.3x2_from_side", {mg(B(3, 2, 0, 0)), mx(sq_side, B(2, 2, 1, 0)), rm(sq_side, B(2, 2, 1, 0))}),
        op("row_to_rows.3x2_from_corner", {mg(B(3, 2, 0, 0)), mx(sq_corner, s22), rm(sq_corner, s22)}),
        op("row_to_rows.composite1",
           {c1, mx(sq_side, B(2, 1, 2, 0)), mx(mg(s22), mg(B(3, 1, 1, 0) | C(1, 1))), rm(mg(s22), mg(B(3, 1, 1, 0) | C(1, 1)))}),
        ent3("row_to_rows.composite1_entropy_side", c1, mg(sq_side), mg(s21), mg(s11)),
        ent3("row_to_rows.composite1_entropy_hook", c1, mg(s22), mg(hook), mg(s12)),
        op("row_to_rows.composite2",
           {c2, mx(B(2, 2, 1, 0) | C(3, 0), B(2, 2, 0, 0)), rm(c1, mg(B(2, 2, 1, 0))), mx(c1, mg(B(2, 2, 1, 0)))}),
        ent3("row_to_rows.composite2_entropy", c2, mg(s22), mg(sq_side), mg(s12)),
        op("row_to_rows.composite3",
           {c3, mx(B(2, 2, 2, 0) | C(1, 1), B(2, 1, 0, 1)), mx(mg(B(2, 2, 2, 0)), mg(hook_r)), rm(mg(B(2, 2, 2, 0)), mg(hook_r))}),
        ent3("row_to_rows.composite3_entropy_side", c3, mg(B(2, 2, 2, 0) | C(1, 1)), mg(s21), mg(s11)),
        ent3("row_to_rows.composite3_entropy_hook", c3, mg(s22), mg(hook_r), mg(s12)),
        op("row_to_rows.composite4", {c4, mx(sq_corner, B(2, 2, 2, 0)), rm(c3, mg(B(2, 2, 1, 0))), mx(c3, mg(B(2, 2, 1, 0)))}),
        ent3("row_to_rows.composite4_entropy", c4, mg(s22), mg(sq_corner), mg(s12)),
    };
}

/// Twist identity and its commutation relations.
inline std::vector<E> twist() {
    Region s22 = B(2, 2, 0, 0), s21 = B(2, 1, 0, 0), s12 = B(1, 2, 0, 0), s11 = C(0, 0);
    Region s33 = B(3, 3, 0, 0);
    Region left = B(2, 3, 0, 0) | B(1, 2, 2, 0);
    Region right = B(2, 3, 2, 0) | B(1, 2, 1, 1);
    ExprPtr p1 = rm(rm(left, B(2, 2, 2, 0)), mg(B(2, 2, 1, 1)));
    ExprPtr p1_swapped = rm(rm(left, B(2, 2, 1, 1)), mg(B(2, 2, 2, 0)));
    ExprPtr p2 = rm(rm(right, B(2, 2, 0, 1)), mg(B(2, 2, 1, 0)));
    ExprPtr p2_swapped = rm(rm(right, B(2, 2, 1, 0)), mg(B(2, 2, 0, 1)));
    Region transfer_base = B(2, 3, 1, 0) | B(1, 2, 0, 1);
    ExprPtr transfer = rm(transfer_base, B(2, 2, 2, 0));
    Region stair = B(3, 2, 0, 0) | B(2, 1, 0, 2);
    Region p1_rest = (B(4, 2, 0, 0) | B(3, 1, 0, 2)) - B(1, 3, 0, 0) - C(1, 0);

    // Full twist identity on a 5x3 canvas.
    ExprPtr key_lhs = rm(rm(transfer, mg(B(2, 2, 3, 0))), mg(B(2, 2, 2, 1)));
    Region transfer_base_r = B(2, 3, 2, 0) | B(1, 2, 1, 1);
    ExprPtr transfer_r = rm(transfer_base_r, B(2, 2, 3, 0));
    ExprPtr key_rhs = rm(rm(transfer_r, mg(B(2, 2, 0, 1))), mg(B(2, 2, 1, 0)));

    return {
        op("twist.transfer",
           {transfer, rm(rm(B(2, 3, 1, 0), B(2, 2, 0, 1)), mg(B(2, 2, 2, 0))),
            rm(rm(B(2, 3, 1, 0), B(2, 2, 2, 0)), mg(B(2, 2, 0, 1))), rm(B(2, 3, 1, 0) | B(1, 2, 3, 0), B(2, 2, 0, 1))}),
        op("twist.key", {key_lhs, key_rhs}),
        op("twist.commutation_left", {p1, p1_swapped}),
        op("twist.commutation_right", {p2, p2_swapped}),
        op("twist.left_drop_first_column", {red(p1, p1_rest), mg(p1_rest)}),
        op("twist.left_drop_right_cells", {red(p1, stair), mg(stair)}),
        op("twist.left_drop_right_column", {red(p1, s33), mg(s33)}),
        op("twist.staircase_merge", {mg(stair), mx(B(2, 3, 0, 0), B(2, 2, 1, 0)), rm(B(2, 3, 0, 0), B(2, 2, 1, 0))}),
        op("twist.3x2_merge", {mg(B(3, 2, 1, 0)), mx(B(2, 2, 1, 0), B(2, 2, 2, 0)), rm(B(2, 2, 1, 0), B(2, 2, 2, 0))}),
        op("twist.staircase_side_merge", {mx(stair, B(2, 2, 2, 0)), rm(stair, B(2, 2, 2, 0))}),
        op("twist.hook_merge", {mg(B(3, 2, 1, 0) | C(1, 2)), rm(B(2, 2, 1, 0) | C(1, 2), B(2, 2, 2, 0))}),
        op("twist.hook_extension",
           {rm(B(3, 2, 1, 0) | C(1, 2), B(2, 2, 1, 1)), mg(B(3, 3, 1, 0) - C(3, 2))}),
        ent3("twist.hook_entropy", B(3, 2, 0, 0) | C(0, 2), B(2, 2, 0, 0) | C(0, 2), s22, s12),
        ent3("twist.staircase_entropy", stair, B(3, 2, 0, 0) | C(0, 2), s22, L),
        ent("twist.double_square_entropy", {{1, mg(B(2, 2, 1, 0) | B(2, 2, 0, 1))}, {-2, mg(s22)}, {1, mg(s11)}}),
        ent3("twist.split_columns_entropy", B(1, 2, 2, 0) | B(1, 2, 1, 1), L, B(2, 1, 0, 1) | C(1, 0), s21),
        ent3("twist.corner_entropy", p1, mg(s33), mg(s22), mg(s12)),
        op("twist.corner_merge_left", {p1, rm(s33, B(2, 2, 2, 0))}),
        op("twist.corner_merge_right", {p2, rm(B(3, 3, 1, 0), B(2, 2, 0, 1))}),
    };
}

}  // namespace catalog_detail

/// Every identity in the catalog.
inline std::vector<CatalogEntry> appendix_catalog() {
    using namespace catalog_detail;
    std::vector<CatalogEntry> out;
    for (auto part : {descendants(), rows_to_row(), row_to_rows(), twist()}) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

struct CatalogOptions {
    /// Entries whose evaluation needs more sites than this are skipped.
    size_t max_sites = 12;
    bool skip_over_cap = true;
};

/// Runs every entry; entropy entries are judged against tol_entropy and operator
/// entries against tol_consistency.
inline Report run_appendix_catalog(const MarginalSet &ms, const Tolerances &tol = {}, const CatalogOptions &opt = {}) {
    Report rep;
    for (const auto &entry : appendix_catalog()) {
        const size_t peak = entry.peak_sites();
        const std::string kind = entry.kind == CatalogEntry::Kind::Entropy ? "entropy" : "operator";
        if (peak > opt.max_sites || ipow((size_t)ms.site_dimension(), peak) > MAX_DIM) {
            if (opt.skip_over_cap) {
                rep.add(CheckRecord::skipped(entry.id, kind + "; needs " + std::to_string(peak) + " sites"));
                continue;
            }
        }
        auto t0 = std::chrono::steady_clock::now();
        CheckRecord r;
        if (entry.kind == CatalogEntry::Kind::Entropy) {
            r = CheckRecord::judge(entry.id, check_entropy_identity(entry, ms, tol), tol.tol_entropy, kind);
        } else {
            r = CheckRecord::judge(entry.id, check_operator_identity(entry, ms, tol), tol.tol_consistency, kind);
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.add(std::move(r));
    }
    return rep;
}

}  // namespace qmm

#endif
