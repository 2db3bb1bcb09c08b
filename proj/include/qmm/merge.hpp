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

#ifndef QMM_MERGE_HPP
#define QMM_MERGE_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "qmm/densop.hpp"
#include "qmm/report.hpp"

namespace qmm {

enum class NilReason { InconsistentMarginals, EntropyGapExceeded, RecoveryMismatch };

inline const char *nil_reason_name(NilReason r) {
    switch (r) {
        case NilReason::InconsistentMarginals:
            return "InconsistentMarginals";
        case NilReason::EntropyGapExceeded:
            return "EntropyGapExceeded";
        case NilReason::RecoveryMismatch:
            return "RecoveryMismatch";
    }
    return "?";
}

/// Either a density operator or nil.
class MergeOutcome {
   public:
    MergeOutcome(DensityOperator rho, double trace_defect = 0)
        : value_(std::make_shared<const DensityOperator>(std::move(rho))), trace_defect_(trace_defect) {
    }
    static MergeOutcome nil(NilReason reason, double residual = std::numeric_limits<double>::quiet_NaN()) {
        MergeOutcome m;
        m.reason_ = reason;
        m.residual_ = residual;
        return m;
    }

    bool is_nil() const {
        return value_ == nullptr;
    }
    explicit operator bool() const {
        return value_ != nullptr;
    }
    const DensityOperator &value() const {
        if (!value_) {
            throw Error(ErrorCode::PreconditionViolated, std::string("nil outcome (") + nil_reason_name(reason_) + ")");
        }
        return *value_;
    }
    const DensityOperator &operator*() const {
        return value();
    }
    const DensityOperator *operator->() const {
        return &value();
    }
    NilReason reason() const {
        return reason_;
    }
    /// tr(unnormalized result) - 1 for right-merges.
    double trace_defect() const {
        return trace_defect_;
    }
    /// For nil outcomes, the residual of the failed condition.
    double residual() const {
        return residual_;
    }

   private:
    MergeOutcome() = default;
    // Shared so that copies of large states stay cheap.
    std::shared_ptr<const DensityOperator> value_;
    NilReason reason_ = NilReason::RecoveryMismatch;
    double trace_defect_ = 0;
    double residual_ = 0;
};

/// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC), in bits.
inline double cmi(const DensityOperator &rho, const Region &a, const Region &b, const Region &c) {
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
        throw Error(ErrorCode::OverlappingSubsystems, a.str() + ", " + b.str() + ", " + c.str());
    }
    Region abc = a | b | c;
    if (!rho.region().contains(abc)) {
        throw Error(ErrorCode::RegionNotContained, abc.str() + " not inside " + rho.region().str());
    }
    DensityOperator r = reduce(rho, abc);
    auto s = [&](const Region &x) { return x.empty() ? 0.0 : von_neumann_entropy(reduce(r, x)); };
    return s(a | b) + s(b | c) - s(b) - s(abc);
}

/// sigma |> lambda = lambda^{1/2} lambda_B^{-1/2} (sigma x I) lambda_B^{-1/2} lambda^{1/2},
/// B = Supp(sigma) & Supp(lambda).
inline MergeOutcome right_merge(const DensityOperator &sigma, const DensityOperator &lambda, const Tolerances &tol = {}) {
    if (sigma.site_dimension() != lambda.site_dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "site dimensions differ");
    }
    const int d = sigma.site_dimension();
    const Region &rs = sigma.region();
    const Region &rl = lambda.region();
    Region b = rs & rl;
    Region u = rs | rl;
    check_size(d, u.size());

    Matrix sqrt_l = hermitian_function(lambda.matrix(), [](double x, double) { return std::sqrt(std::max(x, 0.0)); });
    Matrix k;
    if (b.empty()) {
        k = sqrt_l;
    } else {
        Matrix lb = partial_trace_matrix(lambda.matrix(), rl, rl - b, d);
        lb = (lb + lb.adjoint()).eval() * 0.5;
        const double cut = tol.rank_cutoff;
        Matrix inv_sqrt_b = hermitian_function(lb, [cut](double x, double top) {
            return x > cut * std::max(top, 0.0) && x > 0 ? 1.0 / std::sqrt(x) : 0.0;
        });
        k = sqrt_l * embed_identity(inv_sqrt_b, b, rl, d);
    }

    Matrix m = embed_identity(sigma.matrix(), rs, u, d);
    conjugate_local(m, u, k, rl, d);
    cplx tr = m.trace();
    double defect = tr.real() - 1.0;
    if (!(tr.real() > 0)) {
        return MergeOutcome::nil(NilReason::RecoveryMismatch, std::abs(defect));
    }
    m /= tr.real();
    return MergeOutcome(DensityOperator::trusted(std::move(u), d, std::move(m)), defect);
}

inline MergeOutcome right_merge(const MergeOutcome &sigma, const MergeOutcome &lambda, const Tolerances &tol = {}) {
    if (sigma.is_nil()) {
        return sigma;
    }
    if (lambda.is_nil()) {
        return lambda;
    }
    return right_merge(sigma.value(), lambda.value(), tol);
}

/// Largest trace distance between `c` and each input on the input's support.
inline double recovery_residual(const DensityOperator &c, const DensityOperator &a, const DensityOperator &b) {
    double ra = trace_distance(reduce(c, a.region()), a);
    double rb = trace_distance(reduce(c, b.region()), b);
    return std::max(ra, rb);
}

/// S(a) + S(b) - S(tau), tau the shared reduction (taken from a).
inline double merged_entropy_target(const DensityOperator &a, const DensityOperator &b) {
    Region common = a.region() & b.region();
    double st = common.empty() ? 0.0 : von_neumann_entropy(reduce(a, common));
    return von_neumann_entropy(a) + von_neumann_entropy(b) - st;
}

/// a |><| b: the maximum-entropy joint state, certified through the Petz candidates.
/// Returns b |> a on success.
inline MergeOutcome max_merge(const DensityOperator &a, const DensityOperator &b, const Tolerances &tol = {}) {
    Consistency ab = consistent_with(a, b, tol.tol_consistency);
    if (!ab.consistent) {
        return MergeOutcome::nil(NilReason::InconsistentMarginals, ab.residual);
    }
    MergeOutcome c1 = right_merge(b, a, tol);
    MergeOutcome c2 = right_merge(a, b, tol);
    if (!c1 || !c2) {
        return MergeOutcome::nil(NilReason::RecoveryMismatch);
    }
    double rec = std::max(recovery_residual(*c1, a, b), recovery_residual(*c2, a, b));
    if (!(rec <= tol.tol_consistency)) {
        return MergeOutcome::nil(NilReason::RecoveryMismatch, rec);
    }
    double gap = std::abs(von_neumann_entropy(*c1) - merged_entropy_target(a, b));
    if (!(gap <= tol.tol_entropy)) {
        return MergeOutcome::nil(NilReason::EntropyGapExceeded, gap);
    }
    double both = trace_distance_within(*c1, *c2, tol.tol_consistency);
    if (!(both <= tol.tol_consistency)) {
        return MergeOutcome::nil(NilReason::RecoveryMismatch, both);
    }
    return c1;
}

inline MergeOutcome max_merge(const MergeOutcome &a, const MergeOutcome &b, const Tolerances &tol = {}) {
    if (a.is_nil()) {
        return a;
    }
    if (b.is_nil()) {
        return b;
    }
    return max_merge(a.value(), b.value(), tol);
}

struct LemmaReport {
    Report report;
    /// All conditions agree (all pass or all fail).
    bool coherent = true;
    bool all_pass = true;
};

/// Evaluates the equivalent conditions of the fundamental lemma on the pair (a, b):
/// the entropy identity for either Petz candidate, agreement of the two merge
/// directions, and consistency of each candidate with both inputs.
inline LemmaReport fundamental_lemma_check(const DensityOperator &a, const DensityOperator &b, const Tolerances &tol = {}) {
    LemmaReport out;
    MergeOutcome c1 = right_merge(b, a, tol);
    MergeOutcome c2 = right_merge(a, b, tol);
    const double inf = std::numeric_limits<double>::infinity();
    double target = merged_entropy_target(a, b);
    auto gap = [&](const MergeOutcome &c) { return c ? std::abs(von_neumann_entropy(*c) - target) : inf; };
    auto rec = [&](const MergeOutcome &c) { return c ? recovery_residual(*c, a, b) : inf; };
    out.report.add(CheckRecord::judge("entropy_identity(b|>a)", gap(c1), tol.tol_entropy));
    out.report.add(CheckRecord::judge("merge_directions_agree", (c1 && c2) ? trace_distance(*c1, *c2) : inf,
                                      tol.tol_consistency));
    out.report.add(CheckRecord::judge("b|>a_consistent", rec(c1), tol.tol_consistency));
    out.report.add(CheckRecord::judge("a|>b_consistent", rec(c2), tol.tol_consistency));
    out.report.add(CheckRecord::judge("entropy_identity(a|>b)", gap(c2), tol.tol_entropy));
    size_t passed = 0;
    for (const auto &r : out.report.records) {
        passed += r.verdict == Verdict::Pass;
    }
    out.all_pass = passed == out.report.records.size();
    out.coherent = passed == 0 || out.all_pass;
    return out;
}

/// Residual of (sigma |> lambda) |> tau = (sigma |> tau) |> lambda.
inline double commutation_check(const DensityOperator &sigma, const DensityOperator &lambda, const DensityOperator &tau,
                                const Tolerances &tol = {}) {
    if (!lambda.region().disjoint(tau.region())) {
        throw Error(ErrorCode::PreconditionViolated, "merged supports overlap");
    }
    MergeOutcome x = right_merge(right_merge(sigma, lambda, tol), MergeOutcome(tau), tol);
    MergeOutcome y = right_merge(right_merge(sigma, tau, tol), MergeOutcome(lambda), tol);
    if (!x || !y) {
        return std::numeric_limits<double>::infinity();
    }
    return trace_distance(*x, *y);
}

struct MonotonicityReport {
    double i_ac_b;    // I(A:C|B)
    double i_acd_b;   // I(A:CD|B)
    double i_ac_bd;   // I(A:C|BD)
    /// Largest violation of the two inequalities (<= 0 when they hold).
    double violation() const {
        return std::max(i_ac_b - i_acd_b, i_ac_bd - i_acd_b);
    }
};

inline MonotonicityReport monotonicity_check(const DensityOperator &rho, const Region &a, const Region &b, const Region &c,
                                             const Region &d) {
    if (!d.disjoint(a) || !d.disjoint(b) || !d.disjoint(c)) {
        throw Error(ErrorCode::OverlappingSubsystems, "D overlaps A, B or C");
    }
    return {cmi(rho, a, b, c), cmi(rho, a, b, c | d), cmi(rho, a, b | d, c)};
}

}  // namespace qmm

#endif
