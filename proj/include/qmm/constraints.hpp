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

#ifndef QMM_CONSTRAINTS_HPP
#define QMM_CONSTRAINTS_HPP

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmm/densop.hpp"
#include "qmm/lattice.hpp"
#include "qmm/report.hpp"

namespace qmm {

/// The fundamental marginals: a 2x2 and a 3x3 cluster operator.
class MarginalSet {
   public:
    MarginalSet(DensityOperator m22, DensityOperator m33) : m22_(std::move(m22)), m33_(std::move(m33)) {
        if (m22_.site_dimension() != m33_.site_dimension()) {
            throw Error(ErrorCode::DimensionMismatch, "m22 and m33 have different site dimensions");
        }
        if (Shape::of(m22_.region()) != shapes::s22()) {
            throw Error(ErrorCode::InvalidArgument, "m22 must live on a 2x2 block, got " + m22_.region().str());
        }
        if (Shape::of(m33_.region()) != shapes::s33()) {
            throw Error(ErrorCode::InvalidArgument, "m33 must live on a 3x3 block, got " + m33_.region().str());
        }
    }
    const DensityOperator &m22() const {
        return m22_;
    }
    const DensityOperator &m33() const {
        return m33_;
    }
    int site_dimension() const {
        return m22_.site_dimension();
    }

   private:
    DensityOperator m22_;
    DensityOperator m33_;
};

/// Translations carrying `sub` inside `container`, ordered by the canonical order of
/// the image anchor (bottom row first, then left to right).
inline std::vector<Translation> placements(const Region &container, const Region &sub) {
    std::vector<Translation> out;
    if (sub.empty()) {
        return out;
    }
    Site ca = anchor_of(container);
    Site sa = anchor_of(sub);
    for (const Site &a : enumerate_subshapes(Shape::of(container), Shape::of(sub))) {
        out.push_back({ca.x + a.x - sa.x, ca.y + a.y - sa.y});
    }
    return out;
}

enum class MarginalSource { Auto, M22, M33 };

/// The marginal on `region`, read off a translate inside m22 (Auto: when it fits) or m33.
inline DensityOperator marginal_of(const MarginalSet &ms, const Region &region,
                                   MarginalSource source = MarginalSource::Auto) {
    auto from = [&](const DensityOperator &m) -> std::optional<DensityOperator> {
        auto ts = placements(m.region(), region);
        if (ts.empty()) {
            return std::nullopt;
        }
        return translate(reduce(m, region.translated(ts.front())), ts.front().inverse());
    };
    if (source != MarginalSource::M33) {
        if (auto r = from(ms.m22())) {
            return *r;
        }
        if (source == MarginalSource::M22) {
            throw Error(ErrorCode::ShapeTooLarge, region.str() + " does not fit in the 2x2 cluster");
        }
    }
    if (auto r = from(ms.m33())) {
        return *r;
    }
    throw Error(ErrorCode::ShapeTooLarge, region.str() + " does not fit in the 3x3 cluster");
}

/// Entropy of the bottom-left-most placement of `shape` inside `cluster`.
inline double entropy_in_cluster(const DensityOperator &cluster, const Shape &shape) {
    auto ts = placements(cluster.region(), shape.offsets());
    if (ts.empty()) {
        throw Error(ErrorCode::ShapeTooLarge, "shape does not fit in " + cluster.region().str());
    }
    return von_neumann_entropy(reduce(cluster, shape.offsets().translated(ts.front())));
}

inline double entropy_of_shape(const MarginalSet &ms, const Shape &shape) {
    return entropy_in_cluster(ms.m33(), shape);
}

/// Every nonempty subset of the 3x3 cluster, up to translation.
inline std::vector<Shape> subshapes_of_3x3() {
    std::set<Shape> seen;
    Region full = shapes::s33().offsets();
    for (unsigned mask = 1; mask < (1u << 9); mask++) {
        std::vector<Site> cells;
        for (unsigned k = 0; k < 9; k++) {
            if (mask >> k & 1) {
                cells.push_back(full[k]);
            }
        }
        seen.insert(Shape::from_cells(cells));
    }
    return {seen.begin(), seen.end()};
}

/// Translational invariance: reductions of m22 and m33 onto every placement of every
/// common sub-shape agree.
inline Report check_translation_invariance(const MarginalSet &ms, double tol) {
    double within33 = 0, within22 = 0, cross = 0;
    std::string worst33, worst22, worst_cross;
    for (const Shape &shape : subshapes_of_3x3()) {
        const Region &frame = shape.offsets();
        auto collect = [&](const DensityOperator &m) {
            std::vector<DensityOperator> out;
            for (const Translation &t : placements(m.region(), frame)) {
                out.push_back(translate(reduce(m, frame.translated(t)), t.inverse()));
            }
            return out;
        };
        auto r33 = collect(ms.m33());
        auto r22 = collect(ms.m22());
        for (size_t i = 0; i < r33.size(); i++) {
            for (size_t j = i + 1; j < r33.size(); j++) {
                double t = trace_distance(r33[i], r33[j]);
                if (t > within33) {
                    within33 = t;
                    worst33 = frame.str();
                }
            }
            for (const auto &b : r22) {
                double t = trace_distance(r33[i], b);
                if (t > cross) {
                    cross = t;
                    worst_cross = frame.str();
                }
            }
        }
        for (size_t i = 0; i < r22.size(); i++) {
            for (size_t j = i + 1; j < r22.size(); j++) {
                double t = trace_distance(r22[i], r22[j]);
                if (t > within22) {
                    within22 = t;
                    worst22 = frame.str();
                }
            }
        }
    }
    Report rep;
    rep.add(CheckRecord::judge("translation_invariance.m33", within33, tol, worst33));
    rep.add(CheckRecord::judge("translation_invariance.m22", within22, tol, worst22));
    rep.add(CheckRecord::judge("translation_invariance.cross", cross, tol, worst_cross));
    return rep;
}

/// One linear entropy identity: sum of coeff * S(shape) that must vanish.
struct EntropyIdentity {
    std::string name;
    std::vector<std::pair<double, Shape>> terms;
};

inline double residual(const MarginalSet &ms, const EntropyIdentity &id) {
    double r = 0;
    for (const auto &[c, shape] : id.terms) {
        r += c * entropy_of_shape(ms, shape);
    }
    return std::abs(r);
}

inline std::vector<EntropyIdentity> primary_identities() {
    using namespace shapes;
    return {
        {"primary_a", {{1, l_tromino()}, {-1, s21()}, {-1, s12()}, {1, s11()}}},
        {"primary_b", {{1, skew_tromino()}, {-1, s21()}, {-1, s12()}, {1, s11()}}},
        {"primary_c", {{1, s33()}, {-4, s22()}, {2, s21()}, {2, s12()}, {-1, s11()}}},
    };
}

/// The twelve descendant identities (Snake a-d, Type I a-d, Type II a-d).
inline std::vector<EntropyIdentity> descendant_identities() {
    using namespace shapes;
    return {
        {"snake_a", {{1, l_tromino()}, {-1, s21()}, {-1, s12()}, {1, s11()}}},
        {"snake_b", {{1, s31()}, {-2, s21()}, {1, s11()}}},
        {"snake_c", {{1, skew_tromino()}, {-1, s21()}, {-1, s12()}, {1, s11()}}},
        {"snake_d", {{1, s13()}, {-2, s12()}, {1, s11()}}},
        {"type1_a", {{1, s32()}, {-2, s22()}, {1, s12()}}},
        {"type1_b", {{1, type1_staircase()}, {-1, s32()}, {-1, s22()}, {1, s21()}}},
        {"type1_c", {{1, type1_staircase()}, {-1, s23()}, {-1, s22()}, {1, s12()}}},
        {"type1_d", {{1, s33()}, {-1, type1_staircase()}, {-1, s22()}, {1, l_tromino()}}},
        {"type2_a", {{1, s23()}, {-2, s22()}, {1, s21()}}},
        {"type2_b", {{1, type2_staircase()}, {-1, s32()}, {-1, s22()}, {1, s21()}}},
        {"type2_c", {{1, type2_staircase()}, {-1, s23()}, {-1, s22()}, {1, s12()}}},
        {"type2_d", {{1, s33()}, {-1, type2_staircase()}, {-1, s22()}, {1, skew_tromino()}}},
    };
}

inline Report check_identities(const MarginalSet &ms, const std::vector<EntropyIdentity> &ids, double tol) {
    Report rep;
    for (const auto &id : ids) {
        rep.add(CheckRecord::judge(id.name, residual(ms, id), tol));
    }
    return rep;
}

inline Report check_primaries(const MarginalSet &ms, double tol) {
    return check_identities(ms, primary_identities(), tol);
}

/// Worst-case amplification from primary residuals to descendant residuals.
constexpr double DESCENDANT_FACTOR = 8;

/// The twelve descendant residuals, plus an implication record: when the primaries and
/// translational invariance hold at `tol`, every descendant must hold at 8 * tol.
inline Report check_descendants(const MarginalSet &ms, double tol, bool with_implication = true) {
    Report rep = check_identities(ms, descendant_identities(), tol);
    if (with_implication && check_primaries(ms, tol).pass() && check_translation_invariance(ms, tol).pass()) {
        rep.add(CheckRecord::judge("descendants_implied_by_primaries", rep.max_residual(), DESCENDANT_FACTOR * tol));
    }
    return rep;
}

}  // namespace qmm

#endif
