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

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace qmm;
using qmm::testing::petz_markov_state;
using qmm::testing::random_state;
using qmm::testing::random_unitary;

namespace {

const Region A{{0, 0}};
const Region B{{1, 0}};
const Region C{{2, 0}};

}  // namespace

TEST(merge, cmi_examples) {
    EXPECT_NEAR(cmi(micro::ghz(3), A, B, C), 1.0, 1e-9);
    EXPECT_NEAR(cmi(micro::classical_chain(3), A, B, C), 0.0, 1e-12);
    std::mt19937_64 rng(1);
    auto p = tensor(tensor(random_state(A, rng), random_state(B, rng)), random_state(C, rng));
    EXPECT_NEAR(cmi(p, A, B, C), 0.0, 1e-9);
    EXPECT_THROW(cmi(p, A, A, C), Error);
    EXPECT_THROW(cmi(p, A, B, Region{{7, 7}}), Error);
}

TEST(merge, ssa_on_random_states) {
    std::mt19937_64 rng(2024);
    Region r = A | B | C;
    double worst = 0;
    for (int k = 0; k < 1000; k++) {
        auto rho = random_state(r, rng, 2, 1 + k % 8);
        worst = std::min(worst, cmi(rho, A, B, C));
    }
    EXPECT_GE(worst, -1e-9);
}

TEST(merge, right_merge_examples) {
    auto mm = [](Region r) { return DensityOperator::maximally_mixed(r); };
    MergeOutcome out = right_merge(mm(A | B), mm(B | C));
    ASSERT_TRUE(out);
    EXPECT_EQ(out->region(), A | B | C);
    EXPECT_LT(trace_distance(*out, mm(A | B | C)), 1e-14);

    auto chain = micro::classical_chain(3);
    MergeOutcome c = right_merge(reduce(chain, A | B), reduce(chain, B | C));
    ASSERT_TRUE(c);
    EXPECT_LT(trace_distance(*c, chain), 1e-12);
    EXPECT_NEAR(c.trace_defect(), 0.0, 1e-12);

    // Empty overlap: the result is the tensor product.
    std::mt19937_64 rng(3);
    auto x = random_state(A, rng), y = random_state(C, rng);
    EXPECT_LT(trace_distance(*right_merge(x, y), tensor(x, y)), 1e-12);
}

TEST(merge, petz_recovery_round_trip) {
    std::mt19937_64 rng(8);
    double worst = 0, worst_cmi = 0;
    for (int k = 0; k < 100; k++) {
        auto inst = petz_markov_state(rng);
        worst_cmi = std::max(worst_cmi, std::abs(cmi(inst.rho, inst.a, inst.b, inst.c)));
        MergeOutcome rec = right_merge(reduce(inst.rho, inst.a | inst.b), reduce(inst.rho, inst.b | inst.c));
        ASSERT_TRUE(rec);
        worst = std::max(worst, trace_distance(*rec, inst.rho));
        EXPECT_NEAR(rec.trace_defect(), 0.0, 1e-10);
    }
    EXPECT_LT(worst_cmi, 1e-9);
    EXPECT_LT(worst, 1e-8);
}

TEST(merge, nil_absorbs) {
    auto nil = MergeOutcome::nil(NilReason::EntropyGapExceeded);
    MergeOutcome x(DensityOperator::maximally_mixed(A));
    EXPECT_TRUE(right_merge(nil, x).is_nil());
    EXPECT_TRUE(right_merge(x, nil).is_nil());
    EXPECT_TRUE(max_merge(nil, x).is_nil());
    EXPECT_TRUE(max_merge(x, nil).is_nil());
    EXPECT_EQ(max_merge(x, nil).reason(), NilReason::EntropyGapExceeded);
    EXPECT_THROW(nil.value(), Error);
}

TEST(merge, max_merge_bell_monogamy_is_nil) {
    auto [ab, bc] = micro::bell_monogamy_pair();
    MergeOutcome first = max_merge(ab, bc);
    ASSERT_TRUE(first.is_nil());
    EXPECT_NE(first.reason(), NilReason::InconsistentMarginals);
    for (int k = 0; k < 5; k++) {
        MergeOutcome again = max_merge(ab, bc);
        ASSERT_TRUE(again.is_nil());
        EXPECT_EQ(again.reason(), first.reason());
    }
    auto lemma = fundamental_lemma_check(ab, bc);
    EXPECT_TRUE(lemma.coherent);
    EXPECT_FALSE(lemma.all_pass);
}

TEST(merge, max_merge_inconsistent_inputs) {
    auto zero = DensityOperator::pure(B, 2, Vector::Unit(2, 0));
    auto one = DensityOperator::pure(B, 2, Vector::Unit(2, 1));
    MergeOutcome out = max_merge(tensor(DensityOperator::maximally_mixed(A), zero), tensor(one, DensityOperator::maximally_mixed(C)));
    ASSERT_TRUE(out.is_nil());
    EXPECT_EQ(out.reason(), NilReason::InconsistentMarginals);
    EXPECT_NEAR(out.residual(), 1.0, 1e-12);
}

TEST(merge, max_merge_idempotent_and_symmetric) {
    std::mt19937_64 rng(5);
    auto rho = random_state(A | B, rng);
    MergeOutcome same = max_merge(rho, rho);
    ASSERT_TRUE(same);
    EXPECT_LT(trace_distance(*same, rho), 1e-10);

    auto inst = petz_markov_state(rng);
    auto x = reduce(inst.rho, inst.a | inst.b), y = reduce(inst.rho, inst.b | inst.c);
    MergeOutcome xy = max_merge(x, y), yx = max_merge(y, x);
    ASSERT_TRUE(xy);
    ASSERT_TRUE(yx);
    EXPECT_LT(trace_distance(*xy, *yx), 1e-8);
}

TEST(merge, max_merge_toric_squares_give_3x2) {
    MarginalSet ms = toric_code_marginals();
    auto left = marginal_of(ms, window(1, 1, 2, 2));
    auto right = marginal_of(ms, window(2, 1, 2, 2));
    MergeOutcome m = max_merge(left, right);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->region(), window(1, 1, 3, 2));
    EXPECT_NEAR(von_neumann_entropy(*m), 4.0, 1e-9);
    auto g = toric_code_group(3, 3, ToricGauge::TranslationInvariant, 1, 1);
    EXPECT_LT(trace_distance(*m, stabilizer_reduced_density(g, window(1, 1, 3, 2))), 1e-9);
    auto lemma = fundamental_lemma_check(left, right);
    EXPECT_TRUE(lemma.all_pass);
}

TEST(merge, fundamental_lemma_classical_chain) {
    auto chain = micro::classical_chain(3);
    auto lemma = fundamental_lemma_check(reduce(chain, A | B), reduce(chain, B | C));
    EXPECT_TRUE(lemma.all_pass);
    EXPECT_TRUE(lemma.coherent);
    EXPECT_EQ(lemma.report.records.size(), 5u);
}

TEST(merge, fundamental_lemma_ghz_marginals) {
    // The GHZ pair marginals are classically correlated, so the lemma conditions hold;
    // the merge is the classical chain, not GHZ.
    auto ghz = micro::ghz(3);
    auto ab = reduce(ghz, A | B), bc = reduce(ghz, B | C);
    auto lemma = fundamental_lemma_check(ab, bc);
    EXPECT_TRUE(lemma.coherent);
    EXPECT_TRUE(lemma.all_pass);
    MergeOutcome m = max_merge(ab, bc);
    ASSERT_TRUE(m);
    EXPECT_LT(trace_distance(*m, micro::classical_chain(3)), 1e-12);
    EXPECT_NEAR(trace_distance(*m, ghz), 0.5, 1e-12);
}

TEST(merge, commutation) {
    std::mt19937_64 rng(6);
    Region s = window(1, 0, 2, 1);
    Region l{{0, 0}, {1, 0}};
    Region t{{2, 0}, {3, 0}};
    for (int k = 0; k < 10; k++) {
        auto sigma = random_state(s, rng);
        auto lambda = random_state(l, rng);
        auto tau = random_state(t, rng);
        EXPECT_LT(commutation_check(sigma, lambda, tau), 1e-9);
    }
    auto sigma = random_state(A, rng);
    EXPECT_LT(commutation_check(sigma, random_state(B, rng), random_state(C, rng)), 1e-12);
    EXPECT_THROW(commutation_check(sigma, random_state(l, rng), random_state(Region{{1, 0}, {2, 0}}, rng)), Error);
}

TEST(merge, monotonicity) {
    std::mt19937_64 rng(12);
    Region d{{3, 0}};
    double worst = -1;
    for (int k = 0; k < 500; k++) {
        auto rho = random_state(A | B | C | d, rng, 2, 1 + k % 16);
        worst = std::max(worst, monotonicity_check(rho, A, B, C, d).violation());
    }
    EXPECT_LE(worst, 1e-9);
    auto p = tensor(tensor(random_state(A, rng), random_state(B, rng)), tensor(random_state(C, rng), random_state(d, rng)));
    auto r = monotonicity_check(p, A, B, C, d);
    EXPECT_NEAR(r.i_ac_b, 0, 1e-9);
    EXPECT_NEAR(r.i_acd_b, 0, 1e-9);
    auto rho = random_state(A | B | C, rng);
    auto e = monotonicity_check(rho, A, B, C, Region{});
    EXPECT_NEAR(e.i_ac_b, e.i_acd_b, 1e-12);
    EXPECT_NEAR(e.i_ac_bd, e.i_acd_b, 1e-12);
    EXPECT_THROW(monotonicity_check(rho, A, B, C, A), Error);
}
