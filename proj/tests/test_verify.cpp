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

#include <set>

#include "helpers.hpp"

using namespace qmm;
using qmm::testing::random_state;

TEST(verify, catalog_shape) {
    auto cat = appendix_catalog();
    std::set<std::string> ids;
    size_t entropy = 0;
    for (const auto &e : cat) {
        EXPECT_TRUE(ids.insert(e.id).second) << e.id;
        entropy += e.kind == CatalogEntry::Kind::Entropy;
        if (e.kind == CatalogEntry::Kind::Operator) {
            EXPECT_GE(e.exprs.size(), 2u) << e.id;
        }
        EXPECT_LE(e.peak_sites(), 13u) << e.id;
    }
    EXPECT_GT(entropy, 0u);
    EXPECT_LT(entropy, cat.size());
    EXPECT_NE(ids.count("twist.key"), 0u);
}

TEST(verify, expressions) {
    auto e = rm(window(0, 0, 2, 2), window(1, 0, 2, 2));
    EXPECT_EQ(e->peak_sites(), 6u);
    MarginalSet ms = toric_code_marginals();
    Evaluator ev(ms, {});
    auto v = ev.eval(e);
    ASSERT_FALSE(v.is_nil());
    EXPECT_EQ(v->region(), window(0, 0, 3, 2));
    EXPECT_NEAR(von_neumann_entropy(*v), 4, 1e-9);
    EXPECT_EQ(&*ev.eval(e), &*v);
    auto r = ev.eval(red(e, window(0, 0, 1, 2)));
    EXPECT_NEAR(von_neumann_entropy(*r), 2, 1e-9);
}

TEST(verify, catalog_toric) {
    auto rep = run_appendix_catalog(toric_code_marginals());
    EXPECT_TRUE(rep.pass());
    size_t skipped = 0;
    for (const auto &r : rep.records) {
        if (r.verdict == Verdict::Skipped) {
            skipped++;
            EXPECT_EQ(r.name, "twist.key");
        } else {
            EXPECT_EQ(r.verdict, Verdict::Pass) << r.name << " " << r.residual;
        }
    }
    EXPECT_EQ(skipped, 1u);
}

TEST(verify, catalog_product) {
    std::mt19937_64 rng(11);
    auto rep = run_appendix_catalog(product_marginals(random_state(Region{{0, 0}}, rng)));
    EXPECT_TRUE(rep.pass()) << rep.max_residual();
    EXPECT_LT(rep.max_residual(), 1e-8);
}

TEST(verify, catalog_corrupted_m33_fails) {
    MarginalSet ms = toric_code_marginals();
    MarginalSet bad(ms.m22(), shift_spectrum(ms.m33(), 1e-2));
    auto rep = run_appendix_catalog(bad);
    EXPECT_FALSE(rep.pass());
    EXPECT_GT(rep.max_residual(), 1e-3);
}

TEST(verify, shift_spectrum) {
    MarginalSet ms = toric_code_marginals();
    auto shifted = shift_spectrum(ms.m33(), 1e-2);
    EXPECT_NEAR(shifted.matrix().trace().real(), 1, 1e-12);
    EXPECT_NEAR(trace_distance(shifted, ms.m33()), 1e-2, 1e-10);
    EXPECT_THROW(shift_spectrum(ms.m33(), 2), Error);
}

TEST(verify, twist_key_at_13_sites) {
    CatalogOptions opt;
    opt.max_sites = 13;
    MarginalSet ms = toric_code_marginals();
    for (const auto &entry : appendix_catalog()) {
        if (entry.id != "twist.key") {
            continue;
        }
        EXPECT_EQ(entry.peak_sites(), 13u);
        EXPECT_LT(check_operator_identity(entry, ms), 1e-8);
    }
}
