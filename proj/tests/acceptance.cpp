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

// Acceptance suite: one line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "helpers.hpp"

using namespace qmm;
using qmm::testing::petz_markov_state;
using qmm::testing::random_state;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    /// Records `value` against `limit` (value <= limit passes).
    void at_most(const char *what, double value, double limit) {
        pass = pass && value <= limit;
        detail << what << "=" << value << " (<= " << limit << ") ";
    }
    void require(const char *what, bool ok) {
        pass = pass && ok;
        detail << what << "=" << (ok ? "yes" : "NO") << " ";
    }
};

int failures = 0;

void criterion(int id, const char *title, double max_seconds, const std::function<void(Outcome &)> &body) {
    Outcome out;
    out.detail.precision(3);
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception &e) {
        out.pass = false;
        out.detail << "exception: " << e.what() << " ";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (max_seconds > 0 && secs > max_seconds) {
        out.pass = false;
    }
    char head[160];
    std::snprintf(head, sizeof(head), "%s  C%-2d %-34s %7.1fs", out.pass ? "PASS" : "FAIL", id, title, secs);
    std::printf("%s  %s\n", head, out.detail.str().c_str());
    std::fflush(stdout);
    failures += !out.pass;
}

const MarginalSet &toric() {
    static const MarginalSet ms = toric_code_marginals();
    return ms;
}

}  // namespace

int main() {
    criterion(1, "toric constraint suite", 30, [](Outcome &o) {
        MarginalSet ms = toric_code_marginals();
        o.at_most("primaries", check_primaries(ms, 1e-9).max_residual(), 1e-9);
        Report desc = check_descendants(ms, 1e-9);
        size_t n = 0;
        for (const auto &r : desc.records) {
            n += r.name != "descendants_implied_by_primaries" && r.passed();
        }
        o.require("12_descendants", n == 12 && desc.pass());
        o.at_most("descendants", desc.max_residual(), 1e-9);
        auto S = [&](const Shape &s) { return entropy_of_shape(ms, s); };
        o.at_most("|3-(2+2-1)|", std::abs(S(shapes::l_tromino()) - (S(shapes::s21()) + S(shapes::s12()) - S(shapes::s11()))),
                  1e-9);
        o.at_most("|5-(12-8+1)|",
                  std::abs(S(shapes::s33()) - (4 * S(shapes::s22()) - 2 * S(shapes::s21()) - 2 * S(shapes::s12()) +
                                               S(shapes::s11()))),
                  1e-9);
    });

    criterion(2, "stabilizer integers", 1, [](Outcome &o) {
        bool ok = true;
        for (auto gauge : {ToricGauge::Css, ToricGauge::TranslationInvariant}) {
            auto g = toric_code_group(3, 3, gauge);
            ok = ok && stabilizer_entropy(g, window(0, 0, 1, 1)) == 1;
            ok = ok && stabilizer_entropy(g, window(0, 0, 2, 1)) == 2;
            ok = ok && stabilizer_entropy(g, window(0, 0, 1, 2)) == 2;
            ok = ok && stabilizer_entropy(g, anchor(shapes::l_tromino(), {1, 1})) == 3;
            ok = ok && stabilizer_entropy(g, anchor(shapes::skew_tromino(), {1, 1})) == 3;
            ok = ok && stabilizer_entropy(g, window(0, 0, 2, 2)) == 3;
            ok = ok && stabilizer_entropy(g, window(0, 0, 3, 3)) == 5;
        }
        o.require("1,2,2,3,3,3,5_exact", ok);
    });

    criterion(3, "global build 3x3", 60, [](Outcome &o) {
        auto g = build_global(toric(), 3, 3);
        o.require("non_nil", g.ok());
        o.at_most("T(2x2)", global_consistency(g, toric()), 1e-7);
        o.at_most("|S-5|", std::abs(von_neumann_entropy(*g.state) - 5), 1e-6);
        o.at_most("|closed_form-5|", std::abs(max_entropy(toric(), 3, 3) - 5), 1e-6);
    });

    criterion(4, "global build 4x3", 600, [](Outcome &o) {
        auto g = build_global(toric(), 4, 3);
        o.require("non_nil", g.ok());
        o.at_most("|S-6|", std::abs(von_neumann_entropy(*g.state) - 6), 1e-6);
    });

    criterion(5, "sequential equals snake-of-snakes", 0, [](Outcome &o) {
        auto a = build_global(toric(), 3, 3);
        auto b = build_global_sequential(toric(), 3, 3);
        o.require("non_nil", a.ok() && b.ok());
        o.at_most("T", trace_distance(*a.state, *b.state), 1e-6);
    });

    criterion(6, "level maps, twist, row merge", 0, [](Outcome &o) {
        Report n3, n4;
        n3.append(check_level_maps(toric(), 3, 1e-7));
        n3.append(check_twist(toric(), 3, 1e-7));
        n3.append(check_row_merge(toric(), 3, 1e-7));
        n4.append(check_level_maps(toric(), 4, 1e-6));
        n4.append(check_twist(toric(), 4, 1e-6));
        n4.append(check_row_merge(toric(), 4, 1e-6));
        o.at_most("N=3", n3.max_residual(), 1e-7);
        o.at_most("N=4", n4.max_residual(), 1e-6);
        o.require("all_pass", n3.pass() && n4.pass());
    });

    criterion(7, "product telescoping", 0, [](Outcome &o) {
        std::mt19937_64 rng(7);
        double worst = 0, worst_density = 0;
        for (int k = 0; k < 20; k++) {
            auto rho1 = random_state(Region{{0, 0}}, rng);
            MarginalSet ms = product_marginals(rho1);
            double s = von_neumann_entropy(rho1);
            for (int n = 2; n <= 4; n++) {
                for (int m = 2; m <= 4; m++) {
                    worst = std::max(worst, std::abs(max_entropy(ms, n, m) - n * m * s));
                }
            }
            worst_density = std::max(worst_density, std::abs(max_entropy_density(ms) - s));
        }
        o.at_most("|maxent-NMs|", worst, 1e-9);
        o.at_most("|density-s|", worst_density, 1e-9);
    });

    criterion(8, "Petz recovery and SSA", 0, [](Outcome &o) {
        std::mt19937_64 rng(8);
        double worst_cmi = 0, worst_rec = 0;
        for (int k = 0; k < 100; k++) {
            auto inst = petz_markov_state(rng);
            worst_cmi = std::max(worst_cmi, std::abs(cmi(inst.rho, inst.a, inst.b, inst.c)));
            auto rec = right_merge(reduce(inst.rho, inst.a | inst.b), reduce(inst.rho, inst.b | inst.c));
            worst_rec = rec.is_nil() ? INFINITY : std::max(worst_rec, trace_distance(*rec, inst.rho));
        }
        o.at_most("oracle_cmi", worst_cmi, 1e-9);
        o.at_most("recovery_T", worst_rec, 1e-8);
        Region a{{0, 0}}, b{{1, 0}}, c{{2, 0}};
        double min_cmi = 0;
        for (int k = 0; k < 1000; k++) {
            min_cmi = std::min(min_cmi, cmi(random_state(a | b | c, rng, 2, 1 + k % 8), a, b, c));
        }
        o.at_most("ssa_violation", std::max(0.0, -min_cmi), 1e-9);
    });

    criterion(9, "negative controls", 0, [](Outcome &o) {
        auto [ab, bc] = micro::bell_monogamy_pair();
        auto first = max_merge(ab, bc);
        o.require("bell_nil", first.is_nil());
        o.require("not_inconsistent", first.is_nil() && first.reason() != NilReason::InconsistentMarginals);
        bool same = true;
        for (int k = 0; k < 5; k++) {
            auto again = max_merge(ab, bc);
            same = same && again.is_nil() && again.reason() == first.reason();
        }
        o.require("deterministic", same);
        if (first.is_nil()) {
            o.detail << "reason=" << nil_reason_name(first.reason()) << " ";
        }
        o.at_most("|cmi(ghz)-1|", std::abs(cmi(micro::ghz(3), Region{{0, 0}}, Region{{1, 0}}, Region{{2, 0}}) - 1), 1e-9);
    });

    criterion(10, "appendix catalog", 900, [](Outcome &o) {
        Report t = run_appendix_catalog(toric());
        std::mt19937_64 rng(10);
        Report p = run_appendix_catalog(product_marginals(random_state(Region{{0, 0}}, rng)));
        o.require("toric_pass", t.pass());
        o.require("product_pass", p.pass());
        o.at_most("toric_max", t.max_residual(), 1e-8);
        o.at_most("product_max", p.max_residual(), 1e-8);
        MarginalSet bad(toric().m22(), shift_spectrum(toric().m33(), 1e-2));
        Report c = run_appendix_catalog(bad);
        size_t failed = 0, nil = 0;
        double worst = 0;
        for (const auto &r : c.records) {
            if (r.verdict == Verdict::Fail) {
                failed++;
                if (std::isinf(r.residual)) {
                    nil++;
                } else {
                    worst = std::max(worst, r.residual);
                }
            }
        }
        o.require("corrupted_fails", failed >= 1 && (worst > 1e-3 || nil > 0));
        o.detail << "corrupted_failures=" << failed << " (nil " << nil << ") corrupted_finite_max=" << worst << " ";
    });

    criterion(11, "entropy density and free energy", 0, [](Outcome &o) {
        o.at_most("|density|", std::abs(max_entropy_density(toric())), 1e-9);
        MarginalSet mixed = product_marginals(DensityOperator::maximally_mixed(Region{{0, 0}}));
        double f = free_energy_upper_bound(mixed, Matrix::Zero(16, 16), 1.0);
        o.at_most("|f+ln2|", std::abs(f + std::numbers::ln2), 1e-12);
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures;
}
