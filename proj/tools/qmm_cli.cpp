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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qmm/io.hpp"
#include "qmm/qmm.hpp"

namespace {

using namespace qmm;

constexpr int EXIT_PASS = 0;
constexpr int EXIT_FAIL = 1;
constexpr int EXIT_INPUT = 2;

struct Inputs {
    std::string m22;
    std::string m33;
    std::string report;
    std::optional<double> tol_entropy;
    std::optional<double> tol_consistency;
};

Tolerances tolerances(const Inputs &in) {
    Tolerances t = Tolerances::from_env();
    if (in.tol_entropy) {
        t.tol_entropy = *in.tol_entropy;
    }
    if (in.tol_consistency) {
        t.tol_consistency = *in.tol_consistency;
    }
    return t;
}

std::map<std::string, std::string> digests(const Inputs &in) {
    std::map<std::string, std::string> out;
    if (!in.m22.empty()) {
        out["m22"] = digest(read_file(in.m22));
    }
    if (!in.m33.empty()) {
        out["m33"] = digest(read_file(in.m33));
    }
    return out;
}

MarginalSet load(const Inputs &in, const Tolerances &tol) {
    auto m22 = read_marginal_file(in.m22, tol);
    auto m33 = read_marginal_file(in.m33, tol);
    if (m22.site_dimension() != m33.site_dimension()) {
        throw InputError("DimensionMismatch: m22 has site_dimension " + std::to_string(m22.site_dimension()) +
                         ", m33 has " + std::to_string(m33.site_dimension()));
    }
    return MarginalSet(std::move(m22), std::move(m33));
}

/// The smallest cluster that can answer entropy queries: m33 when given, else m22.
DensityOperator cluster(const Inputs &in, const Tolerances &tol) {
    if (in.m33.empty()) {
        return read_marginal_file(in.m22, tol);
    }
    return load(in, tol).m33();
}

void print_records(const Report &rep) {
    for (const auto &r : rep.records) {
        std::printf("%-8s %-46s residual=%-12s tol=%s%s%s\n", verdict_name(r.verdict), r.name.c_str(),
                    r.verdict == Verdict::Skipped ? "-" : format12(r.residual).c_str(), format12(r.tolerance).c_str(),
                    r.note.empty() ? "" : "  ", r.note.c_str());
    }
    std::printf("summary: %s\n", rep.pass() ? "pass" : "fail");
}

void write_report(const Inputs &in, const Report &rep, const Tolerances &tol, const std::string &command) {
    if (!in.report.empty()) {
        write_atomic(in.report, report_json(rep, tol, digests(in), command).dump(2) + "\n");
    }
}

Report constraint_report(const MarginalSet &ms, const Tolerances &tol) {
    Report rep = check_translation_invariance(ms, tol.tol_consistency);
    rep.append(check_primaries(ms, tol.tol_entropy));
    rep.append(check_descendants(ms, tol.tol_entropy));
    return rep;
}

int cmd_verify(const Inputs &in) {
    Tolerances tol = tolerances(in);
    Report rep = constraint_report(load(in, tol), tol);
    print_records(rep);
    write_report(in, rep, tol, "verify");
    return rep.pass() ? EXIT_PASS : EXIT_FAIL;
}

int cmd_extend(const Inputs &in, int rows, int cols, const std::string &mode, const std::string &out) {
    Tolerances tol = tolerances(in);
    MarginalSet ms = load(in, tol);
    require_global_size(ms, cols, rows);
    Report rep = constraint_report(ms, tol);
    if (!rep.pass()) {
        print_records(rep);
        std::fprintf(stderr, "marginals fail the constraint suite; not extending\n");
        write_report(in, rep, tol, "extend");
        return EXIT_FAIL;
    }
    GlobalState g = mode == "sequential" ? build_global_sequential(ms, cols, rows, tol) : build_global(ms, cols, rows, tol);
    if (!g.ok()) {
        rep.add(CheckRecord::judge("global_state", std::numeric_limits<double>::infinity(), 0,
                                   std::string("nil: ") + nil_reason_name(g.state.reason())));
        print_records(rep);
        write_report(in, rep, tol, "extend");
        return EXIT_FAIL;
    }
    double s = von_neumann_entropy(*g.state);
    double closed = max_entropy(ms, cols, rows);
    rep.add(CheckRecord::judge("global_consistency", global_consistency(g, ms), tol.tol_consistency));
    rep.add(CheckRecord::judge("entropy_vs_closed_form", std::abs(s - closed), tol.tol_entropy,
                               "S=" + format12(s) + " closed_form=" + format12(closed)));
    rep.add(CheckRecord::judge("trace_defect", std::abs(g.state.trace_defect()), tol.tol_trace));
    write_marginal_file(out, *g.state,
                        "  \"provenance\": \"" + std::string(provenance_name(g.provenance)) + "\",\n  \"cols\": " +
                            std::to_string(cols) + ",\n  \"rows\": " + std::to_string(rows));
    print_records(rep);
    std::printf("entropy: %s\n", format_scalar(s).c_str());
    write_report(in, rep, tol, "extend");
    return rep.pass() ? EXIT_PASS : EXIT_FAIL;
}

int cmd_maxent(const Inputs &in, int rows, int cols) {
    Tolerances tol = tolerances(in);
    double v = max_entropy(cluster(in, tol), cols, rows);
    std::printf("%s\n", format_scalar(v).c_str());
    Report rep;
    rep.add(CheckRecord::judge("max_entropy", 0, 0, "value=" + format17(v)));
    write_report(in, rep, tol, "maxent");
    return EXIT_PASS;
}

int cmd_density(const Inputs &in) {
    Tolerances tol = tolerances(in);
    double v = max_entropy_density(cluster(in, tol));
    std::printf("%s\n", format_scalar(v).c_str());
    Report rep;
    rep.add(CheckRecord::judge("max_entropy_density", 0, 0, "value=" + format17(v)));
    write_report(in, rep, tol, "density");
    return EXIT_PASS;
}

int cmd_free_energy(const Inputs &in, const std::string &hamiltonian, double beta) {
    Tolerances tol = tolerances(in);
    DensityOperator c = cluster(in, tol);
    DensityOperator m22 = in.m33.empty() ? c : read_marginal_file(in.m22, tol);
    MatrixFile h = parse_matrix_file(read_file(hamiltonian), hamiltonian);
    if (h.site_dimension != m22.site_dimension() || Shape::of(h.region) != shapes::s22()) {
        throw InputError(hamiltonian + ": DimensionMismatch: the Hamiltonian must act on a 2x2 block at the marginal's site dimension");
    }
    // The Hamiltonian is translation invariant; only its shape matters.
    double v = free_energy_upper_bound(m22, max_entropy_density(c), h.matrix, beta, tol.tol_herm);
    std::printf("%s\n", format_scalar(v).c_str());
    Report rep;
    rep.add(CheckRecord::judge("free_energy_upper_bound", 0, 0, "value=" + format17(v)));
    write_report(in, rep, tol, "free_energy");
    return EXIT_PASS;
}

DensityOperator single_site(const std::string &spec) {
    if (spec == "mixed") {
        return DensityOperator::maximally_mixed(Region{{0, 0}});
    }
    if (spec == "pure") {
        return diagonal_qubit(1.0);
    }
    DensityOperator rho = read_marginal_file(spec);
    if (rho.region().size() != 1) {
        throw InputError(spec + ": expected a single-site operator");
    }
    return translate(rho, {-rho.region()[0].x, -rho.region()[0].y});
}

int cmd_fixture(const std::string &kind, const std::string &dir, const std::string &site, double perturb) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw InputError("cannot create " + dir + ": " + ec.message());
    }
    auto path = [&](const std::string &name) { return (std::filesystem::path(dir) / name).string(); };
    std::vector<std::string> written;
    auto emit = [&](const std::string &name, const DensityOperator &rho) {
        write_marginal_file(path(name), rho);
        written.push_back(path(name));
    };
    if (kind == "toric" || kind == "product") {
        MarginalSet ms = kind == "toric" ? toric_code_marginals() : product_marginals(single_site(site));
        emit("m22.json", ms.m22());
        emit("m33.json", perturb > 0 ? shift_spectrum(ms.m33(), perturb) : ms.m33());
    } else {
        for (const auto &[name, rho] : micro::all()) {
            emit(name + ".json", rho);
        }
    }
    for (const auto &p : written) {
        read_marginal_file(p);
        std::printf("%s\n", p.c_str());
    }
    return EXIT_PASS;
}

int cmd_catalog(const Inputs &in, size_t max_sites) {
    Tolerances tol = tolerances(in);
    MarginalSet ms = load(in, tol);
    CatalogOptions opt;
    opt.max_sites = max_sites;
    Report rep = run_appendix_catalog(ms, tol, opt);
    print_records(rep);
    for (const auto &r : rep.records) {
        if (r.verdict == Verdict::Fail) {
            std::fprintf(stderr, "failed: %s\n", r.name.c_str());
        }
    }
    write_report(in, rep, tol, "catalog");
    return rep.pass() ? EXIT_PASS : EXIT_FAIL;
}

void marginal_options(CLI::App *sub, Inputs &in, bool need_m33) {
    sub->add_option("--m22", in.m22, "2x2 marginal file")->required()->check(CLI::ExistingFile);
    auto *m33 = sub->add_option("--m33", in.m33, "3x3 marginal file")->check(CLI::ExistingFile);
    if (need_m33) {
        m33->required();
    }
    sub->add_option("--tol-entropy", in.tol_entropy, "entropy tolerance in bits");
    sub->add_option("--tol-consistency", in.tol_consistency, "trace distance tolerance");
    sub->add_option("--report", in.report, "write a JSON report here");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum marginal merging on the square lattice"};
    app.set_version_flag("--version", std::string(QMM_VERSION));
    app.require_subcommand(1);

    Inputs in;
    int rows = 0, cols = 0;
    std::string mode = "snake", out, hamiltonian, fixture_kind, fixture_dir, site = "mixed";
    double beta = 1, perturb = 0;
    bool skip_over_cap = false;
    size_t max_sites = CatalogOptions{}.max_sites;

    auto *verify = app.add_subcommand("verify", "check translation invariance, primaries and descendants");
    marginal_options(verify, in, true);

    auto *extend = app.add_subcommand("extend", "build the global max-entropy state");
    marginal_options(extend, in, true);
    extend->add_option("--rows", rows, "M")->required();
    extend->add_option("--cols", cols, "N")->required();
    extend->add_option("--mode", mode, "snake or sequential")->check(CLI::IsMember({"snake", "sequential"}));
    extend->add_option("--out", out, "output state file")->required();

    auto *maxent = app.add_subcommand("maxent", "closed-form maximum entropy on N x M");
    marginal_options(maxent, in, false);
    maxent->add_option("--rows", rows, "M")->required();
    maxent->add_option("--cols", cols, "N")->required();

    auto *density = app.add_subcommand("density", "maximum entropy density in bits per site");
    marginal_options(density, in, false);

    auto *free = app.add_subcommand("free_energy", "upper bound on the free energy density");
    free->alias("free-energy");
    marginal_options(free, in, false);
    free->add_option("--hamiltonian", hamiltonian, "Hermitian 2x2-cluster Hamiltonian file")->required();
    free->add_option("--beta", beta, "inverse temperature");

    auto *fixture = app.add_subcommand("fixture", "write fixture marginals");
    fixture->add_option("kind", fixture_kind, "toric, product or micro")
        ->required()
        ->check(CLI::IsMember({"toric", "product", "micro"}));
    fixture->add_option("--out", fixture_dir, "output directory")->required();
    fixture->add_option("--single-site", site, "product site state: mixed, pure or a file");
    fixture->add_option("--perturb-m33", perturb, "move this much weight between extreme eigenvalues of m33");

    auto *catalog = app.add_subcommand("catalog", "run the identity catalog");
    marginal_options(catalog, in, true);
    catalog->add_flag("--skip-over-cap", skip_over_cap, "skip entries above --max-sites (always on)");
    catalog->add_option("--max-sites", max_sites, "largest support evaluated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? EXIT_PASS : EXIT_INPUT;
    }

    try {
        if (*verify) {
            return cmd_verify(in);
        }
        if (*extend) {
            return cmd_extend(in, rows, cols, mode, out);
        }
        if (*maxent) {
            return cmd_maxent(in, rows, cols);
        }
        if (*density) {
            return cmd_density(in);
        }
        if (*free) {
            return cmd_free_energy(in, hamiltonian, beta);
        }
        if (*fixture) {
            return cmd_fixture(fixture_kind, fixture_dir, site, perturb);
        }
        if (*catalog) {
            return cmd_catalog(in, max_sites);
        }
    } catch (const std::exception &e) {
        // Input, schema and size errors; failed checks return above.
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_INPUT;
    }
    return EXIT_INPUT;
}
