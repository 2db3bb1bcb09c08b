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

#ifndef QMM_FIXTURES_HPP
#define QMM_FIXTURES_HPP

#include <bitset>
#include <map>
#include <string>
#include <vector>

#include "qmm/constraints.hpp"
#include "qmm/densop.hpp"

namespace qmm {

constexpr size_t MAX_PAULI_QUBITS = 256;
using Bits = std::bitset<MAX_PAULI_QUBITS>;

/// i^phase X^x Z^z over an ordered list of qubits.
struct Pauli {
    Bits x;
    Bits z;
    int phase = 0;  // mod 4

    Bits support() const {
        return x | z;
    }
    /// +1 or -1 for Hermitian operators.
    int sign() const {
        return phase % 4 == 0 ? 1 : (phase % 4 == 2 ? -1 : 0);
    }
    bool commutes(const Pauli &o) const {
        return ((x & o.z).count() + (z & o.x).count()) % 2 == 0;
    }
    Pauli operator*(const Pauli &o) const {
        // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
        Pauli r;
        r.x = x ^ o.x;
        r.z = z ^ o.z;
        r.phase = (int)((phase + o.phase + 2 * (z & o.x).count()) % 4);
        return r;
    }
};

enum class ToricGauge {
    /// X plaquettes where x+y is even, Z plaquettes where it is odd.
    Css,
    /// Hadamard on the odd sublattice of the CSS gauge: every plaquette is X Z / Z X.
    TranslationInvariant,
};

/// Plaquette stabilizers over a bookkeeping qubit list.
struct StabilizerGroup {
    Region window;
    Region qubits;  // window plus every qubit touched by a listed generator
    std::vector<Pauli> generators;
    std::vector<Site> plaquettes;   // lower-left corner of each generator
    std::vector<char> x_type;       // CSS gauge label of each plaquette
    std::vector<bool> fully_supported;

    size_t num_fully_supported() const {
        size_t n = 0;
        for (bool b : fully_supported) {
            n += b;
        }
        return n;
    }
};

/// Plaquette with lower-left (x, y) has corners (x,y), (x+1,y), (x,y+1), (x+1,y+1).
inline StabilizerGroup toric_code_group(int width, int height, ToricGauge gauge = ToricGauge::Css, int x0 = 0,
                                        int y0 = 0) {
    if (width < 2 || height < 2) {
        throw Error(ErrorCode::WindowTooSmall, "toric window must be at least 2x2");
    }
    StabilizerGroup g;
    g.window = window(x0, y0, width, height);
    g.qubits = window(x0 - 1, y0 - 1, width + 2, height + 2);
    if (g.qubits.size() > MAX_PAULI_QUBITS) {
        throw Error(ErrorCode::InvalidArgument, "window too large for the Pauli bit width");
    }
    for (int py = y0 - 1; py < y0 + height; py++) {
        for (int px = x0 - 1; px < x0 + width; px++) {
            bool is_x = ((px + py) % 2 + 2) % 2 == 0;
            Pauli p;
            bool inside = true;
            for (Site c : {Site{px, py}, Site{px + 1, py}, Site{px, py + 1}, Site{px + 1, py + 1}}) {
                size_t q = (size_t)g.qubits.index_of(c);
                bool odd = ((c.x + c.y) % 2 + 2) % 2 == 1;
                bool use_x = is_x;
                if (gauge == ToricGauge::TranslationInvariant && odd) {
                    use_x = !use_x;
                }
                if (use_x) {
                    p.x.set(q);
                } else {
                    p.z.set(q);
                }
                inside = inside && g.window.contains(c);
            }
            g.generators.push_back(p);
            g.plaquettes.push_back({px, py});
            g.x_type.push_back(is_x);
            g.fully_supported.push_back(inside);
        }
    }
    return g;
}

namespace detail {

/// Nullspace basis over GF(2) of the system rows * v = 0, v over `ncols` variables.
inline std::vector<Bits> gf2_nullspace(std::vector<Bits> rows, size_t ncols) {
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows.size(); c++) {
        size_t p = r;
        while (p < rows.size() && !rows[p].test(c)) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[r]);
        for (size_t k = 0; k < rows.size(); k++) {
            if (k != r && rows[k].test(c)) {
                rows[k] ^= rows[r];
            }
        }
        pivot_col.push_back((int)c);
        r++;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivot_col) {
        is_pivot[(size_t)c] = true;
    }
    std::vector<Bits> basis;
    for (size_t f = 0; f < ncols; f++) {
        if (is_pivot[f]) {
            continue;
        }
        Bits v;
        v.set(f);
        for (size_t k = 0; k < pivot_col.size(); k++) {
            if (rows[k].test(f)) {
                v.set((size_t)pivot_col[k]);
            }
        }
        basis.push_back(v);
    }
    return basis;
}

inline size_t gf2_rank(std::vector<Bits> rows, size_t ncols) {
    return ncols - gf2_nullspace(std::move(rows), ncols).size();
}

/// Generators of the subgroup supported inside `region`.
inline std::vector<Pauli> supported_subgroup(const StabilizerGroup &g, const Region &region) {
    if (!g.window.contains(region)) {
        throw Error(ErrorCode::RegionOutsideWindow, region.str() + " not inside " + g.window.str());
    }
    const size_t n = g.generators.size();
    // One constraint per (qubit outside region, x or z component).
    std::vector<Bits> rows;
    for (size_t q = 0; q < g.qubits.size(); q++) {
        if (region.contains(g.qubits[q])) {
            continue;
        }
        Bits rx, rz;
        for (size_t j = 0; j < n; j++) {
            if (g.generators[j].x.test(q)) {
                rx.set(j);
            }
            if (g.generators[j].z.test(q)) {
                rz.set(j);
            }
        }
        if (rx.any()) {
            rows.push_back(rx);
        }
        if (rz.any()) {
            rows.push_back(rz);
        }
    }
    std::vector<Pauli> out;
    for (const Bits &v : gf2_nullspace(rows, n)) {
        Pauli p;
        for (size_t j = 0; j < n; j++) {
            if (v.test(j)) {
                p = p * g.generators[j];
            }
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace detail

/// Generators pairwise commute and are independent.
inline bool is_valid_group(const StabilizerGroup &g) {
    for (size_t i = 0; i < g.generators.size(); i++) {
        for (size_t j = i + 1; j < g.generators.size(); j++) {
            if (!g.generators[i].commutes(g.generators[j])) {
                return false;
            }
        }
    }
    std::vector<Bits> rows;
    for (size_t q = 0; q < g.qubits.size(); q++) {
        Bits rx, rz;
        for (size_t j = 0; j < g.generators.size(); j++) {
            rx[j] = g.generators[j].x.test(q);
            rz[j] = g.generators[j].z.test(q);
        }
        rows.push_back(rx);
        rows.push_back(rz);
    }
    return detail::gf2_rank(rows, g.generators.size()) == g.generators.size();
}

/// |A| - log2 |S_A| in bits, exact.
inline int stabilizer_entropy(const StabilizerGroup &g, const Region &region) {
    return (int)region.size() - (int)detail::supported_subgroup(g, region).size();
}

/// rho_A = 2^{-|A|} sum_{s in S_A} s = 2^{-|A|} prod_i (I + g_i).
inline DensityOperator stabilizer_reduced_density(const StabilizerGroup &g, const Region &region, int d = 2) {
    if (d != 2) {
        throw Error(ErrorCode::DimensionMismatch, "stabilizer fixtures are qubit states");
    }
    check_size(2, region.size());
    const size_t n = region.size();
    const size_t dim = size_t{1} << n;
    // Bit of qubit list index q inside the composite index of `region`.
    std::vector<int> bit_of(g.qubits.size(), -1);
    for (size_t k = 0; k < n; k++) {
        bit_of[(size_t)g.qubits.index_of(region[k])] = (int)(n - 1 - k);
    }
    Matrix m = Matrix::Identity((Eigen::Index)dim, (Eigen::Index)dim);
    for (const Pauli &p : detail::supported_subgroup(g, region)) {
        if (p.phase % 2) {
            throw Error(ErrorCode::InvalidArgument, "non-Hermitian group element");
        }
        size_t xm = 0, zm = 0;
        for (size_t q = 0; q < g.qubits.size(); q++) {
            if (bit_of[q] < 0) {
                continue;
            }
            if (p.x.test(q)) {
                xm |= size_t{1} << bit_of[q];
            }
            if (p.z.test(q)) {
                zm |= size_t{1} << bit_of[q];
            }
        }
        const double s = p.sign();
        // (P M)[b ^ x, c] = s (-1)^{z.b} M[b, c]
        Matrix pm((Eigen::Index)dim, (Eigen::Index)dim);
        for (size_t b = 0; b < dim; b++) {
            double f = (__builtin_popcountll(zm & b) % 2) ? -s : s;
            pm.row((Eigen::Index)(b ^ xm)) = f * m.row((Eigen::Index)b);
        }
        m += pm;
    }
    m /= (double)dim;
    return DensityOperator::trusted(region, 2, std::move(m));
}

/// m22 on the 2x2 at (1..2, 1..2), m33 on the 3x3 at (1..3, 1..3).
inline MarginalSet toric_code_marginals(ToricGauge gauge = ToricGauge::TranslationInvariant) {
    StabilizerGroup g = toric_code_group(3, 3, gauge, 1, 1);
    return MarginalSet(stabilizer_reduced_density(g, window(1, 1, 2, 2)), stabilizer_reduced_density(g, window(1, 1, 3, 3)));
}

/// Moves `eps` of weight from the largest eigenvalue to the smallest one.
inline DensityOperator shift_spectrum(const DensityOperator &rho, double eps) {
    Eigh e = eigh(rho.matrix());
    const Eigen::Index last = e.values.size() - 1;
    if (eps < 0 || eps > e.values[last]) {
        throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, largest eigenvalue]");
    }
    e.values[last] -= eps;
    e.values[0] += eps;
    Matrix m = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    return DensityOperator::trusted(rho.region(), rho.site_dimension(), std::move(m));
}

inline DensityOperator tensor_power(const DensityOperator &rho1, const Region &region) {
    if (rho1.region().size() != 1) {
        throw Error(ErrorCode::InvalidArgument, "expected a single-site operator");
    }
    const int d = rho1.site_dimension();
    DensityOperator out = DensityOperator::trusted(Region{}, d, Matrix::Ones(1, 1));
    for (const Site &s : region) {
        out = tensor(out, DensityOperator::trusted(Region{s}, d, rho1.matrix()));
    }
    return out;
}

inline MarginalSet product_marginals(const DensityOperator &rho1) {
    return MarginalSet(tensor_power(rho1, window(1, 1, 2, 2)), tensor_power(rho1, window(1, 1, 3, 3)));
}

/// Single-qubit diag(p, 1-p).
inline DensityOperator diagonal_qubit(double p, Site s = {0, 0}) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = p;
    m(1, 1) = 1 - p;
    return DensityOperator::from_matrix(Region{s}, 2, m);
}

namespace micro {

/// (|0..0> + |1..1>)/sqrt2 on the row (0..n-1, 0).
inline DensityOperator ghz(int n = 3) {
    Region r = window(0, 0, n, 1);
    Vector psi = Vector::Zero((Eigen::Index)(size_t{1} << n));
    psi[0] = 1;
    psi[psi.size() - 1] = 1;
    return DensityOperator::pure(r, 2, psi);
}

/// (|00> + |11>)/sqrt2 on {a, b}.
inline DensityOperator bell(Site a = {0, 0}, Site b = {1, 0}) {
    Vector psi = Vector::Zero(4);
    psi[0] = 1;
    psi[3] = 1;
    return DensityOperator::pure(Region{a, b}, 2, psi);
}

/// Perfectly correlated classical bits: p(0..0) = p(1..1) = 1/2, on (x0..x0+n-1, 0).
inline DensityOperator classical_chain(int n, int x0 = 0) {
    Region r = window(x0, 0, n, 1);
    size_t dim = size_t{1} << n;
    Matrix m = Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    m(0, 0) = 0.5;
    m((Eigen::Index)dim - 1, (Eigen::Index)dim - 1) = 0.5;
    return DensityOperator::trusted(r, 2, m);
}

/// Two Bell pairs sharing the middle site: AB on (0,0),(1,0) and BC on (1,0),(2,0).
inline std::pair<DensityOperator, DensityOperator> bell_monogamy_pair() {
    return {bell({0, 0}, {1, 0}), bell({1, 0}, {2, 0})};
}

inline std::map<std::string, DensityOperator> all() {
    auto [ab, bc] = bell_monogamy_pair();
    return {
        {"ghz3", ghz(3)},
        {"bell", bell()},
        {"classical_chain3", classical_chain(3)},
        {"bell_ab", ab},
        {"bell_bc", bc},
    };
}

}  // namespace micro

}  // namespace qmm

#endif
