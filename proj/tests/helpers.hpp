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

#ifndef QMM_TESTS_HELPERS_HPP
#define QMM_TESTS_HELPERS_HPP

#include <random>

#include "qmm/qmm.hpp"

namespace qmm::testing {

/// Ginibre-distributed mixed state of the given rank (full rank when rank = 0).
inline DensityOperator random_state(const Region &r, std::mt19937_64 &rng, int d = 2, size_t rank = 0) {
    const Eigen::Index dim = (Eigen::Index)ipow((size_t)d, r.size());
    const Eigen::Index k = rank ? (Eigen::Index)rank : dim;
    std::normal_distribution<double> g;
    Matrix a(dim, k);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < k; j++) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Matrix m = a * a.adjoint();
    m /= m.trace().real();
    return DensityOperator::from_matrix(r, d, m);
}

/// Haar-ish random unitary via QR.
inline Matrix random_unitary(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < dim; j++) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

inline Matrix hfun_sqrt(const Matrix &m, bool inverse) {
    return hermitian_function(m, [inverse](double x, double) { return inverse ? 1 / std::sqrt(x) : std::sqrt(x); });
}

/// A zero-CMI state on A | B_L B_R | C produced by the Petz formula, with a random
/// unitary on B hiding the factorization.
struct MarkovInstance {
    DensityOperator rho;
    Region a, b, c;
};

inline MarkovInstance petz_markov_state(std::mt19937_64 &rng) {
    Region a{{0, 0}}, bl{{1, 0}}, br{{2, 0}}, c{{3, 0}};
    auto s_abl = random_state(a | bl, rng);
    auto s_br = random_state(br, rng);
    auto l_brc = random_state(br | c, rng);
    // Match lambda_{B_R} to sigma_{B_R}.
    Matrix x = hfun_sqrt(s_br.matrix(), false) * hfun_sqrt(reduce(l_brc, br).matrix(), true);
    Matrix xi = embed_identity(x, br, br | c, 2);
    auto l_brc2 = DensityOperator::from_matrix(br | c, 2, xi * l_brc.matrix() * xi.adjoint());
    auto sigma = tensor(s_abl, s_br);
    auto lambda = tensor(reduce(s_abl, bl), l_brc2);
    DensityOperator rho = *right_merge(sigma, lambda);
    Matrix u = random_unitary(4, rng);
    Matrix m = rho.matrix();
    conjugate_local(m, rho.region(), u, bl | br, 2);
    return {DensityOperator::from_matrix(rho.region(), 2, m), a, bl | br, c};
}

}  // namespace qmm::testing

#endif
