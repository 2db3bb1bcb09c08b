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

#ifndef QMM_DENSOP_HPP
#define QMM_DENSOP_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmm/error.hpp"
#include "qmm/lattice.hpp"

namespace qmm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest supported composite dimension (13 qubits).
constexpr size_t MAX_DIM = size_t{1} << 13;

struct Tolerances {
    double tol_herm = 1e-10;
    double tol_trace = 1e-10;
    double tol_psd = 1e-10;
    double tol_entropy = 1e-6;       // bits
    double tol_consistency = 1e-8;   // trace distance
    double rank_cutoff = 1e-10;      // relative to the largest eigenvalue

    /// Defaults overridden by QMM_TOL_* variables when present.
    static Tolerances from_env() {
        Tolerances t;
        auto read = [](const char *name, double &dst) {
            if (const char *v = std::getenv(name)) {
                char *end = nullptr;
                double x = std::strtod(v, &end);
                if (end != v && x > 0) {
                    dst = x;
                }
            }
        };
        read("QMM_TOL_HERM", t.tol_herm);
        read("QMM_TOL_TRACE", t.tol_trace);
        read("QMM_TOL_PSD", t.tol_psd);
        read("QMM_TOL_ENTROPY", t.tol_entropy);
        read("QMM_TOL_CONSISTENCY", t.tol_consistency);
        read("QMM_TOL_RANK_CUTOFF", t.rank_cutoff);
        read("QMM_RANK_CUTOFF", t.rank_cutoff);
        return t;
    }
};

inline size_t ipow(size_t d, size_t n) {
    size_t r = 1;
    for (size_t k = 0; k < n; k++) {
        r *= d;
        if (r > (size_t{1} << 40)) {
            return r;
        }
    }
    return r;
}

inline void check_size(int d, size_t n_sites) {
    if (ipow((size_t)d, n_sites) > MAX_DIM) {
        throw Error(ErrorCode::SizeCapExceeded,
                    std::to_string(n_sites) + " sites at d=" + std::to_string(d) + " exceeds the dense cap");
    }
}

struct Eigh {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns; empty when not requested
};

namespace detail {

/// Householder tridiagonalization, absolute deflation of off-diagonals below
/// eps * max|m|, then implicit QL. Large, highly degenerate density matrices
/// (thousands of numerically zero eigenvalues) stall the relative deflation test
/// otherwise.
template <typename M>
bool eigh_impl(const M &m, bool want_vectors, Eigen::VectorXd &values, Matrix *vectors) {
    Eigen::Tridiagonalization<M> tri(m);
    Eigen::VectorXd diag = tri.diagonal();
    Eigen::VectorXd sub = tri.subDiagonal();
    const double floor = std::numeric_limits<double>::epsilon() * m.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < sub.size(); k++) {
        if (std::abs(sub[k]) <= floor) {
            sub[k] = 0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        return false;
    }
    values = es.eigenvalues();
    if (want_vectors) {
        M q = tri.matrixQ();
        *vectors = (q * es.eigenvectors().template cast<typename M::Scalar>()).template cast<cplx>();
    }
    return true;
}

}  // namespace detail

/// Hermitian eigendecomposition. Only the lower triangle of `m` is read.
/// Matrices with no imaginary part go through the real solver, several times faster.
inline Eigh eigh(const Matrix &m, bool want_vectors = true) {
    Eigh out;
    if (m.rows() == 0) {
        out.values.resize(0);
        return out;
    }
    bool ok;
    if (m.imag().cwiseAbs().maxCoeff() == 0) {
        Eigen::MatrixXd r = m.real();
        ok = detail::eigh_impl(r, want_vectors, out.values, &out.vectors);
    } else {
        ok = detail::eigh_impl(m, want_vectors, out.values, &out.vectors);
    }
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument, "eigensolver did not converge");
    }
    return out;
}

inline Eigen::VectorXd eigvalsh(const Matrix &m) {
    return eigh(m, false).values;
}

/// V f(L) V^dagger for Hermitian `m`.
template <typename F>
Matrix hermitian_function(const Matrix &m, F &&f) {
    Eigh e = eigh(m);
    Eigen::VectorXd fv(e.values.size());
    for (Eigen::Index k = 0; k < e.values.size(); k++) {
        fv[k] = f(e.values[k], e.values[e.values.size() - 1]);
    }
    return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

/// Shannon entropy in bits of a spectrum, clipped to [0, 1].
inline double entropy_bits(const Eigen::VectorXd &p) {
    double s = 0;
    for (Eigen::Index k = 0; k < p.size(); k++) {
        double v = std::min(1.0, std::max(0.0, p[k]));
        if (v > 0) {
            s -= v * std::log2(v);
        }
    }
    return s;
}

/// Composite-index offsets of the digits of `sub` inside `full`.
///
/// Entry k is the index in `full` of the basis state whose `sub` digits spell k
/// (big-endian over canonical order) and whose other digits are zero.
inline std::vector<size_t> digit_offsets(const Region &full, const Region &sub, int d) {
    const size_t n = full.size();
    const size_t k = sub.size();
    std::vector<size_t> weight(k);
    for (size_t j = 0; j < k; j++) {
        int p = full.index_of(sub[j]);
        if (p < 0) {
            throw Error(ErrorCode::RegionNotContained, sub.str() + " not inside " + full.str());
        }
        weight[j] = ipow((size_t)d, n - 1 - (size_t)p);
    }
    const size_t dim = ipow((size_t)d, k);
    std::vector<size_t> out(dim, 0);
    for (size_t idx = 0; idx < dim; idx++) {
        size_t rem = idx;
        size_t off = 0;
        for (size_t j = k; j-- > 0;) {
            off += (rem % (size_t)d) * weight[j];
            rem /= (size_t)d;
        }
        out[idx] = off;
    }
    return out;
}

class DensityOperator {
   public:
    DensityOperator() = default;

    /// Validating constructor. The matrix is symmetrized before the checks.
    static DensityOperator from_matrix(Region region, int d, Matrix m, const Tolerances &tol = {}) {
        if (d < 1) {
            throw Error(ErrorCode::DimensionMismatch, "site dimension must be positive");
        }
        check_size(d, region.size());
        const size_t dim = ipow((size_t)d, region.size());
        if ((size_t)m.rows() != dim || (size_t)m.cols() != dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                            std::to_string(dim));
        }
        double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol.tol_herm) {
            throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| = " + std::to_string(herm), herm);
        }
        Matrix h = (m + m.adjoint()) * 0.5;
        double tr_err = std::abs(h.trace() - cplx(1));
        if (tr_err > tol.tol_trace) {
            throw Error(ErrorCode::NotUnitTrace, "|tr - 1| = " + std::to_string(tr_err), tr_err);
        }
        double lo = eigvalsh(h)[0];
        if (lo < -tol.tol_psd) {
            throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(lo), -lo);
        }
        return DensityOperator(std::move(region), d, std::move(h));
    }

    /// Unvalidated constructor for internally produced operators. Symmetrizes only.
    static DensityOperator trusted(Region region, int d, Matrix m) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            for (Eigen::Index i = j; i < m.rows(); i++) {
                cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
                m(i, j) = v;
                m(j, i) = std::conj(v);
            }
        }
        return DensityOperator(std::move(region), d, std::move(m));
    }

    static DensityOperator maximally_mixed(Region region, int d = 2) {
        check_size(d, region.size());
        size_t dim = ipow((size_t)d, region.size());
        Matrix m = Matrix::Identity((Eigen::Index)dim, (Eigen::Index)dim) / (double)dim;
        return DensityOperator(std::move(region), d, std::move(m));
    }

    static DensityOperator pure(Region region, int d, const Vector &psi) {
        check_size(d, region.size());
        if ((size_t)psi.size() != ipow((size_t)d, region.size())) {
            throw Error(ErrorCode::DimensionMismatch, "state vector has the wrong length");
        }
        Vector v = psi / psi.norm();
        return DensityOperator(std::move(region), d, v * v.adjoint());
    }

    const Region &region() const {
        return region_;
    }
    int site_dimension() const {
        return d_;
    }
    const Matrix &matrix() const {
        return m_;
    }
    size_t dim() const {
        return (size_t)m_.rows();
    }

   private:
    DensityOperator(Region r, int d, Matrix m) : region_(std::move(r)), d_(d), m_(std::move(m)) {
    }
    Region region_;
    int d_ = 2;
    Matrix m_;
};

/// Tr over `drop` of a matrix living on `region`.
inline Matrix partial_trace_matrix(const Matrix &m, const Region &region, const Region &drop, int d) {
    if (!region.contains(drop)) {
        throw Error(ErrorCode::RegionNotContained, drop.str() + " not inside " + region.str());
    }
    Region keep = region - drop;
    auto ok = digit_offsets(region, keep, d);
    auto ot = digit_offsets(region, drop, d);
    const Eigen::Index dk = (Eigen::Index)ok.size();
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index j = 0; j < dk; j++) {
        for (Eigen::Index i = 0; i < dk; i++) {
            cplx acc = 0;
            for (size_t t : ot) {
                acc += m((Eigen::Index)(ok[i] + t), (Eigen::Index)(ok[j] + t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

inline DensityOperator partial_trace(const DensityOperator &rho, const Region &drop) {
    Matrix m = partial_trace_matrix(rho.matrix(), rho.region(), drop, rho.site_dimension());
    return DensityOperator::trusted(rho.region() - drop, rho.site_dimension(), std::move(m));
}

/// Reduction onto `keep`.
inline DensityOperator reduce(const DensityOperator &rho, const Region &keep) {
    if (!rho.region().contains(keep)) {
        throw Error(ErrorCode::RegionNotContained, keep.str() + " not inside " + rho.region().str());
    }
    if (keep == rho.region()) {
        return rho;
    }
    return partial_trace(rho, rho.region() - keep);
}

/// Same matrix, translated support. Translations preserve canonical order.
inline DensityOperator translate(const DensityOperator &rho, const Translation &t) {
    return DensityOperator::trusted(rho.region().translated(t), rho.site_dimension(), rho.matrix());
}

inline double von_neumann_entropy(const DensityOperator &rho) {
    return entropy_bits(eigvalsh(rho.matrix()));
}

inline void require_same_space(const DensityOperator &a, const DensityOperator &b) {
    if (a.site_dimension() != b.site_dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "site dimensions differ");
    }
    if (a.region() != b.region()) {
        throw Error(ErrorCode::RegionMismatch, a.region().str() + " vs " + b.region().str());
    }
}

inline double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    require_same_space(a, b);
    Matrix diff = a.matrix() - b.matrix();
    return 0.5 * eigvalsh(diff).cwiseAbs().sum();
}

/// Trace distance, or the bound sqrt(dim) |a - b|_F / 2 when that bound is already
/// at most `certify_below`. Either way the result is an upper bound on the exact value.
inline double trace_distance_within(const DensityOperator &a, const DensityOperator &b, double certify_below) {
    require_same_space(a, b);
    double bound = 0.5 * std::sqrt((double)a.dim()) * (a.matrix() - b.matrix()).norm();
    if (bound <= certify_below) {
        return bound;
    }
    return trace_distance(a, b);
}

struct Consistency {
    bool consistent;
    double residual;
};

/// a and b agree on the intersection of their supports.
inline Consistency consistent_with(const DensityOperator &a, const DensityOperator &b, double tol) {
    if (a.site_dimension() != b.site_dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "site dimensions differ");
    }
    Region common = a.region() & b.region();
    if (common.empty()) {
        return {true, 0.0};
    }
    double r = trace_distance(reduce(a, common), reduce(b, common));
    return {r <= tol, r};
}

/// A (on ra) tensor B (on rb), indexed by the canonical order of ra | rb.
inline Matrix kron_on(const Matrix &a, const Region &ra, const Matrix &b, const Region &rb, int d) {
    if (!ra.disjoint(rb)) {
        throw Error(ErrorCode::OverlappingSupports, ra.str() + " and " + rb.str());
    }
    Region u = ra | rb;
    check_size(d, u.size());
    auto oa = digit_offsets(u, ra, d);
    auto ob = digit_offsets(u, rb, d);
    const size_t dim = oa.size() * ob.size();
    Matrix out((Eigen::Index)dim, (Eigen::Index)dim);
    for (size_t a2 = 0; a2 < oa.size(); a2++) {
        for (size_t b2 = 0; b2 < ob.size(); b2++) {
            const Eigen::Index col = (Eigen::Index)(oa[a2] + ob[b2]);
            for (size_t a1 = 0; a1 < oa.size(); a1++) {
                const cplx av = a((Eigen::Index)a1, (Eigen::Index)a2);
                for (size_t b1 = 0; b1 < ob.size(); b1++) {
                    out((Eigen::Index)(oa[a1] + ob[b1]), col) = av * b((Eigen::Index)b1, (Eigen::Index)b2);
                }
            }
        }
    }
    return out;
}

inline DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    if (a.site_dimension() != b.site_dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "site dimensions differ");
    }
    int d = a.site_dimension();
    return DensityOperator::trusted(a.region() | b.region(), d, kron_on(a.matrix(), a.region(), b.matrix(), b.region(), d));
}

/// m (on r) tensor identity on target - r.
inline Matrix embed_identity(const Matrix &m, const Region &r, const Region &target, int d) {
    Region rest = target - r;
    size_t dr = ipow((size_t)d, rest.size());
    return kron_on(m, r, Matrix::Identity((Eigen::Index)dr, (Eigen::Index)dr), rest, d);
}

/// In place m <- (k tensor I) m, where k acts on the sites `s` of `region`.
inline void apply_left(Matrix &m, const Region &region, const Matrix &k, const Region &s, int d) {
    auto os = digit_offsets(region, s, d);
    auto orest = digit_offsets(region, region - s, d);
    const Eigen::Index ds = (Eigen::Index)os.size();
    if (k.rows() != ds || k.cols() != ds) {
        throw Error(ErrorCode::DimensionMismatch, "local operator does not match its support");
    }
    const Eigen::Index dim = m.rows();
    const Eigen::Index nr = (Eigen::Index)orest.size();
    // Gather a batch of columns as a ds x (nr * batch) block, one GEMM, scatter back.
    const Eigen::Index batch = std::max<Eigen::Index>(1, std::min<Eigen::Index>(m.cols(), (1 << 16) / std::max<Eigen::Index>(1, nr)));
    Matrix v(ds, nr * batch);
    Matrix w(ds, nr * batch);
    for (Eigen::Index c0 = 0; c0 < m.cols(); c0 += batch) {
        const Eigen::Index nc = std::min(batch, m.cols() - c0);
        for (Eigen::Index c = 0; c < nc; c++) {
            const cplx *col = m.data() + (c0 + c) * dim;
            for (Eigen::Index r = 0; r < nr; r++) {
                for (Eigen::Index j = 0; j < ds; j++) {
                    v(j, c * nr + r) = col[orest[(size_t)r] + os[(size_t)j]];
                }
            }
        }
        w.leftCols(nc * nr).noalias() = k * v.leftCols(nc * nr);
        for (Eigen::Index c = 0; c < nc; c++) {
            cplx *col = m.data() + (c0 + c) * dim;
            for (Eigen::Index r = 0; r < nr; r++) {
                for (Eigen::Index j = 0; j < ds; j++) {
                    col[orest[(size_t)r] + os[(size_t)j]] = w(j, c * nr + r);
                }
            }
        }
    }
}

/// In place m <- (k tensor I) m (k tensor I)^dagger.
inline void conjugate_local(Matrix &m, const Region &region, const Matrix &k, const Region &s, int d) {
    apply_left(m, region, k, s, d);
    m.adjointInPlace();
    apply_left(m, region, k, s, d);
    m.adjointInPlace();
}

}  // namespace qmm

#endif
