// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tubal/errors.hpp"

namespace tubal {

using Index = Eigen::Index;

/// Dense real third-order tensor, the universal container of this library.
///
/// Layout is frontal-slice-major: entry (i, j, k) lives at offset
/// ((k*m + j)*ell + i), so frontal slice k is a contiguous ell x m
/// column-major block. Lateral slices and tubes are strided.
/// Indices are 0-based throughout the public interface.
///
/// Values are immutable by convention after construction: every operation
/// below is a pure function, so shared Tensor3 values are safe to read from
/// any number of threads.
class Tensor3 {
public:
    Tensor3() = default;

    /// Zero tensor of the given shape.
    Tensor3(Index ell, Index m, Index n) : ell_(ell), m_(m), n_(n) {
        check_dims(ell, m, n);
        data_.assign(static_cast<std::size_t>(ell * m * n), 0.0);
    }

    /// Adopts `data` in frontal-slice-major order. Rejects NaN/Inf entries.
    static Tensor3 from_data(Index ell, Index m, Index n, std::vector<double> data) {
        check_dims(ell, m, n);
        if (static_cast<Index>(data.size()) != ell * m * n)
            throw DimensionError("Tensor3::from_data: data length " + std::to_string(data.size()) +
                                 " != " + std::to_string(ell * m * n));
        for (double v : data)
            if (!std::isfinite(v)) throw IntegrityError("Tensor3::from_data: non-finite entry");
        Tensor3 t;
        t.ell_ = ell;
        t.m_ = m;
        t.n_ = n;
        t.data_ = std::move(data);
        return t;
    }

    Index ell() const { return ell_; }
    Index m() const { return m_; }
    Index n() const { return n_; }
    Index size() const { return ell_ * m_ * n_; }

    double operator()(Index i, Index j, Index k) const {
        return data_[static_cast<std::size_t>((k * m_ + j) * ell_ + i)];
    }
    double& operator()(Index i, Index j, Index k) {
        return data_[static_cast<std::size_t>((k * m_ + j) * ell_ + i)];
    }

    const std::vector<double>& data() const { return data_; }

    /// Frontal slice A^(k) as a contiguous ell x m map.
    Eigen::Map<const Eigen::MatrixXd> frontal(Index k) const {
        return {data_.data() + k * ell_ * m_, ell_, m_};
    }
    Eigen::Map<Eigen::MatrixXd> frontal(Index k) {
        return {data_.data() + k * ell_ * m_, ell_, m_};
    }

    /// Lateral slice as an ell x n matrix (copy; source is strided).
    Eigen::MatrixXd lateral(Index j) const {
        Eigen::MatrixXd out(ell_, n_);
        for (Index k = 0; k < n_; ++k) out.col(k) = frontal(k).col(j);
        return out;
    }

    /// Lateral slice j as an ell x 1 x n tensor (the shape classify consumes).
    Tensor3 lateral_tensor(Index j) const {
        Tensor3 out(ell_, 1, n_);
        for (Index k = 0; k < n_; ++k) out.frontal(k).col(0) = frontal(k).col(j);
        return out;
    }

    /// Tube (i, j) as a length-n vector (copy).
    Eigen::VectorXd tube(Index i, Index j) const {
        Eigen::VectorXd out(n_);
        for (Index k = 0; k < n_; ++k) out(k) = (*this)(i, j, k);
        return out;
    }

    bool same_dims(const Tensor3& o) const { return ell_ == o.ell_ && m_ == o.m_ && n_ == o.n_; }

    /// Debug dump: one frontal slice per CSV block, blank-line separated.
    void dump_csv(std::ostream& os) const {
        os.precision(17);
        for (Index k = 0; k < n_; ++k) {
            for (Index i = 0; i < ell_; ++i) {
                for (Index j = 0; j < m_; ++j) {
                    if (j) os << ',';
                    os << (*this)(i, j, k);
                }
                os << '\n';
            }
            if (k + 1 < n_) os << '\n';
        }
    }

private:
    static void check_dims(Index ell, Index m, Index n) {
        if (ell < 1 || m < 1 || n < 1)
            throw DimensionError("Tensor3: dims must be positive, got " + std::to_string(ell) +
                                 "x" + std::to_string(m) + "x" + std::to_string(n));
    }

    Index ell_ = 0, m_ = 0, n_ = 0;
    std::vector<double> data_;
};

/// Dense real matrix with column-major 64-bit storage; hosts bcirc/unfold results.
using BlockMatrix = Eigen::MatrixXd;

/// Stacks the frontal slices into an (ell*n) x m block column.
inline BlockMatrix unfold(const Tensor3& a) {
    BlockMatrix out(a.ell() * a.n(), a.m());
    for (Index k = 0; k < a.n(); ++k) out.middleRows(k * a.ell(), a.ell()) = a.frontal(k);
    return out;
}

/// Inverse of unfold for the given target shape.
inline Tensor3 fold(const BlockMatrix& mtx, Index ell, Index m, Index n) {
    if (ell < 1 || m < 1 || n < 1 || mtx.rows() != ell * n || mtx.cols() != m)
        throw DimensionError("fold: matrix " + std::to_string(mtx.rows()) + "x" +
                             std::to_string(mtx.cols()) + " does not fold to " +
                             std::to_string(ell) + "x" + std::to_string(m) + "x" +
                             std::to_string(n));
    Tensor3 out(ell, m, n);
    for (Index k = 0; k < n; ++k) out.frontal(k) = mtx.middleRows(k * ell, ell);
    return out;
}

/// Block-circulant matrix of the frontal slices; block (r, c) is the frontal
/// slice ((r - c) mod n). The first block column equals unfold(a).
inline BlockMatrix bcirc(const Tensor3& a) {
    const Index ell = a.ell(), m = a.m(), n = a.n();
    BlockMatrix out(ell * n, m * n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r)
            out.block(r * ell, c * m, ell, m) = a.frontal(((r - c) % n + n) % n);
    return out;
}

/// Frontal slice 0 is an identity matrix, all other slices zero.
inline Tensor3 identity_tensor(Index m, Index n) {
    Tensor3 out(m, m, n);
    out.frontal(0).setIdentity();
    return out;
}

/// Transposes each frontal slice and reverses the order of slices 1..n-1.
inline Tensor3 ttranspose(const Tensor3& a) {
    Tensor3 out(a.m(), a.ell(), a.n());
    out.frontal(0) = a.frontal(0).transpose();
    for (Index k = 1; k < a.n(); ++k) out.frontal(k) = a.frontal(a.n() - k).transpose();
    return out;
}

namespace detail {
inline void check_tprod_dims(const Tensor3& a, const Tensor3& b) {
    if (a.m() != b.ell() || a.n() != b.n())
        throw DimensionError("t-product: " + std::to_string(a.ell()) + "x" + std::to_string(a.m()) +
                             "x" + std::to_string(a.n()) + " * " + std::to_string(b.ell()) + "x" +
                             std::to_string(b.m()) + "x" + std::to_string(b.n()) +
                             " is not conformable");
}
}  // namespace detail

/// Dense reference t-product fold(bcirc(a) * unfold(b)).
///
/// Oracle-only code: materializes bcirc, O(ell*m*n^2*p), and refuses instances
/// with n*max(dim) > 4096. The production path is tprod_fast.
inline Tensor3 tprod_reference(const Tensor3& a, const Tensor3& b) {
    detail::check_tprod_dims(a, b);
    const Index widest = std::max({a.ell(), a.m(), b.m()});
    if (a.n() * widest > 4096)
        throw DimensionError("tprod_reference: instance too large for the dense oracle (n*max dim " +
                             std::to_string(a.n() * widest) + " > 4096)");
    return fold(bcirc(a) * unfold(b), a.ell(), b.m(), a.n());
}

/// Frobenius norm. Accumulates in lateral-slice-major order (j, k, i), which
/// is unfold's memory order, so frob_norm(a) and frob_norm-of-unfold agree
/// bit for bit.
inline double frob_norm(const Tensor3& a) {
    double acc = 0.0;
    for (Index j = 0; j < a.m(); ++j)
        for (Index k = 0; k < a.n(); ++k)
            for (Index i = 0; i < a.ell(); ++i) {
                const double v = a(i, j, k);
                acc += v * v;
            }
    return std::sqrt(acc);
}

inline double frob_norm(const BlockMatrix& mtx) {
    double acc = 0.0;
    for (Index j = 0; j < mtx.cols(); ++j)
        for (Index i = 0; i < mtx.rows(); ++i) acc += mtx(i, j) * mtx(i, j);
    return std::sqrt(acc);
}

/// True iff every off-diagonal entry of every frontal slice has |.| <= tol.
inline bool is_f_diagonal(const Tensor3& a, double tol) {
    for (Index k = 0; k < a.n(); ++k)
        for (Index j = 0; j < a.m(); ++j)
            for (Index i = 0; i < a.ell(); ++i)
                if (i != j && std::abs(a(i, j, k)) > tol) return false;
    return true;
}

}  // namespace tubal
