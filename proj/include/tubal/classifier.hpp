// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/mnist.hpp"
#include "tubal/parallel.hpp"
#include "tubal/spectral.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tolerances.hpp"
#include "tubal/tsvd.hpp"

namespace tubal {

/// Truncated local tSVD bases, one per class, kept in spectral form so that
/// classifying one image costs h small matrix-vector products and no inverse
/// transform.
///
/// Both the training path and the load-from-disk path construct the spectral
/// slices by transforming the real-domain basis tensor, so a saved and
/// reloaded basis set reproduces in-memory evaluation bit for bit.
class ClassBasisSet {
public:
    struct Basis {
        int label = 0;
        Tensor3 u;                               // ell x k x n, orthonormal lateral slices
        std::vector<Eigen::MatrixXcd> spectral;  // h slices, ell x k
    };

    ClassBasisSet(Index ell, Index n, Index k) : ell_(ell), n_(n), k_(k) {}

    Index ell() const { return ell_; }
    Index n() const { return n_; }
    Index k() const { return k_; }
    Index num_classes() const { return static_cast<Index>(bases_.size()); }
    const Basis& basis(Index i) const { return bases_[static_cast<std::size_t>(i)]; }

    /// Registers a trained basis. Verifies shape and one-sided orthonormality
    /// ||u^T*u - J||_F <= tolerance; this is the once-per-basis check that
    /// project_residual relies on.
    void add_basis(int label, const Tensor3& u) {
        if (u.ell() != ell_ || u.m() != k_ || u.n() != n_)
            throw DimensionError("ClassBasisSet: basis for class " + std::to_string(label) +
                                 " has shape " + std::to_string(u.ell()) + "x" +
                                 std::to_string(u.m()) + "x" + std::to_string(u.n()) +
                                 ", expected " + std::to_string(ell_) + "x" + std::to_string(k_) +
                                 "x" + std::to_string(n_));
        Basis b;
        b.label = label;
        b.u = u;
        const SpectralTensor su = dft_tubes(u);
        double ortho2 = 0.0;
        b.spectral.reserve(static_cast<std::size_t>(su.num_slices()));
        for (Index f = 0; f < su.num_slices(); ++f) {
            const auto& uf = su.slice(f);
            ortho2 += spectral_weight(su, f) *
                      (uf.adjoint() * uf - Eigen::MatrixXcd::Identity(k_, k_)).squaredNorm();
            b.spectral.push_back(uf);
        }
        // equals frob_norm(u^T*u - identity_tensor) by Parseval
        if (std::sqrt(ortho2 / static_cast<double>(n_)) > tol::kOrthogonalityAbs)
            throw IntegrityError("ClassBasisSet: basis for class " + std::to_string(label) +
                                 " is not orthonormal within tolerance");
        bases_.push_back(std::move(b));
    }

private:
    Index ell_, n_, k_;
    std::vector<Basis> bases_;
};

/// tSVD of one class tensor truncated to tubal rank k; V is never computed
/// (only the range basis and the singular tubes are kept).
inline TsvdFactors train_class_factors(const Tensor3& class_tensor, Index k, int threads = 1) {
    if (k < 1 || k > std::min(class_tensor.ell(), class_tensor.m()))
        throw DimensionError("train: k = " + std::to_string(k) + " out of range for class tensor " +
                             std::to_string(class_tensor.ell()) + "x" +
                             std::to_string(class_tensor.m()) + "x" +
                             std::to_string(class_tensor.n()));
    return truncate(tsvd(class_tensor, {.threads = threads, .compute_v = false}), k);
}

/// Trains one truncated basis per class present in the partition.
inline ClassBasisSet train(const ClassPartition& partition, Index k, int threads = 1) {
    ClassBasisSet bases(0, 0, 0);
    bool first = true;
    for (int d = 0; d < 10; ++d) {
        if (partition.counts[std::size_t(d)] == 0) continue;
        const Tensor3& t = partition.tensors[std::size_t(d)];
        if (first) {
            bases = ClassBasisSet(t.ell(), t.n(), k);
            first = false;
        }
        bases.add_basis(d, train_class_factors(t, k, threads).u);
    }
    if (first) throw DimensionError("train: empty partition");
    return bases;
}

struct ClassifyResult {
    int label = -1;
    std::vector<double> residuals;  // one per basis, in basis order
};

/// Nearest-subspace decision: residuals[i] = ||b - U_i*(U_i^T*b)||_F, label =
/// argmin; ties go to the lowest class index.
inline ClassifyResult classify(const ClassBasisSet& bases, const Tensor3& b) {
    if (b.ell() != bases.ell() || b.n() != bases.n() || b.m() != 1)
        throw DimensionError("classify: image shape " + std::to_string(b.ell()) + "x" +
                             std::to_string(b.m()) + "x" + std::to_string(b.n()) +
                             " does not match bases (" + std::to_string(bases.ell()) + "x1x" +
                             std::to_string(bases.n()) + ")");
    const SpectralTensor sb = dft_tubes(b);
    ClassifyResult out;
    out.residuals.resize(static_cast<std::size_t>(bases.num_classes()));
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < bases.num_classes(); ++i) {
        const double r = detail::spectral_residual(bases.basis(i).spectral, sb);
        out.residuals[static_cast<std::size_t>(i)] = r;
        if (r < best) {
            best = r;
            out.label = bases.basis(i).label;
        }
    }
    return out;
}

struct ClassificationReport {
    double overall_rate = 0.0;                         // in [0, 1]
    std::array<double, 10> per_digit_rate{};           // in [0, 1]
    std::array<std::array<std::int64_t, 10>, 10> confusion{};  // [true][predicted]
    std::array<int, 10> most_freq{};
    std::array<int, 10> second_most{};
    std::int64_t total = 0;
    std::int64_t correct = 0;
};

/// Classifies every image of the test partition (data-parallel over images;
/// confusion counts are order-independent integers).
inline ClassificationReport evaluate(const ClassBasisSet& bases, const ClassPartition& test,
                                     int threads = 1) {
    ClassificationReport report;
    for (int d = 0; d < 10; ++d) {
        const std::int64_t m = test.counts[std::size_t(d)];
        if (m == 0) continue;
        const Tensor3& t = test.tensors[std::size_t(d)];
        std::vector<int> pred(static_cast<std::size_t>(m));
        parallel_for(m, threads, [&](std::int64_t jb, std::int64_t je) {
            for (std::int64_t j = jb; j < je; ++j)
                pred[static_cast<std::size_t>(j)] = classify(bases, t.lateral_tensor(j)).label;
        });
        for (int p : pred) ++report.confusion[std::size_t(d)][std::size_t(p)];
    }
    for (int d = 0; d < 10; ++d) {
        std::int64_t row = 0;
        for (int c = 0; c < 10; ++c) row += report.confusion[std::size_t(d)][std::size_t(c)];
        report.total += row;
        report.correct += report.confusion[std::size_t(d)][std::size_t(d)];
        report.per_digit_rate[std::size_t(d)] =
            row ? double(report.confusion[std::size_t(d)][std::size_t(d)]) / double(row) : 0.0;
        int first = 0, second = -1;
        for (int c = 1; c < 10; ++c)
            if (report.confusion[std::size_t(d)][std::size_t(c)] >
                report.confusion[std::size_t(d)][std::size_t(first)])
                first = c;
        for (int c = 0; c < 10; ++c) {
            if (c == first) continue;
            if (second < 0 || report.confusion[std::size_t(d)][std::size_t(c)] >
                                  report.confusion[std::size_t(d)][std::size_t(second)])
                second = c;
        }
        report.most_freq[std::size_t(d)] = first;
        report.second_most[std::size_t(d)] = second;
    }
    report.overall_rate = report.total ? double(report.correct) / double(report.total) : 0.0;
    return report;
}

// --- CSV export ------------------------------------------------------------

namespace detail {
inline void put_f64_csv(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}
}  // namespace detail

/// Fig. 3-style sweep table: one (k, recognition rate in percent) row per k.
inline void write_accuracy_csv(const std::vector<std::pair<Index, double>>& rates,
                               std::ostream& os) {
    os << "k,recognition_rate_percent\n";
    for (const auto& [k, rate] : rates) {
        os << k << ',';
        detail::put_f64_csv(os, rate * 100.0);
        os << '\n';
    }
}

/// Fig. 5-style per-digit table.
inline void write_per_digit_csv(const ClassificationReport& report, std::ostream& os) {
    os << "digit,most_frequent,second_most,rate_percent\n";
    for (int d = 0; d < 10; ++d) {
        os << d << ',' << report.most_freq[std::size_t(d)] << ','
           << report.second_most[std::size_t(d)] << ',';
        detail::put_f64_csv(os, report.per_digit_rate[std::size_t(d)] * 100.0);
        os << '\n';
    }
}

/// Raw 10x10 confusion counts, row = true digit, column = predicted digit.
inline void write_confusion_csv(const ClassificationReport& report, std::ostream& os) {
    for (int d = 0; d < 10; ++d) {
        for (int c = 0; c < 10; ++c) {
            if (c) os << ',';
            os << report.confusion[std::size_t(d)][std::size_t(c)];
        }
        os << '\n';
    }
}

}  // namespace tubal
