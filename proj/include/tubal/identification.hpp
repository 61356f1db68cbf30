// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tubal/classifier.hpp"
#include "tubal/errors.hpp"
#include "tubal/parallel.hpp"

namespace tubal {

/// Per-image vector of projection residuals against every class basis.
struct FeatureVector {
    std::vector<double> values;
    int true_label = -1;
};

/// One feature vector per test image, entry i = residual against basis i,
/// in test-file order (the partition remembers each image's file position).
inline std::vector<FeatureVector> feature_vectors(const ClassBasisSet& bases,
                                                  const ClassPartition& test, int threads = 1) {
    std::vector<FeatureVector> out(static_cast<std::size_t>(test.total));
    for (int d = 0; d < 10; ++d) {
        const std::int64_t m = test.counts[std::size_t(d)];
        if (m == 0) continue;
        const Tensor3& t = test.tensors[std::size_t(d)];
        const auto& where = test.source_indices[std::size_t(d)];
        parallel_for(m, threads, [&](std::int64_t jb, std::int64_t je) {
            for (std::int64_t j = jb; j < je; ++j) {
                ClassifyResult r = classify(bases, t.lateral_tensor(j));
                out[static_cast<std::size_t>(where[std::size_t(j)])] = {std::move(r.residuals), d};
            }
        });
    }
    return out;
}

/// Cosine of two feature vectors; lands in [0, 1] because residuals are
/// nonnegative (clamped against last-ulp excursions).
inline double cosine_similarity(const FeatureVector& f, const FeatureVector& g) {
    if (f.values.size() != g.values.size())
        throw DimensionError("cosine_similarity: feature lengths differ");
    double dot = 0.0, nf = 0.0, ng = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        dot += f.values[i] * g.values[i];
        nf += f.values[i] * f.values[i];
        ng += g.values[i] * g.values[i];
    }
    if (nf == 0.0 || ng == 0.0)
        throw IntegrityError("cosine_similarity: undefined for a zero feature vector");
    return std::clamp(dot / (std::sqrt(nf) * std::sqrt(ng)), 0.0, 1.0);
}

namespace detail {
/// Features as rows of a unit-normalized matrix, so scores are plain dot
/// products. Throws on zero vectors, like cosine_similarity.
inline Eigen::MatrixXd normalized_feature_matrix(const std::vector<FeatureVector>& features) {
    if (features.empty()) throw DimensionError("no feature vectors");
    const Index dim = static_cast<Index>(features[0].values.size());
    Eigen::MatrixXd out(static_cast<Index>(features.size()), dim);
    for (Index i = 0; i < out.rows(); ++i) {
        const auto& v = features[static_cast<std::size_t>(i)].values;
        if (static_cast<Index>(v.size()) != dim)
            throw DimensionError("feature lengths differ");
        Eigen::Map<const Eigen::VectorXd> row(v.data(), dim);
        const double norm = row.norm();
        if (norm == 0.0)
            throw IntegrityError("similarity: zero feature vector at index " + std::to_string(i));
        out.row(i) = row.transpose() / norm;
    }
    return out;
}
}  // namespace detail

/// Dense block of pairwise scores: entry (i, j) = cosine of features
/// row_begin+i and col_begin+j. Blocks are computed on demand; the full
/// matrix is never materialized unless the caller asks for all of it.
inline Eigen::MatrixXd similarity_block(const std::vector<FeatureVector>& features,
                                        std::int64_t row_begin, std::int64_t row_end,
                                        std::int64_t col_begin, std::int64_t col_end) {
    const auto count = static_cast<std::int64_t>(features.size());
    if (row_begin < 0 || row_end > count || row_begin > row_end || col_begin < 0 ||
        col_end > count || col_begin > col_end)
        throw std::out_of_range("similarity_block: range outside [0, " + std::to_string(count) +
                                ")");
    const Eigen::MatrixXd fn = detail::normalized_feature_matrix(features);
    Eigen::MatrixXd block = fn.middleRows(row_begin, row_end - row_begin) *
                            fn.middleRows(col_begin, col_end - col_begin).transpose();
    return block.cwiseMax(0.0).cwiseMin(1.0);
}

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;  // descending threshold: (0,0) -> (1,1)
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

/// ROC over all unordered pairs (i < j); a pair is positive iff the true
/// labels agree. Sweeps the uniform grid t_j = j/bins on [0, 1] plus -inf/+inf
/// endpoints, counting via two score histograms instead of storing the pairs.
/// Scores exactly equal to 1 get their own counter, so every grid threshold
/// reproduces the exhaustive count exactly.
inline RocCurve roc_curve(const std::vector<FeatureVector>& features, int bins, int threads = 1) {
    if (bins < 2) throw DimensionError("roc_curve: need at least 2 threshold bins");
    const Eigen::MatrixXd fn = detail::normalized_feature_matrix(features);
    const std::int64_t count = fn.rows();
    const auto nbins = static_cast<std::size_t>(bins);

    // split rows so every chunk carries about the same number of pairs
    const int nchunks = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::vector<std::int64_t> bounds{0};
    const double total_pairs = 0.5 * double(count) * double(count - 1);
    for (int c = 1; c < nchunks; ++c) {
        const double remaining = total_pairs * (1.0 - double(c) / nchunks);
        const auto row = static_cast<std::int64_t>(double(count) - std::sqrt(2.0 * remaining));
        bounds.push_back(std::clamp<std::int64_t>(row, bounds.back(), count));
    }
    bounds.push_back(count);

    std::vector<std::vector<std::int64_t>> pos(static_cast<std::size_t>(nchunks)),
        neg(static_cast<std::size_t>(nchunks));
    parallel_for(nchunks, nchunks, [&](std::int64_t cb, std::int64_t ce) {
        for (std::int64_t c = cb; c < ce; ++c) {
            auto& hp = pos[static_cast<std::size_t>(c)];
            auto& hn = neg[static_cast<std::size_t>(c)];
            hp.assign(nbins + 1, 0);
            hn.assign(nbins + 1, 0);
            for (std::int64_t i = bounds[std::size_t(c)]; i < bounds[std::size_t(c) + 1]; ++i) {
                const int label_i = features[static_cast<std::size_t>(i)].true_label;
                for (std::int64_t j = i + 1; j < count; ++j) {
                    const double s = std::clamp(fn.row(i).dot(fn.row(j)), 0.0, 1.0);
                    const std::size_t idx =
                        s >= 1.0 ? nbins : static_cast<std::size_t>(s * bins);
                    if (label_i == features[static_cast<std::size_t>(j)].true_label)
                        ++hp[idx];
                    else
                        ++hn[idx];
                }
            }
        }
    });
    std::vector<std::int64_t> hist_pos(nbins + 1, 0), hist_neg(nbins + 1, 0);
    for (int c = 0; c < nchunks; ++c)
        for (std::size_t b = 0; b <= nbins; ++b) {
            hist_pos[b] += pos[static_cast<std::size_t>(c)][b];
            hist_neg[b] += neg[static_cast<std::size_t>(c)][b];
        }

    RocCurve curve;
    curve.positives = std::accumulate(hist_pos.begin(), hist_pos.end(), std::int64_t{0});
    curve.negatives = std::accumulate(hist_neg.begin(), hist_neg.end(), std::int64_t{0});
    const auto rate = [](std::int64_t ge, std::int64_t denom) {
        return denom ? double(ge) / double(denom) : 0.0;
    };
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::int64_t ge_pos = 0, ge_neg = 0;
    std::vector<RocPoint> grid;
    for (std::size_t j = nbins + 1; j-- > 0;) {
        ge_pos += hist_pos[j];
        ge_neg += hist_neg[j];
        grid.push_back({double(j) / bins, rate(ge_neg, curve.negatives),
                        rate(ge_pos, curve.positives)});
    }
    curve.points.insert(curve.points.end(), grid.begin(), grid.end());
    curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    return curve;
}

/// Trapezoidal area under the curve.
inline double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
    }
    return area;
}

inline void write_roc_csv(const RocCurve& curve, std::ostream& os) {
    os << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points) {
        detail::put_f64_csv(os, p.threshold);
        os << ',';
        detail::put_f64_csv(os, p.fpr);
        os << ',';
        detail::put_f64_csv(os, p.tpr);
        os << '\n';
    }
}

/// Stable permutation that orders images by true label (Fig. 6 display order).
inline std::vector<std::int64_t> order_by_label(const std::vector<FeatureVector>& features) {
    std::vector<std::int64_t> order(features.size());
    std::iota(order.begin(), order.end(), std::int64_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return features[static_cast<std::size_t>(a)].true_label <
               features[static_cast<std::size_t>(b)].true_label;
    });
    return order;
}

/// Binary 8-bit PGM of pairwise scores for rows x cols of `order`, windowed
/// to [window_lo, window_hi]: below-window scores render as 0, the window
/// maps linearly onto 0..255. Streams one row block at a time.
inline void write_similarity_pgm(const std::vector<FeatureVector>& features,
                                 const std::vector<std::int64_t>& order, std::int64_t row_begin,
                                 std::int64_t row_end, std::int64_t col_begin,
                                 std::int64_t col_end, std::ostream& os,
                                 double window_lo = 0.98, double window_hi = 1.0) {
    const auto count = static_cast<std::int64_t>(order.size());
    if (row_begin < 0 || row_end > count || row_begin >= row_end || col_begin < 0 ||
        col_end > count || col_begin >= col_end)
        throw std::out_of_range("similarity heatmap: empty or out-of-bounds range");
    const Eigen::MatrixXd fn = detail::normalized_feature_matrix(features);
    Eigen::MatrixXd sel_cols(col_end - col_begin, fn.cols());
    for (std::int64_t j = col_begin; j < col_end; ++j)
        sel_cols.row(j - col_begin) = fn.row(order[static_cast<std::size_t>(j)]);

    os << "P5\n" << (col_end - col_begin) << ' ' << (row_end - row_begin) << "\n255\n";
    const std::int64_t block = 512;
    std::vector<char> scanline(static_cast<std::size_t>(col_end - col_begin));
    for (std::int64_t rb = row_begin; rb < row_end; rb += block) {
        const std::int64_t re = std::min(row_end, rb + block);
        Eigen::MatrixXd sel_rows(re - rb, fn.cols());
        for (std::int64_t i = rb; i < re; ++i)
            sel_rows.row(i - rb) = fn.row(order[static_cast<std::size_t>(i)]);
        const Eigen::MatrixXd scores = sel_rows * sel_cols.transpose();
        for (Index i = 0; i < scores.rows(); ++i) {
            for (Index j = 0; j < scores.cols(); ++j) {
                const double s = std::clamp(scores(i, j), 0.0, 1.0);
                int v = 0;
                if (s >= window_lo)
                    v = static_cast<int>(std::lround((std::min(s, window_hi) - window_lo) /
                                                     (window_hi - window_lo) * 255.0));
                scanline[static_cast<std::size_t>(j)] = static_cast<char>(std::clamp(v, 0, 255));
            }
            os.write(scanline.data(), static_cast<std::streamsize>(scanline.size()));
        }
    }
}

}  // namespace tubal
