// SPDX-License-Identifier: Apache-2.0
#include "tubal/classifier.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"
#include "tubal/mnist.hpp"
#include "tubal/tsvd.hpp"

namespace tubal {
namespace {

using testing::random_tensor;

// Synthetic image set: `per_class` images per digit 0..num_classes-1, each a
// noisy version of a distinct deterministic pattern.
ImageSet synthetic_set(int num_classes, int per_class, std::int64_t rows, std::int64_t cols,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> noise(-12, 12);
    ImageSet set;
    set.rows = rows;
    set.cols = cols;
    std::vector<std::vector<std::uint8_t>> prototype(static_cast<std::size_t>(num_classes));
    for (int d = 0; d < num_classes; ++d) {
        prototype[std::size_t(d)].resize(std::size_t(rows * cols));
        for (std::int64_t p = 0; p < rows * cols; ++p)
            prototype[std::size_t(d)][std::size_t(p)] =
                std::uint8_t(40 + 17 * d + 11 * (p % 7) + 5 * ((d * p) % 13));
    }
    // interleave classes so file order differs from class-major order
    for (int j = 0; j < per_class; ++j)
        for (int d = 0; d < num_classes; ++d) {
            for (std::int64_t p = 0; p < rows * cols; ++p) {
                int v = prototype[std::size_t(d)][std::size_t(p)] + noise(rng);
                set.pixels.push_back(std::uint8_t(std::clamp(v, 0, 255)));
            }
            set.labels.push_back(std::uint8_t(d));
            ++set.count;
        }
    return set;
}

TEST(Train, BasisShapesAndOrthonormality) {
    const ImageSet set = synthetic_set(3, 8, 6, 6, 101);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 2);
    EXPECT_EQ(bases.num_classes(), 3);
    EXPECT_EQ(bases.k(), 2);
    for (Index i = 0; i < 3; ++i) {
        EXPECT_EQ(bases.basis(i).label, int(i));
        EXPECT_EQ(bases.basis(i).u.ell(), 6);
        EXPECT_EQ(bases.basis(i).u.m(), 2);
        EXPECT_EQ(bases.basis(i).u.n(), 6);
    }
}

TEST(Train, MatchesTsvdTruncation) {
    const ImageSet set = synthetic_set(2, 6, 5, 5, 102);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 3);
    const TsvdFactors f = truncate(tsvd(part.tensors[0]), 3);
    EXPECT_TRUE(testing::bitwise_equal(bases.basis(0).u, f.u));
}

TEST(Train, RejectsOutOfRangeK) {
    const ImageSet set = synthetic_set(2, 3, 4, 4, 103);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    EXPECT_THROW(train(part, 0), DimensionError);
    EXPECT_THROW(train(part, 4), DimensionError);  // m_i = 3 < 4
}

TEST(Train, SingleImageClassGivesZeroResidualOnThatImage) {
    const ImageSet set = synthetic_set(2, 1, 5, 5, 104);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 1);
    const Tensor3 b = part.tensors[0].lateral_tensor(0);
    const ClassifyResult r = classify(bases, b);
    EXPECT_EQ(r.label, 0);
    EXPECT_LE(r.residuals[0], 1e-10 * frob_norm(b));
}

TEST(Classify, BasisSliceBelongsToItsClass) {
    const ImageSet set = synthetic_set(4, 8, 6, 6, 105);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 2);
    const Tensor3 b = bases.basis(3).u.lateral_tensor(0);
    const ClassifyResult r = classify(bases, b);
    EXPECT_EQ(r.label, 3);
    EXPECT_LE(r.residuals[3], 1e-10 * frob_norm(b));
}

TEST(Classify, ResidualsScaleLinearlyWithTheImage) {
    const ImageSet set = synthetic_set(3, 6, 5, 5, 106);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 2);
    Tensor3 b = part.tensors[1].lateral_tensor(2);
    const ClassifyResult r1 = classify(bases, b);
    Tensor3 b3(b.ell(), 1, b.n());
    for (Index k = 0; k < b.n(); ++k) b3.frontal(k) = 3.0 * b.frontal(k);
    const ClassifyResult r3 = classify(bases, b3);
    EXPECT_EQ(r1.label, r3.label);
    for (std::size_t i = 0; i < r1.residuals.size(); ++i)
        EXPECT_NEAR(r3.residuals[i], 3.0 * r1.residuals[i],
                    1e-12 * std::max(1.0, r1.residuals[i]));
}

TEST(Classify, RejectsMismatchedImage) {
    const ImageSet set = synthetic_set(2, 4, 5, 5, 107);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 2);
    std::mt19937_64 rng(1);
    EXPECT_THROW(classify(bases, random_tensor(rng, 4, 1, 5)), DimensionError);
    EXPECT_THROW(classify(bases, random_tensor(rng, 5, 2, 5)), DimensionError);
}

TEST(Evaluate, ConfusionBookkeepingIsExact) {
    const ImageSet train_set = synthetic_set(3, 10, 6, 6, 108);
    const ImageSet test_set = synthetic_set(3, 7, 6, 6, 109);
    const ClassPartition tp = build_class_partition(train_set, Normalization::unit);
    const ClassPartition sp = build_class_partition(test_set, Normalization::unit);
    const ClassificationReport report = evaluate(train(tp, 3), sp, 2);
    std::int64_t total = 0, trace = 0;
    for (int d = 0; d < 3; ++d) {
        std::int64_t row = 0;
        for (int c = 0; c < 10; ++c) row += report.confusion[std::size_t(d)][std::size_t(c)];
        EXPECT_EQ(row, sp.counts[std::size_t(d)]);
        total += row;
        trace += report.confusion[std::size_t(d)][std::size_t(d)];
    }
    EXPECT_EQ(report.total, total);
    EXPECT_EQ(report.correct, trace);
    EXPECT_DOUBLE_EQ(report.overall_rate, double(trace) / double(total));
}

TEST(Evaluate, MembershipAtFullRank)  {
    // k = m_i: every training image lies in the span of its class basis
    const ImageSet set = synthetic_set(2, 4, 6, 6, 110);
    const ClassPartition part = build_class_partition(set, Normalization::unit);
    const ClassBasisSet bases = train(part, 4);
    const ClassificationReport report = evaluate(bases, part);
    EXPECT_EQ(report.correct, report.total);
}

TEST(Evaluate, DecisionsAreScaleInvariant) {
    const ImageSet train_set = synthetic_set(3, 8, 6, 6, 111);
    const ImageSet test_set = synthetic_set(3, 5, 6, 6, 112);
    ClassificationReport reports[2];
    int slot = 0;
    for (Normalization norm : {Normalization::none, Normalization::unit}) {
        const ClassPartition tp = build_class_partition(train_set, norm);
        const ClassPartition sp = build_class_partition(test_set, norm);
        reports[slot++] = evaluate(train(tp, 3), sp);
    }
    EXPECT_EQ(reports[0].confusion, reports[1].confusion);
}

TEST(Evaluate, DeterministicAcrossRunsAndThreads) {
    const ImageSet train_set = synthetic_set(3, 8, 6, 6, 113);
    const ImageSet test_set = synthetic_set(3, 6, 6, 6, 114);
    const ClassPartition tp = build_class_partition(train_set, Normalization::unit);
    const ClassPartition sp = build_class_partition(test_set, Normalization::unit);
    const ClassificationReport a = evaluate(train(tp, 2, 1), sp, 1);
    const ClassificationReport b = evaluate(train(tp, 2, 4), sp, 4);
    EXPECT_EQ(a.confusion, b.confusion);
    EXPECT_EQ(a.overall_rate, b.overall_rate);
}

TEST(BasisSet, SaveLoadReproducesEvaluationExactly) {
    const ImageSet train_set = synthetic_set(3, 8, 6, 6, 115);
    const ImageSet test_set = synthetic_set(3, 5, 6, 6, 116);
    const ClassPartition tp = build_class_partition(train_set, Normalization::unit);
    const ClassPartition sp = build_class_partition(test_set, Normalization::unit);

    ClassBasisSet in_memory(6, 6, 2);
    ClassBasisSet reloaded(6, 6, 2);
    for (int d = 0; d < 3; ++d) {
        const TsvdFactors f = train_class_factors(tp.tensors[std::size_t(d)], 2);
        in_memory.add_basis(d, f.u);
        std::stringstream buf;
        save_factors(f, buf, tp.tensors[std::size_t(d)].m());
        reloaded.add_basis(d, load_factors(buf).u);
    }
    for (Index j = 0; j < sp.counts[1]; ++j) {
        const Tensor3 b = sp.tensors[1].lateral_tensor(j);
        const ClassifyResult ra = classify(in_memory, b);
        const ClassifyResult rb = classify(reloaded, b);
        EXPECT_EQ(ra.label, rb.label);
        EXPECT_EQ(ra.residuals, rb.residuals);  // bitwise: same spectral path
    }
}

TEST(BasisSet, RejectsNonOrthonormalBasis) {
    std::mt19937_64 rng(2);
    ClassBasisSet bases(5, 4, 2);
    EXPECT_THROW(bases.add_basis(0, random_tensor(rng, 5, 2, 4)), IntegrityError);
}

TEST(ReportCsv, WritersProduceParsableTables) {
    ClassificationReport report;
    report.overall_rate = 0.8851;
    for (int d = 0; d < 10; ++d) {
        report.confusion[std::size_t(d)][std::size_t(d)] = 90 + d;
        report.confusion[std::size_t(d)][std::size_t((d + 1) % 10)] = 10 - d;
        report.most_freq[std::size_t(d)] = d;
        report.second_most[std::size_t(d)] = (d + 1) % 10;
        report.per_digit_rate[std::size_t(d)] = (90.0 + d) / (100.0);
    }
    std::ostringstream acc, digits, conf;
    write_accuracy_csv({{3, 0.8799}, {4, 0.8851}}, acc);
    write_per_digit_csv(report, digits);
    write_confusion_csv(report, conf);
    // round-trippable 17-significant-digit values
    std::istringstream accs(acc.str());
    std::string header, row3, row4;
    std::getline(accs, header);
    std::getline(accs, row3);
    std::getline(accs, row4);
    EXPECT_EQ(header, "k,recognition_rate_percent");
    EXPECT_EQ(row3.substr(0, 2), "3,");
    EXPECT_DOUBLE_EQ(std::stod(row3.substr(2)), 0.8799 * 100.0);
    EXPECT_EQ(row4.substr(0, 2), "4,");
    EXPECT_DOUBLE_EQ(std::stod(row4.substr(2)), 0.8851 * 100.0);
    EXPECT_NE(digits.str().find("7,7,8,97"), std::string::npos);
    // confusion: 10 rows, 10 columns each
    int rows = 0;
    std::istringstream is(conf.str());
    for (std::string line; std::getline(is, line); ++rows)
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
    EXPECT_EQ(rows, 10);
}

}  // namespace
}  // namespace tubal
