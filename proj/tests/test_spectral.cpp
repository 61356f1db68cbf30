// SPDX-License-Identifier: Apache-2.0
#include "tubal/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {
namespace {

using testing::random_tensor;
using testing::rel_error;

TEST(DftTubes, HalfSpectrumSliceCount) {
    std::mt19937_64 rng(1);
    EXPECT_EQ(dft_tubes(random_tensor(rng, 2, 2, 8)).num_slices(), 5);
    EXPECT_EQ(dft_tubes(random_tensor(rng, 2, 2, 7)).num_slices(), 4);
    EXPECT_EQ(dft_tubes(random_tensor(rng, 2, 2, 1)).num_slices(), 1);
}

TEST(DftTubes, ConstantTubeConcentratesAtDc) {
    Tensor3 a(1, 1, 6);
    for (Index k = 0; k < 6; ++k) a(0, 0, k) = 2.5;
    const SpectralTensor s = dft_tubes(a);
    EXPECT_NEAR(s.slice(0)(0, 0).real(), 6 * 2.5, 1e-13);
    for (Index f = 1; f < s.num_slices(); ++f) EXPECT_LE(std::abs(s.slice(f)(0, 0)), 1e-13);
}

TEST(DftTubes, DepthOneIsTheSliceItself) {
    std::mt19937_64 rng(2);
    const Tensor3 a = random_tensor(rng, 3, 4, 1);
    const SpectralTensor s = dft_tubes(a);
    EXPECT_EQ(s.slice(0).real(), a.frontal(0));
    EXPECT_EQ(s.slice(0).imag(), Eigen::MatrixXd::Zero(3, 4));
}

TEST(SpectralRoundTrip, ManyRandomInstances) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Index> dim(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Tensor3 a = random_tensor(rng, dim(rng), dim(rng), dim(rng));
        EXPECT_LE(rel_error(idft_tubes(dft_tubes(a)), a), 1e-13) << "trial " << trial;
    }
}

TEST(IdftTubes, DcOnlySpectrumGivesConstantSlices) {
    const Index n = 5;
    Eigen::MatrixXcd m(2, 3);
    m.real() << 1, 2, 3, 4, 5, 6;
    m.imag().setZero();
    std::vector<Eigen::MatrixXcd> slices{double(n) * m, Eigen::MatrixXcd::Zero(2, 3),
                                         Eigen::MatrixXcd::Zero(2, 3)};
    const Tensor3 a = idft_tubes(SpectralTensor(2, 3, n, std::move(slices)));
    for (Index k = 0; k < n; ++k)
        EXPECT_LE((a.frontal(k) - m.real()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(IdftTubes, HandBuiltSpectrumRecoversTube) {
    // half-spectrum of the tube (1, 2, 3): f0 = 6, f1 = -1.5 + (sqrt(3)/2) i
    std::vector<Eigen::MatrixXcd> slices(2);
    slices[0] = Eigen::MatrixXcd::Constant(1, 1, {6.0, 0.0});
    slices[1] = Eigen::MatrixXcd::Constant(1, 1, {-1.5, std::sqrt(3.0) / 2.0});
    const Tensor3 tube = idft_tubes(SpectralTensor(1, 1, 3, std::move(slices)));
    EXPECT_NEAR(tube(0, 0, 0), 1.0, 1e-12);
    EXPECT_NEAR(tube(0, 0, 1), 2.0, 1e-12);
    EXPECT_NEAR(tube(0, 0, 2), 3.0, 1e-12);
}

TEST(IdftTubes, RejectsComplexDcSlice) {
    std::vector<Eigen::MatrixXcd> slices(2);
    slices[0] = Eigen::MatrixXcd::Constant(1, 1, {1.0, 0.5});
    slices[1] = Eigen::MatrixXcd::Constant(1, 1, {0.0, 0.0});
    EXPECT_THROW(idft_tubes(SpectralTensor(1, 1, 3, std::move(slices))), IntegrityError);
}

TEST(IdftTubes, RejectsComplexNyquistSlice) {
    std::vector<Eigen::MatrixXcd> slices(3);
    slices[0] = Eigen::MatrixXcd::Constant(1, 1, {1.0, 0.0});
    slices[1] = Eigen::MatrixXcd::Constant(1, 1, {0.0, 0.0});
    slices[2] = Eigen::MatrixXcd::Constant(1, 1, {2.0, 1.0});  // Nyquist of n=4 must be real
    EXPECT_THROW(idft_tubes(SpectralTensor(1, 1, 4, std::move(slices))), IntegrityError);
}

TEST(SpectralTensor, RejectsWrongSliceCountOrShape) {
    std::vector<Eigen::MatrixXcd> two(2, Eigen::MatrixXcd::Zero(2, 2));
    EXPECT_THROW(SpectralTensor(2, 2, 8, two), DimensionError);
    std::vector<Eigen::MatrixXcd> bad(3, Eigen::MatrixXcd::Zero(2, 3));
    EXPECT_THROW(SpectralTensor(2, 2, 4, bad), DimensionError);
}

TEST(TprodFast, IdentityActsTrivially) {
    std::mt19937_64 rng(4);
    const Tensor3 b = random_tensor(rng, 4, 3, 6);
    EXPECT_LE(rel_error(tprod_fast(identity_tensor(4, 6), b), b), 1e-12);
    EXPECT_LE(rel_error(tprod_fast(b, identity_tensor(3, 6)), b), 1e-12);
}

TEST(TprodFast, TubeConvolutionExample) {
    Tensor3 a(1, 1, 2), b(1, 1, 2);
    a(0, 0, 0) = 2;
    a(0, 0, 1) = 3;
    b(0, 0, 0) = 5;
    b(0, 0, 1) = 7;
    const Tensor3 c = tprod_fast(a, b);
    EXPECT_NEAR(c(0, 0, 0), 31.0, 1e-12);
    EXPECT_NEAR(c(0, 0, 1), 29.0, 1e-12);
}

TEST(TprodFast, MatchesDenseReference) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Index> dim(1, 8);
    for (int trial = 0; trial < 60; ++trial) {
        const Index ell = dim(rng), p = dim(rng), m = dim(rng), n = dim(rng);
        const Tensor3 a = random_tensor(rng, ell, p, n);
        const Tensor3 b = random_tensor(rng, p, m, n);
        EXPECT_LE(rel_error(tprod_fast(a, b), tprod_reference(a, b)), 1e-11) << "trial " << trial;
    }
}

TEST(TprodFast, RejectsNonConformable) {
    std::mt19937_64 rng(6);
    EXPECT_THROW(tprod_fast(random_tensor(rng, 3, 2, 4), random_tensor(rng, 3, 2, 4)),
                 DimensionError);
}

TEST(TprodFast, ThreadedMatchesSingleThreadBitwise) {
    std::mt19937_64 rng(7);
    const Tensor3 a = random_tensor(rng, 5, 4, 9);
    const Tensor3 b = random_tensor(rng, 4, 6, 9);
    EXPECT_TRUE(testing::bitwise_equal(tprod_fast(a, b, 1), tprod_fast(a, b, 4)));
}

TEST(TprodFast, AssociativityThroughSpectra) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<Index> dim(1, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = dim(rng);
        const Tensor3 a = random_tensor(rng, dim(rng), 3, n);
        const Tensor3 b = random_tensor(rng, 3, dim(rng), n);
        const Tensor3 c = random_tensor(rng, b.m(), dim(rng), n);
        EXPECT_LE(rel_error(tprod_fast(tprod_fast(a, b), c), tprod_fast(a, tprod_fast(b, c))),
                  1e-10)
            << "trial " << trial;
    }
}

TEST(ParsevalNorm, ZeroAndDepthOne) {
    EXPECT_EQ(parseval_norm(dft_tubes(Tensor3(3, 2, 4))), 0.0);
    std::mt19937_64 rng(9);
    const Tensor3 a = random_tensor(rng, 3, 4, 1);
    EXPECT_NEAR(parseval_norm(dft_tubes(a)), a.frontal(0).norm(), 1e-14);
}

TEST(ParsevalNorm, MatchesFrobeniusNorm) {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<Index> dim(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Tensor3 a = random_tensor(rng, dim(rng), dim(rng), dim(rng));
        const double want = frob_norm(a);
        EXPECT_NEAR(parseval_norm(dft_tubes(a)), want, 1e-12 * std::max(1.0, want))
            << "trial " << trial;
    }
}

}  // namespace
}  // namespace tubal
