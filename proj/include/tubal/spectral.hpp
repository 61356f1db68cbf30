// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/parallel.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tolerances.hpp"

namespace tubal {

/// Half-spectrum of a real Tensor3 after a DFT along its tubes.
///
/// Only frequencies f = 0..floor(n/2) are stored; the remaining slices are
/// their conjugates and never materialized. Slice 0 (and the Nyquist slice
/// when n is even) is real up to rounding.
///
/// DFT convention: forward unnormalized, inverse carries 1/n. The Parseval
/// weights below depend on this choice.
class SpectralTensor {
public:
    SpectralTensor(Index ell, Index m, Index n, std::vector<Eigen::MatrixXcd> slices)
        : ell_(ell), m_(m), n_(n), slices_(std::move(slices)) {
        if (static_cast<Index>(slices_.size()) != n / 2 + 1)
            throw DimensionError("SpectralTensor: expected " + std::to_string(n / 2 + 1) +
                                 " half-spectrum slices, got " + std::to_string(slices_.size()));
        for (const auto& s : slices_)
            if (s.rows() != ell || s.cols() != m)
                throw DimensionError("SpectralTensor: slice shape mismatch");
    }

    Index ell() const { return ell_; }
    Index m() const { return m_; }
    Index n() const { return n_; }
    /// Number of stored frequency slices, floor(n/2) + 1.
    Index num_slices() const { return static_cast<Index>(slices_.size()); }
    bool has_nyquist() const { return n_ % 2 == 0; }

    const Eigen::MatrixXcd& slice(Index f) const { return slices_[static_cast<std::size_t>(f)]; }
    Eigen::MatrixXcd& slice(Index f) { return slices_[static_cast<std::size_t>(f)]; }

private:
    Index ell_, m_, n_;
    std::vector<Eigen::MatrixXcd> slices_;
};

/// Forward DFT along tubes; slice f holds sum_k a(:,:,k) * exp(-2*pi*i*f*k/n).
inline SpectralTensor dft_tubes(const Tensor3& a, int threads = 1) {
    const Index n = a.n(), h = n / 2 + 1;
    std::vector<Eigen::MatrixXcd> slices(static_cast<std::size_t>(h));
    parallel_for(h, threads, [&](Index fb, Index fe) {
        Eigen::MatrixXd re(a.ell(), a.m()), im(a.ell(), a.m());
        for (Index f = fb; f < fe; ++f) {
            re.setZero();
            im.setZero();
            for (Index k = 0; k < n; ++k) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(f * k) /
                                     static_cast<double>(n);
                re.noalias() += std::cos(theta) * a.frontal(k);
                im.noalias() -= std::sin(theta) * a.frontal(k);
            }
            auto& s = slices[static_cast<std::size_t>(f)];
            s.resize(a.ell(), a.m());
            s.real() = re;
            s.imag() = im;
        }
    });
    return SpectralTensor(a.ell(), a.m(), a.n(), std::move(slices));
}

namespace detail {
inline void check_spectral_reality(const Eigen::MatrixXcd& s, const std::string& which) {
    const double scale = std::max(1.0, s.norm());
    if (s.imag().cwiseAbs().maxCoeff() > tol::kSpectralRealityRel * scale)
        throw IntegrityError("idft_tubes: " + which +
                             " slice has imaginary residue beyond tolerance");
}
}  // namespace detail

/// Inverse DFT back to a real tensor. Frequencies above floor(n/2) are filled
/// by conjugate symmetry, so the result is real by construction; only the
/// real parts of the DC and Nyquist slices enter after an integrity check.
inline Tensor3 idft_tubes(const SpectralTensor& s, int threads = 1) {
    const Index n = s.n(), h = s.num_slices();
    detail::check_spectral_reality(s.slice(0), "DC");
    if (s.has_nyquist()) detail::check_spectral_reality(s.slice(h - 1), "Nyquist");
    const Index paired_end = s.has_nyquist() ? h - 1 : h;  // f = 1..paired_end-1 carry weight 2

    Tensor3 out(s.ell(), s.m(), s.n());
    parallel_for(n, threads, [&](Index kb, Index ke) {
        for (Index k = kb; k < ke; ++k) {
            Eigen::MatrixXd acc = s.slice(0).real();
            if (s.has_nyquist()) {
                if (k % 2 == 0)
                    acc += s.slice(h - 1).real();
                else
                    acc -= s.slice(h - 1).real();
            }
            for (Index f = 1; f < paired_end; ++f) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(f * k) /
                                     static_cast<double>(n);
                acc.noalias() += (2.0 * std::cos(theta)) * s.slice(f).real();
                acc.noalias() -= (2.0 * std::sin(theta)) * s.slice(f).imag();
            }
            out.frontal(k) = acc / static_cast<double>(n);
        }
    });
    return out;
}

/// Parseval weight of stored frequency f: conjugate-paired slices count twice.
inline double spectral_weight(const SpectralTensor& s, Index f) {
    if (f == 0) return 1.0;
    if (s.has_nyquist() && f == s.num_slices() - 1) return 1.0;
    return 2.0;
}

/// Frobenius norm of the underlying real tensor, computed without leaving
/// the spectral domain: sqrt((1/n) * sum_f w_f * ||slice_f||_F^2).
inline double parseval_norm(const SpectralTensor& s) {
    double acc = 0.0;
    for (Index f = 0; f < s.num_slices(); ++f)
        acc += spectral_weight(s, f) * s.slice(f).squaredNorm();
    return std::sqrt(acc / static_cast<double>(s.n()));
}

/// Spectral t-product: per stored frequency C_f = A_f * B_f, then inverse
/// transform. Per-frequency products are independent and run data-parallel.
inline Tensor3 tprod_fast(const Tensor3& a, const Tensor3& b, int threads = 1) {
    detail::check_tprod_dims(a, b);
    const SpectralTensor sa = dft_tubes(a, threads);
    const SpectralTensor sb = dft_tubes(b, threads);
    const Index h = sa.num_slices();
    std::vector<Eigen::MatrixXcd> prod(static_cast<std::size_t>(h));
    parallel_for(h, threads, [&](Index fb, Index fe) {
        for (Index f = fb; f < fe; ++f)
            prod[static_cast<std::size_t>(f)].noalias() = sa.slice(f) * sb.slice(f);
    });
    return idft_tubes(SpectralTensor(a.ell(), b.m(), a.n(), std::move(prod)), threads);
}

}  // namespace tubal
