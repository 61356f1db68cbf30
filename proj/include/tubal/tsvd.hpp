// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/parallel.hpp"
#include "tubal/spectral.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tolerances.hpp"

namespace tubal {

/// Factors of A = U * S * V^T: U, V with orthonormal lateral slices, S
/// f-diagonal with singular-tube norms non-increasing. After truncation the
/// middle dimension p equals the kept tubal rank k. V may be absent when the
/// caller asked only for the range basis (classification training).
struct TsvdFactors {
    Tensor3 u;  // ell x p x n
    Tensor3 s;  // p x p x n, f-diagonal
    Tensor3 v;  // m x p x n, or empty when not computed

    Index tubal_rank() const { return u.m(); }
    bool has_v() const { return v.size() > 0; }
};

struct TsvdOptions {
    int threads = 1;
    bool compute_v = true;
};

namespace detail {

/// Economy SVD of every stored frequency slice. DC and Nyquist slices are
/// real, so they get a real SVD; that keeps their factors exactly real and
/// the inverse transform's reality check tight.
struct FrequencySvd {
    std::vector<Eigen::MatrixXcd> u;      // h slices, ell x p
    std::vector<Eigen::VectorXd> sigma;   // h slices, p values, descending
    std::vector<Eigen::MatrixXcd> v;      // h slices, m x p (empty if skipped)
};

inline FrequencySvd per_frequency_svd(const SpectralTensor& sa, bool compute_v, int threads) {
    const Index h = sa.num_slices();
    FrequencySvd out;
    out.u.resize(static_cast<std::size_t>(h));
    out.sigma.resize(static_cast<std::size_t>(h));
    if (compute_v) out.v.resize(static_cast<std::size_t>(h));
    const unsigned opts =
        Eigen::ComputeThinU | (compute_v ? unsigned(Eigen::ComputeThinV) : 0u);

    parallel_for(h, threads, [&](Index fb, Index fe) {
        for (Index f = fb; f < fe; ++f) {
            const auto& slice = sa.slice(f);
            const bool real_slice = (f == 0) || (sa.has_nyquist() && f == h - 1);
            const auto sf = static_cast<std::size_t>(f);
            if (real_slice) {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(slice.real(), opts);
                if (svd.info() != Eigen::Success)
                    throw DecompositionError("tsvd: SVD failed on frequency slice " +
                                             std::to_string(f));
                out.u[sf] = svd.matrixU().cast<std::complex<double>>();
                out.sigma[sf] = svd.singularValues();
                if (compute_v) out.v[sf] = svd.matrixV().cast<std::complex<double>>();
            } else {
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(slice, opts);
                if (svd.info() != Eigen::Success)
                    throw DecompositionError("tsvd: SVD failed on frequency slice " +
                                             std::to_string(f));
                out.u[sf] = svd.matrixU();
                out.sigma[sf] = svd.singularValues();
                if (compute_v) out.v[sf] = svd.matrixV();
            }
        }
    });
    return out;
}

/// Embeds per-frequency singular values as diagonal complex slices.
inline std::vector<Eigen::MatrixXcd> diagonal_slices(const std::vector<Eigen::VectorXd>& sigma) {
    std::vector<Eigen::MatrixXcd> out(sigma.size());
    for (std::size_t f = 0; f < sigma.size(); ++f) {
        const Index p = sigma[f].size();
        out[f] = Eigen::MatrixXcd::Zero(p, p);
        out[f].diagonal() = sigma[f].cast<std::complex<double>>();
    }
    return out;
}

/// Residual norm ||b - U*(U^T*b)||_F evaluated per stored frequency; `basis`
/// holds the spectral slices of a tensor with orthonormal lateral slices.
inline double spectral_residual(const std::vector<Eigen::MatrixXcd>& basis,
                                const SpectralTensor& b) {
    double acc = 0.0;
    for (Index f = 0; f < b.num_slices(); ++f) {
        const auto& uf = basis[static_cast<std::size_t>(f)];
        const Eigen::MatrixXcd coef = uf.adjoint() * b.slice(f);
        const Eigen::MatrixXcd resid = b.slice(f) - uf * coef;
        acc += spectral_weight(b, f) * resid.squaredNorm();
    }
    return std::sqrt(acc / static_cast<double>(b.n()));
}

}  // namespace detail

/// Tensor SVD via independent per-frequency economy SVDs (factors assembled
/// with the inverse tube transform). Singular values within each slice are
/// sorted descending, which makes the singular-tube norms non-increasing.
inline TsvdFactors tsvd(const Tensor3& a, const TsvdOptions& options = {}) {
    const SpectralTensor sa = dft_tubes(a, options.threads);
    detail::FrequencySvd fsvd =
        detail::per_frequency_svd(sa, options.compute_v, options.threads);
    const Index p = std::min(a.ell(), a.m());

    TsvdFactors out;
    out.u = idft_tubes(SpectralTensor(a.ell(), p, a.n(), std::move(fsvd.u)), options.threads);
    out.s = idft_tubes(SpectralTensor(p, p, a.n(), detail::diagonal_slices(fsvd.sigma)),
                       options.threads);
    if (options.compute_v)
        out.v = idft_tubes(SpectralTensor(a.m(), p, a.n(), std::move(fsvd.v)), options.threads);
    return out;
}

/// Keeps lateral slices 0..k-1 of U and V and the leading k x k x n block of S.
inline TsvdFactors truncate(const TsvdFactors& f, Index k) {
    const Index p = f.tubal_rank();
    if (k < 1 || k > p)
        throw DimensionError("truncate: k = " + std::to_string(k) + " out of range [1, " +
                             std::to_string(p) + "]");
    const Index n = f.u.n();
    TsvdFactors out;
    out.u = Tensor3(f.u.ell(), k, n);
    out.s = Tensor3(k, k, n);
    for (Index kk = 0; kk < n; ++kk) {
        out.u.frontal(kk) = f.u.frontal(kk).leftCols(k);
        out.s.frontal(kk) = f.s.frontal(kk).topLeftCorner(k, k);
    }
    if (f.has_v()) {
        out.v = Tensor3(f.v.ell(), k, n);
        for (Index kk = 0; kk < n; ++kk) out.v.frontal(kk) = f.v.frontal(kk).leftCols(k);
    }
    return out;
}

/// Norms of the singular tubes ||s_ii||_F, i = 0..p-1.
struct TubeSpectrum {
    std::vector<double> norms;
};

inline TubeSpectrum tube_spectrum(const TsvdFactors& f) {
    const Index p = f.tubal_rank();
    TubeSpectrum out;
    out.norms.resize(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) out.norms[static_cast<std::size_t>(i)] = f.s.tube(i, i).norm();
    for (Index i = 0; i + 1 < p; ++i) {
        const double hi = out.norms[static_cast<std::size_t>(i)];
        const double lo = out.norms[static_cast<std::size_t>(i + 1)];
        if (lo > hi * (1.0 + 1e-12) + 1e-300)
            throw IntegrityError("tube_spectrum: singular-tube norms not non-increasing at index " +
                                 std::to_string(i));
    }
    return out;
}

/// Projection residual ||b - u*(u^T*b)||_F, computed entirely in the spectral
/// domain. `u` must have orthonormal lateral slices; that is the caller's
/// contract (checked once where bases are built, not per call).
inline double project_residual(const Tensor3& u, const Tensor3& b) {
    if (u.ell() != b.ell() || u.n() != b.n())
        throw DimensionError("project_residual: basis " + std::to_string(u.ell()) + "x..x" +
                             std::to_string(u.n()) + " vs image " + std::to_string(b.ell()) +
                             "x..x" + std::to_string(b.n()));
    const SpectralTensor su = dft_tubes(u);
    std::vector<Eigen::MatrixXcd> basis(static_cast<std::size_t>(su.num_slices()));
    for (Index f = 0; f < su.num_slices(); ++f) basis[static_cast<std::size_t>(f)] = su.slice(f);
    return detail::spectral_residual(basis, dft_tubes(b));
}

// ---------------------------------------------------------------------------
// TSVD1 flat binary container: magic "TSVD1", flag byte (bit0: V present),
// u32le ell, m, n, p, then u/s[/v] entries as little-endian f64. Round-trips
// bit-exactly.

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

inline std::uint32_t get_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw ParseError("TSVD1: truncated header");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

inline void put_f64_block_le(std::ostream& os, const std::vector<double>& xs) {
    std::vector<char> buf(xs.size() * 8);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(xs[i]);
        for (int byte = 0; byte < 8; ++byte)
            buf[i * 8 + static_cast<std::size_t>(byte)] =
                static_cast<char>((bits >> (8 * byte)) & 0xff);
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<double> get_f64_block_le(std::istream& is, std::size_t count) {
    std::vector<char> buf(count * 8);
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(is.gcount()) != buf.size())
        throw ParseError("TSVD1: truncated payload at byte offset " +
                         std::to_string(is.gcount()));
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        for (int byte = 0; byte < 8; ++byte)
            bits |= std::uint64_t(static_cast<unsigned char>(buf[i * 8 + static_cast<std::size_t>(byte)]))
                    << (8 * byte);
        xs[i] = std::bit_cast<double>(bits);
    }
    return xs;
}

}  // namespace detail

inline constexpr char kTsvdMagic[5] = {'T', 'S', 'V', 'D', '1'};

inline void save_factors(const TsvdFactors& f, std::ostream& os, Index original_m = -1) {
    const Index p = f.tubal_rank();
    const Index m = f.has_v() ? f.v.ell() : (original_m >= 0 ? original_m : p);
    os.write(kTsvdMagic, 5);
    os.put(f.has_v() ? 1 : 0);
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.u.ell()));
    detail::put_u32_le(os, static_cast<std::uint32_t>(m));
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.u.n()));
    detail::put_u32_le(os, static_cast<std::uint32_t>(p));
    detail::put_f64_block_le(os, f.u.data());
    detail::put_f64_block_le(os, f.s.data());
    if (f.has_v()) detail::put_f64_block_le(os, f.v.data());
}

inline TsvdFactors load_factors(std::istream& is) {
    char magic[5];
    is.read(magic, 5);
    if (!is || !std::equal(magic, magic + 5, kTsvdMagic))
        throw ParseError("TSVD1: bad magic");
    const int flags = is.get();
    if (flags < 0) throw ParseError("TSVD1: truncated header");
    const bool has_v = (flags & 1) != 0;
    const Index ell = detail::get_u32_le(is);
    const Index m = detail::get_u32_le(is);
    const Index n = detail::get_u32_le(is);
    const Index p = detail::get_u32_le(is);
    if (ell < 1 || m < 1 || n < 1 || p < 1 || p > std::min(ell, m))
        throw ParseError("TSVD1: implausible dims in header");
    TsvdFactors f;
    f.u = Tensor3::from_data(ell, p, n, detail::get_f64_block_le(is, std::size_t(ell * p * n)));
    f.s = Tensor3::from_data(p, p, n, detail::get_f64_block_le(is, std::size_t(p * p * n)));
    if (has_v)
        f.v = Tensor3::from_data(m, p, n, detail::get_f64_block_le(is, std::size_t(m * p * n)));
    is.peek();
    if (!is.eof()) throw ParseError("TSVD1: trailing bytes after payload");
    return f;
}

inline void save_factors(const TsvdFactors& f, const std::string& path, Index original_m = -1) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    save_factors(f, os, original_m);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

inline TsvdFactors load_factors(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    return load_factors(is);
}

}  // namespace tubal
