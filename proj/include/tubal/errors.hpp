// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tubal {

/// Shape or conformability violation (fold target, t-product inner dims, ...).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input bytes (IDX container, TSVD1 container, gzip stream).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure; message carries the offending path.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric invariant that the data must satisfy was violated
/// (e.g. non-real DC/Nyquist slice handed to the inverse transform).
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

/// A per-slice SVD did not converge; message names the frequency slice.
struct DecompositionError : std::runtime_error {
    explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

/// Trained-basis manifest does not match the basis files or the test data.
struct ManifestError : std::runtime_error {
    explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tubal
