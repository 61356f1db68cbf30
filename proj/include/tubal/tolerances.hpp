// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace tubal::tol {

// Defaults sized for 64-bit arithmetic with dims up to a few thousand.
// Callers override per call site where a different budget applies.
inline constexpr double kReconstructionRel = 1e-10;  // ||A - U*S*V^T|| vs ||A||
inline constexpr double kOrthogonalityAbs = 1e-10;   // ||U^T*U - J||_F
inline constexpr double kFDiagonalRel = 1e-10;       // off-diagonal mass vs ||S||
inline constexpr double kSpectralRealityRel = 1e-12; // imag residue at DC/Nyquist
inline constexpr double kFastVsReferenceRel = 1e-11; // spectral vs dense t-product

}  // namespace tubal::tol
