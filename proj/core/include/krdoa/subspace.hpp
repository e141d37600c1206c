// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_SUBSPACE_HPP
#define KRDOA_SUBSPACE_HPP

#include <cstddef>

#include "krdoa/synth.hpp"
#include "krdoa/types.hpp"

namespace krdoa {

/// Joint signal subspace of an MN x MN covariance: the P dominant
/// eigenvectors, with eigenvalues in descending order. The noise subspace is
/// only ever used through the projector I - Qs Qs^H.
struct JointSubspace {
    CMatrix Qs;              // MN x P, orthonormal columns
    RVector eigenvalues;     // P+1 largest eigenvalues, descending
    std::size_t M = 0;
    std::size_t N = 0;
    std::size_t P = 0;
    /// True when eigenvalue P and P+1 coincide to 1e-12 relative, i.e. the
    /// signal/noise split is not determined by the data.
    bool ill_separated = false;
};

/// Orthonormal azimuth (M x P) and elevation (N x P) bases recovered from the
/// joint subspace, with the full singular value lists of B and C.
struct DecoupledSubspaces {
    CMatrix azimuth_basis;     // U_B
    CMatrix elevation_basis;   // U_C
    RVector singular_values_B;
    RVector singular_values_C;
};

/// Eigendecomposition of R keeping the P dominant eigenvectors.
/// Throws DomainError when P == 0, P >= MN or R is not MN x MN.
JointSubspace signal_subspace(const Covariance& cov, std::size_t M, std::size_t N, std::size_t P);

/// Column-major reshape of a length-MN vector into N x M: out(n, m) = q[m*N + n].
CMatrix unvec_column(const CVector& q, std::size_t N, std::size_t M);

/// C = [C_1, ..., C_M] (N x MP). Block r holds, for every signal eigenvector
/// q_p, column r of unvec(q_p); on exact data its column space is span(A_v).
CMatrix build_C(const JointSubspace& js);

/// B = [B_1, ..., B_N] (M x NP). Block r holds row r of each unvec(q_p); on
/// exact data its column space is span(A_h).
CMatrix build_B(const JointSubspace& js);

/// Largest number of sources the decoupled construction can resolve on an
/// M x N array.
std::size_t max_decoupled_sources(std::size_t M, std::size_t N);

/// Throws CapabilityError when P > max_decoupled_sources(M, N).
void require_decoupled_capacity(std::size_t M, std::size_t N, std::size_t P);

/// P dominant left singular vectors of B and C. Throws CapabilityError when
/// P > min(M, N) - 1.
DecoupledSubspaces decouple(const JointSubspace& js);

/// ||(I - U U^H) a||^2 for an orthonormal U, evaluated without forming the
/// projector; never negative.
double noise_projection_norm(const CMatrix& basis, const CVector& a);

}  // namespace krdoa

#endif  // KRDOA_SUBSPACE_HPP
