// SPDX-License-Identifier: Apache-2.0

#include "krdoa/subspace.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <lapacke.h>

#include "krdoa/errors.hpp"

namespace krdoa {

namespace {

constexpr double kSeparationTolerance = 1e-12;

CMatrix dominant_left_singular_vectors(const CMatrix& X, Eigen::Index P, RVector& singular_values) {
    const Eigen::BDCSVD<CMatrix> svd(X, Eigen::ComputeThinU);
    singular_values = svd.singularValues();
    return svd.matrixU().leftCols(P);
}

}  // namespace

JointSubspace signal_subspace(const Covariance& cov, std::size_t M, std::size_t N, std::size_t P) {
    const auto MN = static_cast<Eigen::Index>(M * N);
    if (cov.R.rows() != MN || cov.R.cols() != MN) {
        throw DomainError("subspace", "covariance is not MN x MN for the given array");
    }
    if (P == 0 || static_cast<Eigen::Index>(P) >= MN) {
        throw DomainError("subspace", "source count must satisfy 0 < P < MN");
    }
    const auto Pi = static_cast<Eigen::Index>(P);
    // Only the P+1 largest pairs are needed: P for the subspace, one more for
    // the separation check. LAPACK returns them in ascending order.
    const Eigen::Index wanted = Pi + 1;
    CMatrix A = cov.R;
    RVector w(MN);
    CMatrix Z(MN, wanted);
    std::vector<lapack_int> support(static_cast<std::size_t>(2 * wanted));
    lapack_int found = 0;
    const lapack_int n = static_cast<lapack_int>(MN);
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, reinterpret_cast<lapack_complex_double*>(A.data()), n, 0.0, 0.0,
        n - static_cast<lapack_int>(wanted) + 1, n, 0.0, &found, w.data(),
        reinterpret_cast<lapack_complex_double*>(Z.data()), n, support.data());
    if (info != 0 || found != wanted) {
        throw EstimationError("subspace", "eigendecomposition did not converge");
    }

    JointSubspace js;
    js.M = M;
    js.N = N;
    js.P = P;
    js.eigenvalues = w.head(wanted).reverse();
    js.Qs = Z.rightCols(Pi).rowwise().reverse();

    const double lead = std::max(std::abs(js.eigenvalues(0)), 1e-300);
    js.ill_separated =
        std::abs(js.eigenvalues(Pi - 1) - js.eigenvalues(Pi)) <= kSeparationTolerance * lead;
    return js;
}

CMatrix unvec_column(const CVector& q, std::size_t N, std::size_t M) {
    if (q.size() != static_cast<Eigen::Index>(M * N)) {
        throw DomainError("subspace", "vector length " + std::to_string(q.size()) + " does not equal M*N");
    }
    return Eigen::Map<const CMatrix>(q.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
}

CMatrix build_C(const JointSubspace& js) {
    const auto M = static_cast<Eigen::Index>(js.M);
    const auto N = static_cast<Eigen::Index>(js.N);
    const auto P = static_cast<Eigen::Index>(js.P);
    CMatrix C(N, M * P);
    for (Eigen::Index r = 0; r < M; ++r) {
        // Column r of unvec(q_p) is the contiguous segment [r*N, r*N + N).
        C.middleCols(r * P, P) = js.Qs.middleRows(r * N, N);
    }
    return C;
}

CMatrix build_B(const JointSubspace& js) {
    const auto M = static_cast<Eigen::Index>(js.M);
    const auto N = static_cast<Eigen::Index>(js.N);
    const auto P = static_cast<Eigen::Index>(js.P);
    CMatrix B(M, N * P);
    for (Eigen::Index r = 0; r < N; ++r) {
        for (Eigen::Index m = 0; m < M; ++m) {
            // Row r of unvec(q_p) holds entries m*N + r.
            B.block(m, r * P, 1, P) = js.Qs.row(m * N + r);
        }
    }
    return B;
}

std::size_t max_decoupled_sources(std::size_t M, std::size_t N) {
    const std::size_t smaller = std::min(M, N);
    return smaller == 0 ? 0 : smaller - 1;
}

void require_decoupled_capacity(std::size_t M, std::size_t N, std::size_t P) {
    const std::size_t limit = max_decoupled_sources(M, N);
    if (P > limit) {
        throw CapabilityError("subspace", "decoupled estimation resolves at most min(M,N)-1 = " +
                                              std::to_string(limit) + " sources on a " + std::to_string(M) + "x" +
                                              std::to_string(N) + " array, " + std::to_string(P) + " requested");
    }
}

DecoupledSubspaces decouple(const JointSubspace& js) {
    require_decoupled_capacity(js.M, js.N, js.P);
    const auto P = static_cast<Eigen::Index>(js.P);
    DecoupledSubspaces out;
    out.azimuth_basis = dominant_left_singular_vectors(build_B(js), P, out.singular_values_B);
    out.elevation_basis = dominant_left_singular_vectors(build_C(js), P, out.singular_values_C);
    return out;
}

double noise_projection_norm(const CMatrix& basis, const CVector& a) {
    const CVector coeff = basis.adjoint() * a;
    return (a - basis * coeff).squaredNorm();
}

}  // namespace krdoa
