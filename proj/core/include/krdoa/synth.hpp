// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_SYNTH_HPP
#define KRDOA_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

#include "krdoa/geometry.hpp"
#include "krdoa/types.hpp"

namespace krdoa {

/// Complex MN x L array output; column n is the snapshot y[n].
struct SnapshotMatrix {
    CMatrix data;
    std::uint64_t seed = 0;

    Eigen::Index snapshots() const { return data.cols(); }
};

/// MN x MN Hermitian spatial covariance.
struct Covariance {
    CMatrix R;
    std::optional<std::size_t> source_count_hint;
    std::optional<double> noise_variance;  // set only for exact covariances
};

/// Noise variance for a per-source SNR in dB (unit source power).
double noise_variance_from_snr(double snr_db);

/// y[n] = A x[n] + w[n] with unit-power circular Gaussian sources and white
/// circular Gaussian noise of variance 10^(-snr_db/10); snr_db = +inf gives
/// noiseless data. Deterministic in `seed`: per snapshot, P source draws then
/// MN noise draws, each complex draw taking two standard normals (re, im)
/// from a Box-Muller stream over mt19937_64.
SnapshotMatrix synthesize(const ArrayGeometry& geom, const SourceSet& sources,
                          std::size_t snapshots, double snr_db, std::uint64_t seed);

/// R = (1/L) sum_n y[n] y[n]^H.
Covariance sample_covariance(const SnapshotMatrix& snap);

/// R = A R_xx A^H + sigma^2 I. Throws PreconditionError when R_xx is not
/// Hermitian P x P of full rank.
Covariance exact_covariance(const ArrayGeometry& geom, const SourceSet& sources,
                            const CMatrix& source_cov, double noise_variance);

/// Snapshot file: one line of JSON header ({"rows", "cols", "seed", "dtype",
/// "order"}) terminated by '\n', then rows*cols little-endian float64 (re, im)
/// pairs in column-major order (snapshot after snapshot).
void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snap);
SnapshotMatrix read_snapshots(const std::filesystem::path& path);

}  // namespace krdoa

#endif  // KRDOA_SYNTH_HPP
