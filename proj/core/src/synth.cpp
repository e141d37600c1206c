// SPDX-License-Identifier: Apache-2.0

#include "krdoa/synth.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "krdoa/errors.hpp"

namespace krdoa {

namespace {

class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return radius * std::cos(kTwoPi * u2);
    }

    /// Circular complex Gaussian with E|z|^2 = variance.
    Complex complex_normal(double variance) {
        const double scale = std::sqrt(variance / 2.0);
        const double re = next();
        const double im = next();
        return {scale * re, scale * im};
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

}  // namespace

double noise_variance_from_snr(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

SnapshotMatrix synthesize(const ArrayGeometry& geom, const SourceSet& sources,
                          std::size_t snapshots, double snr_db, std::uint64_t seed) {
    if (snapshots == 0) throw DomainError("synth", "snapshot count must be at least 1");
    const CMatrix A = steering_matrix(geom, sources).full;
    const double noise_var = noise_variance_from_snr(snr_db);
    const auto P = A.cols();
    const auto MN = A.rows();
    const auto L = static_cast<Eigen::Index>(snapshots);

    GaussianStream gauss(seed);
    SnapshotMatrix out;
    out.seed = seed;
    out.data.resize(MN, L);
    CVector x(P);
    CVector w(MN);
    for (Eigen::Index n = 0; n < L; ++n) {
        for (Eigen::Index p = 0; p < P; ++p) x(p) = gauss.complex_normal(1.0);
        for (Eigen::Index k = 0; k < MN; ++k) w(k) = gauss.complex_normal(noise_var);
        out.data.col(n).noalias() = A * x;
        out.data.col(n) += w;
    }
    return out;
}

Covariance sample_covariance(const SnapshotMatrix& snap) {
    if (snap.data.cols() < 1) throw DomainError("synth", "snapshot count must be at least 1");
    Covariance cov;
    const CMatrix& Y = snap.data;
    cov.R = CMatrix::Zero(Y.rows(), Y.rows());
    cov.R.selfadjointView<Eigen::Lower>().rankUpdate(Y, 1.0 / static_cast<double>(Y.cols()));
    cov.R.triangularView<Eigen::StrictlyUpper>() = cov.R.adjoint();
    return cov;
}

Covariance exact_covariance(const ArrayGeometry& geom, const SourceSet& sources,
                            const CMatrix& source_cov, double noise_variance) {
    const auto P = static_cast<Eigen::Index>(sources.size());
    if (source_cov.rows() != P || source_cov.cols() != P) {
        throw PreconditionError("synth", "source covariance must be P x P");
    }
    if (!(noise_variance >= 0.0)) {
        throw PreconditionError("synth", "noise variance must be non-negative");
    }
    const double scale = std::max(1.0, source_cov.cwiseAbs().maxCoeff());
    if ((source_cov - source_cov.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw PreconditionError("synth", "source covariance is not Hermitian");
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(source_cov, Eigen::EigenvaluesOnly);
    const RVector& lambda = eig.eigenvalues();
    if (lambda.maxCoeff() <= 0.0 || lambda.minCoeff() <= 1e-12 * lambda.maxCoeff()) {
        throw PreconditionError("synth", "source covariance is not full rank");
    }

    const CMatrix A = steering_matrix(geom, sources).full;
    Covariance cov;
    cov.R = A * source_cov * A.adjoint();
    cov.R.diagonal().array() += noise_variance;
    // Exact Hermitian symmetry regardless of summation order.
    cov.R = (0.5 * (cov.R + cov.R.adjoint())).eval();
    cov.source_count_hint = sources.size();
    cov.noise_variance = noise_variance;
    return cov;
}

void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snap) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("synth", "cannot open " + path.string() + " for writing");
    const nlohmann::json header = {
        {"rows", snap.data.rows()},
        {"cols", snap.data.cols()},
        {"seed", snap.seed},
        {"dtype", "complex128-le"},
        {"order", "column-major"},
    };
    out << header.dump() << '\n';
    // Eigen stores std::complex<double> column-major as contiguous (re, im).
    out.write(reinterpret_cast<const char*>(snap.data.data()),
              static_cast<std::streamsize>(snap.data.size() * sizeof(Complex)));
    if (!out) throw DomainError("synth", "failed writing " + path.string());
}

SnapshotMatrix read_snapshots(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("synth", "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    SnapshotMatrix snap;
    Eigen::Index rows = 0, cols = 0;
    try {
        const auto header = nlohmann::json::parse(line);
        if (header.at("dtype") != "complex128-le" || header.at("order") != "column-major") {
            throw DomainError("synth", "unsupported snapshot encoding");
        }
        rows = header.at("rows").get<Eigen::Index>();
        cols = header.at("cols").get<Eigen::Index>();
        snap.seed = header.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("synth", std::string("malformed snapshot header: ") + e.what());
    }
    if (rows < 1 || cols < 1) throw DomainError("synth", "snapshot header has empty dimensions");
    snap.data.resize(rows, cols);
    in.read(reinterpret_cast<char*>(snap.data.data()),
            static_cast<std::streamsize>(snap.data.size() * sizeof(Complex)));
    if (in.gcount() != static_cast<std::streamsize>(snap.data.size() * sizeof(Complex))) {
        throw DomainError("synth", "snapshot payload truncated");
    }
    return snap;
}

}  // namespace krdoa
