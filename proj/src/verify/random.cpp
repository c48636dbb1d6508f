#include "localize/verify.hpp"

#include <cmath>

namespace localize::verify {

void InstanceSpec::validate() const {
    if (dim < 1) throw Error(ErrorCode::DomainError, "instance dim must be at least 1");
    if (rank < 0 || rank > dim) throw Error(ErrorCode::DomainError, "instance rank must lie in [0, dim]");
    if (subspace_dim < 0 || subspace_dim > dim) {
        throw Error(ErrorCode::DomainError, "instance subspace_dim must lie in [0, dim]");
    }
    if (positivity == Positivity::PositiveDefinite && rank != dim) {
        throw Error(ErrorCode::DomainError, "positive-definite instance needs rank == dim");
    }
}

io::Json to_json(const InstanceSpec& spec) {
    io::Json j;
    j["dim"] = spec.dim;
    j["rank"] = spec.rank;
    j["subspace_dim"] = spec.subspace_dim;
    j["seed"] = spec.seed;
    j["positivity"] = spec.positivity == Positivity::PSD ? "psd" : "positive-definite";
    return j;
}

InstanceSpec instance_spec_from_json(const io::Json& j) {
    try {
        InstanceSpec s;
        s.dim = j.at("dim").get<Index>();
        s.rank = j.at("rank").get<Index>();
        s.subspace_dim = j.at("subspace_dim").get<Index>();
        s.seed = j.at("seed").get<std::uint64_t>();
        const std::string pos = j.at("positivity").get<std::string>();
        if (pos == "psd") {
            s.positivity = Positivity::PSD;
        } else if (pos == "positive-definite") {
            s.positivity = Positivity::PositiveDefinite;
        } else {
            throw Error(ErrorCode::ParseError, "positivity: expected psd or positive-definite");
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("instance spec: ") + e.what());
    }
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Index Rng::index(Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(engine_);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
}

Matrix Rng::gaussian(Index rows, Index cols) {
    Matrix g(rows, cols);
    // Fill column by column so the draw order is fixed.
    for (Index c = 0; c < cols; ++c) {
        for (Index r = 0; r < rows; ++r) g(r, c) = complex_normal();
    }
    return g;
}

Vector Rng::unit_vector(Index n) {
    Vector v = gaussian(n, 1).col(0);
    return v / v.norm();
}

Matrix Rng::unitary(Index n) {
    const Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    const Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so that Q is Haar distributed.
    Matrix out = q;
    for (Index i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0.0) out.col(i) *= d / std::abs(d);
    }
    return out;
}

HermitianOperator random_psd(Rng& rng, Index dim, Index rank) {
    if (rank == 0) return HermitianOperator::zero(dim);
    const Matrix g = rng.gaussian(dim, rank);
    const HermitianOperator a = HermitianOperator::hermitian_part(g * g.adjoint());
    return (1.0 / a.trace()) * a;
}

Subspace random_subspace(Rng& rng, Index dim, Index k) {
    if (k == 0) return Subspace::zero(dim);
    const Eigen::HouseholderQR<Matrix> qr(rng.gaussian(dim, k));
    const Matrix q = qr.householderQ() * Matrix::Identity(dim, k);
    return Subspace::from_orthonormal(q);
}

HermitianOperator random_hermitian(Rng& rng, Index dim) {
    return HermitianOperator::hermitian_part(rng.gaussian(dim, dim));
}

DensityMatrix random_density(Rng& rng, Index dim, Index rank) {
    if (rank < 1) throw Error(ErrorCode::DomainError, "density matrix needs rank >= 1");
    return DensityMatrix::from_operator(random_psd(rng, dim, rank));
}

HermitianOperator random_psd(const InstanceSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    return random_psd(rng, spec.dim, spec.rank);
}

Subspace random_subspace(const InstanceSpec& spec) {
    spec.validate();
    // Separate stream so that changing the rank leaves the subspace alone.
    Rng rng(derive_seed(spec.seed, 1));
    return random_subspace(rng, spec.dim, spec.subspace_dim);
}

DensityMatrix random_density(const InstanceSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    return random_density(rng, spec.dim, spec.rank);
}

}  // namespace localize::verify
