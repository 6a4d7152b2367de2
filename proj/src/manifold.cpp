#include "stc/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace stc {

namespace {
constexpr double kOrthoTol = 1e-10;

void check_orthonormal(const Eigen::MatrixXcd& m, const char* what) {
    const auto n = m.cols();
    if ((m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).norm() > kOrthoTol)
        throw InvariantViolation(std::string(what) + ": columns not orthonormal");
}
} // namespace

ManifoldDims::ManifoldDims(int n_t_, int T_, int D_, ManifoldKind kind_)
    : n_t(n_t_), T(T_), D(D_), kind(kind_) {
    // Square Stiefel matrices (T = n_t) are legitimate; a proper subspace
    // needs T > n_t.
    if (n_t < 1 || T < n_t || (kind == ManifoldKind::grassmann && T == n_t))
        throw DimensionError("ManifoldDims: need T >= n_t >= 1 (strict for Grassmann)");
    const int expected =
        kind == ManifoldKind::stiefel ? n_t * (2 * T - n_t) : 2 * n_t * (T - n_t);
    if (D != expected)
        throw DimensionError("ManifoldDims: D=" + std::to_string(D) +
                             " inconsistent with n_t=" + std::to_string(n_t) +
                             ", T=" + std::to_string(T));
}

ManifoldDims ManifoldDims::stiefel(int n_t, int T) {
    return {n_t, T, n_t * (2 * T - n_t), ManifoldKind::stiefel};
}

ManifoldDims ManifoldDims::grassmann(int n_t, int T) {
    return {n_t, T, 2 * n_t * (T - n_t), ManifoldKind::grassmann};
}

StiefelPoint::StiefelPoint(Eigen::MatrixXcd m) : phi(std::move(m)) {
    check_orthonormal(phi, "StiefelPoint");
}

GrassmannPoint::GrassmannPoint(Eigen::MatrixXcd m) : phi(std::move(m)) {
    check_orthonormal(phi, "GrassmannPoint");
}

Eigen::MatrixXcd expm_skew_hermitian(const Eigen::MatrixXcd& m) {
    const auto n = m.rows();
    if ((m + m.adjoint()).norm() > 1e-10)
        throw InvariantViolation("expm_skew_hermitian: input not skew-Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(std::complex<double>(0, 1) * m);
    if (eig.info() != Eigen::Success)
        throw Error("expm_skew_hermitian: eigendecomposition failed");
    Eigen::VectorXcd phase(n);
    for (Eigen::Index i = 0; i < n; ++i)
        phase[i] = std::exp(std::complex<double>(0.0, -eig.eigenvalues()[i]));
    return eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

// Splits a unit sphere point into (theta, v): p = (cos theta, sin theta * v).
// v is zero when theta == 0.
std::pair<double, Eigen::VectorXd> polar_split(const Eigen::VectorXd& p, const ManifoldDims& dims,
                                               double scale, double max_radius) {
    if (p.size() != dims.D + 1)
        throw DimensionError("sphere point has dimension " + std::to_string(p.size()) +
                             ", expected " + std::to_string(dims.D + 1));
    if (std::abs(p.norm() - 1.0) > 1e-10)
        throw InvariantViolation("sphere point not unit norm");
    if (scale <= 0.0) throw Error("scale must be positive");

    const double c = std::clamp(p[0], -1.0, 1.0);
    if (dims.kind == ManifoldKind::grassmann && c < -1e-12)
        throw Error("point on the open lower hemisphere; apply hemisphere_filter first");
    const double theta = std::acos(std::max(c, dims.kind == ManifoldKind::grassmann ? 0.0 : -1.0));
    if (scale * theta > max_radius + 1e-12)
        throw Error("scale * theta exceeds the injectivity radius");

    Eigen::VectorXd v = Eigen::VectorXd::Zero(dims.D);
    const double s = std::sin(theta);
    if (s > 0.0) v = p.tail(dims.D) / s;
    return {theta, v};
}

} // namespace

GrassmannPoint sphere_to_grassmann(const Eigen::VectorXd& p, const ManifoldDims& dims,
                                   double scale) {
    if (dims.kind != ManifoldKind::grassmann)
        throw DimensionError("sphere_to_grassmann: dims must be Grassmann");
    const auto [theta, v] = polar_split(p, dims, scale, std::numbers::pi / 2.0);

    const int q = dims.T - dims.n_t;
    const int nt = dims.n_t;
    Eigen::MatrixXcd b(q, nt);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < nt; ++c) {
            const int idx = 2 * (r * nt + c);
            b(r, c) = std::complex<double>(v[idx], v[idx + 1]);
        }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const int rank_dim = static_cast<int>(svd.singularValues().size());
    Eigen::VectorXd angles = Eigen::VectorXd::Zero(nt);
    angles.head(rank_dim) = scale * theta * svd.singularValues();
    Eigen::MatrixXcd u_pad = Eigen::MatrixXcd::Zero(q, nt);
    u_pad.leftCols(rank_dim) = svd.matrixU();
    const Eigen::MatrixXcd& vmat = svd.matrixV();

    Eigen::MatrixXcd phi(dims.T, nt);
    phi.topRows(nt).noalias() =
        vmat * angles.array().cos().matrix().asDiagonal() * vmat.adjoint();
    phi.bottomRows(q).noalias() =
        u_pad * angles.array().sin().matrix().asDiagonal() * vmat.adjoint();
    return GrassmannPoint(std::move(phi));
}

StiefelPoint sphere_to_stiefel(const Eigen::VectorXd& p, const ManifoldDims& dims,
                               double scale) {
    if (dims.kind != ManifoldKind::stiefel)
        throw DimensionError("sphere_to_stiefel: dims must be Stiefel");
    const auto [theta, v] = polar_split(p, dims, scale, std::numbers::pi);

    const int nt = dims.n_t;
    const int q = dims.T - nt;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Tangent coordinates: A diagonal imag parts, then A strict upper
    // triangle (re, im)/sqrt2 row-major, then B (re, im) row-major.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nt, nt);
    int idx = 0;
    for (int j = 0; j < nt; ++j) a(j, j) = std::complex<double>(0.0, v[idx++]);
    for (int r = 0; r < nt; ++r)
        for (int c = r + 1; c < nt; ++c) {
            const std::complex<double> z(v[idx] * inv_sqrt2, v[idx + 1] * inv_sqrt2);
            idx += 2;
            a(r, c) = z;
            a(c, r) = -std::conj(z);
        }
    Eigen::MatrixXcd b(q, nt);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < nt; ++c) {
            b(r, c) = std::complex<double>(v[idx], v[idx + 1]);
            idx += 2;
        }

    Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(dims.T, dims.T);
    xi.topLeftCorner(nt, nt) = a;
    xi.topRightCorner(nt, q) = -b.adjoint();
    xi.bottomLeftCorner(q, nt) = b;

    const Eigen::MatrixXcd g = expm_skew_hermitian(scale * theta * xi);
    return StiefelPoint(g.leftCols(nt));
}

double coherent_distance(const StiefelPoint& a, const StiefelPoint& b) {
    if (a.phi.rows() != b.phi.rows() || a.phi.cols() != b.phi.cols())
        throw DimensionError("coherent_distance: shape mismatch");
    return (a.phi - b.phi).norm();
}

double noncoherent_distance(const GrassmannPoint& a, const GrassmannPoint& b) {
    if (a.phi.rows() != b.phi.rows() || a.phi.cols() != b.phi.cols())
        throw DimensionError("noncoherent_distance: shape mismatch");
    const double nt = static_cast<double>(a.phi.cols());
    const double overlap = (a.phi.adjoint() * b.phi).squaredNorm();
    return std::sqrt(std::max(0.0, nt - overlap));
}

} // namespace stc
