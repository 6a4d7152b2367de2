#pragma once

#include <Eigen/Dense>

#include "stc/errors.hpp"

namespace stc {

enum class ManifoldKind { stiefel, grassmann };

/// Dimensions of the target coding space. The real dimension D must match
/// the kind: n_t(2T - n_t) for Stiefel, 2 n_t (T - n_t) for Grassmann.
struct ManifoldDims {
    int n_t = 0;
    int T = 0;
    int D = 0;
    ManifoldKind kind = ManifoldKind::grassmann;

    ManifoldDims(int n_t_, int T_, int D_, ManifoldKind kind_);
    static ManifoldDims stiefel(int n_t, int T);
    static ManifoldDims grassmann(int n_t, int T);
};

/// T x n_t complex matrix with orthonormal columns.
struct StiefelPoint {
    Eigen::MatrixXcd phi;
    explicit StiefelPoint(Eigen::MatrixXcd m);
};

/// Orthonormal representative of the subspace spanned by its columns.
struct GrassmannPoint {
    Eigen::MatrixXcd phi;
    explicit GrassmannPoint(Eigen::MatrixXcd m);
};

/// Geodesic normal coordinates at the reference subspace <[I;0]>: the unit
/// point p = (cos th, sin th * v) is lifted through a fixed isometry of v
/// onto a tangent matrix B (real/imag parts in row-major order), and
/// Phi = [V cos(s*th*S) V^*; U sin(s*th*S) V^*] with B = U S V^* thin-SVD.
/// Requires p on the closed upper hemisphere and s*th <= pi/2.
GrassmannPoint sphere_to_grassmann(const Eigen::VectorXd& p, const ManifoldDims& dims,
                                   double scale = 1.0);

/// Same construction on the Stiefel manifold: v is lifted to a skew-Hermitian
/// pair (A,B) -- diagonal imaginary parts of A 1:1, off-diagonal complex
/// entries scaled by 1/sqrt2, B row-major -- and Phi = expm(s*th*Xi)[I;0]
/// with Xi = [[A, -B^*],[B, 0]]. Requires s*th <= pi.
StiefelPoint sphere_to_stiefel(const Eigen::VectorXd& p, const ManifoldDims& dims,
                               double scale = 1.0);

/// Frobenius norm of the difference.
double coherent_distance(const StiefelPoint& a, const StiefelPoint& b);

/// sqrt(n_t - |a^* b|_F^2), clamped at zero.
double noncoherent_distance(const GrassmannPoint& a, const GrassmannPoint& b);

/// exp(M) for skew-Hermitian M via the Hermitian eigendecomposition of iM.
Eigen::MatrixXcd expm_skew_hermitian(const Eigen::MatrixXcd& m);

} // namespace stc
