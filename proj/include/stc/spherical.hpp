#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "stc/combinatorics.hpp"
#include "stc/errors.hpp"

namespace stc {

/// Unit-norm vector (mu_1^(m_1),...,mu_k^(m_k)) built from k distinct values
/// repeated according to a MultisetSpec.
struct InitialVector {
    std::vector<double> values;  // one per symbol class, all distinct
    MultisetSpec spec;
    Eigen::VectorXd unit;        // expanded and scaled to norm 1
    double norm_constant = 1.0;  // norm of the unexpanded-scale vector

    int dim() const { return static_cast<int>(unit.size()); }
};

InitialVector build_initial_vector(const std::vector<double>& values,
                                   const MultisetSpec& spec);

/// Number N of permutations needed for rate R at block length T on S^D:
/// the spherical rate is r = T*R/(D+1) and N = ceil(2^((D+1)*r)).
std::uint64_t required_perm_count(double rate_bits_per_use, int block_len, int sphere_dim);

/// Finite set of unit-norm points on S^D with construction metadata.
struct SphericalCode {
    std::vector<Eigen::VectorXd> points;
    InitialVector origin;
    std::vector<std::uint64_t> selected_indices; // positions in the Gray list
    double alpha = 0.0;                          // rotation angle, 0 if unrotated

    int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
    std::size_t size() const { return points.size(); }
};

/// One point per permutation: position i of the point carries
/// values[perm[i]], the whole vector scaled as in the initial vector.
SphericalCode spherical_code_from_perms(const InitialVector& x,
                                        const std::vector<Permutation>& perms);

/// Smallest pairwise Euclidean distance; requires >= 2 points.
double min_distance(const SphericalCode& code);

/// Orthogonal matrix whose first row is e/sqrt(d) with e = (1,...,1); row j
/// (j >= 2) is (1^(j-1), -(j-1), 0...) normalized by sqrt(j(j-1)).
Eigen::MatrixXd helmert_axis_matrix(int d);

struct RotationMatrix {
    Eigen::MatrixXd m;
    double alpha = 0.0;
};

/// Rotation of R^d fixing the diagonal axis e: conjugates
/// blkdiag(1, exp(alpha*X)) by the Helmert frame, X being the antisymmetric
/// matrix with ones above the diagonal. alpha = 0 yields the identity.
RotationMatrix rotation_matrix(double alpha, int d);

SphericalCode apply_rotation(const SphericalCode& code, const RotationMatrix& rot);

/// Keeps points with first coordinate > 0. Points on the equator
/// (|first| <= 1e-12) are kept one per antipodal pair, preferring the
/// lexicographically larger; everything else on the lower half is dropped.
/// Antipodal sphere points represent the same subspace downstream, so a
/// final pass removes any surviving antipode of a kept point.
SphericalCode hemisphere_filter(const SphericalCode& code);

} // namespace stc
