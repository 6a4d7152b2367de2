#include "stc/spherical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace stc {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kEquatorTol = 1e-12;

void check_unit(const Eigen::VectorXd& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > kUnitTol)
        throw InvariantViolation(std::string(what) + ": point not unit norm");
}
} // namespace

InitialVector build_initial_vector(const std::vector<double>& values,
                                   const MultisetSpec& spec) {
    if (values.size() != static_cast<std::size_t>(spec.classes()))
        throw DomainMismatchError("build_initial_vector: values/multiplicities length mismatch");
    std::set<double> distinct(values.begin(), values.end());
    if (distinct.size() != values.size())
        throw Error("build_initial_vector: values must be distinct");

    Eigen::VectorXd v(spec.total());
    int pos = 0;
    for (int c = 0; c < spec.classes(); ++c)
        for (int r = 0; r < spec.multiplicities[c]; ++r) v[pos++] = values[c];

    const double nrm = v.norm();
    if (nrm == 0.0)
        throw Error("build_initial_vector: all-zero vector cannot be normalized");

    InitialVector out;
    out.values = values;
    out.spec = spec;
    out.unit = v / nrm;
    out.norm_constant = nrm;
    return out;
}

std::uint64_t required_perm_count(double rate_bits_per_use, int block_len, int sphere_dim) {
    if (rate_bits_per_use <= 0.0 || block_len < 1 || sphere_dim < 1)
        throw Error("required_perm_count: need R > 0, T >= 1, D >= 1");
    const double spherical_rate = static_cast<double>(block_len) * rate_bits_per_use /
                                  static_cast<double>(sphere_dim + 1);
    const double n = std::ceil(std::exp2(static_cast<double>(sphere_dim + 1) * spherical_rate));
    if (!(n < 9.22e18))
        throw OverflowError("required_perm_count: N exceeds 64-bit range");
    return static_cast<std::uint64_t>(n);
}

SphericalCode spherical_code_from_perms(const InitialVector& x,
                                        const std::vector<Permutation>& perms) {
    SphericalCode code;
    code.origin = x;
    code.points.reserve(perms.size());
    const double scale = 1.0 / x.norm_constant;
    for (const auto& p : perms) {
        if (!matches_spec(p, x.spec))
            throw DomainMismatchError("spherical_code_from_perms: permutation over a different multiset");
        Eigen::VectorXd pt(x.dim());
        for (int i = 0; i < x.dim(); ++i) pt[i] = x.values[static_cast<std::size_t>(p[i])] * scale;
        check_unit(pt, "spherical_code_from_perms");
        code.points.push_back(std::move(pt));
    }
    return code;
}

double min_distance(const SphericalCode& code) {
    if (code.size() < 2)
        throw Error("min_distance: undefined for fewer than 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < code.size(); ++i)
        for (std::size_t j = i + 1; j < code.size(); ++j)
            best = std::min(best, (code.points[i] - code.points[j]).norm());
    return best;
}

Eigen::MatrixXd helmert_axis_matrix(int d) {
    if (d < 2) throw DimensionError("helmert_axis_matrix: need dimension >= 2");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    w.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    for (int j = 2; j <= d; ++j) {
        // Row norm^2 = (j-1) + (j-1)^2 = j(j-1), so the row is unit.
        const double s = 1.0 / std::sqrt(static_cast<double>(j) * (j - 1));
        for (int i = 0; i < j - 1; ++i) w(j - 1, i) = s;
        w(j - 1, j - 1) = -static_cast<double>(j - 1) * s;
    }
    if ((w * w.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-12)
        throw InvariantViolation("helmert_axis_matrix: not orthogonal");
    return w;
}

RotationMatrix rotation_matrix(double alpha, int d) {
    if (d < 2) throw DimensionError("rotation_matrix: need dimension >= 2");
    if (alpha == 0.0) return {Eigen::MatrixXd::Identity(d, d), 0.0};

    const int inner = d - 1;
    // exp(alpha*X) for antisymmetric X via the Hermitian matrix i*alpha*X:
    // exp(alpha*X) = U diag(exp(-i*lambda)) U^*, numerically orthogonal.
    Eigen::MatrixXcd h(inner, inner);
    h.setZero();
    const std::complex<double> ia(0.0, alpha);
    for (int r = 0; r < inner; ++r)
        for (int c = r + 1; c < inner; ++c) {
            h(r, c) = ia;
            h(c, r) = std::conj(ia);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    if (eig.info() != Eigen::Success)
        throw Error("rotation_matrix: eigendecomposition failed");
    Eigen::VectorXcd phase(inner);
    for (int i = 0; i < inner; ++i)
        phase[i] = std::exp(std::complex<double>(0.0, -eig.eigenvalues()[i]));
    Eigen::MatrixXcd expx =
        eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint();

    Eigen::MatrixXd r1 = Eigen::MatrixXd::Identity(d, d);
    r1.bottomRightCorner(inner, inner) = expx.real();

    const Eigen::MatrixXd w = helmert_axis_matrix(d);
    RotationMatrix rot{w.transpose() * r1 * w, alpha};

    if ((rot.m * rot.m.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-12)
        throw InvariantViolation("rotation_matrix: result not orthogonal");
    if ((rot.m * Eigen::VectorXd::Ones(d) - Eigen::VectorXd::Ones(d)).norm() > 1e-10)
        throw InvariantViolation("rotation_matrix: diagonal axis not fixed");
    return rot;
}

SphericalCode apply_rotation(const SphericalCode& code, const RotationMatrix& rot) {
    if (code.dim() != rot.m.rows())
        throw DimensionError("apply_rotation: dimension mismatch");
    SphericalCode out = code;
    out.alpha = rot.alpha;
    for (auto& p : out.points) {
        p = rot.m * p;
        check_unit(p, "apply_rotation");
    }
    return out;
}

namespace {
bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}
} // namespace

SphericalCode hemisphere_filter(const SphericalCode& code) {
    std::vector<Eigen::VectorXd> kept, equator;
    for (const auto& p : code.points) {
        if (p[0] > kEquatorTol)
            kept.push_back(p);
        else if (p[0] >= -kEquatorTol)
            equator.push_back(p);
    }
    // One representative per antipodal equator pair, lexicographically larger.
    std::vector<bool> used(equator.size(), false);
    for (std::size_t i = 0; i < equator.size(); ++i) {
        if (used[i]) continue;
        Eigen::VectorXd rep = equator[i];
        for (std::size_t j = i + 1; j < equator.size(); ++j) {
            if (used[j]) continue;
            if ((equator[i] + equator[j]).norm() < 1e-9) {
                used[j] = true;
                if (lex_less(rep, equator[j])) rep = equator[j];
            }
        }
        kept.push_back(std::move(rep));
    }
    // Numerical belt: drop the lex-smaller of any antipodal pair that
    // survived thresholding.
    std::vector<Eigen::VectorXd> final;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < kept.size() && !drop; ++j) {
            if (i == j) continue;
            if ((kept[i] + kept[j]).norm() < 1e-9 && lex_less(kept[i], kept[j])) drop = true;
        }
        if (!drop) final.push_back(kept[i]);
    }

    SphericalCode out = code;
    out.points = std::move(final);
    return out;
}

} // namespace stc
