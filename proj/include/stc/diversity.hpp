#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

struct SpaceTimeCode;

/// Effective SNR for coherent design: rho * T / (4 n_t).
double effective_snr_coherent(double rho_linear, int block_len, int n_t);

/// Effective SNR for non-coherent design: eff^2 / (eff + 1/4).
double effective_snr_noncoherent(double eff_coherent);

/// Elementary symmetric polynomials (sym_0,...,sym_n) of x, by the stable
/// product recurrence for prod(1 + t x_i).
std::vector<double> sym_polys(const std::vector<double>& x);

/// Singular values of a matrix, descending.
Eigen::VectorXd singular_spectrum(const Eigen::MatrixXcd& m);

/// Pairwise diversity quantities of one codeword pair.
struct DiversityReport {
    std::vector<double> s;      // elementary symmetric values, s[0] = 1
    double diversity_sum = 0;   // s[1]
    double diversity_product = 0; // s[n_t]
    double diversity = 0;       // sum_j s[j] * eff^j
    double chernov = 0;         // 0.5 * diversity^(-n_r)
    double effective_snr = 0;
};

/// Coherent pair: spectrum of Delta = a - b, s_j = sym_j(sigma_i^2).
/// The polynomial and product forms of the functional are cross-checked.
DiversityReport coherent_pair_report(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                     double eff, int n_r = 1);

/// Non-coherent pair: spectrum of Delta = a^* b, s_j = sym_j(1 - sigma_i^2).
/// Throws InvariantViolation if any singular value exceeds 1 + 1e-8.
DiversityReport noncoherent_pair_report(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                        double eff, int n_r = 1);

/// Exhaustive pairwise minima over a whole code.
struct CodeReport {
    double min_diversity_sum = 0;
    double min_diversity_product = 0;
    double min_diversity = 0;
    std::pair<std::size_t, std::size_t> argmin_sum;
    std::pair<std::size_t, std::size_t> argmin_product;
    std::pair<std::size_t, std::size_t> argmin_diversity;
    bool full_diversity = false; // min product > 1e-12
};

inline constexpr double kFullDiversityThreshold = 1e-12;

CodeReport code_report(const SpaceTimeCode& code, double eff, int threads = 0);

} // namespace stc
