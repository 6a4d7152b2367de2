#include "stc/diversity.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include "stc/codes.hpp"

namespace stc {

double effective_snr_coherent(double rho_linear, int block_len, int n_t) {
    if (rho_linear <= 0.0) throw Error("effective_snr_coherent: rho must be positive");
    return rho_linear * static_cast<double>(block_len) / (4.0 * static_cast<double>(n_t));
}

double effective_snr_noncoherent(double eff_coherent) {
    if (eff_coherent < 0.0) throw Error("effective_snr_noncoherent: input must be >= 0");
    if (eff_coherent == 0.0) return 0.0;
    return eff_coherent * eff_coherent / (eff_coherent + 0.25);
}

std::vector<double> sym_polys(const std::vector<double>& x) {
    std::vector<double> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    std::size_t used = 0;
    for (double xi : x) {
        ++used;
        for (std::size_t j = used; j >= 1; --j) e[j] += xi * e[j - 1];
    }
    return e;
}

Eigen::VectorXd singular_spectrum(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
}

namespace {

DiversityReport report_from_spectrum(const std::vector<double>& lambda, double eff, int n_r) {
    DiversityReport rep;
    rep.effective_snr = eff;
    rep.s = sym_polys(lambda);
    rep.diversity_sum = rep.s[1];
    rep.diversity_product = rep.s.back();

    double poly = 0.0, pw = 1.0;
    for (double sj : rep.s) {
        poly += sj * pw;
        pw *= eff;
    }
    double prod = 1.0;
    for (double l : lambda) prod *= 1.0 + eff * l;
    if (std::abs(poly - prod) > 1e-9 * std::max(1.0, std::abs(prod)))
        throw InvariantViolation("diversity: polynomial and product forms disagree");

    rep.diversity = poly;
    rep.chernov = 0.5 * std::pow(poly, -static_cast<double>(n_r));
    return rep;
}

} // namespace

DiversityReport coherent_pair_report(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                     double eff, int n_r) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("coherent_pair_report: shape mismatch");
    const Eigen::VectorXd sv = singular_spectrum(a - b);
    std::vector<double> lambda(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) lambda[static_cast<std::size_t>(i)] = sv[i] * sv[i];
    return report_from_spectrum(lambda, eff, n_r);
}

DiversityReport noncoherent_pair_report(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                        double eff, int n_r) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("noncoherent_pair_report: shape mismatch");
    const Eigen::VectorXd sv = singular_spectrum(a.adjoint() * b);
    std::vector<double> lambda(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1.0 + 1e-8)
            throw InvariantViolation("noncoherent_pair_report: singular value above 1; "
                                     "representatives are not orthonormal");
        const double s = std::clamp(sv[i], 0.0, 1.0);
        lambda[static_cast<std::size_t>(i)] = 1.0 - s * s;
    }
    return report_from_spectrum(lambda, eff, n_r);
}

namespace {

struct PairMinima {
    double sum = std::numeric_limits<double>::infinity();
    double product = std::numeric_limits<double>::infinity();
    double diversity = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> arg_sum{0, 0}, arg_product{0, 0}, arg_diversity{0, 0};

    void consider(double s, double p, double d, std::size_t i, std::size_t j) {
        const std::pair<std::size_t, std::size_t> ij{i, j};
        if (std::tie(s, ij) < std::tie(sum, arg_sum)) { sum = s; arg_sum = ij; }
        if (std::tie(p, ij) < std::tie(product, arg_product)) { product = p; arg_product = ij; }
        if (std::tie(d, ij) < std::tie(diversity, arg_diversity)) { diversity = d; arg_diversity = ij; }
    }
    void merge(const PairMinima& o) {
        if (std::tie(o.sum, o.arg_sum) < std::tie(sum, arg_sum)) {
            sum = o.sum; arg_sum = o.arg_sum;
        }
        if (std::tie(o.product, o.arg_product) < std::tie(product, arg_product)) {
            product = o.product; arg_product = o.arg_product;
        }
        if (std::tie(o.diversity, o.arg_diversity) < std::tie(diversity, arg_diversity)) {
            diversity = o.diversity; arg_diversity = o.arg_diversity;
        }
    }
};

} // namespace

CodeReport code_report(const SpaceTimeCode& code, double eff, int threads) {
    const std::size_t n = code.codewords.size();
    if (n < 2) throw Error("code_report: need at least 2 codewords");
    const int nt = code.n_t;
    const bool coherent = code.mode == CodeMode::coherent;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(nt, nt);

    unsigned hw = std::thread::hardware_concurrency();
    const unsigned nthreads =
        threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, hw);

    // Per-pair scan over the strict upper triangle. Minima are merged by
    // (value, index pair), so the result is partition-independent.
    auto scan = [&](std::size_t i0, std::size_t i1) {
        PairMinima local;
        Eigen::MatrixXcd g(nt, nt);
        for (std::size_t i = i0; i < i1; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double s, p, d;
                if (coherent) {
                    const Eigen::MatrixXcd delta = code.codewords[i] - code.codewords[j];
                    g.noalias() = delta.adjoint() * delta;
                    s = g.trace().real();
                    p = g.determinant().real();
                    d = (eye + eff * g).determinant().real();
                } else {
                    const Eigen::MatrixXcd delta = code.codewords[i].adjoint() * code.codewords[j];
                    g.noalias() = eye - delta.adjoint() * delta;
                    s = g.trace().real();
                    p = g.determinant().real();
                    d = (eye + eff * g).determinant().real();
                }
                local.consider(s, p, d, i, j);
            }
        }
        return local;
    };

    PairMinima total;
    if (nthreads <= 1 || n < 64) {
        total = scan(0, n);
    } else {
        // Balance the triangular workload: chunk boundaries at equal pair counts.
        std::vector<std::size_t> bounds{0};
        const double pairs_total = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1);
        for (unsigned t = 1; t < nthreads; ++t) {
            const double frac = pairs_total * t / nthreads;
            // solve i: pairs before row i = i*n - i(i+1)/2 >= frac
            std::size_t lo = bounds.back(), hi = n;
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                const double before = static_cast<double>(mid) * n -
                                      0.5 * static_cast<double>(mid) * (mid + 1);
                if (before < frac) lo = mid + 1; else hi = mid;
            }
            bounds.push_back(lo);
        }
        bounds.push_back(n);
        std::vector<PairMinima> partial(bounds.size() - 1);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t + 1 < bounds.size(); ++t)
            pool.emplace_back([&, t] { partial[t] = scan(bounds[t], bounds[t + 1]); });
        for (auto& th : pool) th.join();
        for (const auto& pm : partial) total.merge(pm);
    }

    CodeReport rep;
    rep.min_diversity_sum = total.sum;
    rep.min_diversity_product = total.product;
    rep.min_diversity = total.diversity;
    rep.argmin_sum = total.arg_sum;
    rep.argmin_product = total.arg_product;
    rep.argmin_diversity = total.arg_diversity;
    rep.full_diversity = total.product > kFullDiversityThreshold;
    return rep;
}

} // namespace stc
