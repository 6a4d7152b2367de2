#include <doctest.h>

#include <cmath>
#include <random>

#include "stc/codes.hpp"
#include "stc/diversity.hpp"
#include "stc/manifold.hpp"
#include "stc/presets.hpp"

using namespace stc;

namespace {

std::mt19937_64 gen(777);

Eigen::MatrixXcd random_orthonormal(int rows, int cols) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a(r, c) = std::complex<double>(g(gen), g(gen));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

Eigen::MatrixXcd random_unitary(int n) { return random_orthonormal(n, n); }

} // namespace

TEST_CASE("effective SNR") {
    CHECK(effective_snr_coherent(4.0, 3, 3) == doctest::Approx(1.0));
    CHECK(effective_snr_coherent(10.0, 8, 2) == doctest::Approx(10.0));
    CHECK(effective_snr_coherent(1e-12, 2, 2) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK_THROWS_AS(effective_snr_coherent(0.0, 2, 2), Error);

    CHECK(effective_snr_noncoherent(0.25) == doctest::Approx(0.125));
    CHECK(effective_snr_noncoherent(0.0) == 0.0);
    // asymptote: for large input the ratio tends to 1
    CHECK(effective_snr_noncoherent(1e6) / 1e6 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("elementary symmetric polynomials") {
    SUBCASE("pair") {
        const auto e = sym_polys({3.0, 5.0});
        REQUIRE(e.size() == 3);
        CHECK(e[0] == 1.0);
        CHECK(e[1] == 8.0);
        CHECK(e[2] == 15.0);
    }
    SUBCASE("all zeros") {
        const auto e = sym_polys({0, 0, 0});
        CHECK(e == std::vector<double>{1, 0, 0, 0});
    }
    SUBCASE("random 4-vector against subset-sum brute force") {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> x(4);
            for (auto& v : x) v = u(gen);
            const auto e = sym_polys(x);
            std::vector<double> brute(5, 0.0);
            for (int mask = 0; mask < 16; ++mask) {
                double prod = 1.0;
                int bits = 0;
                for (int i = 0; i < 4; ++i)
                    if (mask >> i & 1) {
                        prod *= x[static_cast<std::size_t>(i)];
                        ++bits;
                    }
                brute[static_cast<std::size_t>(bits)] += prod;
            }
            for (int j = 0; j <= 4; ++j)
                CHECK(e[static_cast<std::size_t>(j)] ==
                      doctest::Approx(brute[static_cast<std::size_t>(j)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("coherent pair report") {
    SUBCASE("identical codewords") {
        const Eigen::MatrixXcd phi = random_orthonormal(4, 2);
        const auto rep = coherent_pair_report(phi, phi, 3.0);
        CHECK(rep.s[0] == 1.0);
        CHECK(rep.diversity_sum == doctest::Approx(0.0));
        CHECK(rep.diversity_product == doctest::Approx(0.0));
        CHECK(rep.diversity == doctest::Approx(1.0));
        CHECK(rep.chernov == doctest::Approx(0.5));
    }
    SUBCASE("scalar antipodal") {
        Eigen::MatrixXcd a(1, 1), b(1, 1);
        a << 1.0;
        b << -1.0;
        const double eff = 2.5;
        const auto rep = coherent_pair_report(a, b, eff);
        CHECK(rep.diversity_sum == doctest::Approx(4.0));
        CHECK(rep.diversity == doctest::Approx(1.0 + 4.0 * eff));
    }
    SUBCASE("s1 equals squared coherent distance") {
        for (int rep_i = 0; rep_i < 50; ++rep_i) {
            const auto a = random_orthonormal(5, 2);
            const auto b = random_orthonormal(5, 2);
            const auto rep = coherent_pair_report(a, b, 1.7);
            const double d = coherent_distance(StiefelPoint(a), StiefelPoint(b));
            CHECK(rep.diversity_sum == doctest::Approx(d * d).epsilon(1e-10));
            // product form vs polynomial form already cross-checked inside;
            // recheck externally at 1e-9
            const auto sv = singular_spectrum(a - b);
            double prod = 1.0;
            for (Eigen::Index i = 0; i < sv.size(); ++i) prod *= 1.0 + 1.7 * sv[i] * sv[i];
            CHECK(rep.diversity == doctest::Approx(prod).epsilon(1e-9));
        }
    }
    SUBCASE("chernov decreasing in the separation") {
        double last = 1.0;
        for (double t : {0.5, 1.0, 1.5, 2.0}) {
            Eigen::MatrixXcd a(1, 1), b(1, 1);
            a << 1.0;
            b << std::polar(1.0, t);
            const auto rep = coherent_pair_report(a, b, 2.0);
            CHECK(rep.chernov < last);
            last = rep.chernov;
        }
    }
}

TEST_CASE("noncoherent pair report") {
    SUBCASE("identical representatives") {
        const auto phi = random_orthonormal(4, 2);
        const auto rep = noncoherent_pair_report(phi, phi, 5.0);
        CHECK(rep.diversity_sum == doctest::Approx(0.0));
        CHECK(rep.diversity_product == doctest::Approx(0.0));
        CHECK(rep.diversity == doctest::Approx(1.0));
    }
    SUBCASE("orthogonal subspaces") {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 2), b = Eigen::MatrixXcd::Zero(4, 2);
        a(0, 0) = a(1, 1) = 1.0;
        b(2, 0) = b(3, 1) = 1.0;
        const double eff = 3.0;
        const auto rep = noncoherent_pair_report(a, b, eff);
        CHECK(rep.diversity_sum == doctest::Approx(2.0));
        CHECK(rep.diversity_product == doctest::Approx(1.0));
        CHECK(rep.diversity == doctest::Approx((1.0 + eff) * (1.0 + eff)));
    }
    SUBCASE("invariant under right-unitary representative changes") {
        const auto a = random_orthonormal(5, 2);
        const auto b = random_orthonormal(5, 2);
        const auto r1 = noncoherent_pair_report(a, b, 2.0);
        const auto r2 =
            noncoherent_pair_report(a * random_unitary(2), b * random_unitary(2), 2.0);
        CHECK(r1.diversity == doctest::Approx(r2.diversity).epsilon(1e-9));
        CHECK(r1.diversity_sum == doctest::Approx(r2.diversity_sum).epsilon(1e-9));
        CHECK(r1.diversity_product == doctest::Approx(r2.diversity_product).epsilon(1e-9));
    }
    SUBCASE("s1 equals squared noncoherent distance; det matches spectrum") {
        for (int i = 0; i < 50; ++i) {
            const auto a = random_orthonormal(6, 2);
            const auto b = random_orthonormal(6, 2);
            const auto rep = noncoherent_pair_report(a, b, 4.0);
            const double d = noncoherent_distance(GrassmannPoint(a), GrassmannPoint(b));
            CHECK(rep.diversity_sum == doctest::Approx(d * d).epsilon(1e-10));

            const Eigen::MatrixXcd delta = a.adjoint() * b;
            const double det =
                (Eigen::MatrixXcd::Identity(2, 2) - delta.adjoint() * delta).determinant().real();
            CHECK(rep.diversity_product == doctest::Approx(det).epsilon(1e-9));
        }
    }
    SUBCASE("non-orthonormal input is rejected") {
        const auto a = random_orthonormal(4, 2);
        CHECK_THROWS_AS(noncoherent_pair_report(2.0 * a, a, 1.0), InvariantViolation);
    }
}

TEST_CASE("code report") {
    SUBCASE("two orthogonal noncoherent codewords") {
        SpaceTimeCode code;
        code.mode = CodeMode::noncoherent;
        code.T = 4;
        code.n_t = 2;
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 2), b = Eigen::MatrixXcd::Zero(4, 2);
        a(0, 0) = a(1, 1) = 1.0;
        b(2, 0) = b(3, 1) = 1.0;
        code.codewords = {a, b};
        code.rate = rate(code);
        const auto rep = code_report(code, 2.0);
        CHECK(rep.min_diversity_sum == doctest::Approx(2.0));
        CHECK(rep.min_diversity_product == doctest::Approx(1.0));
        CHECK(rep.full_diversity);
        CHECK(rep.argmin_sum == std::pair<std::size_t, std::size_t>{0, 1});
    }
    SUBCASE("fewer than two codewords") {
        SpaceTimeCode code;
        code.mode = CodeMode::coherent;
        code.T = 2;
        code.n_t = 2;
        code.codewords = {random_orthonormal(2, 2)};
        CHECK_THROWS_AS(code_report(code, 1.0), Error);
    }
    SUBCASE("thread count does not change the result") {
        const auto code = build_preset("nc-T4");
        const auto r1 = code_report(code, 3.0, 1);
        const auto r4 = code_report(code, 3.0, 4);
        CHECK(r1.min_diversity_sum == r4.min_diversity_sum);
        CHECK(r1.min_diversity_product == r4.min_diversity_product);
        CHECK(r1.min_diversity == r4.min_diversity);
        CHECK(r1.argmin_sum == r4.argmin_sum);
        CHECK(r1.argmin_product == r4.argmin_product);
        CHECK(r1.argmin_diversity == r4.argmin_diversity);
    }
    SUBCASE("argmin ties resolve to the lexicographically smallest pair") {
        // four codewords all at identical pairwise distances
        SpaceTimeCode code;
        code.mode = CodeMode::coherent;
        code.T = 4;
        code.n_t = 1;
        for (int i = 0; i < 4; ++i) {
            Eigen::MatrixXcd cw = Eigen::MatrixXcd::Zero(4, 1);
            cw(i, 0) = 1.0;
            code.codewords.push_back(cw);
        }
        code.rate = rate(code);
        const auto rep = code_report(code, 1.0);
        CHECK(rep.argmin_sum == std::pair<std::size_t, std::size_t>{0, 1});
        CHECK(rep.argmin_diversity == std::pair<std::size_t, std::size_t>{0, 1});
    }
}
