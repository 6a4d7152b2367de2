#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stc/presets.hpp"
#include "stc/sim.hpp"

using namespace stc;

namespace {

// Plain-loop re-implementations of the two decoder metrics.
std::size_t brute_coherent(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& H,
                           const SpaceTimeCode& code, double rho) {
    const double amp = std::sqrt(rho * code.T / static_cast<double>(code.n_t));
    std::size_t best = 0;
    double best_m = 1e300;
    for (std::size_t k = 0; k < code.size(); ++k) {
        double m = 0.0;
        for (int t = 0; t < code.T; ++t)
            for (int r = 0; r < Y.cols(); ++r) {
                std::complex<double> pred{0, 0};
                for (int c = 0; c < code.n_t; ++c) pred += code.codewords[k](t, c) * H(c, r);
                m += std::norm(Y(t, r) - amp * pred);
            }
        if (m < best_m) {
            best_m = m;
            best = k;
        }
    }
    return best;
}

std::size_t brute_noncoherent(const Eigen::MatrixXcd& Y, const SpaceTimeCode& code) {
    std::size_t best = 0;
    double best_m = -1.0;
    for (std::size_t k = 0; k < code.size(); ++k) {
        double m = 0.0;
        for (int r = 0; r < Y.cols(); ++r)
            for (int c = 0; c < code.n_t; ++c) {
                std::complex<double> acc{0, 0};
                for (int t = 0; t < code.T; ++t)
                    acc += std::conj(Y(t, r)) * code.codewords[k](t, c);
                m += std::norm(acc);
            }
        if (m > best_m) {
            best_m = m;
            best = k;
        }
    }
    return best;
}

} // namespace

TEST_CASE("trial rng: reproducible, stream-separated") {
    TrialRng a = TrialRng::for_trial(42, 1, 1000);
    TrialRng b = TrialRng::for_trial(42, 1, 1000);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    TrialRng c = TrialRng::for_trial(42, 1, 1001);
    CHECK(TrialRng::for_trial(42, 1, 1000).next_u64() != c.next_u64());
    TrialRng d = TrialRng::for_trial(43, 1, 1000);
    CHECK(TrialRng::for_trial(42, 1, 1000).next_u64() != d.next_u64());
}

TEST_CASE("trial rng: uniform draw bounds and unit interval") {
    TrialRng rng = TrialRng::for_trial(7, 0, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_unit();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        const auto k = rng.next_below(21);
        CHECK(k < 21);
    }
}

TEST_CASE("complex normal moments over 1e6 samples") {
    TrialRng rng = TrialRng::for_trial(1234, 0, 0);
    const int n = 1'000'000;
    double sum_re = 0, sum_im = 0, sq_re = 0, sq_im = 0;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.next_cnormal();
        sum_re += z.real();
        sum_im += z.imag();
        sq_re += z.real() * z.real();
        sq_im += z.imag() * z.imag();
    }
    CHECK(std::abs(sum_re / n) < 0.005);
    CHECK(std::abs(sum_im / n) < 0.005);
    CHECK(std::abs(sq_re / n - 0.5) < 0.005);
    CHECK(std::abs(sq_im / n - 0.5) < 0.005);
}

TEST_CASE("transmit") {
    const auto code = build_preset("alamouti-bpsk"); // T = n_t = 2
    const auto& phi = code.codewords[0];

    SUBCASE("zero noise, identity channel") {
        ChannelRealization rz;
        rz.H = Eigen::MatrixXcd::Identity(2, 2);
        rz.N = Eigen::MatrixXcd::Zero(2, 2);
        const double rho = 4.0;
        const Eigen::MatrixXcd y = transmit(phi, rho, rz);
        CHECK((y - std::sqrt(rho * 2.0 / 2.0) * phi).norm() < 1e-14);
    }
    SUBCASE("zero snr leaves only noise") {
        TrialRng rng = TrialRng::for_trial(5, 0, 0);
        const auto rz = draw_realization(rng, 2, 2, 2);
        const Eigen::MatrixXcd y = transmit(phi, 0.0, rz);
        CHECK((y - rz.N).norm() == 0.0);
    }
    SUBCASE("fixed seed gives identical output") {
        TrialRng r1 = TrialRng::for_trial(9, 2, 77);
        TrialRng r2 = TrialRng::for_trial(9, 2, 77);
        const auto z1 = draw_realization(r1, 2, 1, 2);
        const auto z2 = draw_realization(r2, 2, 1, 2);
        const Eigen::MatrixXcd y1 = transmit(phi, 10.0, z1);
        const Eigen::MatrixXcd y2 = transmit(phi, 10.0, z2);
        CHECK(y1.real() == y2.real());
        CHECK(y1.imag() == y2.imag());
    }
    SUBCASE("shape mismatch") {
        ChannelRealization rz;
        rz.H = Eigen::MatrixXcd::Identity(3, 1);
        rz.N = Eigen::MatrixXcd::Zero(2, 1);
        CHECK_THROWS_AS(transmit(phi, 1.0, rz), DimensionError);
    }
}

TEST_CASE("noiseless decoding recovers the sent index") {
    const double rho = 10.0;

    SUBCASE("coherent") {
        const auto code = build_preset("alamouti-qpsk");
        Eigen::MatrixXcd h(2, 1);
        h << std::complex<double>(0.6, -0.3), std::complex<double>(-0.2, 1.1);
        for (std::size_t j = 0; j < code.size(); ++j) {
            ChannelRealization rz{h, Eigen::MatrixXcd::Zero(2, 1)};
            const auto y = transmit(code.codewords[j], rho, rz);
            CHECK(ml_coherent(y, h, code, rho) == j);
        }
    }
    SUBCASE("noncoherent") {
        const auto code = build_oracle16();
        REQUIRE(code.size() == 16);
        TrialRng rng = TrialRng::for_trial(2718, 0, 0);
        for (std::size_t j = 0; j < code.size(); ++j) {
            auto rz = draw_realization(rng, 2, 1, 8);
            rz.N.setZero();
            const auto y = transmit(code.codewords[j], rho, rz);
            CHECK(ml_noncoherent(y, code) == j);
        }
    }
}

TEST_CASE("decoders agree with plain-loop re-implementations") {
    const double rho = std::pow(10.0, 0.8); // 8 dB, plenty of decision errors
    const auto nc = build_oracle16();
    const auto coh = build_preset("alamouti-qpsk");
    for (std::uint64_t t = 0; t < 200; ++t) {
        TrialRng rng = TrialRng::for_trial(31337, 0, t);
        {
            const auto sent = static_cast<std::size_t>(rng.next_below(nc.size()));
            auto rz = draw_realization(rng, 2, 1, nc.T);
            const auto y = transmit(nc.codewords[sent], rho, rz);
            CHECK(ml_noncoherent(y, nc) == brute_noncoherent(y, nc));
        }
        {
            const auto sent = static_cast<std::size_t>(rng.next_below(coh.size()));
            auto rz = draw_realization(rng, 2, 1, coh.T);
            const auto y = transmit(coh.codewords[sent], rho, rz);
            CHECK(ml_coherent(y, rz.H, coh, rho) == brute_coherent(y, rz.H, coh, rho));
        }
    }
}

TEST_CASE("noncoherent metric is invariant under representative rotation") {
    auto code = build_oracle16();
    TrialRng rng = TrialRng::for_trial(99, 0, 0);
    auto rz = draw_realization(rng, 2, 1, 8);
    const auto y = transmit(code.codewords[3], 8.0, rz);
    const auto before = ml_noncoherent(y, code);

    // right-multiply every representative by a unitary factor
    Eigen::MatrixXcd u(2, 2);
    const double c = std::cos(0.77), s = std::sin(0.77);
    u << std::complex<double>(c, 0), std::complex<double>(0, s), std::complex<double>(0, s),
        std::complex<double>(c, 0);
    SpaceTimeCode rotated = code;
    for (auto& cw : rotated.codewords) cw = cw * u;
    CHECK(ml_noncoherent(y, rotated) == before);
}

TEST_CASE("run_ber") {
    const auto code = build_preset("nc-T4");

    SUBCASE("determinism and counting consistency") {
        SimConfig cfg;
        cfg.snr_grid_db = {12.0, 16.0};
        cfg.trials_per_point = 4000;
        cfg.master_seed = 5150;
        cfg.mode = CodeMode::noncoherent;
        const auto c1 = run_ber(code, cfg);
        const auto c2 = run_ber(code, cfg);
        REQUIRE(c1.points.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(c1.points[i].symbol_errors == c2.points[i].symbol_errors);
            CHECK(c1.points[i].bit_errors == c2.points[i].bit_errors);
            // consistency: each symbol error contributes 1..bits bit errors
            CHECK(c1.points[i].bit_errors >= c1.points[i].symbol_errors);
            CHECK(c1.points[i].bit_errors <=
                  c1.points[i].symbol_errors * static_cast<std::uint64_t>(c1.bits_per_symbol));
            CHECK(c1.points[i].ber <= c1.points[i].ser);
            CHECK(c1.points[i].ber_lo95 <= c1.points[i].ber);
            CHECK(c1.points[i].ber <= c1.points[i].ber_hi95);
        }
    }
    SUBCASE("partitioning across workers does not change the counts") {
        SimConfig cfg;
        cfg.snr_grid_db = {14.0};
        cfg.trials_per_point = 3000;
        cfg.master_seed = 31;
        cfg.mode = CodeMode::noncoherent;
        cfg.threads = 1;
        const auto one = run_ber(code, cfg);
        cfg.threads = 7;
        const auto seven = run_ber(code, cfg);
        CHECK(one.points[0].symbol_errors == seven.points[0].symbol_errors);
        CHECK(one.points[0].bit_errors == seven.points[0].bit_errors);
    }
    SUBCASE("noise-free limit") {
        SimConfig cfg;
        cfg.snr_grid_db = {60.0};
        cfg.trials_per_point = 1000;
        cfg.master_seed = 777;
        cfg.mode = CodeMode::noncoherent;
        const auto curve = run_ber(code, cfg);
        CHECK(curve.points[0].bit_errors == 0);
    }
    SUBCASE("mode mismatch is rejected") {
        SimConfig cfg;
        cfg.snr_grid_db = {10.0};
        cfg.trials_per_point = 10;
        cfg.mode = CodeMode::coherent;
        CHECK_THROWS_AS(run_ber(code, cfg), Error);
    }
}

TEST_CASE("wilson interval") {
    // x = 0 pins the lower bound at 0
    const auto [lo0, hi0] = wilson_interval(0, 1000);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    // reference value for x=5, n=100 (z = 1.96)
    const auto [lo, hi] = wilson_interval(5, 100);
    CHECK(lo == doctest::Approx(0.0215).epsilon(0.01));
    CHECK(hi == doctest::Approx(0.1118).epsilon(0.01));
    // interval shrinks with n at fixed rate
    const auto [lo2, hi2] = wilson_interval(50, 1000);
    CHECK(hi2 - lo2 < hi - lo);
}

TEST_CASE("csv output") {
    const auto code = build_preset("alamouti-bpsk");
    SimConfig cfg;
    cfg.snr_grid_db = {10.0};
    cfg.trials_per_point = 500;
    cfg.master_seed = 1;
    cfg.mode = CodeMode::coherent;
    const auto curve = run_ber(code, cfg);

    std::stringstream a, b;
    write_csv(curve, a);
    write_csv(run_ber(code, cfg), b);
    CHECK(a.str() == b.str()); // byte-identical across runs
    CHECK(a.str().rfind("snr_db,trials,symbol_errors,bit_errors,ser,ber,ber_lo95,ber_hi95\n",
                        0) == 0);
}
