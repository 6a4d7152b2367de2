#include "stc/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace stc {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

} // namespace

TrialRng TrialRng::for_trial(std::uint64_t master_seed, std::uint64_t snr_index,
                             std::uint64_t trial_index) {
    std::uint64_t h = mix64(master_seed + kGamma);
    h = mix64(h ^ (snr_index + 0xA24BAED4963EE407ULL));
    h = mix64(h ^ (trial_index + 0x9FB21C651E98DF25ULL));
    return TrialRng(h);
}

std::uint64_t TrialRng::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double TrialRng::next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t TrialRng::next_below(std::uint64_t n) {
    // Lemire's rejection-free-in-expectation bounded draw.
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::complex<double> TrialRng::next_cnormal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

ChannelRealization draw_realization(TrialRng& rng, int n_t, int n_r, int T) {
    ChannelRealization out;
    out.H.resize(n_t, n_r);
    for (int r = 0; r < n_t; ++r)
        for (int c = 0; c < n_r; ++c) out.H(r, c) = rng.next_cnormal();
    out.N.resize(T, n_r);
    for (int r = 0; r < T; ++r)
        for (int c = 0; c < n_r; ++c) out.N(r, c) = rng.next_cnormal();
    return out;
}

Eigen::MatrixXcd transmit(const Eigen::MatrixXcd& phi, double rho,
                          const ChannelRealization& realization) {
    if (phi.cols() != realization.H.rows() || phi.rows() != realization.N.rows() ||
        realization.H.cols() != realization.N.cols())
        throw DimensionError("transmit: inconsistent shapes");
    const double amp =
        std::sqrt(rho * static_cast<double>(phi.rows()) / static_cast<double>(phi.cols()));
    return amp * phi * realization.H + realization.N;
}

std::size_t ml_coherent(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& H,
                        const SpaceTimeCode& code, double rho) {
    const double amp =
        std::sqrt(rho * static_cast<double>(code.T) / static_cast<double>(code.n_t));
    const auto n_r = Y.cols();
    Eigen::VectorXcd scratch(code.T);
    std::size_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < code.size(); ++k) {
        const auto& phi = code.codewords[k];
        double metric = 0.0;
        for (Eigen::Index r = 0; r < n_r; ++r) {
            scratch.noalias() = phi * H.col(r);
            for (int t = 0; t < code.T; ++t)
                metric += std::norm(Y(t, r) - amp * scratch[t]);
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = k;
        }
    }
    return best;
}

std::size_t ml_noncoherent(const Eigen::MatrixXcd& Y, const SpaceTimeCode& code) {
    const auto n_r = Y.cols();
    std::size_t best = 0;
    double best_metric = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < code.size(); ++k) {
        const auto& phi = code.codewords[k];
        double metric = 0.0;
        for (Eigen::Index r = 0; r < n_r; ++r)
            for (int c = 0; c < code.n_t; ++c)
                metric += std::norm(Y.col(r).dot(phi.col(c)));
        if (metric > best_metric) {
            best_metric = metric;
            best = k;
        }
    }
    return best;
}

int bits_per_symbol(std::size_t cardinality) {
    if (cardinality < 2) return 1;
    return static_cast<int>(std::bit_width(cardinality - 1));
}

std::pair<double, double> wilson_interval(std::uint64_t x, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    if (x == 0 && n > 0) {
        constexpr double z = 1.959963984540054;
        const double z2 = z * z;
        return {0.0, z2 / (static_cast<double>(n) + z2)};
    }
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(x) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

BerCurve run_ber(const SpaceTimeCode& code, const SimConfig& config) {
    if (config.trials_per_point < 1) throw Error("run_ber: need at least one trial");
    if (config.snr_grid_db.empty()) throw Error("run_ber: empty SNR grid");
    if (config.n_r < 1) throw Error("run_ber: need n_r >= 1");
    if (config.mode != code.mode)
        throw Error("run_ber: config mode does not match codebook mode");

    const int bits = bits_per_symbol(code.size());
    const std::uint64_t trials = config.trials_per_point;
    unsigned nthreads = config.threads > 0
                            ? static_cast<unsigned>(config.threads)
                            : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(
        std::min<std::uint64_t>(nthreads, std::max<std::uint64_t>(1, trials / 64)));

    BerCurve curve;
    curve.bits_per_symbol = bits;
    for (std::size_t si = 0; si < config.snr_grid_db.size(); ++si) {
        const double snr_db = config.snr_grid_db[si];
        const double rho = std::pow(10.0, snr_db / 10.0);

        // Each trial owns an independent substream keyed by (seed, si, t);
        // chunking only affects which worker runs a trial, not its draws.
        auto worker = [&](std::uint64_t t0, std::uint64_t t1, std::uint64_t& sym_err,
                          std::uint64_t& bit_err) {
            std::uint64_t se = 0, be = 0;
            for (std::uint64_t t = t0; t < t1; ++t) {
                TrialRng rng = TrialRng::for_trial(config.master_seed, si, t);
                const auto sent = static_cast<std::size_t>(rng.next_below(code.size()));
                const ChannelRealization rz =
                    draw_realization(rng, code.n_t, config.n_r, code.T);
                const Eigen::MatrixXcd Y = transmit(code.codewords[sent], rho, rz);
                const std::size_t decoded = config.mode == CodeMode::coherent
                                                ? ml_coherent(Y, rz.H, code, rho)
                                                : ml_noncoherent(Y, code);
                if (decoded != sent) {
                    ++se;
                    be += static_cast<std::uint64_t>(
                        std::popcount(static_cast<std::uint64_t>(decoded ^ sent)));
                }
            }
            sym_err = se;
            bit_err = be;
        };

        std::uint64_t symbol_errors = 0, bit_errors = 0;
        if (nthreads <= 1) {
            worker(0, trials, symbol_errors, bit_errors);
        } else {
            std::vector<std::uint64_t> se(nthreads, 0), be(nthreads, 0);
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < nthreads; ++w) {
                const std::uint64_t t0 = trials * w / nthreads;
                const std::uint64_t t1 = trials * (w + 1) / nthreads;
                pool.emplace_back(worker, t0, t1, std::ref(se[w]), std::ref(be[w]));
            }
            for (auto& th : pool) th.join();
            for (unsigned w = 0; w < nthreads; ++w) {
                symbol_errors += se[w];
                bit_errors += be[w];
            }
        }

        SnrPointStats pt;
        pt.snr_db = snr_db;
        pt.trials = trials;
        pt.symbol_errors = symbol_errors;
        pt.bit_errors = bit_errors;
        pt.ser = static_cast<double>(symbol_errors) / static_cast<double>(trials);
        const std::uint64_t nbits = trials * static_cast<std::uint64_t>(bits);
        pt.ber = static_cast<double>(bit_errors) / static_cast<double>(nbits);
        std::tie(pt.ber_lo95, pt.ber_hi95) = wilson_interval(bit_errors, nbits);
        curve.points.push_back(pt);
    }
    return curve;
}

void write_csv(const BerCurve& curve, std::ostream& os) {
    os << "snr_db,trials,symbol_errors,bit_errors,ser,ber,ber_lo95,ber_hi95\n";
    char buf[256];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.10g,%llu,%llu,%llu,%.10g,%.10g,%.10g,%.10g\n",
                      p.snr_db, static_cast<unsigned long long>(p.trials),
                      static_cast<unsigned long long>(p.symbol_errors),
                      static_cast<unsigned long long>(p.bit_errors), p.ser, p.ber, p.ber_lo95,
                      p.ber_hi95);
        os << buf;
    }
}

} // namespace stc
