#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stc/codes.hpp"

namespace stc {

/// Deterministic per-trial random stream: a SplitMix64 sequence whose seed is
/// derived by mixing (master_seed, snr_index, trial_index). The derivation is
/// fixed, so any partitioning of trials across workers draws identical
/// numbers for a given trial. Complex normals come from one Box-Muller step
/// per value (total variance 1, i.e. 1/2 per real component).
inline constexpr const char* kRngId = "splitmix64-boxmuller-v1";

class TrialRng {
  public:
    explicit TrialRng(std::uint64_t state) : state_(state) {}
    static TrialRng for_trial(std::uint64_t master_seed, std::uint64_t snr_index,
                              std::uint64_t trial_index);

    std::uint64_t next_u64();
    /// Uniform on (0, 1]; never returns 0, so log() is safe.
    double next_unit();
    /// Unbiased uniform draw from [0, n).
    std::uint64_t next_below(std::uint64_t n);
    /// Circular-symmetric complex normal, unit total variance.
    std::complex<double> next_cnormal();

  private:
    std::uint64_t state_;
};

/// Channel matrix and additive noise for one coherence block, entries iid
/// CN(0,1).
struct ChannelRealization {
    Eigen::MatrixXcd H; // n_t x n_r
    Eigen::MatrixXcd N; // T x n_r
};

/// Draws H then N, row-major entry order, from the given stream.
ChannelRealization draw_realization(TrialRng& rng, int n_t, int n_r, int T);

/// Y = sqrt(rho T / n_t) * Phi * H + N.
Eigen::MatrixXcd transmit(const Eigen::MatrixXcd& phi, double rho,
                          const ChannelRealization& realization);

/// argmin_k |Y - sqrt(rho T/n_t) Phi_k H|_F, ties to the smallest index.
std::size_t ml_coherent(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& H,
                        const SpaceTimeCode& code, double rho);

/// argmax_k |Y^* Phi_k|_F, ties to the smallest index.
std::size_t ml_noncoherent(const Eigen::MatrixXcd& Y, const SpaceTimeCode& code);

struct SimConfig {
    int n_r = 1;
    std::vector<double> snr_grid_db;
    std::uint64_t trials_per_point = 0;
    std::uint64_t master_seed = 0;
    CodeMode mode = CodeMode::noncoherent;
    int threads = 0; // 0 = hardware concurrency
};

struct SnrPointStats {
    double snr_db = 0;
    std::uint64_t trials = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bit_errors = 0;
    double ser = 0;
    double ber = 0;
    double ber_lo95 = 0;
    double ber_hi95 = 0;
};

struct BerCurve {
    std::vector<SnrPointStats> points;
    int bits_per_symbol = 0;
    std::string rng_id = kRngId;
};

/// Monte Carlo bit/symbol error rates. Each trial draws one uniform codeword
/// index, one channel realization, then decodes with the configured mode's
/// ML rule. Bit errors are counted over ceil(log2 |C|)-bit natural binary
/// labels. Deterministic in (config, code); independent of thread count.
BerCurve run_ber(const SpaceTimeCode& code, const SimConfig& config);

/// Wilson 95% score interval for x successes in n trials.
std::pair<double, double> wilson_interval(std::uint64_t x, std::uint64_t n);

/// CSV with columns: snr_db, trials, symbol_errors, bit_errors, ser, ber,
/// ber_lo95, ber_hi95 (header row included).
void write_csv(const BerCurve& curve, std::ostream& os);

int bits_per_symbol(std::size_t cardinality);

} // namespace stc
