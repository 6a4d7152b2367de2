#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stc/combinatorics.hpp"
#include "stc/errors.hpp"

namespace stc {

enum class CodeMode { coherent, noncoherent };

const char* to_string(CodeMode mode);
CodeMode code_mode_from_string(const std::string& s);

/// Ordered codebook of T x n_t matrices with orthonormal columns.
/// Codeword order is the pipeline order (selection order, times inner-code
/// enumeration order for composed codes), so index <-> bit labels are
/// reproducible. Rate = log2(cardinality)/T.
struct SpaceTimeCode {
    std::vector<Eigen::MatrixXcd> codewords;
    CodeMode mode = CodeMode::noncoherent;
    int T = 0;
    int n_t = 0;
    double rate = 0.0;
    std::vector<std::pair<std::string, std::string>> provenance;

    std::size_t size() const { return codewords.size(); }
    /// Orthonormal columns (1e-10) and pairwise distinctness (mode metric > 1e-8).
    void validate(int threads = 0) const;
};

double rate(const SpaceTimeCode& code);

struct NoncoherentBuildParams {
    std::vector<double> values;
    MultisetSpec multiplicities;
    std::uint64_t n_perms = 0;   // N, selected from the Gray list
    double alpha = 0.0;
    int n_t = 0;
    int T = 0;
    double scale = 1.0;
    std::uint64_t selection_start = 0;
    std::uint64_t gray_guard = kDefaultGrayGuard;
};

/// Full non-coherent pipeline: Gray list -> even selection -> spherical code
/// -> rotation -> hemisphere filter -> Grassmann map.
SpaceTimeCode build_noncoherent_code(const NoncoherentBuildParams& params);

struct CoherentSphereBuildParams {
    std::vector<double> values;
    MultisetSpec multiplicities;
    std::uint64_t n_perms = 0;
    double alpha = 3.14159265358979323846; // pi, the coherent default
    int n_t = 0;
    int T = 0;
    double scale = 1.0;
    std::uint64_t selection_start = 0;
    std::uint64_t gray_guard = kDefaultGrayGuard;
};

/// Same pipeline without the hemisphere filter, mapped onto the Stiefel
/// manifold.
SpaceTimeCode build_coherent_from_sphere(const CoherentSphereBuildParams& params);

enum class Constellation { bpsk, qpsk };

/// Small n_t x n_t unitary code used as the inner factor of a composition.
struct InnerCode {
    std::vector<Eigen::MatrixXcd> matrices;
    std::string label;
};

/// All matrices (1/sqrt2) [[s1, s2], [-s2^*, s1^*]] over the unit-modulus
/// constellation: 4 for BPSK, 16 for QPSK.
InnerCode alamouti_code(Constellation c);

/// Coherent code {Phi u}: outer index major, inner index minor.
/// Throws InvariantViolation if two products coincide.
SpaceTimeCode compose(const SpaceTimeCode& noncoherent, const InnerCode& inner);

void save_code(const SpaceTimeCode& code, const std::string& path);
void save_code(const SpaceTimeCode& code, std::ostream& os);
SpaceTimeCode load_code(const std::string& path);
SpaceTimeCode load_code(std::istream& is);

} // namespace stc
