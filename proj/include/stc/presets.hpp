#pragma once

#include <string>
#include <vector>

#include "stc/codes.hpp"

namespace stc {

/// Default rotation angles: 7pi/4 for non-coherent pipelines (and for
/// non-coherent codes reused in compositions), pi for coherent-sphere builds.
inline constexpr double kAlphaNoncoherent = 5.497787143782138; // 7*pi/4
inline constexpr double kAlphaCoherent = 3.141592653589793;

/// Named constructions exposed by the CLI. The nc-* presets are the
/// block-length series (T = 4, 8, 12); the coh-* presets compose a
/// non-coherent outer code with a QPSK Alamouti inner code (T = 4, 8, 16).
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
SpaceTimeCode build_preset(const std::string& name);

/// 8x2 rate-1/2 construction used in rotation studies: x = (-1,0^23,1)/sqrt2,
/// N = 16, Grassmann target, configurable rotation angle.
SpaceTimeCode build_t8_half_rate(double alpha);

/// 16-codeword non-coherent code (same initial vector, N = 23) sized for
/// exhaustive decoder cross-checks.
SpaceTimeCode build_oracle16();

} // namespace stc
