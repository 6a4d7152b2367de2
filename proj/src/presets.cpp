#include "stc/presets.hpp"

#include <algorithm>

namespace stc {

namespace {

NoncoherentBuildParams nc_params(std::vector<double> values, std::vector<int> mult,
                                 std::uint64_t n, int T, std::uint64_t start = 0) {
    NoncoherentBuildParams p;
    p.values = std::move(values);
    p.multiplicities = MultisetSpec(std::move(mult));
    p.n_perms = n;
    p.alpha = kAlphaNoncoherent;
    p.n_t = 2;
    p.T = T;
    p.selection_start = start;
    return p;
}

SpaceTimeCode alamouti_as_code(Constellation c) {
    const InnerCode inner = alamouti_code(c);
    SpaceTimeCode code;
    code.mode = CodeMode::coherent;
    code.T = 2;
    code.n_t = 2;
    code.codewords = inner.matrices;
    code.rate = rate(code);
    code.provenance = {{"pipeline", inner.label}};
    code.validate();
    return code;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"nc-T4", "nc-T8", "nc-T12", "coh-T4", "coh-T8", "coh-T16",
            "alamouti-bpsk", "alamouti-qpsk"};
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

SpaceTimeCode build_preset(const std::string& name) {
    if (name == "nc-T4") return build_noncoherent_code(nc_params({0, 1}, {7, 2}, 32, 4));
    if (name == "nc-T8") return build_noncoherent_code(nc_params({-1, 0, 1}, {1, 23, 1}, 512, 8));
    if (name == "nc-T12") return build_noncoherent_code(nc_params({0, 1}, {38, 3}, 8192, 12));

    const InnerCode qpsk = alamouti_code(Constellation::qpsk);
    if (name == "coh-T4")
        return compose(build_noncoherent_code(nc_params({0, 1}, {8, 1}, 8, 4)), qpsk);
    // Outer vector and Gray-list start chosen to give the 21-word outer code
    // with the largest worst-pair diversity among the stride selections.
    if (name == "coh-T8")
        return compose(build_noncoherent_code(nc_params({1, 0, -1}, {2, 22, 1}, 32, 8, 9)), qpsk);
    if (name == "coh-T16")
        return compose(build_noncoherent_code(nc_params({0, 1}, {55, 2}, 512, 16)), qpsk);

    if (name == "alamouti-bpsk") return alamouti_as_code(Constellation::bpsk);
    if (name == "alamouti-qpsk") return alamouti_as_code(Constellation::qpsk);
    throw Error("unknown preset '" + name + "'");
}

SpaceTimeCode build_t8_half_rate(double alpha) {
    NoncoherentBuildParams p = nc_params({-1, 0, 1}, {1, 23, 1}, 16, 8);
    p.alpha = alpha;
    return build_noncoherent_code(p);
}

SpaceTimeCode build_oracle16() {
    return build_noncoherent_code(nc_params({-1, 0, 1}, {1, 23, 1}, 23, 8));
}

} // namespace stc
