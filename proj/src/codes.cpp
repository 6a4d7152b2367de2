#include "stc/codes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "stc/manifold.hpp"
#include "stc/spherical.hpp"

namespace stc {

const char* to_string(CodeMode mode) {
    return mode == CodeMode::coherent ? "coherent" : "noncoherent";
}

CodeMode code_mode_from_string(const std::string& s) {
    if (s == "coherent") return CodeMode::coherent;
    if (s == "noncoherent") return CodeMode::noncoherent;
    throw IoError("unknown code mode '" + s + "'");
}

double rate(const SpaceTimeCode& code) {
    if (code.size() < 1) throw Error("rate: empty code");
    return std::log2(static_cast<double>(code.size())) / static_cast<double>(code.T);
}

namespace {

double pair_metric(const SpaceTimeCode& code, std::size_t i, std::size_t j) {
    if (code.mode == CodeMode::coherent) return (code.codewords[i] - code.codewords[j]).norm();
    const double nt = static_cast<double>(code.n_t);
    const double overlap = (code.codewords[i].adjoint() * code.codewords[j]).squaredNorm();
    return std::sqrt(std::max(0.0, nt - overlap));
}

} // namespace

void SpaceTimeCode::validate(int threads) const {
    for (const auto& cw : codewords) {
        if (cw.rows() != T || cw.cols() != n_t)
            throw InvariantViolation("codeword shape differs from (T, n_t)");
        if ((cw.adjoint() * cw - Eigen::MatrixXcd::Identity(n_t, n_t)).norm() > 1e-10)
            throw InvariantViolation("codeword columns not orthonormal");
    }
    const std::size_t n = size();
    if (n < 2) return;

    unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    if (n < 256) nthreads = 1;
    std::vector<double> mins(nthreads, std::numeric_limits<double>::infinity());
    auto scan = [&](unsigned t) {
        double local = std::numeric_limits<double>::infinity();
        for (std::size_t i = t; i < n; i += nthreads)
            for (std::size_t j = i + 1; j < n; ++j)
                local = std::min(local, pair_metric(*this, i, j));
        mins[t] = local;
    };
    if (nthreads == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(scan, t);
        for (auto& th : pool) th.join();
    }
    const double dmin = *std::min_element(mins.begin(), mins.end());
    if (!(dmin > 1e-8))
        throw InvariantViolation("codewords not pairwise distinct (min distance " +
                                 std::to_string(dmin) + ")");
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) s += ',';
        s += buf;
    }
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SphericalCode spherical_stage(const std::vector<double>& values, const MultisetSpec& spec,
                              std::uint64_t n_perms, std::uint64_t start, double alpha,
                              std::uint64_t guard) {
    const InitialVector x = build_initial_vector(values, spec);
    const auto gray = gen_gray_order(spec, guard);
    if (n_perms > gray.size())
        throw InvalidRateError("pipeline: N=" + std::to_string(n_perms) + " exceeds M=" +
                               std::to_string(gray.size()) +
                               "; pick a larger initial vector");
    const auto selected = select_evenly(gray, n_perms, start);
    SphericalCode sc = spherical_code_from_perms(x, selected);
    {
        const std::uint64_t stride = gray.size() / n_perms;
        sc.selected_indices.resize(n_perms);
        for (std::uint64_t i = 0; i < n_perms; ++i) sc.selected_indices[i] = start + i * stride;
    }
    if (alpha != 0.0) sc = apply_rotation(sc, rotation_matrix(alpha, x.dim()));
    return sc;
}

void stamp_provenance(SpaceTimeCode& code, const char* pipeline,
                      const std::vector<double>& values, const MultisetSpec& spec,
                      std::uint64_t n_perms, std::uint64_t start, double alpha, double scale) {
    code.provenance = {
        {"pipeline", pipeline},
        {"initial_values", join_doubles(values)},
        {"multiplicities", join_ints(spec.multiplicities)},
        {"n_perms", std::to_string(n_perms)},
        {"selection_start", std::to_string(start)},
        {"alpha", fmt_double(alpha)},
        {"scale", fmt_double(scale)},
    };
}

} // namespace

SpaceTimeCode build_noncoherent_code(const NoncoherentBuildParams& p) {
    const ManifoldDims dims = ManifoldDims::grassmann(p.n_t, p.T);
    if (p.multiplicities.total() != dims.D + 1)
        throw DimensionError("build_noncoherent_code: initial vector dimension " +
                             std::to_string(p.multiplicities.total()) + " != D+1 = " +
                             std::to_string(dims.D + 1));
    if (p.n_perms < 2)
        throw InvalidRateError("build_noncoherent_code: degenerate code, need N >= 2");

    SphericalCode sc = spherical_stage(p.values, p.multiplicities, p.n_perms,
                                       p.selection_start, p.alpha, p.gray_guard);
    sc = hemisphere_filter(sc);

    SpaceTimeCode code;
    code.mode = CodeMode::noncoherent;
    code.T = p.T;
    code.n_t = p.n_t;
    code.codewords.reserve(sc.size());
    for (const auto& pt : sc.points)
        code.codewords.push_back(sphere_to_grassmann(pt, dims, p.scale).phi);
    if (code.size() < 2)
        throw InvalidRateError("build_noncoherent_code: fewer than 2 codewords survived");
    code.rate = rate(code);
    stamp_provenance(code, "noncoherent", p.values, p.multiplicities, p.n_perms,
                     p.selection_start, p.alpha, p.scale);
    code.validate();
    return code;
}

SpaceTimeCode build_coherent_from_sphere(const CoherentSphereBuildParams& p) {
    const ManifoldDims dims = ManifoldDims::stiefel(p.n_t, p.T);
    if (p.multiplicities.total() != dims.D + 1)
        throw DimensionError("build_coherent_from_sphere: initial vector dimension " +
                             std::to_string(p.multiplicities.total()) + " != D+1 = " +
                             std::to_string(dims.D + 1));
    if (p.n_perms < 2)
        throw InvalidRateError("build_coherent_from_sphere: degenerate code, need N >= 2");

    const SphericalCode sc = spherical_stage(p.values, p.multiplicities, p.n_perms,
                                             p.selection_start, p.alpha, p.gray_guard);

    SpaceTimeCode code;
    code.mode = CodeMode::coherent;
    code.T = p.T;
    code.n_t = p.n_t;
    code.codewords.reserve(sc.size());
    for (const auto& pt : sc.points)
        code.codewords.push_back(sphere_to_stiefel(pt, dims, p.scale).phi);
    code.rate = rate(code);
    stamp_provenance(code, "coherent-sphere", p.values, p.multiplicities, p.n_perms,
                     p.selection_start, p.alpha, p.scale);
    code.validate();
    return code;
}

InnerCode alamouti_code(Constellation c) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<std::complex<double>> sym;
    if (c == Constellation::bpsk)
        sym = {{1, 0}, {-1, 0}};
    else
        sym = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    InnerCode inner;
    inner.label = c == Constellation::bpsk ? "alamouti-bpsk" : "alamouti-qpsk";
    for (const auto& s1 : sym)
        for (const auto& s2 : sym) {
            Eigen::MatrixXcd u(2, 2);
            u << s1, s2, -std::conj(s2), std::conj(s1);
            u *= inv_sqrt2;
            if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(2, 2)).norm() > 1e-12)
                throw InvariantViolation("alamouti_code: matrix not unitary");
            inner.matrices.push_back(std::move(u));
        }
    return inner;
}

SpaceTimeCode compose(const SpaceTimeCode& noncoherent, const InnerCode& inner) {
    if (noncoherent.mode != CodeMode::noncoherent)
        throw Error("compose: outer code must be non-coherent");
    if (inner.matrices.empty()) throw Error("compose: empty inner code");
    for (const auto& u : inner.matrices)
        if (u.rows() != noncoherent.n_t || u.cols() != noncoherent.n_t)
            throw DimensionError("compose: inner matrices must be n_t x n_t");

    SpaceTimeCode out;
    out.mode = CodeMode::coherent;
    out.T = noncoherent.T;
    out.n_t = noncoherent.n_t;
    out.codewords.reserve(noncoherent.size() * inner.matrices.size());
    for (const auto& phi : noncoherent.codewords)
        for (const auto& u : inner.matrices) out.codewords.push_back(phi * u);
    out.rate = rate(out);
    out.provenance = noncoherent.provenance;
    out.provenance.emplace_back("composed_with", inner.label);
    try {
        out.validate();
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(std::string("compose: degenerate composition: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Codebook file format: a header of `key = value` lines (mode, T, nt,
// cardinality, rate, prov.*) followed by one block per codeword, T rows of
// n_t entries "re,im". 17 significant digits round-trip doubles exactly.
// ---------------------------------------------------------------------------

void save_code(const SpaceTimeCode& code, std::ostream& os) {
    os << "stcode-codebook v1\n";
    os << "mode = " << to_string(code.mode) << "\n";
    os << "T = " << code.T << "\n";
    os << "nt = " << code.n_t << "\n";
    os << "cardinality = " << code.size() << "\n";
    os << "rate = " << fmt_double(code.rate) << "\n";
    for (const auto& [k, v] : code.provenance) os << "prov." << k << " = " << v << "\n";
    char buf[96];
    for (std::size_t idx = 0; idx < code.size(); ++idx) {
        os << "codeword " << idx << "\n";
        const auto& cw = code.codewords[idx];
        for (int r = 0; r < code.T; ++r) {
            for (int c = 0; c < code.n_t; ++c) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g", cw(r, c).real(), cw(r, c).imag());
                os << (c ? " " : "") << buf;
            }
            os << "\n";
        }
    }
}

void save_code(const SpaceTimeCode& code, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("save_code: cannot open '" + path + "'");
    save_code(code, os);
    if (!os) throw IoError("save_code: write failed for '" + path + "'");
}

namespace {

std::string next_line(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("codebook: unexpected end of file");
    return line;
}

std::pair<std::string, std::string> split_kv(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("codebook: expected 'key = value': " + line);
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

} // namespace

SpaceTimeCode load_code(std::istream& is) {
    if (next_line(is) != "stcode-codebook v1")
        throw IoError("codebook: bad magic line");
    SpaceTimeCode code;
    std::size_t cardinality = 0;
    bool have_mode = false, have_t = false, have_nt = false, have_card = false;
    std::string line;
    while (true) {
        line = next_line(is);
        if (line.rfind("codeword", 0) == 0) break;
        auto [key, value] = split_kv(line);
        if (key == "mode") { code.mode = code_mode_from_string(value); have_mode = true; }
        else if (key == "T") { code.T = std::stoi(value); have_t = true; }
        else if (key == "nt") { code.n_t = std::stoi(value); have_nt = true; }
        else if (key == "cardinality") { cardinality = std::stoul(value); have_card = true; }
        else if (key == "rate") { code.rate = std::stod(value); }
        else if (key.rfind("prov.", 0) == 0) { code.provenance.emplace_back(key.substr(5), value); }
        else throw IoError("codebook: unknown header key '" + key + "'");
    }
    if (!have_mode || !have_t || !have_nt || !have_card)
        throw IoError("codebook: incomplete header");
    if (code.T < 1 || code.n_t < 1 || cardinality < 1)
        throw IoError("codebook: invalid dimensions");

    code.codewords.reserve(cardinality);
    for (std::size_t idx = 0; idx < cardinality; ++idx) {
        if (idx > 0) line = next_line(is);
        if (line != "codeword " + std::to_string(idx))
            throw IoError("codebook: expected 'codeword " + std::to_string(idx) + "'");
        Eigen::MatrixXcd cw(code.T, code.n_t);
        for (int r = 0; r < code.T; ++r) {
            std::istringstream row(next_line(is));
            for (int c = 0; c < code.n_t; ++c) {
                std::string tok;
                if (!(row >> tok)) throw IoError("codebook: truncated codeword row");
                const auto comma = tok.find(',');
                if (comma == std::string::npos)
                    throw IoError("codebook: malformed entry '" + tok + "'");
                try {
                    cw(r, c) = {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
                } catch (const std::exception&) {
                    throw IoError("codebook: malformed number in '" + tok + "'");
                }
            }
        }
        code.codewords.push_back(std::move(cw));
    }
    const double stored_rate = code.rate;
    code.rate = rate(code);
    if (std::abs(stored_rate - code.rate) > 1e-9)
        throw IoError("codebook: stored rate inconsistent with cardinality");
    code.validate();
    return code;
}

SpaceTimeCode load_code(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("load_code: cannot open '" + path + "'");
    return load_code(is);
}

} // namespace stc
