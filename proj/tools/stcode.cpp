#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "stc/diversity.hpp"
#include "stc/presets.hpp"
#include "stc/sim.hpp"

namespace {

std::vector<double> parse_snr_grid(const std::string& arg) {
    std::vector<double> grid;
    if (arg.find(':') != std::string::npos) {
        double a, b, step;
        char c1, c2;
        std::istringstream is(arg);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw stc::IoError("bad SNR range '" + arg + "', expected a:b:step");
        for (double v = a; v <= b + 1e-9; v += step) grid.push_back(v);
    } else {
        std::istringstream is(arg);
        std::string tok;
        while (std::getline(is, tok, ',')) grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw stc::IoError("empty SNR grid");
    return grid;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw stc::IoError("cannot open spec file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw stc::IoError("spec file missing key '" + key + "'");
    return it->second;
}

stc::SpaceTimeCode build_from_spec_file(const std::string& path) {
    const auto kv = parse_kv_file(path);
    const std::string kind = require(kv, "kind");
    auto get_or = [&](const std::string& key, const std::string& dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    };

    if (kind == "noncoherent" || kind == "composed") {
        stc::NoncoherentBuildParams p;
        p.values = parse_doubles(require(kv, "values"));
        p.multiplicities = stc::MultisetSpec(parse_ints(require(kv, "multiplicities")));
        p.n_perms = std::stoull(require(kv, "n_perms"));
        p.alpha = std::stod(get_or("alpha", std::to_string(stc::kAlphaNoncoherent)));
        p.n_t = std::stoi(require(kv, "nt"));
        p.T = std::stoi(require(kv, "T"));
        p.scale = std::stod(get_or("scale", "1"));
        p.selection_start = std::stoull(get_or("selection_start", "0"));
        stc::SpaceTimeCode code = stc::build_noncoherent_code(p);
        if (kind == "composed") {
            const std::string inner = require(kv, "inner");
            if (inner != "bpsk" && inner != "qpsk")
                throw stc::IoError("spec file: inner must be bpsk or qpsk");
            code = stc::compose(code, stc::alamouti_code(inner == "bpsk"
                                                             ? stc::Constellation::bpsk
                                                             : stc::Constellation::qpsk));
        }
        return code;
    }
    if (kind == "coherent-sphere") {
        stc::CoherentSphereBuildParams p;
        p.values = parse_doubles(require(kv, "values"));
        p.multiplicities = stc::MultisetSpec(parse_ints(require(kv, "multiplicities")));
        p.n_perms = std::stoull(require(kv, "n_perms"));
        p.alpha = std::stod(get_or("alpha", std::to_string(stc::kAlphaCoherent)));
        p.n_t = std::stoi(require(kv, "nt"));
        p.T = std::stoi(require(kv, "T"));
        p.scale = std::stod(get_or("scale", "1"));
        p.selection_start = std::stoull(get_or("selection_start", "0"));
        return stc::build_coherent_from_sphere(p);
    }
    throw stc::IoError("spec file: unknown kind '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time block codes from spherical permutation codes"};
    app.require_subcommand(1);

    // --- build ---
    std::string preset, spec_file, out_path;
    auto* build = app.add_subcommand("build", "construct a codebook and write it to a file");
    auto* preset_opt = build->add_option("--preset", preset, "one of: nc-T4 nc-T8 nc-T12 "
                                         "coh-T4 coh-T8 coh-T16 alamouti-bpsk alamouti-qpsk");
    auto* spec_opt = build->add_option("--spec", spec_file, "key = value build description");
    build->add_option("--out", out_path, "output codebook path")->required();
    preset_opt->excludes(spec_opt);

    // --- evaluate ---
    std::string eval_code;
    double eval_snr_db = 10.0;
    auto* evaluate = app.add_subcommand("evaluate", "print diversity figures of a codebook");
    evaluate->add_option("--code", eval_code, "codebook path")->required();
    evaluate->add_option("--snr-db", eval_snr_db, "SNR in dB for the diversity functional")
        ->required();

    // --- simulate ---
    std::string sim_code, sim_mode, sim_snr, sim_out;
    std::uint64_t sim_trials = 10000, sim_seed = 0;
    int sim_nr = 1, sim_threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo bit error rates");
    simulate->add_option("--code", sim_code, "codebook path")->required();
    simulate->add_option("--mode", sim_mode, "coherent | noncoherent")->required();
    simulate->add_option("--snr-db", sim_snr, "a:b:step or comma list")->required();
    simulate->add_option("--trials", sim_trials, "trials per SNR point")->required();
    simulate->add_option("--seed", sim_seed, "master seed")->required();
    simulate->add_option("--nr", sim_nr, "receive antennas");
    simulate->add_option("--threads", sim_threads, "worker threads (0 = auto)");
    simulate->add_option("--out", sim_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            if (preset.empty() == spec_file.empty())
                throw stc::Error("build: give exactly one of --preset or --spec");
            const stc::SpaceTimeCode code =
                preset.empty() ? build_from_spec_file(spec_file) : stc::build_preset(preset);
            stc::save_code(code, out_path);
            std::printf("wrote %s: mode=%s T=%d nt=%d cardinality=%zu rate=%.6f\n",
                        out_path.c_str(), stc::to_string(code.mode), code.T, code.n_t,
                        code.size(), code.rate);
        } else if (*evaluate) {
            const stc::SpaceTimeCode code = stc::load_code(eval_code);
            const double rho = std::pow(10.0, eval_snr_db / 10.0);
            double eff = stc::effective_snr_coherent(rho, code.T, code.n_t);
            if (code.mode == stc::CodeMode::noncoherent)
                eff = stc::effective_snr_noncoherent(eff);
            const stc::CodeReport rep = stc::code_report(code, eff);
            std::printf("cardinality = %zu\n", code.size());
            std::printf("rate = %.6f\n", code.rate);
            std::printf("mode = %s\n", stc::to_string(code.mode));
            std::printf("effective_snr = %.6g\n", eff);
            std::printf("min_diversity_sum = %.12g (pair %zu,%zu)\n", rep.min_diversity_sum,
                        rep.argmin_sum.first, rep.argmin_sum.second);
            std::printf("min_diversity_product = %.12g (pair %zu,%zu)\n",
                        rep.min_diversity_product, rep.argmin_product.first,
                        rep.argmin_product.second);
            std::printf("min_diversity = %.12g (pair %zu,%zu)\n", rep.min_diversity,
                        rep.argmin_diversity.first, rep.argmin_diversity.second);
            std::printf("full_diversity = %s\n", rep.full_diversity ? "true" : "false");
        } else if (*simulate) {
            const stc::SpaceTimeCode code = stc::load_code(sim_code);
            stc::SimConfig cfg;
            cfg.mode = stc::code_mode_from_string(sim_mode);
            cfg.snr_grid_db = parse_snr_grid(sim_snr);
            cfg.trials_per_point = sim_trials;
            cfg.master_seed = sim_seed;
            cfg.n_r = sim_nr;
            cfg.threads = sim_threads;
            const stc::BerCurve curve = stc::run_ber(code, cfg);
            std::ofstream os(sim_out);
            if (!os) throw stc::IoError("cannot open output CSV '" + sim_out + "'");
            stc::write_csv(curve, os);
            std::printf("wrote %s: %zu SNR points, %llu trials each, %d bits/symbol, rng=%s\n",
                        sim_out.c_str(), curve.points.size(),
                        static_cast<unsigned long long>(sim_trials), curve.bits_per_symbol,
                        curve.rng_id.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
