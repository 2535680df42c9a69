// Command-line front end: BER and PAPR simulation, constraint radii, and PEP evaluation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ofdmim/ofdmim.hpp"

namespace {

using namespace ofdmim;

struct SimFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<double> r, r0;
    std::vector<double> radii;
    std::vector<double> snr;
    std::optional<long long> trials;
    std::optional<long long> symbols;
    std::optional<int> workers;
    std::optional<std::string> detector;
    std::optional<double> clip_ratio;
    std::optional<int> iterations, taps, oversample;
    std::string out;
    std::string meta;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f, bool ber) {
    cmd->add_option("--config", f.config, "JSON experiment config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed")->required();
    cmd->add_option("--scheme", f.scheme, "none | equivalent | awgn_variable | proposed");
    cmd->add_option("--r", f.r, "radius for the equivalent scheme");
    cmd->add_option("--r0", f.r0, "R_0 for the variable schemes (remaining radii solved)");
    cmd->add_option("--radii", f.radii, "explicit per-level radii for the variable schemes")->delimiter(',');
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--clip-ratio", f.clip_ratio, "ICF clipping ratio (linear)");
    cmd->add_option("--iterations", f.iterations, "ICF iterations");
    cmd->add_option("--taps", f.taps, "Rayleigh channel taps");
    cmd->add_option("--oversample", f.oversample, "oversampling factor");
    if (ber) {
        cmd->add_option("--snr", f.snr, "Eb/N0 grid in dB")->delimiter(',');
        cmd->add_option("--trials", f.trials, "OFDM symbols per SNR point");
        cmd->add_option("--detector", f.detector, "ml | power");
        cmd->add_option("--out", f.out, "output CSV")->capture_default_str();
    } else {
        cmd->add_option("--symbols", f.symbols, "number of OFDM symbols");
        cmd->add_option("--out", f.out, "output CSV")->capture_default_str();
    }
    cmd->add_option("--meta", f.meta, "metadata sidecar path (default: <out>.meta.json)");
}

ExperimentConfig resolve(const SimFlags& f) {
    nlohmann::json j = f.config.empty() ? nlohmann::json::object() : read_json_file(f.config);
    if (f.seed) j["seed"] = *f.seed;
    if (f.scheme) {
        j["scheme"] = *f.scheme;
        // scheme parameters from the file belong to the file's scheme
        if (!f.r) j.erase("r");
        if (!f.r0) j.erase("r0");
        if (f.radii.empty()) j.erase("radii");
    }
    if (f.r) j["r"] = *f.r;
    if (f.r0) {
        j["r0"] = *f.r0;
        j.erase("radii");
    }
    if (!f.radii.empty()) {
        j["radii"] = f.radii;
        j.erase("r0");
    }
    if (!f.snr.empty()) j["snr_db"] = f.snr;
    if (f.trials) {
        if (*f.trials < 1) throw Error(ErrorCode::InvalidConfig, "--trials must be >= 1");
        j["trials_per_point"] = *f.trials;
    }
    if (f.symbols) {
        if (*f.symbols < 1000) throw Error(ErrorCode::InvalidConfig, "--symbols must be >= 1000");
        j["ccdf_symbols"] = *f.symbols;
    }
    if (f.workers) j["workers"] = *f.workers;
    if (f.detector) j["detector"] = *f.detector;
    if (f.clip_ratio) j["clip_ratio"] = *f.clip_ratio;
    if (f.iterations) j["icf_iterations"] = *f.iterations;
    if (f.taps) j["taps"] = *f.taps;
    if (f.oversample) j["oversample"] = *f.oversample;
    return experiment_from_json(j);
}

cplx parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    in >> re;
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw Error(ErrorCode::InvalidInput, "complex value must be 're,im'");
    }
    return {re, im};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM-IM dither PAPR reduction toolkit"};
    app.require_subcommand(1);

    SimFlags ber_flags;
    ber_flags.out = "ber.csv";
    auto* ber = app.add_subcommand("simulate-ber", "Monte Carlo BER sweep over a Rayleigh channel");
    add_sim_flags(ber, ber_flags, true);

    SimFlags papr_flags;
    papr_flags.out = "ccdf.csv";
    auto* papr = app.add_subcommand("simulate-papr", "Empirical PAPR CCDF at the oversampled rate");
    add_sim_flags(papr, papr_flags, false);

    std::string solve_scheme = "proposed";
    double solve_r0 = 0.0;
    int solve_m = 16;
    int precision = 3;
    auto* solve = app.add_subcommand("solve-constraint", "Per-amplitude-level dither radii from R_0");
    solve->add_option("--scheme", solve_scheme, "proposed | awgn")->capture_default_str();
    solve->add_option("--r0", solve_r0, "R_0")->required();
    solve->add_option("--M", solve_m, "QAM order")->capture_default_str();
    solve->add_option("--precision", precision, "decimal places")->capture_default_str();

    std::string formula;
    double xu = std::numbers::sqrt2, xv = std::numbers::sqrt2, r = 0.0, n0 = 1.0;
    std::string hu = "1,0", hv = "1,0";
    std::vector<double> eta;
    double amp = std::numbers::sqrt2;
    auto* pep = app.add_subcommand("pep", "Analytic PEP expressions");
    pep->add_option("--formula", formula, "eq20 (exact conditional) | eq25 (approx conditional) | "
                                          "eq26 (unconditional) | eq27 (dither) | metric")
        ->required()
        ->check(CLI::IsMember({"eq20", "eq25", "eq26", "eq27", "metric"}));
    pep->add_option("--xu", xu, "|X_u hat|");
    pep->add_option("--xv", xv, "|X_v|");
    pep->add_option("--r", r, "dither radius parameter R");
    pep->add_option("--n0", n0, "noise power N0");
    pep->add_option("--hu", hu, "H_u as re,im");
    pep->add_option("--hv", hv, "H_v as re,im");
    pep->add_option("--a", amp, "amplitude floor A (metric)");
    pep->add_option("--eta", eta, "per-subcarrier squared distances (eq26)")->delimiter(',');

    double mc_xu = std::numbers::sqrt2, mc_xv = std::numbers::sqrt2, mc_r = 0.0, mc_n0 = 1.0;
    std::uint64_t mc_trials = 1000000, mc_seed = 0;
    int mc_workers = 1;
    auto* pepmc = app.add_subcommand("pep-mc", "Monte Carlo PEP of the fundamental index error");
    pepmc->add_option("--xu", mc_xu, "|X_u hat|");
    pepmc->add_option("--xv", mc_xv, "|X_v|");
    pepmc->add_option("--r", mc_r, "dither radius parameter R");
    pepmc->add_option("--n0", mc_n0, "noise power N0");
    pepmc->add_option("--trials", mc_trials, "trials")->capture_default_str();
    pepmc->add_option("--seed", mc_seed, "seed")->required();
    pepmc->add_option("--workers", mc_workers, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ber) {
            const ExperimentConfig cfg = resolve(ber_flags);
            const auto recs = run_ber_sweep(cfg);
            write_text(ber_flags.out, format_ber_csv(recs));
            const std::string meta = ber_flags.meta.empty() ? ber_flags.out + ".meta.json" : ber_flags.meta;
            write_text(meta, run_metadata(cfg, recs.front().measured_eb).dump(2) + "\n");
            std::cout << format_ber_csv(recs);
        } else if (*papr) {
            const ExperimentConfig cfg = resolve(papr_flags);
            const auto recs = run_papr_ccdf(cfg);
            write_text(papr_flags.out, format_ccdf_csv(recs));
            const std::string meta = papr_flags.meta.empty() ? papr_flags.out + ".meta.json" : papr_flags.meta;
            write_text(meta, run_metadata(cfg, std::nullopt).dump(2) + "\n");
            if (auto p = papr_at_ccdf(recs, 1e-2)) std::printf("PAPR at CCDF 1e-2: %.3f dB\n", *p);
            if (auto p = papr_at_ccdf(recs, 1e-3)) std::printf("PAPR at CCDF 1e-3: %.3f dB\n", *p);
        } else if (*solve) {
            const Constellation c(solve_m);
            std::vector<double> radii;
            if (solve_scheme == "proposed")
                radii = solve_constraint_levels(solve_r0, c.amplitude_levels());
            else if (solve_scheme == "awgn" || solve_scheme == "awgn_variable")
                radii = solve_awgn_constraint_levels(solve_r0, c.amplitude_levels());
            else
                throw Error(ErrorCode::InvalidConfig, "solve-constraint scheme must be proposed or awgn");
            for (std::size_t j = 0; j < radii.size(); ++j)
                std::printf("%s%.*f", j ? ", " : "", precision, radii[j]);
            std::printf("\n");
        } else if (*pep) {
            const PepCase pc{xu, xv, r, n0};
            double value = 0.0;
            if (formula == "eq20") value = conditional_pep_exact(pc, parse_complex(hu), parse_complex(hv));
            else if (formula == "eq25") value = conditional_pep_approx(pc, parse_complex(hu), parse_complex(hv));
            else if (formula == "eq26") value = unconditional_pep(PairwiseDistance::from_eta(eta), n0);
            else if (formula == "eq27") value = dither_pep(pc);
            else value = robustness_metric(amp, r);
            std::printf("%.6e\n", value);
        } else if (*pepmc) {
            const PepCase pc{mc_xu, mc_xv, mc_r, mc_n0};
            const McEstimate est = mc_pep_oracle(pc, mc_trials, mc_seed, mc_workers);
            std::printf("pep=%.6e stderr=%.6e events=%llu trials=%llu\n", est.probability(), est.std_error(),
                        static_cast<unsigned long long>(est.events), static_cast<unsigned long long>(est.trials));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
