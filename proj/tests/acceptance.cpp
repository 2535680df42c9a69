// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "ofdmim/ofdmim.hpp"

using namespace ofdmim;

namespace {

int g_failed = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    g_failed += !ok;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const std::vector<double> kLevels = {std::sqrt(2.0), std::sqrt(10.0), std::sqrt(18.0)};

void table_regression() {
    const double table[5][3] = {
        {0.1, 0.435, 0.504}, {0.2, 0.480, 0.538}, {0.3, 0.525, 0.571}, {0.4, 0.569, 0.604}, {0.5, 0.614, 0.638}};
    double worst = 0.0;
    for (const auto& row : table) {
        const auto r = solve_constraint_levels(row[0], kLevels);
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(r[j] - row[j]));
    }
    report(1, "radius table regression", worst <= 1e-3, fmt("max |diff| = %.2e over 15 entries (tol 1e-3)", worst));
}

void metric_invariance() {
    double worst = 0.0;
    for (double R0 : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        const auto r = solve_constraint_levels(R0, kLevels);
        const double m0 = robustness_metric(kLevels[0], r[0]);
        for (int j = 1; j < 3; ++j) worst = std::max(worst, std::abs(robustness_metric(kLevels[j], r[j]) - m0));
    }
    report(2, "robustness metric invariance", worst <= 1e-9, fmt("max spread = %.2e (tol 1e-9)", worst));
}

void awgn_solver() {
    const auto r = solve_awgn_constraint_levels(0.2, kLevels);
    const double e1 = std::sqrt(10.0) - std::sqrt(2.0) + 0.2, e2 = std::sqrt(18.0) - std::sqrt(2.0) + 0.2;
    const bool ok = std::abs(r[0] - 0.2) < 1e-12 && std::abs(r[1] - e1) < 1e-12 && std::abs(r[2] - e2) < 1e-12 &&
                    std::abs(r[1] - 1.9) <= 0.06 && std::abs(r[2] - 3.0) <= 0.06;
    report(3, "equal-margin radii", ok, fmt("radii %.4f, %.4f, %.4f vs quoted 0.2, 1.9, 3.0 (tol 0.06)", r[0], r[1], r[2]));
}

void noiseless_round_trip() {
    const auto sys = SystemConfig::default_setup();
    const Codebook cb(sys);
    const CVec H(sys.N, cplx{1.0, 0.0});
    const auto Hs = deinterleave(H, sys);
    const std::uint64_t symbols = 10000;
    std::vector<std::uint64_t> errors(symbols, 0);
    parallel_for(symbols, workers(), [&](int, std::uint64_t t) {
        Rng rng = derive_trial_rng(2024, "round-trip", t);
        const TxSymbol tx = transmit_symbol(rng, cb, ConstraintScheme::none());
        // through the time domain and back
        const CVec Y = remove_padding(dft(idft(tx.X_tx, sys.oversample)), sys.N);
        const auto Ys = deinterleave(apply_channel(Y, H, 0.0, CVec(sys.N)), sys);
        for (int b = 0; b < sys.g; ++b)
            errors[t] += std::popcount(ml_detect_subblock(Ys[b], Hs[b], cb).bits ^ tx.bits[b]);
    });
    std::uint64_t total = 0;
    for (auto e : errors) total += e;
    report(4, "noiseless round trip", total == 0,
           fmt("%llu bit errors over %llu symbols", static_cast<unsigned long long>(total),
               static_cast<unsigned long long>(symbols)));
}

void pep_oracle() {
    const double s2 = std::sqrt(2.0);
    const std::uint64_t trials = 20000000;
    for (double snr : {25.0, 30.0}) {
        const double n0 = calibrate_noise(snr, 2.0);
        for (double R : {0.0, 0.2, 0.5}) {
            const PepCase c{s2, s2, R, n0};
            const auto mc = mc_pep_oracle(c, trials, 500 + static_cast<std::uint64_t>(snr * 10 + R * 100), workers());
            const double closed = dither_pep(c);
            const double ratio = closed / mc.probability();
            report(5, fmt("closed-form PEP vs oracle, %g dB, R=%.1f", snr, R), ratio <= 2.0 && ratio >= 0.5,
                   fmt("closed %.4e, oracle %.4e (%llu events), ratio %.3f (tol factor 2)", closed, mc.probability(),
                       static_cast<unsigned long long>(mc.events), ratio));

            const auto avg = average_conditional_pep_exact(c, trials, 900 + static_cast<std::uint64_t>(snr * 10 + R * 100),
                                                           workers());
            const double tol = 3.0 * std::sqrt(mc.std_error() * mc.std_error() + avg.std_error * avg.std_error);
            const double diff = std::abs(mc.probability() - avg.mean);
            report(5, fmt("averaged conditional PEP vs oracle, %g dB, R=%.1f", snr, R), diff <= tol,
                   fmt("avg %.4e, oracle %.4e, |diff| %.2e (tol 3 SE = %.2e)", avg.mean, mc.probability(), diff, tol));
        }
    }
}

ExperimentConfig ber_config(const ConstraintScheme& scheme, std::vector<double> grid) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.snr_grid_db = std::move(grid);
    cfg.trials_per_point = 200000;
    cfg.master_seed = 20240601;
    cfg.workers = workers();
    return cfg;
}

void ber_claims() {
    const auto proposed = ConstraintScheme::proposed_from_r0(0.5, kLevels);
    const std::vector<double> grid = {15, 17.5, 20, 22.5, 25, 27.5, 30, 32.5, 35};

    const auto eq = run_ber_sweep(ber_config(ConstraintScheme::equivalent(0.5), grid));
    const auto pr = run_ber_sweep(ber_config(proposed, grid));
    const auto s_eq = snr_at_ber(eq, 1e-3), s_pr = snr_at_ber(pr, 1e-3);
    if (s_eq && s_pr) {
        const double gap = std::abs(*s_pr - *s_eq);
        report(6, "BER gap proposed vs equivalent at 1e-3", gap <= 0.5,
               fmt("equivalent %.2f dB, proposed %.2f dB, gap %.2f dB (tol 0.5)", *s_eq, *s_pr, gap));
    } else {
        report(6, "BER gap proposed vs equivalent at 1e-3", false, "a curve never crosses 1e-3 on the grid");
    }

    const auto aw = run_ber_sweep(ber_config(ConstraintScheme::awgn_variable({0.2, 1.9, 3.0}), {30, 35}));
    const double pr35 = pr.back().ber();
    const double floor_ratio = aw[1].ber() / std::max(pr35, 1e-300);
    const double drop = aw[0].ber() / aw[1].ber();
    report(7, "error floor of the equal-margin radii", floor_ratio >= 5.0 && drop < 2.0,
           fmt("BER@35 %.3e vs proposed %.3e (x%.1f, need >= 5); BER@30/BER@35 = %.2f (need < 2)", aw[1].ber(), pr35,
               floor_ratio, drop));
}

void ccdf_ordering() {
    auto cfg = ber_config(ConstraintScheme::none(), {});
    cfg.ccdf_symbols = 100000;
    cfg.master_seed = 7;
    const auto none = run_papr_ccdf(cfg);
    cfg.scheme = ConstraintScheme::equivalent(0.5);
    const auto eq = run_papr_ccdf(cfg);
    cfg.scheme = ConstraintScheme::proposed_from_r0(0.5, kLevels);
    const auto pr = run_papr_ccdf(cfg);
    const auto a = papr_at_ccdf(none, 1e-2), b = papr_at_ccdf(eq, 1e-2), c = papr_at_ccdf(pr, 1e-2);
    const bool ok = a && b && c && *c < *b && *b <= *a;
    report(8, "PAPR ordering at CCDF 1e-2", ok,
           fmt("original %.3f dB, equivalent %.3f dB, proposed %.3f dB", a.value_or(NAN), b.value_or(NAN),
               c.value_or(NAN)));
}

void diversity_slope() {
    const auto recs = run_ber_sweep(ber_config(ConstraintScheme::none(), {20, 30}));
    const double si = std::log10(recs[0].index_error_rate() / recs[1].index_error_rate());
    const double ss = std::log10(recs[0].symbol_error_rate() / recs[1].symbol_error_rate());
    report(9, "index vs symbol error slope, 20-30 dB", si >= 1.5 * ss,
           fmt("index %.2f decades/10 dB, symbol %.2f (ratio %.2f, need >= 1.5)", si, ss, si / ss));
}

void determinism() {
    ExperimentConfig cfg;
    cfg.scheme = ConstraintScheme::proposed_from_r0(0.5, kLevels);
    cfg.snr_grid_db = {10, 20};
    cfg.trials_per_point = 2000;
    cfg.ccdf_symbols = 2000;
    cfg.master_seed = 99;
    std::string ber[2], ccdf[2];
    const int counts[2] = {1, 4};
    for (int i = 0; i < 2; ++i) {
        cfg.workers = counts[i];
        ber[i] = format_ber_csv(run_ber_sweep(cfg));
        ccdf[i] = format_ccdf_csv(run_papr_ccdf(cfg));
    }
    report(10, "CSV identical across worker counts", ber[0] == ber[1] && ccdf[0] == ccdf[1],
           fmt("BER %s, CCDF %s (workers 1 vs 4)", ber[0] == ber[1] ? "same" : "differ",
               ccdf[0] == ccdf[1] ? "same" : "differ"));
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    table_regression();
    metric_invariance();
    awgn_solver();
    noiseless_round_trip();
    pep_oracle();
    ber_claims();
    ccdf_ordering();
    diversity_slope();
    determinism();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d check(s) failed, %.0f s\n", g_failed, secs);
    return g_failed ? 1 : 0;
}
