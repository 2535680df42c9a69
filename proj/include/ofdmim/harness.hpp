#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ofdmim/channel.hpp"
#include "ofdmim/core.hpp"
#include "ofdmim/detect.hpp"
#include "ofdmim/dither.hpp"
#include "ofdmim/modem.hpp"
#include "ofdmim/parallel.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

inline constexpr const char* kVersion = "1.0.0";

enum class Detector { ML, Power };

struct ExperimentConfig {
    SystemConfig system = SystemConfig::default_setup();
    ConstraintScheme scheme = ConstraintScheme::none();
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::uint64_t trials_per_point = 200000;  // OFDM symbols per SNR point
    std::uint64_t ccdf_symbols = 100000;
    std::uint64_t eb_calibration_symbols = 1000;
    std::uint64_t master_seed = 0;
    int workers = 1;
    Detector detector = Detector::ML;

    void validate_ber() const {
        if (trials_per_point < 1) throw Error(ErrorCode::InvalidConfig, "trials_per_point must be >= 1");
        if (snr_grid_db.empty()) throw Error(ErrorCode::InvalidConfig, "snr grid is empty");
        if (eb_calibration_symbols < 1) throw Error(ErrorCode::InvalidConfig, "eb_calibration_symbols must be >= 1");
    }
    void validate_ccdf() const {
        if (ccdf_symbols < 1000) throw Error(ErrorCode::InvalidConfig, "ccdf_symbols must be >= 1000");
    }
};

struct BerRecord {
    double snr_db = 0.0;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t subblocks = 0;
    std::uint64_t index_errors = 0;
    std::uint64_t symbol_errors = 0;
    double measured_eb = 0.0;

    double ber() const { return static_cast<double>(bit_errors) / static_cast<double>(bits_sent); }
    double index_error_rate() const { return static_cast<double>(index_errors) / static_cast<double>(subblocks); }
    double symbol_error_rate() const { return static_cast<double>(symbol_errors) / static_cast<double>(subblocks); }
};

struct CcdfRecord {
    double papr_db = 0.0;
    double ccdf = 0.0;
    std::uint64_t samples = 0;
};

// ---------------------------------------------------------------------------------------------
// Transmitter chain for one OFDM symbol

struct TxSymbol {
    std::vector<BitWord> bits;
    std::vector<Subblock> subblocks;
    CVec X;
    CVec D;
    CVec X_tx;
};

inline TxSymbol transmit_symbol(Rng& rng, const Codebook& cb, const ConstraintScheme& scheme) {
    const auto& cfg = cb.config();
    TxSymbol s;
    s.bits.resize(cfg.g);
    s.subblocks.reserve(cfg.g);
    for (int b = 0; b < cfg.g; ++b) {
        s.bits[b] = static_cast<BitWord>(rng.bits(cfg.p));
        s.subblocks.push_back(build_subblock(s.bits[b], cb));
    }
    s.X = interleave_concat(s.subblocks, cfg);
    if (scheme.kind == SchemeKind::None) {
        s.D.assign(cfg.N, cplx{});
    } else {
        const auto constraints = constraints_for(s.subblocks, scheme, cb);
        s.D = generate_dither_icf(s.X, constraints, cfg);
    }
    s.X_tx.resize(cfg.N);
    for (int i = 0; i < cfg.N; ++i) s.X_tx[i] = s.X[i] + s.D[i];
    return s;
}

/// Mean transmitted energy per information bit under the configured scheme, from a seeded
/// pre-measurement pass (label "eb-calibration").
inline double measure_bit_energy(const ExperimentConfig& cfg, const Codebook& cb) {
    std::vector<double> energy(cfg.eb_calibration_symbols);
    parallel_for(energy.size(), cfg.workers, [&](int, std::uint64_t i) {
        Rng rng = derive_trial_rng(cfg.master_seed, "eb-calibration", i);
        energy[i] = symbol_energy(transmit_symbol(rng, cb, cfg.scheme).X_tx);
    });
    double total = 0.0;
    for (double e : energy) total += e;
    return bit_energy(total / static_cast<double>(energy.size()), cfg.system);
}

// ---------------------------------------------------------------------------------------------

/// Monte Carlo BER sweep. Trial t draws data, channel and unit noise from
/// derive_trial_rng(seed, "ber", t); every SNR point reuses that draw with its own noise scale.
inline std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg) {
    cfg.validate_ber();
    const Codebook cb(cfg.system);
    const auto& sys = cfg.system;
    const double eb = measure_bit_energy(cfg, cb);
    const std::size_t points = cfg.snr_grid_db.size();
    std::vector<double> n0(points);
    for (std::size_t j = 0; j < points; ++j) n0[j] = calibrate_noise(cfg.snr_grid_db[j], eb);

    const int workers = std::max(1, cfg.workers);
    std::vector<std::vector<BerRecord>> acc(workers, std::vector<BerRecord>(points));

    parallel_for(cfg.trials_per_point, workers, [&](int w, std::uint64_t t) {
        Rng rng = derive_trial_rng(cfg.master_seed, "ber", t);
        const TxSymbol tx = transmit_symbol(rng, cb, cfg.scheme);
        const CVec H = sample_channel(sys.taps, sys.N, rng);
        const CVec W = unit_noise(sys.N, rng);
        const auto H_sub = deinterleave(H, sys);
        for (std::size_t j = 0; j < points; ++j) {
            const CVec Y = apply_channel(tx.X_tx, H, n0[j], W);
            const auto Y_sub = deinterleave(Y, sys);
            auto& rec = acc[w][j];
            for (int b = 0; b < sys.g; ++b) {
                const DetectionResult rx = cfg.detector == Detector::ML
                                               ? ml_detect_subblock(Y_sub[b], H_sub[b], cb)
                                               : power_detect_subblock(Y_sub[b], H_sub[b], cb);
                rec.bit_errors += static_cast<std::uint64_t>(std::popcount(rx.bits ^ tx.bits[b]));
                switch (classify_error(tx.subblocks[b], rx)) {
                case ErrorEvent::IndexError: ++rec.index_errors; break;
                case ErrorEvent::SymbolError: ++rec.symbol_errors; break;
                case ErrorEvent::Correct: break;
                }
            }
        }
    });

    std::vector<BerRecord> out(points);
    for (std::size_t j = 0; j < points; ++j) {
        auto& r = out[j];
        r.snr_db = cfg.snr_grid_db[j];
        r.bits_sent = cfg.trials_per_point * static_cast<std::uint64_t>(sys.m);
        r.subblocks = cfg.trials_per_point * static_cast<std::uint64_t>(sys.g);
        r.measured_eb = eb;
        for (const auto& w : acc) {
            r.bit_errors += w[j].bit_errors;
            r.index_errors += w[j].index_errors;
            r.symbol_errors += w[j].symbol_errors;
        }
    }
    return out;
}

/// Oversampled PAPR (dB) of each seeded symbol, in trial order (label "papr").
inline std::vector<double> sample_papr(const ExperimentConfig& cfg) {
    const Codebook cb(cfg.system);
    std::vector<double> papr(cfg.ccdf_symbols);
    parallel_for(papr.size(), cfg.workers, [&](int, std::uint64_t i) {
        Rng rng = derive_trial_rng(cfg.master_seed, "papr", i);
        const TxSymbol tx = transmit_symbol(rng, cb, cfg.scheme);
        papr[i] = papr_db(idft(tx.X_tx, cfg.system.oversample));
    });
    return papr;
}

/// Empirical CCDF Pr(PAPR > t) on a 0.1 dB grid from 0 dB up to the first threshold with CCDF 0.
inline std::vector<CcdfRecord> empirical_ccdf(std::vector<double> papr) {
    std::sort(papr.begin(), papr.end());
    const auto n = static_cast<std::uint64_t>(papr.size());
    std::vector<CcdfRecord> out;
    for (int i = 0;; ++i) {
        const double th = i / 10.0;
        const auto above = static_cast<std::uint64_t>(papr.end() - std::upper_bound(papr.begin(), papr.end(), th));
        out.push_back({th, static_cast<double>(above) / static_cast<double>(n), n});
        if (above == 0) break;
    }
    return out;
}

inline std::vector<CcdfRecord> run_papr_ccdf(const ExperimentConfig& cfg) {
    cfg.validate_ccdf();
    return empirical_ccdf(sample_papr(cfg));
}

// ---------------------------------------------------------------------------------------------
// Curve readout

/// Threshold at which the CCDF falls to `target`, interpolating log10(ccdf) linearly between grid points.
inline std::optional<double> papr_at_ccdf(const std::vector<CcdfRecord>& ccdf, double target) {
    for (std::size_t i = 1; i < ccdf.size(); ++i) {
        if (ccdf[i].ccdf <= target && ccdf[i - 1].ccdf > target) {
            if (ccdf[i].ccdf <= 0.0) return ccdf[i].papr_db;
            const double l0 = std::log10(ccdf[i - 1].ccdf), l1 = std::log10(ccdf[i].ccdf);
            const double f = (l0 - std::log10(target)) / (l0 - l1);
            return ccdf[i - 1].papr_db + f * (ccdf[i].papr_db - ccdf[i - 1].papr_db);
        }
    }
    return std::nullopt;
}

/// SNR at which the BER curve crosses `target` (log-linear interpolation); nullopt if it never does.
inline std::optional<double> snr_at_ber(const std::vector<BerRecord>& recs, double target) {
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const double b0 = recs[i - 1].ber(), b1 = recs[i].ber();
        if (b0 > target && b1 <= target) {
            if (b1 <= 0.0) return recs[i].snr_db;
            const double l0 = std::log10(b0), l1 = std::log10(b1);
            const double f = (l0 - std::log10(target)) / (l0 - l1);
            return recs[i - 1].snr_db + f * (recs[i].snr_db - recs[i - 1].snr_db);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Output

inline constexpr const char* kBerCsvHeader = "snr_db,bits,bit_errors,ber,index_err_rate,sym_err_rate,measured_eb";
inline constexpr const char* kCcdfCsvHeader = "papr_db,ccdf,samples";

inline std::string format_ber_csv(const std::vector<BerRecord>& recs) {
    std::string out = std::string(kBerCsvHeader) + "\n";
    char line[256];
    for (const auto& r : recs) {
        std::snprintf(line, sizeof line, "%.6g,%llu,%llu,%.10e,%.10e,%.10e,%.15g\n", r.snr_db,
                      static_cast<unsigned long long>(r.bits_sent), static_cast<unsigned long long>(r.bit_errors),
                      r.ber(), r.index_error_rate(), r.symbol_error_rate(), r.measured_eb);
        out += line;
    }
    return out;
}

inline std::string format_ccdf_csv(const std::vector<CcdfRecord>& recs) {
    std::string out = std::string(kCcdfCsvHeader) + "\n";
    char line[128];
    for (const auto& r : recs) {
        std::snprintf(line, sizeof line, "%.1f,%.10e,%llu\n", r.papr_db, r.ccdf,
                      static_cast<unsigned long long>(r.samples));
        out += line;
    }
    return out;
}

inline nlohmann::json run_metadata(const ExperimentConfig& cfg, std::optional<double> measured_eb) {
    const auto& s = cfg.system;
    nlohmann::json j;
    j["version"] = kVersion;
    j["seed"] = cfg.master_seed;
    j["system"] = {{"N", s.N}, {"n", s.n}, {"k", s.k}, {"M", s.M}, {"g", s.g}, {"p1", s.p1},
                   {"p2", s.p2}, {"p", s.p}, {"m", s.m}, {"oversample", s.oversample},
                   {"taps", s.taps}, {"icf_iterations", s.icf_iterations}};
    j["clip_ratio"] = s.clip_ratio;
    j["scheme"] = to_string(cfg.scheme.kind);
    j["radii"] = cfg.scheme.radii;
    j["snr_db"] = cfg.snr_grid_db;
    j["trials_per_point"] = cfg.trials_per_point;
    j["trial_unit"] = "ofdm_symbol";
    j["ccdf_symbols"] = cfg.ccdf_symbols;
    j["eb_calibration_symbols"] = cfg.eb_calibration_symbols;
    j["detector"] = cfg.detector == Detector::ML ? "ml" : "power";
    j["papr_normalization"] = "per_symbol";
    j["tap_profile"] = "uniform";
    j["fading"] = "block_per_ofdm_symbol";
    if (measured_eb) j["measured_eb"] = *measured_eb;
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
    f << text;
    if (!f) throw Error(ErrorCode::Io, "write failed for " + path);
}

// ---------------------------------------------------------------------------------------------
// Config file (JSON object; every key optional)

inline ConstraintScheme make_scheme(SchemeKind kind, std::optional<double> R, std::optional<double> R0,
                                    std::optional<std::vector<double>> radii, std::span<const double> levels) {
    switch (kind) {
    case SchemeKind::None: return ConstraintScheme::none();
    case SchemeKind::Equivalent:
        if (!R) throw Error(ErrorCode::InvalidConfig, "equivalent scheme needs r");
        return ConstraintScheme::equivalent(*R);
    case SchemeKind::AwgnVariable:
        if (radii) return ConstraintScheme::awgn_variable(*radii);
        if (R0) return ConstraintScheme::awgn_variable_from_r0(*R0, levels);
        throw Error(ErrorCode::InvalidConfig, "awgn_variable scheme needs r0 or radii");
    case SchemeKind::Proposed:
        if (radii) return ConstraintScheme::proposed(*radii, levels);
        if (R0) return ConstraintScheme::proposed_from_r0(*R0, levels);
        throw Error(ErrorCode::InvalidConfig, "proposed scheme needs r0 or radii");
    }
    return {};
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    auto& s = cfg.system;
    try {
        s.N = j.value("N", s.N);
        s.n = j.value("n", s.n);
        s.k = j.value("k", s.k);
        s.M = j.value("M", s.M);
        s.oversample = j.value("oversample", s.oversample);
        s.taps = j.value("taps", s.taps);
        s.icf_iterations = j.value("icf_iterations", s.icf_iterations);
        s.clip_ratio = j.value("clip_ratio", s.clip_ratio);
        s.finalize();
        cfg.snr_grid_db = j.value("snr_db", cfg.snr_grid_db);
        if (j.contains("trials_per_point") && j["trials_per_point"].get<long long>() < 1)
            throw Error(ErrorCode::InvalidConfig, "trials_per_point must be >= 1");
        cfg.trials_per_point = j.value("trials_per_point", cfg.trials_per_point);
        cfg.ccdf_symbols = j.value("ccdf_symbols", cfg.ccdf_symbols);
        cfg.eb_calibration_symbols = j.value("eb_calibration_symbols", cfg.eb_calibration_symbols);
        cfg.master_seed = j.value("seed", cfg.master_seed);
        cfg.workers = j.value("workers", cfg.workers);
        const std::string det = j.value("detector", std::string("ml"));
        if (det == "ml") cfg.detector = Detector::ML;
        else if (det == "power") cfg.detector = Detector::Power;
        else throw Error(ErrorCode::InvalidConfig, "detector must be ml or power");

        const SchemeKind kind = parse_scheme(j.value("scheme", std::string("none")));
        std::optional<double> R, R0;
        std::optional<std::vector<double>> radii;
        if (j.contains("r")) R = j["r"].get<double>();
        if (j.contains("r0")) R0 = j["r0"].get<double>();
        if (j.contains("radii")) radii = j["radii"].get<std::vector<double>>();
        const Constellation c(s.M);
        cfg.scheme = make_scheme(kind, R, R0, radii, c.amplitude_levels());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return cfg;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
    }
}

}  // namespace ofdmim
