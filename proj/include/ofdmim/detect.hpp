#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "ofdmim/core.hpp"
#include "ofdmim/modem.hpp"

namespace ofdmim {

struct DetectionResult {
    std::uint32_t sap_index = 0;
    std::vector<BitWord> labels;
    CVec symbols;
    BitWord bits = 0;
    double metric = 0.0;
};

namespace detail {

struct PerSubcarrier {
    std::array<double, 32> idle{};
    std::array<double, 32> active{};
    std::array<BitWord, 32> label{};
};

// Best single-symbol hypothesis per subcarrier; ties keep the smallest label.
inline void per_subcarrier_terms(std::span<const cplx> Y, std::span<const cplx> H, const Constellation& c,
                                 PerSubcarrier& out) {
    const auto& pts = c.points();
    for (std::size_t i = 0; i < Y.size(); ++i) {
        out.idle[i] = std::norm(Y[i]);
        double best = std::numeric_limits<double>::infinity();
        BitWord arg = 0;
        for (std::size_t s = 0; s < pts.size(); ++s) {
            const double d = std::norm(Y[i] - H[i] * pts[s]);
            if (d < best) {
                best = d;
                arg = static_cast<BitWord>(s);
            }
        }
        out.active[i] = best;
        out.label[i] = arg;
    }
}

inline DetectionResult finish(std::uint32_t sap, const PerSubcarrier& t, double metric, const Codebook& cb) {
    const auto& cfg = cb.config();
    DetectionResult r;
    r.sap_index = sap;
    r.metric = metric;
    BitWord bits = sap;
    for (int i : cb.pattern(sap)) {
        r.labels.push_back(t.label[i]);
        r.symbols.push_back(cb.constellation().map(t.label[i]));
        bits = (bits << cfg.bits_per_symbol()) | t.label[i];
    }
    r.bits = bits;
    return r;
}

inline void check_lengths(std::span<const cplx> Y, std::span<const cplx> H, const SystemConfig& cfg) {
    if (static_cast<int>(Y.size()) != cfg.n || static_cast<int>(H.size()) != cfg.n)
        throw Error(ErrorCode::InvalidLength, "subblock observation length differs from n");
}

}  // namespace detail

/// Joint ML over every codebook SAP and symbol assignment, metric sum_i |Y_i - H_i X_i|^2.
///
/// The metric separates per subcarrier, so the best assignment for a given SAP combines the
/// per-subcarrier minima; the search then only runs over the 2^p1 SAPs. Ties resolve to the smallest
/// SAP index, then the smallest labels.
inline DetectionResult ml_detect_subblock(std::span<const cplx> Y, std::span<const cplx> H, const Codebook& cb) {
    const auto& cfg = cb.config();
    detail::check_lengths(Y, H, cfg);
    detail::PerSubcarrier t;
    detail::per_subcarrier_terms(Y, H, cb.constellation(), t);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_sap = 0;
    for (int s = 0; s < cb.sap_count(); ++s) {
        const std::uint32_t mask = cb.active_mask(s);
        double metric = 0.0;
        for (int i = 0; i < cfg.n; ++i) metric += (mask >> i & 1u) ? t.active[i] : t.idle[i];
        if (metric < best) {
            best = metric;
            best_sap = static_cast<std::uint32_t>(s);
        }
    }
    return detail::finish(best_sap, t, best, cb);
}

/// Power-based detection: SAP from the received energies, then per-symbol ML on the chosen indices.
inline DetectionResult power_detect_subblock(std::span<const cplx> Y, std::span<const cplx> H, const Codebook& cb) {
    const auto& cfg = cb.config();
    detail::check_lengths(Y, H, cfg);
    detail::PerSubcarrier t;
    detail::per_subcarrier_terms(Y, H, cb.constellation(), t);
    // Maximizing the summed power over codebook SAPs picks the k strongest indices when that
    // combination is in the codebook, and the best codebook alternative otherwise.
    double best_power = -1.0;
    std::uint32_t best_sap = 0;
    for (int s = 0; s < cb.sap_count(); ++s) {
        const std::uint32_t mask = cb.active_mask(s);
        double power = 0.0;
        for (int i = 0; i < cfg.n; ++i)
            if (mask >> i & 1u) power += t.idle[i];
        if (power > best_power) {
            best_power = power;
            best_sap = static_cast<std::uint32_t>(s);
        }
    }
    const std::uint32_t mask = cb.active_mask(best_sap);
    double metric = 0.0;
    for (int i = 0; i < cfg.n; ++i) metric += (mask >> i & 1u) ? t.active[i] : t.idle[i];
    return detail::finish(best_sap, t, metric, cb);
}

enum class ErrorEvent { Correct, IndexError, SymbolError };

inline ErrorEvent classify_error(const Subblock& tx, const DetectionResult& rx) {
    if (tx.sap_index != rx.sap_index) return ErrorEvent::IndexError;
    return tx.labels == rx.labels ? ErrorEvent::Correct : ErrorEvent::SymbolError;
}

}  // namespace ofdmim
