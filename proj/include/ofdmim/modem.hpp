#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ofdmim/core.hpp"
#include "ofdmim/fft.hpp"

namespace ofdmim {

// ---------------------------------------------------------------------------------------------
// Subblock mapping

/// Assembles a subblock from an SAP index and one constellation label per active subcarrier.
inline Subblock make_subblock(std::uint32_t sap, std::span<const BitWord> labels, const Codebook& cb) {
    const auto& cfg = cb.config();
    Subblock sb;
    sb.sap_index = sap;
    sb.active_set = cb.pattern(sap);
    sb.labels.assign(labels.begin(), labels.end());
    sb.symbols.reserve(cfg.k);
    sb.values.assign(cfg.n, cplx{});
    for (int g = 0; g < cfg.k; ++g) {
        const cplx s = cb.constellation().map(labels[g]);
        sb.symbols.push_back(s);
        sb.values[sb.active_set[g]] = s;
    }
    sb.amp_floor = amp_floor(sb.symbols);
    return sb;
}

/// First p1 bits pick the SAP, then k groups of log2(M) bits label the active subcarriers in
/// ascending index order.
inline Subblock build_subblock(BitWord bits, const Codebook& cb) {
    const auto& cfg = cb.config();
    const int q = cfg.bits_per_symbol();
    const BitWord sap = bits >> cfg.p2;
    std::vector<BitWord> labels(cfg.k);
    for (int g = 0; g < cfg.k; ++g) labels[g] = (bits >> ((cfg.k - 1 - g) * q)) & ((1u << q) - 1u);
    return make_subblock(sap, labels, cb);
}

inline BitWord demap_subblock(const Subblock& sb, const Codebook& cb) {
    const auto& cfg = cb.config();
    const auto sap = pattern_to_sap_index(sb.active_set, cfg.n, cfg.k);
    if (!sap) throw Error(ErrorCode::UnusedPattern, "subblock SAP is outside the codebook");
    const int q = cfg.bits_per_symbol();
    BitWord bits = *sap;
    for (int g = 0; g < cfg.k; ++g) bits = (bits << q) | cb.constellation().demap(sb.symbols.at(g));
    return bits;
}

// ---------------------------------------------------------------------------------------------
// Interleaved concatenation: element i of subblock b sits on subcarrier i*g + b.

inline std::size_t interleaved_index(int beta, int i, int g) {
    return static_cast<std::size_t>(i) * g + beta;
}

inline CVec interleave_concat(std::span<const Subblock> subblocks, const SystemConfig& cfg) {
    if (static_cast<int>(subblocks.size()) != cfg.g)
        throw Error(ErrorCode::InvalidLength, "expected g subblocks");
    CVec X(cfg.N);
    for (int b = 0; b < cfg.g; ++b) {
        if (static_cast<int>(subblocks[b].values.size()) != cfg.n)
            throw Error(ErrorCode::InvalidLength, "subblock length differs from n");
        for (int i = 0; i < cfg.n; ++i) X[interleaved_index(b, i, cfg.g)] = subblocks[b].values[i];
    }
    return X;
}

inline std::vector<CVec> deinterleave(std::span<const cplx> X, const SystemConfig& cfg) {
    if (static_cast<int>(X.size()) != cfg.N) throw Error(ErrorCode::InvalidLength, "length differs from N");
    std::vector<CVec> out(cfg.g, CVec(cfg.n));
    for (int b = 0; b < cfg.g; ++b)
        for (int i = 0; i < cfg.n; ++i) out[b][i] = X[interleaved_index(b, i, cfg.g)];
    return out;
}

// ---------------------------------------------------------------------------------------------
// Transforms. Unitary convention; oversampling inserts (L-1)N zeros between bins N/2-1 and N/2.

struct TimeSignal {
    CVec samples;
    double mean_power = 0.0;
};

inline double mean_power(std::span<const cplx> x) {
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v);
    return x.empty() ? 0.0 : e / static_cast<double>(x.size());
}

inline CVec pad_spectrum(std::span<const cplx> X, int L) {
    const std::size_t N = X.size();
    const std::size_t low = N / 2;
    CVec out(N * static_cast<std::size_t>(L));
    std::copy(X.begin(), X.begin() + low, out.begin());
    std::copy(X.begin() + low, X.end(), out.end() - (N - low));
    return out;
}

/// Drops the pad bins from a length-L*N spectrum.
inline CVec remove_padding(std::span<const cplx> Xpad, std::size_t N) {
    if (N > Xpad.size()) throw Error(ErrorCode::InvalidLength, "spectrum shorter than N");
    const std::size_t low = N / 2;
    CVec out(N);
    std::copy(Xpad.begin(), Xpad.begin() + low, out.begin());
    std::copy(Xpad.end() - (N - low), Xpad.end(), out.begin() + low);
    return out;
}

inline TimeSignal idft(std::span<const cplx> X, int L) {
    if (L < 1) throw Error(ErrorCode::InvalidConfig, "oversample factor must be >= 1");
    TimeSignal x{pad_spectrum(X, L), 0.0};
    fft::unitary(x.samples, true);
    x.mean_power = mean_power(x.samples);
    return x;
}

/// Forward unitary DFT of an (oversampled) time signal; result keeps the padded layout.
inline CVec dft(std::span<const cplx> samples) {
    CVec X(samples.begin(), samples.end());
    fft::unitary(X, false);
    return X;
}

inline CVec dft(const TimeSignal& x) { return dft(x.samples); }

/// Peak-to-mean power ratio of the given samples, in dB.
inline double papr_db(std::span<const cplx> samples) {
    double peak = 0.0;
    double total = 0.0;
    for (const auto& v : samples) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        total += p;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::UndefinedPapr, "PAPR of an all-zero signal");
    return 10.0 * std::log10(peak * static_cast<double>(samples.size()) / total);
}

inline double papr_db(const TimeSignal& x) { return papr_db(x.samples); }

}  // namespace ofdmim
