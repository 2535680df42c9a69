#pragma once

#include <cmath>
#include <span>

#include "ofdmim/core.hpp"
#include "ofdmim/fft.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

struct ChannelRealization {
    CVec H;
    double N0 = 0.0;
};

/// Per-subcarrier response of an equal-power Rayleigh tapped delay line (taps of variance 1/taps),
/// so that E|H_f|^2 = 1.
inline CVec sample_channel(int taps, int N, Rng& rng) {
    if (taps < 1 || taps > N) throw Error(ErrorCode::InvalidTaps, "taps must be in [1, N]");
    CVec H(N);
    const double var = 1.0 / taps;
    for (int l = 0; l < taps; ++l) H[l] = rng.complex_normal(var);
    fft::transform(H, false);
    return H;
}

/// Y = H * X_tx + sqrt(N0) * W for a given unit-variance noise vector W.
inline CVec apply_channel(std::span<const cplx> X_tx, std::span<const cplx> H, double N0,
                          std::span<const cplx> unit_noise) {
    if (X_tx.size() != H.size() || X_tx.size() != unit_noise.size())
        throw Error(ErrorCode::InvalidLength, "channel, symbol and noise lengths differ");
    const double s = std::sqrt(N0);
    CVec Y(X_tx.size());
    for (std::size_t f = 0; f < Y.size(); ++f) Y[f] = H[f] * X_tx[f] + s * unit_noise[f];
    return Y;
}

inline CVec unit_noise(std::size_t N, Rng& rng) {
    CVec W(N);
    for (auto& w : W) w = rng.complex_normal();
    return W;
}

inline CVec apply_channel(std::span<const cplx> X_tx, const ChannelRealization& ch, Rng& rng) {
    const CVec W = unit_noise(X_tx.size(), rng);
    return apply_channel(X_tx, ch.H, ch.N0, W);
}

inline double symbol_energy(std::span<const cplx> X) {
    double e = 0.0;
    for (const auto& v : X) e += std::norm(v);
    return e;
}

/// Energy per information bit for a mean transmitted frequency-domain symbol energy (dither included).
inline double bit_energy(double mean_symbol_energy, const SystemConfig& cfg) {
    if (cfg.m <= 0) throw Error(ErrorCode::InvalidConfig, "m must be positive");
    return mean_symbol_energy / cfg.m;
}

inline double calibrate_noise(double ebn0_db, double Eb) { return Eb / std::pow(10.0, ebn0_db / 10.0); }

/// Single-symbol calibration, using X_tx's own energy as the mean.
inline double calibrate_noise(double ebn0_db, std::span<const cplx> X_tx, const SystemConfig& cfg) {
    return calibrate_noise(ebn0_db, bit_energy(symbol_energy(X_tx), cfg));
}

}  // namespace ofdmim
