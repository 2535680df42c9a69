#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "ofdmim/core.hpp"
#include "ofdmim/parallel.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

/// Standard normal tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Fundamental index-demodulation error: idle position u detected active with amplitude
/// xu_hat, active position v (amplitude xv) detected idle, dither parameter R at u.
struct PepCase {
    double xu_hat = std::numbers::sqrt2;
    double xv = std::numbers::sqrt2;
    double R = 0.0;
    double N0 = 1.0;
};

/// Squared per-subcarrier distances between two subblock hypotheses.
struct PairwiseDistance {
    std::vector<double> eta;
    std::vector<int> support;

    static PairwiseDistance from_eta(std::vector<double> eta) {
        PairwiseDistance d{std::move(eta), {}};
        for (std::size_t i = 0; i < d.eta.size(); ++i)
            if (d.eta[i] != 0.0) d.support.push_back(static_cast<int>(i));
        return d;
    }

    static PairwiseDistance between(std::span<const cplx> X, std::span<const cplx> X_hat) {
        if (X.size() != X_hat.size()) throw Error(ErrorCode::InvalidLength, "hypothesis lengths differ");
        std::vector<double> eta(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) eta[i] = std::norm(X[i] - X_hat[i]);
        return from_eta(std::move(eta));
    }

    int order() const { return static_cast<int>(support.size()); }
};

inline double conditional_pep_exact(const PepCase& c, cplx Hu, cplx Hv) {
    if (!(c.N0 > 0.0)) throw Error(ErrorCode::InvalidCase, "N0 must be positive");
    const double gu = std::norm(Hu);
    const double a2 = gu * c.xu_hat * c.xu_hat;
    const double b2 = std::norm(Hv) * c.xv * c.xv;
    const double s = a2 + b2;
    if (!(s > 0.0)) throw Error(ErrorCode::DegenerateCase, "both faded branch energies are zero");
    const double num = s - 2.0 * c.R * gu * c.xu_hat;
    return q_function(num / (std::sqrt(2.0 * c.N0) * std::sqrt(s)));
}

/// Shortened-distance form: the detected-active amplitude is replaced by |xu_hat| - 2R.
inline double conditional_pep_approx(const PepCase& c, cplx Hu, cplx Hv) {
    if (!(c.N0 > 0.0)) throw Error(ErrorCode::InvalidCase, "N0 must be positive");
    const double eff = c.xu_hat - 2.0 * c.R;
    if (eff < 0.0) throw Error(ErrorCode::InvalidCase, "negative effective amplitude |xu_hat| - 2R");
    const double d2 = std::norm(Hu) * eff * eff + std::norm(Hv) * c.xv * c.xv;
    return q_function(std::sqrt(d2) / std::sqrt(2.0 * c.N0));
}

/// High-SNR Rayleigh PEP (4 N0)^G / (2 prod eta_i) over the support of eta.
inline double unconditional_pep(const PairwiseDistance& d, double N0) {
    if (d.order() == 0) throw Error(ErrorCode::InvalidDistance, "hypotheses are identical");
    if (!(N0 > 0.0)) throw Error(ErrorCode::InvalidCase, "N0 must be positive");
    double prod = 1.0;
    for (int i : d.support) {
        if (!(d.eta[i] > 0.0)) throw Error(ErrorCode::InvalidDistance, "eta must be positive on its support");
        prod *= d.eta[i];
    }
    return std::pow(4.0 * N0, d.order()) / (2.0 * prod);
}

inline double dither_pep(const PepCase& c) {
    const double eff = c.xu_hat - 2.0 * c.R;
    if (!(eff > 0.0)) throw Error(ErrorCode::InvalidCase, "|xu_hat| - 2R must be positive");
    if (!(c.xv > 0.0)) throw Error(ErrorCode::InvalidCase, "|xv| must be positive");
    if (!(c.N0 > 0.0)) throw Error(ErrorCode::InvalidCase, "N0 must be positive");
    const double n = 4.0 * c.N0;
    return n * n / (2.0 * eff * eff * c.xv * c.xv);
}

/// (sqrt(2) - 2R) * A: worst-case index-error distance product for amplitude floor A.
inline double robustness_metric(double A, double R) { return (std::numbers::sqrt2 - 2.0 * R) * A; }

/// Radii equalizing robustness_metric across `levels` (ascending), anchored at R0 on levels[0].
inline std::vector<double> solve_constraint_levels(double R0, std::span<const double> levels) {
    if (levels.empty()) throw Error(ErrorCode::InvalidInput, "no amplitude levels");
    if (!(R0 >= 0.0)) throw Error(ErrorCode::InvalidInput, "R0 must be non-negative");
    if (R0 >= std::numbers::sqrt2 / 2.0)
        throw Error(ErrorCode::NonPositiveMetric, "R0 >= sqrt(2)/2 leaves no positive robustness metric");
    const double target = robustness_metric(levels[0], R0);
    std::vector<double> radii{R0};
    for (std::size_t j = 1; j < levels.size(); ++j)
        radii.push_back((std::numbers::sqrt2 - target / levels[j]) / 2.0);
    return radii;
}

/// Equal-margin radii A_j - R_j = A_0 - R0 (power-detection AWGN rule).
inline std::vector<double> solve_awgn_constraint_levels(double R0, std::span<const double> levels) {
    if (levels.empty()) throw Error(ErrorCode::InvalidInput, "no amplitude levels");
    if (!(R0 >= 0.0)) throw Error(ErrorCode::InvalidInput, "R0 must be non-negative");
    std::vector<double> radii;
    for (double a : levels) radii.push_back(a - (levels[0] - R0));
    return radii;
}

// ---------------------------------------------------------------------------------------------
// Monte Carlo verification

struct McEstimate {
    std::uint64_t events = 0;
    std::uint64_t trials = 0;

    double probability() const { return trials ? static_cast<double>(events) / static_cast<double>(trials) : 0.0; }
    double std_error() const {
        const double p = probability();
        return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
    }
};

/// Simulates the two-hypothesis decision behind the fundamental index error. Both the detected-active
/// amplitude at u and the dither D_u lie on the first-quadrant diagonal, so |Re D_u| + |Im D_u| =
/// sqrt(2) R sits on the diamond boundary.
inline McEstimate mc_pep_oracle(const PepCase& c, std::uint64_t trials, Rng& rng) {
    const cplx diag = std::polar(1.0, std::numbers::pi / 4.0);
    const cplx xu_hat = c.xu_hat * diag;
    const cplx xv = c.xv * diag;
    const cplx du = c.R * diag;
    McEstimate est{0, trials};
    for (std::uint64_t t = 0; t < trials; ++t) {
        const cplx hu = rng.complex_normal();
        const cplx hv = rng.complex_normal();
        const cplx yu = hu * du + rng.complex_normal(c.N0);
        const cplx yv = hv * xv + rng.complex_normal(c.N0);
        const double wrong = std::norm(yu - hu * xu_hat) + std::norm(yv);
        const double right = std::norm(yu) + std::norm(yv - hv * xv);
        if (wrong < right) ++est.events;
    }
    return est;
}

inline constexpr std::uint64_t kMcChunk = 1u << 16;

/// Chunked oracle: chunk i draws from derive_trial_rng(seed, "pep-mc", i), so the result does not
/// depend on the worker count.
inline McEstimate mc_pep_oracle(const PepCase& c, std::uint64_t trials, std::uint64_t seed, int workers = 1) {
    const std::uint64_t chunks = (trials + kMcChunk - 1) / kMcChunk;
    std::vector<std::uint64_t> events(chunks, 0);
    parallel_for(chunks, workers, [&](int, std::uint64_t i) {
        Rng rng = derive_trial_rng(seed, "pep-mc", i);
        const std::uint64_t n = std::min(kMcChunk, trials - i * kMcChunk);
        events[i] = mc_pep_oracle(c, n, rng).events;
    });
    McEstimate est{0, trials};
    for (auto e : events) est.events += e;
    return est;
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// E_H[conditional_pep_exact] with Hu, Hv ~ CN(0,1), by sampling.
inline MeanEstimate average_conditional_pep_exact(const PepCase& c, std::uint64_t samples, std::uint64_t seed,
                                                  int workers = 1) {
    const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
    std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
    parallel_for(chunks, workers, [&](int, std::uint64_t i) {
        Rng rng = derive_trial_rng(seed, "pep-average", i);
        const std::uint64_t n = std::min(kMcChunk, samples - i * kMcChunk);
        for (std::uint64_t t = 0; t < n; ++t) {
            const cplx hu = rng.complex_normal();
            const cplx hv = rng.complex_normal();
            const double q = conditional_pep_exact(c, hu, hv);
            sum[i] += q;
            sum2[i] += q * q;
        }
    });
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < chunks; ++i) {
        s += sum[i];
        s2 += sum2[i];
    }
    const double n = static_cast<double>(samples);
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace ofdmim
