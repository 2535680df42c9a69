#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "ofdmim/core.hpp"

namespace oracle {

using ofdmim::cplx;
using ofdmim::CVec;

/// All k-subsets of {0..n-1} in lexicographic order, by boolean-mask permutation.
inline std::vector<std::vector<int>> lexicographic_combinations(int n, int k) {
    std::vector<bool> take(n, false);
    std::fill(take.begin(), take.begin() + k, true);
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> c;
        for (int i = 0; i < n; ++i)
            if (take[i]) c.push_back(i);
        out.push_back(c);
    } while (std::prev_permutation(take.begin(), take.end()));
    return out;
}

/// Textbook O(n^2) DFT with explicit sum, unitary scaling.
inline CVec naive_dft(const CVec& x, bool inverse) {
    const std::size_t n = x.size();
    CVec out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t f = 0; f < n; ++f) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(f) * static_cast<double>(t) /
                               static_cast<double>(n);
            acc += x[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[f] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

/// Q(x) by composite Simpson integration of the normal pdf on [x, x + 40].
inline double q_quadrature(double x) {
    const int steps = 400000;
    const double a = x, b = x + 40.0, h = (b - a) / steps;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    double s = pdf(a) + pdf(b);
    for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(a + i * h);
    return s * h / 3.0;
}

struct BruteForceResult {
    std::uint32_t sap = 0;
    std::vector<ofdmim::BitWord> labels;
    double metric = std::numeric_limits<double>::infinity();
};

/// Exhaustive ML over every (codebook SAP, label tuple), labels enumerated lexicographically.
inline BruteForceResult brute_force_ml(const CVec& Y, const CVec& H, int n, int k, int M) {
    const auto combos = lexicographic_combinations(n, k);
    const int p1 = std::bit_width(static_cast<unsigned long long>(combos.size())) - 1;
    const ofdmim::Constellation c(M);
    BruteForceResult best;
    std::uint64_t tuples = 1;
    for (int i = 0; i < k; ++i) tuples *= static_cast<std::uint64_t>(M);
    for (int sap = 0; sap < (1 << p1); ++sap) {
        const auto& pat = combos[sap];
        for (std::uint64_t t = 0; t < tuples; ++t) {
            std::vector<ofdmim::BitWord> labels(k);
            std::uint64_t rest = t;
            for (int g = k - 1; g >= 0; --g) {
                labels[g] = static_cast<ofdmim::BitWord>(rest % M);
                rest /= M;
            }
            CVec Xh(n);
            for (int g = 0; g < k; ++g) Xh[pat[g]] = c.points()[labels[g]];
            double metric = 0.0;
            for (int i = 0; i < n; ++i) metric += std::norm(Y[i] - H[i] * Xh[i]);
            if (metric < best.metric) best = {static_cast<std::uint32_t>(sap), labels, metric};
        }
    }
    return best;
}

}  // namespace oracle
