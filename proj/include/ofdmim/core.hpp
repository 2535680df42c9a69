#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofdmim/error.hpp"

namespace ofdmim {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Packed bit word, most significant bit first. A subblock's p bits fit in one word.
using BitWord = std::uint32_t;

inline std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Static OFDM-IM and ICF parameters. Build through make(), which fills the derived fields.
struct SystemConfig {
    int N = 128;
    int n = 4;
    int k = 2;
    int M = 16;
    int oversample = 4;
    int taps = 8;
    int icf_iterations = 5;
    double clip_ratio = 1.6;

    // derived
    int g = 0;
    int p1 = 0;
    int p2 = 0;
    int p = 0;
    int m = 0;

    static SystemConfig make(int N, int n, int k, int M, int oversample = 4, int taps = 8,
                             int icf_iterations = 5, double clip_ratio = 1.6) {
        SystemConfig c;
        c.N = N;
        c.n = n;
        c.k = k;
        c.M = M;
        c.oversample = oversample;
        c.taps = taps;
        c.icf_iterations = icf_iterations;
        c.clip_ratio = clip_ratio;
        c.finalize();
        return c;
    }

    static SystemConfig default_setup() { return make(128, 4, 2, 16); }

    /// Validates the primary fields and recomputes the derived ones.
    void finalize() {
        auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
        if (n < 2 || n > 32) fail("subblock length n must be in [2, 32]");
        if (k < 1 || k >= n) fail("k must satisfy 1 <= k < n");
        if (N < n || N % n != 0) fail("N must be a positive multiple of n");
        if (M < 4 || !std::has_single_bit(static_cast<unsigned>(M)) ||
            std::countr_zero(static_cast<unsigned>(M)) % 2 != 0)
            fail("M must be a power of 4 (square QAM)");
        if (oversample < 1) fail("oversample must be >= 1");
        if (taps < 1 || taps > N) fail("taps must be in [1, N]");
        if (icf_iterations < 0) fail("icf_iterations must be >= 0");
        if (!(clip_ratio > 0.0)) fail("clip_ratio must be positive");
        g = N / n;
        p1 = std::bit_width(binomial(n, k)) - 1;
        p2 = k * std::countr_zero(static_cast<unsigned>(M));
        p = p1 + p2;
        m = p * g;
        if (p > 31) fail("subblock bit count p exceeds 31");
    }

    int bits_per_symbol() const { return std::countr_zero(static_cast<unsigned>(M)); }
    int sap_count() const { return 1 << p1; }
};

// ---------------------------------------------------------------------------------------------
// Subcarrier activation patterns (lexicographic combinadic order)

inline std::vector<int> sap_index_to_pattern(std::uint64_t idx, int n, int k) {
    const int p1 = std::bit_width(binomial(n, k)) - 1;
    if (idx >= (std::uint64_t{1} << p1))
        throw Error(ErrorCode::InvalidIndex, "SAP index " + std::to_string(idx) + " >= 2^p1");
    std::vector<int> pattern;
    pattern.reserve(k);
    int next = 0;
    for (int pos = 0; pos < k; ++pos) {
        for (int c = next; c < n; ++c) {
            const std::uint64_t with_c = binomial(n - 1 - c, k - 1 - pos);
            if (idx < with_c) {
                pattern.push_back(c);
                next = c + 1;
                break;
            }
            idx -= with_c;
        }
    }
    return pattern;
}

/// Lexicographic rank of a sorted k-subset of {0..n-1}, over all C(n,k) combinations.
inline std::uint64_t combination_rank(std::span<const int> pattern, int n, int k) {
    if (static_cast<int>(pattern.size()) != k)
        throw Error(ErrorCode::InvalidPattern, "pattern size differs from k");
    std::uint64_t rank = 0;
    int next = 0;
    for (int pos = 0; pos < k; ++pos) {
        const int v = pattern[pos];
        if (v < next || v >= n) throw Error(ErrorCode::InvalidPattern, "pattern not a sorted subset of {0..n-1}");
        for (int c = next; c < v; ++c) rank += binomial(n - 1 - c, k - 1 - pos);
        next = v + 1;
    }
    return rank;
}

/// Inverse of sap_index_to_pattern; nullopt for the C(n,k) - 2^p1 combinations outside the codebook.
inline std::optional<std::uint32_t> pattern_to_sap_index(std::span<const int> pattern, int n, int k) {
    const std::uint64_t rank = combination_rank(pattern, n, k);
    const int p1 = std::bit_width(binomial(n, k)) - 1;
    if (rank >= (std::uint64_t{1} << p1)) return std::nullopt;
    return static_cast<std::uint32_t>(rank);
}

// ---------------------------------------------------------------------------------------------
// Square QAM, unnormalized odd-integer grid, per-axis reflected Gray labels (I bits first)

class Constellation {
public:
    explicit Constellation(int M) : M_(M) {
        if (M < 4 || !std::has_single_bit(static_cast<unsigned>(M)) ||
            std::countr_zero(static_cast<unsigned>(M)) % 2 != 0)
            throw Error(ErrorCode::InvalidConfig, "M must be a power of 4");
        axis_bits_ = std::countr_zero(static_cast<unsigned>(M)) / 2;
        side_ = 1 << axis_bits_;
        points_.resize(M);
        for (int label = 0; label < M; ++label) {
            const auto gi = static_cast<unsigned>(label) >> axis_bits_;
            const auto gq = static_cast<unsigned>(label) & static_cast<unsigned>(side_ - 1);
            points_[label] = {axis_level(gi), axis_level(gq)};
        }
        for (const auto& pt : points_) levels_.push_back(std::abs(pt));
        std::sort(levels_.begin(), levels_.end());
        levels_.erase(std::unique(levels_.begin(), levels_.end(),
                                  [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                      levels_.end());
    }

    int order() const { return M_; }
    int bits() const { return 2 * axis_bits_; }
    const CVec& points() const { return points_; }
    const std::vector<double>& amplitude_levels() const { return levels_; }

    cplx map(BitWord label) const { return points_.at(label); }

    BitWord demap(cplx point) const {
        const auto axis = [&](double v) -> unsigned {
            const double idx = (v + (side_ - 1)) / 2.0;
            const double r = std::round(idx);
            if (std::abs(idx - r) > 1e-9 || r < 0 || r > side_ - 1)
                throw Error(ErrorCode::InvalidSymbol, "not a constellation point");
            const auto b = static_cast<unsigned>(r);
            return b ^ (b >> 1);
        };
        return (axis(point.real()) << axis_bits_) | axis(point.imag());
    }

    /// Index into amplitude_levels() of |point|-like value a; nullopt if a is not a level.
    std::optional<int> level_index(double a) const {
        for (std::size_t j = 0; j < levels_.size(); ++j)
            if (std::abs(levels_[j] - a) < 1e-9) return static_cast<int>(j);
        return std::nullopt;
    }

    double mean_energy() const {
        double e = 0.0;
        for (const auto& pt : points_) e += std::norm(pt);
        return e / M_;
    }

private:
    double axis_level(unsigned gray) const {
        unsigned b = gray;
        for (unsigned s = gray >> 1; s != 0; s >>= 1) b ^= s;
        return 2.0 * b - (side_ - 1);
    }

    int M_;
    int axis_bits_ = 0;
    int side_ = 0;
    CVec points_;
    std::vector<double> levels_;
};

inline cplx qam_map(BitWord bits, const Constellation& c) { return c.map(bits); }
inline BitWord qam_demap(cplx point, const Constellation& c) { return c.demap(point); }

inline double amp_floor(std::span<const cplx> symbols) {
    if (symbols.empty()) throw Error(ErrorCode::InvalidInput, "amp_floor of empty symbol list");
    double a = std::abs(symbols[0]);
    for (const auto& s : symbols.subspan(1)) a = std::min(a, std::abs(s));
    return a;
}

// ---------------------------------------------------------------------------------------------

/// One length-n frequency-domain block.
struct Subblock {
    std::uint32_t sap_index = 0;
    std::vector<int> active_set;
    std::vector<BitWord> labels;  // per active subcarrier, ascending index order
    CVec symbols;
    CVec values;
    double amp_floor = 0.0;
};

/// Per-configuration lookup tables: constellation plus the SAP codebook.
class Codebook {
public:
    explicit Codebook(const SystemConfig& cfg) : cfg_(cfg), constellation_(cfg.M) {
        patterns_.reserve(cfg.sap_count());
        for (int s = 0; s < cfg.sap_count(); ++s) patterns_.push_back(sap_index_to_pattern(s, cfg.n, cfg.k));
        masks_.reserve(patterns_.size());
        for (const auto& pat : patterns_) {
            std::uint32_t mask = 0;
            for (int i : pat) mask |= 1u << i;
            masks_.push_back(mask);
        }
    }

    const SystemConfig& config() const { return cfg_; }
    const Constellation& constellation() const { return constellation_; }
    const std::vector<int>& pattern(std::uint32_t sap) const { return patterns_.at(sap); }
    std::uint32_t active_mask(std::uint32_t sap) const { return masks_[sap]; }
    int sap_count() const { return static_cast<int>(patterns_.size()); }

private:
    SystemConfig cfg_;
    Constellation constellation_;
    std::vector<std::vector<int>> patterns_;
    std::vector<std::uint32_t> masks_;
};

}  // namespace ofdmim
