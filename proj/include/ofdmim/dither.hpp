#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ofdmim/analysis.hpp"
#include "ofdmim/core.hpp"
#include "ofdmim/modem.hpp"

namespace ofdmim {

/// Admissible region for one dither value.
///   Zero:    D = 0
///   Disk:    |D| <= radius
///   Diamond: |Re D| + |Im D| <= sqrt(2) * radius
struct DitherConstraint {
    enum class Kind { Zero, Disk, Diamond };
    Kind kind = Kind::Zero;
    double radius = 0.0;

    static DitherConstraint zero() { return {}; }
    static DitherConstraint disk(double r) { return {Kind::Disk, r}; }
    static DitherConstraint diamond(double r) { return {Kind::Diamond, r}; }

    bool admits(cplx d, double tol = 1e-12) const {
        switch (kind) {
        case Kind::Zero: return d == cplx{};
        case Kind::Disk: return std::abs(d) <= radius + tol;
        case Kind::Diamond:
            return std::abs(d.real()) + std::abs(d.imag()) <= std::numbers::sqrt2 * radius + tol;
        }
        return false;
    }

    friend bool operator==(const DitherConstraint&, const DitherConstraint&) = default;
};

enum class SchemeKind { None, Equivalent, AwgnVariable, Proposed };

inline std::string to_string(SchemeKind s) {
    switch (s) {
    case SchemeKind::None: return "none";
    case SchemeKind::Equivalent: return "equivalent";
    case SchemeKind::AwgnVariable: return "awgn_variable";
    case SchemeKind::Proposed: return "proposed";
    }
    return "?";
}

inline SchemeKind parse_scheme(const std::string& s) {
    if (s == "none" || s == "original") return SchemeKind::None;
    if (s == "equivalent") return SchemeKind::Equivalent;
    if (s == "awgn_variable" || s == "awgn") return SchemeKind::AwgnVariable;
    if (s == "proposed") return SchemeKind::Proposed;
    throw Error(ErrorCode::InvalidConfig, "unknown constraint scheme '" + s + "'");
}

/// Constraint scheme plus its radii: one radius for `equivalent`, one per amplitude level for the
/// variable schemes, none for `none`.
struct ConstraintScheme {
    SchemeKind kind = SchemeKind::None;
    std::vector<double> radii;

    static ConstraintScheme none() { return {}; }

    static ConstraintScheme equivalent(double R) {
        if (!(R >= 0.0)) throw Error(ErrorCode::InvalidConfig, "radius must be non-negative");
        return {SchemeKind::Equivalent, {R}};
    }

    static ConstraintScheme awgn_variable(std::vector<double> radii) {
        check_radii(radii);
        return {SchemeKind::AwgnVariable, std::move(radii)};
    }

    /// Explicit radii; they must equalize the robustness metric across `levels` to 1e-9.
    static ConstraintScheme proposed(std::vector<double> radii, std::span<const double> levels) {
        check_radii(radii);
        if (radii.size() != levels.size())
            throw Error(ErrorCode::InvalidConfig, "proposed scheme needs one radius per amplitude level");
        const double ref = robustness_metric(levels[0], radii[0]);
        for (std::size_t j = 1; j < levels.size(); ++j)
            if (std::abs(robustness_metric(levels[j], radii[j]) - ref) > 1e-9)
                throw Error(ErrorCode::InvalidConfig, "proposed radii do not equalize the robustness metric");
        return {SchemeKind::Proposed, std::move(radii)};
    }

    static ConstraintScheme proposed_from_r0(double R0, std::span<const double> levels) {
        return {SchemeKind::Proposed, solve_constraint_levels(R0, levels)};
    }

    static ConstraintScheme awgn_variable_from_r0(double R0, std::span<const double> levels) {
        return {SchemeKind::AwgnVariable, solve_awgn_constraint_levels(R0, levels)};
    }

private:
    static void check_radii(const std::vector<double>& radii) {
        if (radii.empty()) throw Error(ErrorCode::InvalidConfig, "variable scheme needs radii");
        for (double r : radii)
            if (!(r >= 0.0)) throw Error(ErrorCode::InvalidConfig, "radius must be non-negative");
    }
};

/// Per-subcarrier constraints for one subblock. Active subcarriers are always Zero.
inline std::vector<DitherConstraint> constraints_for(const Subblock& sb, const ConstraintScheme& scheme,
                                                     const Constellation& constellation) {
    const std::size_t n = sb.values.size();
    std::vector<DitherConstraint> out(n);
    if (scheme.kind == SchemeKind::None) return out;

    const auto level = constellation.level_index(sb.amp_floor);
    if (!level) throw Error(ErrorCode::InvalidSubblock, "amplitude floor is not a constellation level");

    DitherConstraint idle;
    switch (scheme.kind) {
    case SchemeKind::Equivalent: idle = DitherConstraint::disk(scheme.radii.at(0)); break;
    case SchemeKind::AwgnVariable: idle = DitherConstraint::disk(scheme.radii.at(*level)); break;
    case SchemeKind::Proposed: idle = DitherConstraint::diamond(scheme.radii.at(*level)); break;
    case SchemeKind::None: break;
    }
    std::vector<bool> active(n, false);
    for (int i : sb.active_set) active[i] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!active[i]) out[i] = idle;
    return out;
}

/// Constraints for a full interleaved symbol, laid out like interleave_concat.
inline std::vector<DitherConstraint> constraints_for(std::span<const Subblock> subblocks,
                                                     const ConstraintScheme& scheme, const Codebook& cb) {
    const auto& cfg = cb.config();
    std::vector<DitherConstraint> out(cfg.N);
    for (int b = 0; b < cfg.g; ++b) {
        const auto per = constraints_for(subblocks[b], scheme, cb.constellation());
        for (int i = 0; i < cfg.n; ++i) out[interleaved_index(b, i, cfg.g)] = per[i];
    }
    return out;
}

/// Radial projection onto the constraint boundary when d is infeasible; phase is kept.
inline cplx trim(cplx d, const DitherConstraint& c) {
    switch (c.kind) {
    case DitherConstraint::Kind::Zero: return {};
    case DitherConstraint::Kind::Disk: {
        const double a = std::abs(d);
        if (a <= c.radius) return d;
        return d * (c.radius / a);
    }
    case DitherConstraint::Kind::Diamond: {
        const double l1 = std::abs(d.real()) + std::abs(d.imag());
        const double bound = std::numbers::sqrt2 * c.radius;
        if (l1 <= bound) return d;
        return d * (bound / l1);
    }
    }
    return {};
}

/// Iterative clipping and filtering restricted to the idle subcarriers.
///
/// Each iteration clips X + D at the oversampled rate to clip_ratio times the rms of the undithered
/// signal, transforms back, discards the out-of-band pad bins, keeps the data bins of X untouched and
/// trims the new idle-bin values into their constraints.
inline CVec generate_dither_icf(std::span<const cplx> X, std::span<const DitherConstraint> constraints,
                                const SystemConfig& cfg) {
    const std::size_t N = X.size();
    if (constraints.size() != N) throw Error(ErrorCode::InvalidLength, "constraint vector length differs from X");
    CVec D(N);
    if (cfg.icf_iterations == 0) return D;
    bool any_free = false;
    for (const auto& c : constraints) any_free = any_free || c.kind != DitherConstraint::Kind::Zero;
    if (!any_free) return D;

    const double threshold = cfg.clip_ratio * std::sqrt(idft(X, cfg.oversample).mean_power);
    CVec S(N);
    for (int it = 0; it < cfg.icf_iterations; ++it) {
        for (std::size_t i = 0; i < N; ++i) S[i] = X[i] + D[i];
        TimeSignal x = idft(S, cfg.oversample);
        for (auto& v : x.samples) {
            const double a = std::abs(v);
            if (a > threshold) v *= threshold / a;
        }
        const CVec filtered = remove_padding(dft(x), N);
        for (std::size_t i = 0; i < N; ++i) D[i] = trim(filtered[i], constraints[i]);
    }
    return D;
}

}  // namespace ofdmim
