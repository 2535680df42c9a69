#pragma once

#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <unordered_map>

#include "ofdmim/core.hpp"

namespace ofdmim::fft {

namespace detail {

// exp(-2*pi*j*t/size) for t < size/2, cached per thread and size.
inline const CVec& twiddles(std::size_t size) {
    thread_local std::unordered_map<std::size_t, CVec> cache;
    auto [it, inserted] = cache.try_emplace(size);
    if (inserted) {
        it->second.resize(size / 2);
        for (std::size_t t = 0; t < size / 2; ++t)
            it->second[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(size));
    }
    return it->second;
}

inline void radix2(std::span<cplx> a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const CVec& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx tw = inverse ? std::conj(w[j * stride]) : w[j * stride];
                const cplx u = a[i + j];
                const cplx v = a[i + j + half] * tw;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

inline void naive(std::span<cplx> a, bool inverse) {
    const std::size_t n = a.size();
    CVec out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t f = 0; f < n; ++f) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t)
            acc += a[t] * std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>((f * t) % n) / static_cast<double>(n));
        out[f] = acc;
    }
    std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace detail

/// Unscaled in-place DFT (inverse = true flips the exponent sign). Radix-2 for power-of-two sizes.
inline void transform(std::span<cplx> a, bool inverse) {
    if (a.size() <= 1) return;
    if (std::has_single_bit(a.size()))
        detail::radix2(a, inverse);
    else
        detail::naive(a, inverse);
}

/// Unitary forward/inverse DFT (1/sqrt(size) both ways).
inline void unitary(std::span<cplx> a, bool inverse) {
    transform(a, inverse);
    const double s = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (auto& v : a) v *= s;
}

}  // namespace ofdmim::fft
