// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_FEATURES_HPP
#define SIGCLASS_FEATURES_HPP

#include <cstddef>
#include <vector>

#include "sigclass/signal.hpp"

namespace sigclass {

enum class FeatureKind { Fft, Lpc, MinMax, Hybrid };

inline constexpr std::size_t kFftFeatures = kSpectrumBins; // 512
inline constexpr int kLpcOrder = 20;
inline constexpr std::size_t kMinMaxFeatures = 100;

constexpr std::size_t feature_length(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Fft: return kFftFeatures;
        case FeatureKind::Lpc: return static_cast<std::size_t>(kLpcOrder);
        case FeatureKind::MinMax: return kMinMaxFeatures;
        case FeatureKind::Hybrid: return kFftFeatures + static_cast<std::size_t>(kLpcOrder);
    }
    return 0;
}

struct FeatureVector {
    std::vector<double> values;
    FeatureKind extractor = FeatureKind::Fft;
};

// Mean magnitude spectrum: 1024-sample frames with 50% overlap (tail
// zero-padded), Hamming window, first 512 magnitude bins averaged per bin
// across frames.
FeatureVector extract_fft(const Signal& s);

// Autocorrelation-method LPC over the same framing as extract_fft: per frame
// the 20 predictor coefficients from Levinson-Durbin, averaged per
// coefficient across frames. Frames with zero lag-0 autocorrelation
// contribute zeros.
FeatureVector extract_lpc(const Signal& s);

// Positions 0..49 hold the 50 smallest amplitudes ascending, 50..99 the 50
// largest ascending; short signals leave the unfilled tail of each half zero.
FeatureVector extract_minmax(const Signal& s);

// Hybrid concatenates extract_fft then extract_lpc (length 532).
FeatureVector extract(const Signal& s, FeatureKind kind);

// Solves the order-p Toeplitz system R a = r for the forward predictor
// coefficients, where autocorr holds lags 0..p. Returns zeros when
// autocorr[0] <= 0; stops early if the prediction error becomes
// non-positive.
std::vector<double> levinson_durbin(const std::vector<double>& autocorr, int order);

} // namespace sigclass

#endif
