// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace sigclass {

namespace {

constexpr std::size_t kHopSize = kFftFrameSize / 2;

const std::array<double, kFftFrameSize>& hamming_window() {
    static const std::array<double, kFftFrameSize> window = [] {
        std::array<double, kFftFrameSize> w{};
        for (std::size_t i = 0; i < kFftFrameSize; ++i) {
            w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(kFftFrameSize - 1));
        }
        return w;
    }();
    return window;
}

std::size_t frame_count(std::size_t len) {
    return (len + kHopSize - 1) / kHopSize;
}

// Windowed frame starting at start, zero-padded past the signal end.
void fill_frame(const Signal& s, std::size_t start, std::vector<double>& frame) {
    const auto& w = hamming_window();
    for (std::size_t i = 0; i < kFftFrameSize; ++i) {
        const std::size_t pos = start + i;
        frame[i] = pos < s.size() ? s[pos] * w[i] : 0.0;
    }
}

} // namespace

std::vector<double> levinson_durbin(const std::vector<double>& autocorr, int order) {
    std::vector<double> a(static_cast<std::size_t>(order), 0.0);
    if (autocorr.size() < static_cast<std::size_t>(order) + 1 || autocorr[0] <= 0.0) {
        return a;
    }
    double error = autocorr[0];
    for (int i = 1; i <= order; ++i) {
        double acc = autocorr[static_cast<std::size_t>(i)];
        for (int j = 1; j < i; ++j) {
            acc -= a[static_cast<std::size_t>(j - 1)] * autocorr[static_cast<std::size_t>(i - j)];
        }
        const double reflection = acc / error;
        std::vector<double> next(a);
        next[static_cast<std::size_t>(i - 1)] = reflection;
        for (int j = 1; j < i; ++j) {
            next[static_cast<std::size_t>(j - 1)] =
                a[static_cast<std::size_t>(j - 1)] -
                reflection * a[static_cast<std::size_t>(i - j - 1)];
        }
        a = std::move(next);
        error *= 1.0 - reflection * reflection;
        if (error <= 0.0) break;
    }
    return a;
}

FeatureVector extract_fft(const Signal& s) {
    const std::size_t frames = frame_count(s.size());
    std::vector<double> mean(kFftFeatures, 0.0);
    std::vector<double> frame(kFftFrameSize);
    std::vector<std::complex<double>> buf(kFftFrameSize);
    for (std::size_t f = 0; f < frames; ++f) {
        fill_frame(s, f * kHopSize, frame);
        for (std::size_t i = 0; i < kFftFrameSize; ++i) buf[i] = {frame[i], 0.0};
        fft::transform(buf, false);
        for (std::size_t k = 0; k < kFftFeatures; ++k) mean[k] += std::abs(buf[k]);
    }
    for (double& v : mean) v /= static_cast<double>(frames);
    return {std::move(mean), FeatureKind::Fft};
}

FeatureVector extract_lpc(const Signal& s) {
    const std::size_t frames = frame_count(s.size());
    std::vector<double> mean(static_cast<std::size_t>(kLpcOrder), 0.0);
    std::vector<double> frame(kFftFrameSize);
    std::vector<double> autocorr(static_cast<std::size_t>(kLpcOrder) + 1);
    for (std::size_t f = 0; f < frames; ++f) {
        fill_frame(s, f * kHopSize, frame);
        for (int lag = 0; lag <= kLpcOrder; ++lag) {
            double sum = 0.0;
            for (std::size_t i = static_cast<std::size_t>(lag); i < kFftFrameSize; ++i) {
                sum += frame[i] * frame[i - static_cast<std::size_t>(lag)];
            }
            autocorr[static_cast<std::size_t>(lag)] = sum;
        }
        const std::vector<double> coeffs = levinson_durbin(autocorr, kLpcOrder);
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += coeffs[i];
    }
    for (double& v : mean) v /= static_cast<double>(frames);
    return {std::move(mean), FeatureKind::Lpc};
}

FeatureVector extract_minmax(const Signal& s) {
    constexpr std::size_t kSide = kMinMaxFeatures / 2;
    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(kMinMaxFeatures, 0.0);
    const std::size_t take = std::min(kSide, sorted.size());
    for (std::size_t i = 0; i < take; ++i) {
        out[i] = sorted[i];                                    // smallest, ascending
        out[kSide + i] = sorted[sorted.size() - take + i];     // largest, ascending
    }
    return {std::move(out), FeatureKind::MinMax};
}

FeatureVector extract(const Signal& s, FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Fft:
            return extract_fft(s);
        case FeatureKind::Lpc:
            return extract_lpc(s);
        case FeatureKind::MinMax:
            return extract_minmax(s);
        case FeatureKind::Hybrid: {
            FeatureVector fft = extract_fft(s);
            FeatureVector lpc = extract_lpc(s);
            fft.values.insert(fft.values.end(), lpc.values.begin(), lpc.values.end());
            fft.extractor = FeatureKind::Hybrid;
            return fft;
        }
    }
    return extract_fft(s);
}

} // namespace sigclass
