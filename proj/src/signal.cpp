// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/signal.hpp"

#include <cmath>

#include "fft.hpp"
#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

constexpr double kLowCut = static_cast<double>(kSpectrumBins) / 3.0;
constexpr double kHighCut = 2.0 * static_cast<double>(kSpectrumBins) / 3.0;

bool keep_low(std::size_t k) { return static_cast<double>(k) < kLowCut; }
bool keep_high(std::size_t k) { return static_cast<double>(k) >= kHighCut; }
bool keep_band(std::size_t k) { return !keep_low(k) && !keep_high(k); }
bool keep_stop(std::size_t k) { return keep_low(k) || keep_high(k); }

} // namespace

Signal load(std::string_view bytes, LoaderConfig cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.ngram);
    if (bytes.size() < n) {
        throw TooShort("loader needs at least " + std::to_string(n) + " bytes, got " +
                       std::to_string(bytes.size()));
    }
    // 256^n - 1
    const double denom = static_cast<double>((std::uint64_t{1} << (8 * n)) - 1);
    Signal out(bytes.size() - n + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < n; ++j) {
            v = (v << 8) | static_cast<std::uint8_t>(bytes[i + j]);
        }
        out[i] = 2.0 * static_cast<double>(v) / denom - 1.0;
    }
    return out;
}

Signal remove_silence(const Signal& s, double threshold) {
    Signal out;
    out.reserve(s.size());
    for (double a : s) {
        if (std::abs(a) > threshold) out.push_back(a);
    }
    if (out.empty()) out.push_back(0.0);
    return out;
}

Signal remove_noise(const Signal& s) {
    return low_pass(s);
}

Signal prepare(const Signal& s, PreparationKind kind, double silence_threshold) {
    switch (kind) {
        case PreparationKind::Raw:
            return s;
        case PreparationKind::Noise:
            return remove_noise(s);
        case PreparationKind::Silence:
            return remove_silence(s, silence_threshold);
        case PreparationKind::SilenceNoise:
            // Noise first: low-pass filtering can open new silence gaps.
            return remove_silence(remove_noise(s), silence_threshold);
    }
    return s;
}

Signal normalize(const Signal& s) {
    double peak = 0.0;
    for (double a : s) peak = std::max(peak, std::abs(a));
    if (peak == 0.0) return s;
    Signal out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] / peak;
    return out;
}

Signal fft_filter(const Signal& s, const std::function<bool(std::size_t)>& keep_bin) {
    Signal out;
    out.reserve(s.size());
    std::vector<std::complex<double>> frame(kFftFrameSize);
    for (std::size_t start = 0; start < s.size(); start += kFftFrameSize) {
        const std::size_t have = std::min(kFftFrameSize, s.size() - start);
        for (std::size_t i = 0; i < kFftFrameSize; ++i) {
            frame[i] = i < have ? std::complex<double>(s[start + i], 0.0)
                                : std::complex<double>(0.0, 0.0);
        }
        fft::transform(frame, false);
        for (std::size_t j = 0; j < kFftFrameSize; ++j) {
            const std::size_t k = std::min(j, kFftFrameSize - j);
            if (!keep_bin(k)) frame[j] = {0.0, 0.0};
        }
        fft::transform(frame, true);
        for (std::size_t i = 0; i < have; ++i) out.push_back(frame[i].real());
    }
    return out;
}

Signal low_pass(const Signal& s) { return fft_filter(s, keep_low); }
Signal high_pass(const Signal& s) { return fft_filter(s, keep_high); }
Signal band_pass(const Signal& s) { return fft_filter(s, keep_band); }
Signal band_stop(const Signal& s) { return fft_filter(s, keep_stop); }

Signal endpoint(const Signal& s) {
    if (s.size() <= 2) return s;
    Signal out;
    out.push_back(s.front());
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if ((s[i] - s[i - 1]) * (s[i + 1] - s[i]) < 0.0) out.push_back(s[i]);
    }
    out.push_back(s.back());
    return out;
}

Signal preprocess(const Signal& s, PreprocessKind kind) {
    switch (kind) {
        case PreprocessKind::Raw:
            return s;
        case PreprocessKind::Normalize:
            return normalize(s);
        case PreprocessKind::LowPass:
            return low_pass(s);
        case PreprocessKind::HighPass:
            return high_pass(s);
        case PreprocessKind::BandPass:
            return band_pass(s);
        case PreprocessKind::BandStop:
            return band_stop(s);
        case PreprocessKind::Endpoint:
            return endpoint(s);
        case PreprocessKind::NormLowPass:
            return low_pass(normalize(s));
        case PreprocessKind::NormEndpoint:
            return endpoint(normalize(s));
    }
    return s;
}

} // namespace sigclass
