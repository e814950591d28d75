// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_SIGNAL_HPP
#define SIGCLASS_SIGNAL_HPP

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace sigclass {

// Amplitude sequence produced by the loader; every stage keeps values finite
// and the length at or above 1.
using Signal = std::vector<double>;

enum class NgramKind : int { Unigram = 1, Bigram = 2, Trigram = 3 };

struct LoaderConfig {
    NgramKind ngram = NgramKind::Bigram;
};

enum class PreparationKind { Raw, Noise, Silence, SilenceNoise };

enum class PreprocessKind {
    Raw,
    Normalize,
    LowPass,
    HighPass,
    BandPass,
    BandStop,
    Endpoint,
    NormLowPass,
    NormEndpoint
};

// FFT filters operate on frames of this many samples; the half-spectrum then
// has kSpectrumBins bins.
inline constexpr std::size_t kFftFrameSize = 1024;
inline constexpr std::size_t kSpectrumBins = kFftFrameSize / 2;

inline constexpr double kDefaultSilenceThreshold = 1e-3;

// Sliding n-byte window, stride 1. Each window is read as an unsigned
// big-endian integer v and mapped onto [-1, 1] as 2*v/(256^n - 1) - 1.
// Output length is |bytes| - n + 1. Throws TooShort when |bytes| < n.
Signal load(std::string_view bytes, LoaderConfig cfg);

// Keeps exactly the samples with |amplitude| > threshold. An all-silent
// signal collapses to the single sample [0] so downstream stages stay total.
Signal remove_silence(const Signal& s, double threshold);

// FFT low-pass filter, same definition as low_pass. Kept as a distinct
// preparation-stage operation so prepared+preprocessed compositions that
// apply both remain expressible.
Signal remove_noise(const Signal& s);

Signal prepare(const Signal& s, PreparationKind kind,
               double silence_threshold = kDefaultSilenceThreshold);

// Divides by max|amplitude|; the zero signal is returned unchanged.
Signal normalize(const Signal& s);

// Frame-wise FFT filter: frames of kFftFrameSize samples (tail zero-padded),
// forward transform, coefficients whose half-spectrum index fails keep_bin
// are zeroed (conjugate bins together, so the output stays real), inverse
// transform, frames concatenated and truncated to the input length.
// keep_bin is evaluated for indices 0..kSpectrumBins inclusive (the last one
// is the Nyquist bin).
Signal fft_filter(const Signal& s, const std::function<bool(std::size_t)>& keep_bin);

// Band selections over exact thirds of the half-spectrum.
Signal low_pass(const Signal& s);   // keeps k <  N/3
Signal high_pass(const Signal& s);  // keeps k >= 2N/3
Signal band_pass(const Signal& s);  // keeps N/3 <= k < 2N/3
Signal band_stop(const Signal& s);  // keeps k < N/3 or k >= 2N/3

// First sample, strict interior extrema, last sample. Inputs of length 1 or 2
// are returned unchanged; plateau interiors contribute nothing.
Signal endpoint(const Signal& s);

Signal preprocess(const Signal& s, PreprocessKind kind);

} // namespace sigclass

#endif
