// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/config.hpp"

#include "sigclass/errors.hpp"

namespace sigclass {

std::string_view to_name(PreparationKind k) {
    switch (k) {
        case PreparationKind::Raw: return "raw";
        case PreparationKind::Noise: return "noise";
        case PreparationKind::Silence: return "silence";
        case PreparationKind::SilenceNoise: return "silence-noise";
    }
    return "?";
}

std::string_view to_name(PreprocessKind k) {
    switch (k) {
        case PreprocessKind::Raw: return "raw";
        case PreprocessKind::Normalize: return "norm";
        case PreprocessKind::LowPass: return "low";
        case PreprocessKind::HighPass: return "high";
        case PreprocessKind::BandPass: return "band";
        case PreprocessKind::BandStop: return "bandstop";
        case PreprocessKind::Endpoint: return "endp";
        case PreprocessKind::NormLowPass: return "norm-low";
        case PreprocessKind::NormEndpoint: return "norm-endp";
    }
    return "?";
}

std::string_view to_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::Fft: return "fft";
        case FeatureKind::Lpc: return "lpc";
        case FeatureKind::MinMax: return "minmax";
        case FeatureKind::Hybrid: return "hybrid";
    }
    return "?";
}

std::string_view to_name(DistanceKind k) {
    switch (k) {
        case DistanceKind::Chebyshev: return "cheb";
        case DistanceKind::Euclidean: return "eucl";
        case DistanceKind::Minkowski: return "mink";
        case DistanceKind::Mahalanobis: return "maha";
        case DistanceKind::Diff: return "diff";
        case DistanceKind::Hamming: return "hamming";
        case DistanceKind::Cosine: return "cos";
    }
    return "?";
}

std::string_view to_name(ClusteringKind k) {
    switch (k) {
        case ClusteringKind::Mean: return "mean";
        case ClusteringKind::Median: return "median";
        case ClusteringKind::None: return "none";
    }
    return "?";
}

namespace {

[[noreturn]] void bad_name(std::string_view what, std::string_view name) {
    throw UnknownLabel("unknown " + std::string(what) + ": " + std::string(name));
}

} // namespace

PreparationKind parse_preparation(std::string_view name) {
    for (auto k : {PreparationKind::Raw, PreparationKind::Noise, PreparationKind::Silence,
                   PreparationKind::SilenceNoise}) {
        if (to_name(k) == name) return k;
    }
    bad_name("preparation", name);
}

PreprocessKind parse_preprocess(std::string_view name) {
    for (auto k : {PreprocessKind::Raw, PreprocessKind::Normalize, PreprocessKind::LowPass,
                   PreprocessKind::HighPass, PreprocessKind::BandPass, PreprocessKind::BandStop,
                   PreprocessKind::Endpoint, PreprocessKind::NormLowPass,
                   PreprocessKind::NormEndpoint}) {
        if (to_name(k) == name) return k;
    }
    bad_name("preprocessing", name);
}

FeatureKind parse_feature(std::string_view name) {
    for (auto k : {FeatureKind::Fft, FeatureKind::Lpc, FeatureKind::MinMax, FeatureKind::Hybrid}) {
        if (to_name(k) == name) return k;
    }
    bad_name("feature extractor", name);
}

DistanceKind parse_distance(std::string_view name) {
    for (auto k : {DistanceKind::Chebyshev, DistanceKind::Euclidean, DistanceKind::Minkowski,
                   DistanceKind::Mahalanobis, DistanceKind::Diff, DistanceKind::Hamming,
                   DistanceKind::Cosine}) {
        if (to_name(k) == name) return k;
    }
    bad_name("distance", name);
}

ClusteringKind parse_clustering(std::string_view name) {
    for (auto k : {ClusteringKind::Mean, ClusteringKind::Median, ClusteringKind::None}) {
        if (to_name(k) == name) return k;
    }
    bad_name("clustering", name);
}

std::string config_summary(const PipelineConfig& cfg) {
    std::string out;
    out += to_name(cfg.preparation);
    out += '/';
    out += to_name(cfg.preprocess);
    out += '/';
    out += to_name(cfg.feature);
    out += '/';
    out += to_name(cfg.distance);
    out += '/';
    out += to_name(cfg.clustering);
    return out;
}

} // namespace sigclass
