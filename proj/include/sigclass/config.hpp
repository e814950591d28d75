// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_CONFIG_HPP
#define SIGCLASS_CONFIG_HPP

#include <string>
#include <string_view>

#include "sigclass/classify.hpp"
#include "sigclass/features.hpp"
#include "sigclass/signal.hpp"

namespace sigclass {

// One full pipeline choice: loader, preparation, preprocessing, feature
// extractor, distance classifier, clustering, plus the numeric knobs.
struct PipelineConfig {
    LoaderConfig loader;
    PreparationKind preparation = PreparationKind::Raw;
    PreprocessKind preprocess = PreprocessKind::Raw;
    FeatureKind feature = FeatureKind::Fft;
    DistanceKind distance = DistanceKind::Euclidean;
    ClusteringKind clustering = ClusteringKind::None;
    double silence_threshold = kDefaultSilenceThreshold;
    double minkowski_p = kDefaultMinkowskiP;
    double diff_delta = kDefaultDelta;

    DistanceParams distance_params() const {
        DistanceParams p;
        p.minkowski_p = minkowski_p;
        p.delta = diff_delta;
        return p;
    }
};

// Canonical spellings shared by CLI flags and report files.
std::string_view to_name(PreparationKind k);
std::string_view to_name(PreprocessKind k);
std::string_view to_name(FeatureKind k);
std::string_view to_name(DistanceKind k);
std::string_view to_name(ClusteringKind k);

PreparationKind parse_preparation(std::string_view name);
PreprocessKind parse_preprocess(std::string_view name);
FeatureKind parse_feature(std::string_view name);
DistanceKind parse_distance(std::string_view name);
ClusteringKind parse_clustering(std::string_view name);

// Short "prep/preproc/feature/distance/clustering" rendering for reports.
std::string config_summary(const PipelineConfig& cfg);

} // namespace sigclass

#endif
