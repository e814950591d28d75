// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_PIPELINE_HPP
#define SIGCLASS_PIPELINE_HPP

#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigclass/classify.hpp"
#include "sigclass/config.hpp"
#include "sigclass/corpus.hpp"

namespace sigclass {

// Canonical string naming every setting a feature vector depends on
// (loader n-gram, preparation, preprocessing, extractor, silence threshold).
// Models trained under one fingerprint only accept queries featurized under
// the same one.
std::string featurization_fingerprint(const PipelineConfig& cfg);

// Rebuilds the featurization fields from a fingerprint string; distance and
// clustering keep their defaults. Throws ParseError on malformed input.
PipelineConfig config_from_fingerprint(const std::string& fingerprint);

// load -> prepare -> preprocess -> extract. Deterministic in (bytes, config).
FeatureVector featurize(const Sample& sample, const PipelineConfig& cfg);

// Content-addressed feature store keyed by hash(bytes) + fingerprint.
// Concurrent insertion of the same key is idempotent; a transparent
// optimization, never observable in outputs.
class FeatureCache {
public:
    FeatureVector get_or_compute(const Sample& sample, const PipelineConfig& cfg);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, FeatureVector> entries_;
};

// Featurizes every sample and trains the classifier. Every class in
// `required` must be present; by default all five.
TrainedModel train_pipeline(const std::vector<Sample>& samples, const PipelineConfig& cfg,
                            FeatureCache* cache = nullptr, int jobs = 1,
                            const std::set<ClassLabel>* required = nullptr);

struct BatchResult {
    std::vector<ClassificationResult> results; // input order
    double elapsed_ms = 0.0;                   // wall clock over the classification loop
};

// Classifies every sample against the model; the config fingerprint must
// match the model's. Timing covers featurization plus distance evaluation.
BatchResult classify_batch(const std::vector<Sample>& samples, const TrainedModel& model,
                           const PipelineConfig& cfg, FeatureCache* cache = nullptr,
                           int jobs = 1);

} // namespace sigclass

#endif
