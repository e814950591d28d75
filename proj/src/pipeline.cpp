// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "parallel.hpp"
#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 14695981039346656037ull) {
    for (char c : data) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string_view field(const std::string& fp, std::string_view key) {
    const std::string needle = std::string(key) + "=";
    std::size_t pos = fp.find(needle);
    if (pos != 0) {
        if (pos == std::string::npos || fp[pos - 1] != ';') {
            throw ParseError("fingerprint missing field '" + std::string(key) + "': " + fp);
        }
    }
    pos += needle.size();
    const std::size_t end = fp.find(';', pos);
    return std::string_view(fp).substr(pos, end == std::string::npos ? fp.size() - pos
                                                                     : end - pos);
}

} // namespace

std::string featurization_fingerprint(const PipelineConfig& cfg) {
    std::string fp;
    fp += "ngram=" + std::to_string(static_cast<int>(cfg.loader.ngram));
    fp += ";prep=";
    fp += to_name(cfg.preparation);
    fp += ";preproc=";
    fp += to_name(cfg.preprocess);
    fp += ";fe=";
    fp += to_name(cfg.feature);
    fp += ";sil=" + format_double(cfg.silence_threshold);
    return fp;
}

PipelineConfig config_from_fingerprint(const std::string& fingerprint) {
    PipelineConfig cfg;
    const std::string_view ngram = field(fingerprint, "ngram");
    if (ngram == "1") cfg.loader.ngram = NgramKind::Unigram;
    else if (ngram == "2") cfg.loader.ngram = NgramKind::Bigram;
    else if (ngram == "3") cfg.loader.ngram = NgramKind::Trigram;
    else throw ParseError("fingerprint has invalid ngram: " + fingerprint);
    try {
        cfg.preparation = parse_preparation(field(fingerprint, "prep"));
        cfg.preprocess = parse_preprocess(field(fingerprint, "preproc"));
        cfg.feature = parse_feature(field(fingerprint, "fe"));
    } catch (const UnknownLabel& e) {
        throw ParseError(std::string("fingerprint: ") + e.what());
    }
    cfg.silence_threshold = std::strtod(std::string(field(fingerprint, "sil")).c_str(), nullptr);
    return cfg;
}

FeatureVector featurize(const Sample& sample, const PipelineConfig& cfg) {
    Signal s = load(sample.bytes, cfg.loader);
    s = prepare(s, cfg.preparation, cfg.silence_threshold);
    s = preprocess(s, cfg.preprocess);
    return extract(s, cfg.feature);
}

FeatureVector FeatureCache::get_or_compute(const Sample& sample, const PipelineConfig& cfg) {
    const std::uint64_t key = fnv1a(featurization_fingerprint(cfg), fnv1a(sample.bytes));
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    FeatureVector fv = featurize(sample, cfg);
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.try_emplace(key, std::move(fv)).first->second;
}

std::size_t FeatureCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

TrainedModel train_pipeline(const std::vector<Sample>& samples, const PipelineConfig& cfg,
                            FeatureCache* cache, int jobs,
                            const std::set<ClassLabel>* required) {
    if (samples.empty()) throw EmptyClass("train_pipeline: no samples");

    std::set<ClassLabel> present;
    for (const auto& sample : samples) {
        if (!sample.gold_class) {
            throw EmptyInput("train_pipeline: unlabeled sample " + sample.id);
        }
        present.insert(*sample.gold_class);
    }
    if (required) {
        for (ClassLabel c : *required) {
            if (!present.count(c)) {
                throw EmptyClass("train_pipeline: class " + std::string(to_name(c)) +
                                 " absent from training set");
            }
        }
    } else {
        for (ClassLabel c : kAllClasses) {
            if (!present.count(c)) {
                throw EmptyClass("train_pipeline: class " + std::string(to_name(c)) +
                                 " absent from training set");
            }
        }
    }

    std::vector<std::pair<FeatureVector, ClassLabel>> labeled(samples.size());
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        labeled[i].first = cache ? cache->get_or_compute(samples[i], cfg)
                                 : featurize(samples[i], cfg);
        labeled[i].second = *samples[i].gold_class;
    });

    TrainedModel model = train(labeled, cfg.clustering);
    model.pipeline_fingerprint = featurization_fingerprint(cfg);
    return model;
}

BatchResult classify_batch(const std::vector<Sample>& samples, const TrainedModel& model,
                           const PipelineConfig& cfg, FeatureCache* cache, int jobs) {
    const std::string fp = featurization_fingerprint(cfg);
    if (fp != model.pipeline_fingerprint) {
        throw FingerprintMismatch("model was trained under '" + model.pipeline_fingerprint +
                                  "', queries featurized under '" + fp + "'");
    }

    BatchResult batch;
    batch.results.resize(samples.size());
    const auto start = std::chrono::steady_clock::now();
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        const FeatureVector fv = cache ? cache->get_or_compute(samples[i], cfg)
                                       : featurize(samples[i], cfg);
        batch.results[i] = classify_one(fv.values, model, cfg.distance, cfg.distance_params());
    });
    const auto end = std::chrono::steady_clock::now();
    batch.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return batch;
}

} // namespace sigclass
