// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include <doctest.h>

#include <random>

#include "corpus_gen.hpp"
#include "sigclass/errors.hpp"
#include "sigclass/pipeline.hpp"
#include "testutil.hpp"

using namespace sigclass;

namespace {

Sample make_sample(std::string id, std::string bytes,
                   std::optional<ClassLabel> label = std::nullopt) {
    Sample s;
    s.id = std::move(id);
    s.bytes = std::move(bytes);
    s.gold_class = label;
    s.source_path = s.id;
    return s;
}

PipelineConfig best_wsdl_config() {
    PipelineConfig cfg;
    cfg.preparation = PreparationKind::Silence;
    cfg.preprocess = PreprocessKind::Endpoint;
    cfg.feature = FeatureKind::Lpc;
    cfg.distance = DistanceKind::Euclidean;
    cfg.clustering = ClusteringKind::None;
    return cfg;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("featurize is deterministic") {
    std::mt19937_64 rng(61);
    std::string bytes(4096, '\0');
    for (auto& b : bytes) b = static_cast<char>(testutil::below(rng, 256));
    const Sample sample = make_sample("s", bytes);
    const PipelineConfig cfg = best_wsdl_config();
    const FeatureVector a = featurize(sample, cfg);
    const FeatureVector b = featurize(sample, cfg);
    CHECK(a.values == b.values); // bitwise
    CHECK(a.values.size() == 20);
}

TEST_CASE("featurize composes the stages") {
    // bytes "AB": one bigram 0x4142 = 16706
    const Sample sample = make_sample("ab", "AB");
    PipelineConfig cfg;
    cfg.preparation = PreparationKind::Raw;
    cfg.preprocess = PreprocessKind::Raw;
    cfg.feature = FeatureKind::MinMax;
    const FeatureVector fv = featurize(sample, cfg);
    const double amplitude = 2.0 * 16706.0 / 65535.0 - 1.0;
    REQUIRE(fv.values.size() == 100);
    CHECK(fv.values[0] == amplitude);
    CHECK(fv.values[50] == amplitude);
    for (std::size_t i = 0; i < 100; ++i) {
        if (i != 0 && i != 50) CHECK(fv.values[i] == 0.0);
    }
}

TEST_CASE("featurize propagates loader errors") {
    const Sample tiny = make_sample("tiny", "x");
    CHECK_THROWS_AS(featurize(tiny, PipelineConfig{}), TooShort);
}

TEST_CASE("fingerprint round trip") {
    PipelineConfig cfg = best_wsdl_config();
    cfg.loader.ngram = NgramKind::Trigram;
    cfg.silence_threshold = 0.0025;
    const std::string fp = featurization_fingerprint(cfg);
    const PipelineConfig back = config_from_fingerprint(fp);
    CHECK(back.loader.ngram == cfg.loader.ngram);
    CHECK(back.preparation == cfg.preparation);
    CHECK(back.preprocess == cfg.preprocess);
    CHECK(back.feature == cfg.feature);
    CHECK(back.silence_threshold == cfg.silence_threshold);
    CHECK(featurization_fingerprint(back) == fp);

    CHECK_THROWS_AS(config_from_fingerprint("garbage"), ParseError);
}

TEST_CASE("train_pipeline builds centroid models") {
    const auto samples = corpusgen::disjoint_corpus(2, 400, 800, 62);
    PipelineConfig cfg;
    cfg.feature = FeatureKind::MinMax;
    cfg.clustering = ClusteringKind::Mean;
    const TrainedModel model = train_pipeline(samples, cfg, nullptr, 2);
    CHECK(model.per_class.size() == 5);
    for (const auto& [label, vectors] : model.per_class) CHECK(vectors.size() == 1);
    CHECK(model.pipeline_fingerprint == featurization_fingerprint(cfg));
}

TEST_CASE("train_pipeline requires class coverage") {
    auto samples = corpusgen::disjoint_corpus(2, 400, 800, 63);
    // drop every financial sample
    std::erase_if(samples, [](const Sample& s) { return s.gold_class == ClassLabel::Financial; });
    CHECK_THROWS_AS(train_pipeline(samples, PipelineConfig{}, nullptr, 2), EmptyClass);

    // an explicit class subset makes the reduced corpus valid
    const std::set<ClassLabel> subset{ClassLabel::Weather, ClassLabel::Social,
                                      ClassLabel::Tourism, ClassLabel::Entertainment};
    const TrainedModel model = train_pipeline(samples, PipelineConfig{}, nullptr, 2, &subset);
    CHECK(model.per_class.size() == 4);

    CHECK_THROWS_AS(train_pipeline({}, PipelineConfig{}), EmptyClass);
    const std::vector<Sample> unlabeled{make_sample("u", "some bytes")};
    CHECK_THROWS_AS(train_pipeline(unlabeled, PipelineConfig{}), EmptyInput);
}

TEST_CASE("persisted models are byte identical across runs") {
    testutil::TempDir dir("persist");
    const auto samples = corpusgen::disjoint_corpus(3, 400, 800, 64);
    const PipelineConfig cfg = best_wsdl_config();

    save_model(train_pipeline(samples, cfg, nullptr, 2), dir.path() / "a.sgcm");
    save_model(train_pipeline(samples, cfg, nullptr, 1), dir.path() / "b.sgcm");
    CHECK(testutil::read_file(dir.path() / "a.sgcm") ==
          testutil::read_file(dir.path() / "b.sgcm"));
}

TEST_CASE("classify_batch: self-classification, order, fingerprint guard") {
    const auto samples = corpusgen::disjoint_corpus(4, 400, 900, 65);
    const PipelineConfig cfg = best_wsdl_config();
    const TrainedModel model = train_pipeline(samples, cfg, nullptr, 2);

    const BatchResult batch = classify_batch(samples, model, cfg, nullptr, 2);
    REQUIRE(batch.results.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(batch.results[i].label == *samples[i].gold_class); // 1-NN self match
        CHECK(batch.results[i].score == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(batch.elapsed_ms >= 0.0);

    PipelineConfig other = cfg;
    other.preprocess = PreprocessKind::Raw;
    CHECK_THROWS_AS(classify_batch(samples, model, other), FingerprintMismatch);
}

TEST_CASE("feature cache is transparent and shared") {
    const auto samples = corpusgen::disjoint_corpus(3, 400, 800, 66);
    const PipelineConfig cfg = best_wsdl_config();

    FeatureCache cache;
    const TrainedModel with_cache = train_pipeline(samples, cfg, &cache, 2);
    const TrainedModel without = train_pipeline(samples, cfg, nullptr, 2);
    CHECK(serialize_model(with_cache) == serialize_model(without));
    CHECK(cache.size() == samples.size());

    // second pass hits the cache, same outputs
    const BatchResult a = classify_batch(samples, with_cache, cfg, &cache, 2);
    const BatchResult b = classify_batch(samples, without, cfg, nullptr, 1);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].label == b.results[i].label);
        CHECK(a.results[i].score == b.results[i].score);
    }
    CHECK(cache.size() == samples.size());
}

TEST_CASE("parallel classification preserves input order") {
    const auto samples = corpusgen::disjoint_corpus(10, 300, 600, 67);
    PipelineConfig cfg;
    cfg.feature = FeatureKind::MinMax;
    cfg.clustering = ClusteringKind::Mean;
    const TrainedModel model = train_pipeline(samples, cfg, nullptr, 4);

    const BatchResult serial = classify_batch(samples, model, cfg, nullptr, 1);
    const BatchResult parallel = classify_batch(samples, model, cfg, nullptr, 4);
    REQUIRE(serial.results.size() == parallel.results.size());
    for (std::size_t i = 0; i < serial.results.size(); ++i) {
        CHECK(serial.results[i].label == parallel.results[i].label);
        CHECK(serial.results[i].score == parallel.results[i].score);
        CHECK(serial.results[i].per_class_best == parallel.results[i].per_class_best);
    }
}

} // TEST_SUITE
