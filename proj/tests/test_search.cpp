// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include <doctest.h>

#include <set>

#include "corpus_gen.hpp"
#include "sigclass/errors.hpp"
#include "sigclass/search.hpp"
#include "testutil.hpp"

using namespace sigclass;

namespace {

bool same_config(const PipelineConfig& a, const PipelineConfig& b) {
    return a.loader.ngram == b.loader.ngram && a.preparation == b.preparation &&
           a.preprocess == b.preprocess && a.feature == b.feature && a.distance == b.distance &&
           a.clustering == b.clustering;
}

SweepRow make_row(int index, double accuracy, double macro_f, double time_ms) {
    SweepRow row;
    row.index = index;
    row.report.total_accuracy = accuracy;
    row.report.macro_f = macro_f;
    row.report.classification_time_ms = time_ms;
    return row;
}

} // namespace

TEST_SUITE("search") {

TEST_CASE("enumeration shape") {
    for (ClusteringKind clustering :
         {ClusteringKind::Mean, ClusteringKind::Median, ClusteringKind::None}) {
        const auto configs = enumerate_configs(clustering);
        CHECK(configs.size() == 864);

        const PipelineConfig& first = configs.front();
        CHECK(first.preparation == PreparationKind::Raw);
        CHECK(first.preprocess == PreprocessKind::Raw);
        CHECK(first.feature == FeatureKind::Fft);
        CHECK(first.distance == DistanceKind::Chebyshev);

        std::set<std::string> keys;
        for (const auto& cfg : configs) {
            CHECK(cfg.loader.ngram == NgramKind::Bigram);
            CHECK(cfg.clustering == clustering);
            CHECK(cfg.distance != DistanceKind::Cosine); // opt-in only
            keys.insert(config_summary(cfg));
        }
        CHECK(keys.size() == 864); // pairwise distinct
    }
}

TEST_CASE("ranking policy") {
    std::vector<SweepRow> rows;
    rows.push_back(make_row(0, 0.5, 0.5, 10.0));
    rows.push_back(make_row(1, 0.9, 0.7, 20.0));
    rows.push_back(make_row(2, 0.9, 0.7, 5.0));
    const auto ranked = rank_rows(rows);
    CHECK(ranked[0].index == 2); // equal accuracy and F, faster wins
    CHECK(ranked[1].index == 1);
    CHECK(ranked[2].index == 0);

    // failed rows sink to the bottom
    std::vector<SweepRow> with_failure;
    with_failure.push_back(make_row(0, 0.2, 0.2, 1.0));
    SweepRow failed = make_row(1, 0.0, 0.0, 0.0);
    failed.ok = false;
    failed.error = "boom";
    with_failure.push_back(failed);
    const auto ranked2 = rank_rows(with_failure);
    CHECK(ranked2.front().index == 0);
    CHECK_FALSE(ranked2.back().ok);

    const auto single = rank_rows({make_row(7, 0.3, 0.3, 1.0)});
    CHECK(single.size() == 1);
    CHECK(single[0].index == 7);

    // permutation: same multiset of indices in and out
    std::set<int> in, out;
    for (const auto& r : rows) in.insert(r.index);
    for (const auto& r : ranked) out.insert(r.index);
    CHECK(in == out);

    CHECK_THROWS_AS(rank_rows({}), EmptyInput);
}

TEST_CASE("sweep over a tiny separable corpus") {
    const auto train_set = corpusgen::disjoint_corpus(3, 80, 160, 71, "tr");
    const auto test_set = corpusgen::disjoint_corpus(2, 80, 160, 72, "te");

    const auto rows = run_sweep(train_set, test_set, ClusteringKind::None, 2);
    REQUIRE(rows.size() == 864);

    const auto configs = enumerate_configs(ClusteringKind::None);
    double best = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].index == static_cast<int>(i));
        CHECK(same_config(rows[i].config, configs[i]));
        if (rows[i].ok) best = std::max(best, rows[i].report.total_accuracy);
    }
    CHECK(best == 1.0); // disjoint alphabets separate perfectly somewhere

    // confirm a perfect row against a direct single-configuration run
    std::size_t perfect = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].ok && rows[i].report.total_accuracy == 1.0) {
            perfect = i;
            break;
        }
    }
    REQUIRE(perfect < rows.size());
    {
        const PipelineConfig cfg = rows[perfect].config;
        const TrainedModel model = train_pipeline(train_set, cfg, nullptr, 2);
        const BatchResult batch = classify_batch(test_set, model, cfg, nullptr, 2);
        for (std::size_t i = 0; i < test_set.size(); ++i) {
            CHECK(batch.results[i].label == *test_set[i].gold_class);
        }
    }

    // a spot-checked row agrees with a direct single-configuration run
    const std::size_t spot = 42;
    REQUIRE(rows[spot].ok);
    const PipelineConfig cfg = rows[spot].config;
    const TrainedModel model = train_pipeline(train_set, cfg, nullptr, 2);
    const BatchResult batch = classify_batch(test_set, model, cfg, nullptr, 2);
    std::vector<ClassLabel> expected, predicted;
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        expected.push_back(*test_set[i].gold_class);
        predicted.push_back(batch.results[i].label);
    }
    const EvaluationReport direct = compute_report(expected, predicted, 0.0);
    CHECK(rows[spot].report.total_accuracy == direct.total_accuracy);
    CHECK(rows[spot].report.matrix.counts == direct.matrix.counts);
}

TEST_CASE("sweep rows are invariant under parallelism") {
    const auto train_set = corpusgen::disjoint_corpus(2, 60, 120, 73, "tr");
    const auto test_set = corpusgen::disjoint_corpus(2, 60, 120, 74, "te");

    const auto serial = run_sweep(train_set, test_set, ClusteringKind::Mean, 1);
    const auto parallel = run_sweep(train_set, test_set, ClusteringKind::Mean, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].ok == parallel[i].ok);
        CHECK(serial[i].report.total_accuracy == parallel[i].report.total_accuracy);
        CHECK(serial[i].report.macro_f == parallel[i].report.macro_f);
        CHECK(serial[i].report.matrix.counts == parallel[i].report.matrix.counts);
    }

    const std::string a = format_sweep_report(serial, true);
    const std::string b = format_sweep_report(parallel, true);
    CHECK(a == b); // byte identical with times omitted
}

TEST_CASE("sweep captures per-row failures") {
    // one-byte documents break the bigram loader for every configuration
    std::vector<Sample> broken_train;
    for (int c = 0; c < kClassCount; ++c) {
        Sample s;
        s.id = "b" + std::to_string(c);
        s.bytes = "x";
        s.gold_class = static_cast<ClassLabel>(c);
        broken_train.push_back(std::move(s));
    }
    const auto test_set = corpusgen::disjoint_corpus(1, 60, 90, 75, "te");
    const auto rows = run_sweep(broken_train, test_set, ClusteringKind::None, 2);
    REQUIRE(rows.size() == 864);
    for (const auto& row : rows) {
        CHECK_FALSE(row.ok);
        CHECK(!row.error.empty());
    }
    // report still renders, flagged failed
    const std::string report = format_sweep_report(rows, true);
    CHECK(report.find("failed(") != std::string::npos);
}

TEST_CASE("case matrix") {
    corpusgen::ContextGenOptions opt;
    opt.train_per_class = 3;
    opt.test_per_class = 2;
    opt.plain_len = 400;
    opt.ctx_len = 400;
    opt.burst_len = 64;
    opt.seed = 76;
    const auto corpus = corpusgen::context_corpus(opt);

    const DatasetProvider provider =
        [&corpus](DescType type, CtxVariant variant,
                  bool train) -> std::optional<std::vector<Sample>> {
        if (type != DescType::Wsdl) return std::nullopt;
        return corpusgen::as_variant(train ? corpus.train : corpus.test, variant);
    };

    std::vector<CaseSpec> cases;
    for (CtxVariant train_v : {CtxVariant::Plain, CtxVariant::PlainPlusContext}) {
        cases.push_back({DescType::Wsdl, train_v, CtxVariant::Plain, ClusteringKind::Mean});
    }
    cases.push_back({DescType::Wadl, CtxVariant::Plain, CtxVariant::Plain, ClusteringKind::Mean});

    const auto results = run_case_matrix(cases, provider, 2);
    REQUIRE(results.size() == 3);
    CHECK(results[0].available);
    CHECK(results[1].available);
    CHECK_FALSE(results[2].available); // wadl dataset missing
    CHECK(results[2].error.find("missing dataset") != std::string::npos);

    const std::string grid = format_case_matrix(results);
    CHECK(grid.find("== wsdl ==") != std::string::npos);
    CHECK(grid.find("missing") != std::string::npos);
}

TEST_CASE("one description type spans 18 cases") {
    // 6 context pairings x 3 clustering options
    const auto train_docs = corpusgen::context_corpus([] {
        corpusgen::ContextGenOptions opt;
        opt.train_per_class = 2;
        opt.test_per_class = 1;
        opt.plain_len = 200;
        opt.ctx_len = 200;
        opt.burst_len = 48;
        opt.seed = 77;
        return opt;
    }());
    const DatasetProvider provider =
        [&train_docs](DescType, CtxVariant variant,
                      bool train) -> std::optional<std::vector<Sample>> {
        return corpusgen::as_variant(train ? train_docs.train : train_docs.test, variant);
    };

    const std::pair<CtxVariant, CtxVariant> pairings[] = {
        {CtxVariant::PlainPlusContext, CtxVariant::PlainPlusContext},
        {CtxVariant::Plain, CtxVariant::Plain},
        {CtxVariant::PlainPlusContext, CtxVariant::Plain},
        {CtxVariant::Plain, CtxVariant::PlainPlusContext},
        {CtxVariant::ContextOnly, CtxVariant::PlainPlusContext},
        {CtxVariant::ContextOnly, CtxVariant::Plain},
    };
    std::vector<CaseSpec> cases;
    for (ClusteringKind clustering :
         {ClusteringKind::Mean, ClusteringKind::Median, ClusteringKind::None}) {
        for (const auto& [train_v, test_v] : pairings) {
            cases.push_back({DescType::Wsdl, train_v, test_v, clustering});
        }
    }
    REQUIRE(cases.size() == 18);

    const auto results = run_case_matrix(cases, provider, 2);
    REQUIRE(results.size() == 18);
    for (const auto& r : results) {
        CHECK(r.available);
        CHECK(r.best_accuracy >= 0.0);
        CHECK(r.best_accuracy <= 1.0);
    }
    // grid renders 3 clustering rows by 6 pairing columns
    const std::string grid = format_case_matrix(results);
    CHECK(grid.find("train:ctx/test:plain") != std::string::npos);
    CHECK(grid.find("mean\t") != std::string::npos);
    CHECK(grid.find("median\t") != std::string::npos);
    CHECK(grid.find("none\t") != std::string::npos);
}

TEST_CASE("case spec parsing") {
    const auto cases = parse_case_specs(
        "# header\n"
        "wsdl\tplainctx\tplain\tnone\n"
        "text\tplain\tplain\tmedian\n");
    REQUIRE(cases.size() == 2);
    CHECK(cases[0].desc_type == DescType::Wsdl);
    CHECK(cases[0].train_variant == CtxVariant::PlainPlusContext);
    CHECK(cases[0].test_variant == CtxVariant::Plain);
    CHECK(cases[0].clustering == ClusteringKind::None);
    CHECK(cases[1].clustering == ClusteringKind::Median);

    CHECK_THROWS_AS(parse_case_specs("wsdl\tplain\tplain\n"), ParseError);
    CHECK_THROWS_AS(parse_case_specs("wsdl\tplain\tplain\tbogus\n"), UnknownLabel);
}

} // TEST_SUITE
