// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "parallel.hpp"
#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

constexpr PreparationKind kPreparations[] = {PreparationKind::Raw, PreparationKind::Noise,
                                             PreparationKind::Silence,
                                             PreparationKind::SilenceNoise};
constexpr PreprocessKind kPreprocessings[] = {
    PreprocessKind::Raw,      PreprocessKind::Normalize, PreprocessKind::LowPass,
    PreprocessKind::HighPass, PreprocessKind::BandPass,  PreprocessKind::BandStop,
    PreprocessKind::Endpoint, PreprocessKind::NormLowPass, PreprocessKind::NormEndpoint};
constexpr FeatureKind kFeatures[] = {FeatureKind::Fft, FeatureKind::Lpc, FeatureKind::MinMax,
                                     FeatureKind::Hybrid};
// The canonical six-classifier sweep set; Cosine is opt-in only.
constexpr DistanceKind kSweepDistances[] = {DistanceKind::Chebyshev, DistanceKind::Euclidean,
                                            DistanceKind::Minkowski, DistanceKind::Mahalanobis,
                                            DistanceKind::Diff, DistanceKind::Hamming};

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Per-document features of one (preparation, preprocessing) prefix, for all
// base extractors. Hybrid vectors are concatenations of fft and lpc.
struct PrefixFeatures {
    std::vector<FeatureVector> fft;
    std::vector<FeatureVector> lpc;
    std::vector<FeatureVector> minmax;

    FeatureVector get(FeatureKind kind, std::size_t i) const {
        switch (kind) {
            case FeatureKind::Fft: return fft[i];
            case FeatureKind::Lpc: return lpc[i];
            case FeatureKind::MinMax: return minmax[i];
            case FeatureKind::Hybrid: {
                FeatureVector v = fft[i];
                v.values.insert(v.values.end(), lpc[i].values.begin(), lpc[i].values.end());
                v.extractor = FeatureKind::Hybrid;
                return v;
            }
        }
        return fft[i];
    }
};

PrefixFeatures featurize_prefix(const std::vector<Sample>& samples, const PipelineConfig& base,
                                int jobs) {
    PrefixFeatures out;
    out.fft.resize(samples.size());
    out.lpc.resize(samples.size());
    out.minmax.resize(samples.size());
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        Signal s = load(samples[i].bytes, base.loader);
        s = prepare(s, base.preparation, base.silence_threshold);
        s = preprocess(s, base.preprocess);
        out.fft[i] = extract_fft(s);
        out.lpc[i] = extract_lpc(s);
        out.minmax[i] = extract_minmax(s);
    });
    return out;
}

} // namespace

std::vector<PipelineConfig> enumerate_configs(ClusteringKind clustering) {
    std::vector<PipelineConfig> configs;
    configs.reserve(864);
    for (PreparationKind prep : kPreparations) {
        for (PreprocessKind preproc : kPreprocessings) {
            for (FeatureKind feature : kFeatures) {
                for (DistanceKind dist : kSweepDistances) {
                    PipelineConfig cfg;
                    cfg.loader.ngram = NgramKind::Bigram;
                    cfg.preparation = prep;
                    cfg.preprocess = preproc;
                    cfg.feature = feature;
                    cfg.distance = dist;
                    cfg.clustering = clustering;
                    configs.push_back(cfg);
                }
            }
        }
    }
    return configs;
}

std::vector<SweepRow> run_sweep(const std::vector<Sample>& train_set,
                                const std::vector<Sample>& test_set,
                                ClusteringKind clustering, int jobs) {
    const std::vector<PipelineConfig> configs = enumerate_configs(clustering);
    std::vector<SweepRow> rows(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        rows[i].index = static_cast<int>(i);
        rows[i].config = configs[i];
    }

    std::vector<ClassLabel> expected;
    expected.reserve(test_set.size());
    for (const auto& s : test_set) {
        if (!s.gold_class) throw EmptyInput("run_sweep: unlabeled test sample " + s.id);
        expected.push_back(*s.gold_class);
    }
    std::vector<ClassLabel> train_labels;
    train_labels.reserve(train_set.size());
    for (const auto& s : train_set) {
        if (!s.gold_class) throw EmptyInput("run_sweep: unlabeled training sample " + s.id);
        train_labels.push_back(*s.gold_class);
    }

    constexpr std::size_t kFeatureCount = std::size(kFeatures);
    constexpr std::size_t kDistanceCount = std::size(kSweepDistances);
    std::size_t row_index = 0;

    // One featurization pass per (preparation, preprocessing) prefix; the
    // 4 x 6 = 24 rows under it reuse those vectors.
    for (PreparationKind prep : kPreparations) {
        for (PreprocessKind preproc : kPreprocessings) {
            PipelineConfig base;
            base.loader.ngram = NgramKind::Bigram;
            base.preparation = prep;
            base.preprocess = preproc;
            base.clustering = clustering;

            const std::size_t group_start = row_index;
            row_index += kFeatureCount * kDistanceCount;

            PrefixFeatures train_features;
            PrefixFeatures test_features;
            try {
                train_features = featurize_prefix(train_set, base, jobs);
                test_features = featurize_prefix(test_set, base, jobs);
            } catch (const std::exception& e) {
                for (std::size_t r = group_start; r < row_index; ++r) {
                    rows[r].ok = false;
                    rows[r].error = e.what();
                }
                continue;
            }

            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const std::size_t feature_start = group_start + f * kDistanceCount;
                TrainedModel model;
                try {
                    std::vector<std::pair<FeatureVector, ClassLabel>> labeled;
                    labeled.reserve(train_set.size());
                    for (std::size_t i = 0; i < train_set.size(); ++i) {
                        labeled.emplace_back(train_features.get(kFeatures[f], i),
                                             train_labels[i]);
                    }
                    model = train(labeled, clustering);
                } catch (const std::exception& e) {
                    for (std::size_t d = 0; d < kDistanceCount; ++d) {
                        rows[feature_start + d].ok = false;
                        rows[feature_start + d].error = e.what();
                    }
                    continue;
                }

                std::vector<FeatureVector> queries(test_set.size());
                for (std::size_t i = 0; i < test_set.size(); ++i) {
                    queries[i] = test_features.get(kFeatures[f], i);
                }

                for (std::size_t d = 0; d < kDistanceCount; ++d) {
                    SweepRow& row = rows[feature_start + d];
                    try {
                        std::vector<ClassLabel> predicted(test_set.size());
                        const auto start = std::chrono::steady_clock::now();
                        parallel_for(test_set.size(), jobs, [&](std::size_t i) {
                            predicted[i] = classify_one(queries[i].values, model,
                                                        row.config.distance,
                                                        row.config.distance_params())
                                               .label;
                        });
                        const auto end = std::chrono::steady_clock::now();
                        row.report = compute_report(
                            expected, predicted,
                            std::chrono::duration<double, std::milli>(end - start).count());
                    } catch (const std::exception& e) {
                        row.ok = false;
                        row.error = e.what();
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<SweepRow> rank_rows(std::vector<SweepRow> rows) {
    if (rows.empty()) throw EmptyInput("rank_rows: no rows");
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.ok != b.ok) return a.ok;
        if (a.report.total_accuracy != b.report.total_accuracy) {
            return a.report.total_accuracy > b.report.total_accuracy;
        }
        if (a.report.macro_f != b.report.macro_f) return a.report.macro_f > b.report.macro_f;
        if (a.report.classification_time_ms != b.report.classification_time_ms) {
            return a.report.classification_time_ms < b.report.classification_time_ms;
        }
        return a.index < b.index;
    });
    return rows;
}

std::vector<CaseResult> run_case_matrix(const std::vector<CaseSpec>& cases,
                                        const DatasetProvider& datasets, int jobs) {
    std::vector<CaseResult> results;
    results.reserve(cases.size());
    for (const CaseSpec& spec : cases) {
        CaseResult result;
        result.spec = spec;
        const auto train_set = datasets(spec.desc_type, spec.train_variant, true);
        const auto test_set = datasets(spec.desc_type, spec.test_variant, false);
        if (!train_set || !test_set) {
            result.error = std::string("missing dataset: ") +
                           std::string(to_name(spec.desc_type)) + "/" +
                           std::string(to_name(!train_set ? spec.train_variant
                                                          : spec.test_variant));
            results.push_back(std::move(result));
            continue;
        }
        try {
            std::vector<SweepRow> ranked =
                rank_rows(run_sweep(*train_set, *test_set, spec.clustering, jobs));
            if (ranked.empty() || !ranked.front().ok) {
                result.error = ranked.empty() ? "empty sweep" : ranked.front().error;
            } else {
                const SweepRow& best = ranked.front();
                result.available = true;
                result.best_accuracy = best.report.total_accuracy;
                result.best_index = best.index;
                result.best_config = best.config;
                result.best_time_ms = best.report.classification_time_ms;
            }
        } catch (const std::exception& e) {
            result.error = e.what();
        }
        results.push_back(std::move(result));
    }
    return results;
}

std::string format_sweep_report(const std::vector<SweepRow>& rows, bool omit_times) {
    std::string out =
        "index\tprep\tpreproc\tfeature\tdistance\tclustering\taccuracy\tmacroP\tmacroR\tmacroF\t"
        "timeMs\tstatus\n";
    for (const SweepRow& row : rows) {
        out += std::to_string(row.index);
        out += '\t';
        out += to_name(row.config.preparation);
        out += '\t';
        out += to_name(row.config.preprocess);
        out += '\t';
        out += to_name(row.config.feature);
        out += '\t';
        out += to_name(row.config.distance);
        out += '\t';
        out += to_name(row.config.clustering);
        out += '\t';
        if (row.ok) {
            out += format_metric(row.report.total_accuracy);
            out += '\t';
            out += format_metric(row.report.macro_precision);
            out += '\t';
            out += format_metric(row.report.macro_recall);
            out += '\t';
            out += format_metric(row.report.macro_f);
            out += '\t';
            if (omit_times) {
                out += '-';
            } else {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3f", row.report.classification_time_ms);
                out += buf;
            }
            out += "\tok";
        } else {
            std::string err = row.error;
            for (char& c : err) {
                if (c == '\t' || c == '\n') c = ' ';
            }
            out += "-\t-\t-\t-\t-\tfailed(" + err + ")";
        }
        out += '\n';
    }
    return out;
}

std::string format_case_matrix(const std::vector<CaseResult>& results) {
    // Column order: context pairings in first-seen order per description type.
    std::string out;
    std::vector<DescType> types;
    for (const auto& r : results) {
        if (std::find(types.begin(), types.end(), r.spec.desc_type) == types.end()) {
            types.push_back(r.spec.desc_type);
        }
    }
    for (DescType type : types) {
        std::vector<std::pair<CtxVariant, CtxVariant>> pairings;
        std::vector<ClusteringKind> clusterings;
        for (const auto& r : results) {
            if (r.spec.desc_type != type) continue;
            const auto pairing = std::make_pair(r.spec.train_variant, r.spec.test_variant);
            if (std::find(pairings.begin(), pairings.end(), pairing) == pairings.end()) {
                pairings.push_back(pairing);
            }
            if (std::find(clusterings.begin(), clusterings.end(), r.spec.clustering) ==
                clusterings.end()) {
                clusterings.push_back(r.spec.clustering);
            }
        }

        out += "== ";
        out += to_name(type);
        out += " ==\nclustering";
        for (const auto& [train_v, test_v] : pairings) {
            out += "\ttrain:" + std::string(to_name(train_v)) +
                   "/test:" + std::string(to_name(test_v));
        }
        out += '\n';
        for (ClusteringKind clustering : clusterings) {
            out += to_name(clustering);
            for (const auto& [train_v, test_v] : pairings) {
                const CaseResult* cell = nullptr;
                for (const auto& r : results) {
                    if (r.spec.desc_type == type && r.spec.clustering == clustering &&
                        r.spec.train_variant == train_v && r.spec.test_variant == test_v) {
                        cell = &r;
                        break;
                    }
                }
                out += '\t';
                if (!cell) {
                    out += '-';
                } else if (!cell->available) {
                    out += "missing";
                } else {
                    out += format_metric(cell->best_accuracy);
                }
            }
            out += '\n';
        }
    }

    out += "# best configurations\n";
    for (const auto& r : results) {
        out += std::string(to_name(r.spec.desc_type)) + "\t" +
               std::string(to_name(r.spec.train_variant)) + "\t" +
               std::string(to_name(r.spec.test_variant)) + "\t" +
               std::string(to_name(r.spec.clustering)) + "\t";
        if (r.available) {
            out += std::to_string(r.best_index) + "\t" + config_summary(r.best_config) + "\t" +
                   format_metric(r.best_accuracy);
        } else {
            out += "missing\t" + r.error;
        }
        out += '\n';
    }
    return out;
}

std::vector<CaseSpec> parse_case_specs(std::string_view text) {
    std::vector<CaseSpec> cases;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? text.size() - pos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t tab = line.find('\t', start);
            if (tab == std::string_view::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 4) {
            throw ParseError("case line " + std::to_string(line_no) +
                             ": expected 4 tab-separated fields");
        }
        CaseSpec spec;
        try {
            spec.desc_type = parse_desc_type(fields[0]);
            spec.train_variant = parse_ctx_variant(fields[1]);
            spec.test_variant = parse_ctx_variant(fields[2]);
            spec.clustering = parse_clustering(fields[3]);
        } catch (const UnknownLabel& e) {
            throw UnknownLabel("case line " + std::to_string(line_no) + ": " + e.what());
        }
        cases.push_back(spec);
    }
    return cases;
}

} // namespace sigclass
