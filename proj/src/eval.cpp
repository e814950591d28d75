// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

// Unbiased bounded draw; mt19937_64 output is fixed by the standard, so fold
// assignments reproduce across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[bounded(rng, i)]);
    }
}

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string format_time(double ms, bool omit) {
    if (omit) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

// Fold-averaged aggregation: summed matrix and time, averaged metrics.
// Per-class metrics average over the folds where the class was expected.
EvaluationReport aggregate(const std::vector<EvaluationReport>& folds) {
    EvaluationReport out;
    std::map<ClassLabel, int> class_folds;
    for (const auto& fold : folds) {
        for (int r = 0; r < kClassCount; ++r) {
            for (int c = 0; c < kClassCount; ++c) {
                out.matrix.counts[r][c] += fold.matrix.counts[r][c];
            }
        }
        out.total_accuracy += fold.total_accuracy;
        out.macro_precision += fold.macro_precision;
        out.macro_recall += fold.macro_recall;
        out.macro_f += fold.macro_f;
        out.classification_time_ms += fold.classification_time_ms;
        for (const auto& [label, metrics] : fold.per_class) {
            if (fold.matrix.row_sum(label) == 0) continue;
            auto& acc = out.per_class[label];
            acc.precision += metrics.precision;
            acc.recall += metrics.recall;
            acc.f_measure += metrics.f_measure;
            ++class_folds[label];
        }
    }
    const double n = static_cast<double>(folds.size());
    out.total_accuracy /= n;
    out.macro_precision /= n;
    out.macro_recall /= n;
    out.macro_f /= n;
    for (auto& [label, metrics] : out.per_class) {
        const double f = static_cast<double>(class_folds[label]);
        metrics.precision /= f;
        metrics.recall /= f;
        metrics.f_measure /= f;
    }
    return out;
}

EvaluationReport evaluate_split(const std::vector<Sample>& train_set,
                                const std::vector<Sample>& test_set,
                                const PipelineConfig& cfg, int jobs,
                                const std::set<ClassLabel>& required) {
    TrainedModel model = train_pipeline(train_set, cfg, nullptr, jobs, &required);
    BatchResult batch = classify_batch(test_set, model, cfg, nullptr, jobs);
    std::vector<ClassLabel> expected;
    std::vector<ClassLabel> predicted;
    expected.reserve(test_set.size());
    predicted.reserve(test_set.size());
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        if (!test_set[i].gold_class) {
            throw EmptyInput("evaluation: unlabeled sample " + test_set[i].id);
        }
        expected.push_back(*test_set[i].gold_class);
        predicted.push_back(batch.results[i].label);
    }
    return compute_report(expected, predicted, batch.elapsed_ms);
}

std::set<ClassLabel> classes_of(const std::vector<Sample>& samples) {
    std::set<ClassLabel> out;
    for (const auto& s : samples) {
        if (!s.gold_class) throw EmptyInput("unlabeled sample " + s.id);
        out.insert(*s.gold_class);
    }
    return out;
}

} // namespace

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts) {
        for (std::uint64_t v : row) sum += v;
    }
    return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t sum = 0;
    for (int i = 0; i < kClassCount; ++i) sum += counts[i][i];
    return sum;
}

std::uint64_t ConfusionMatrix::row_sum(ClassLabel c) const {
    std::uint64_t sum = 0;
    for (std::uint64_t v : counts[static_cast<std::size_t>(c)]) sum += v;
    return sum;
}

std::uint64_t ConfusionMatrix::col_sum(ClassLabel c) const {
    std::uint64_t sum = 0;
    for (int r = 0; r < kClassCount; ++r) sum += counts[r][static_cast<std::size_t>(c)];
    return sum;
}

EvaluationReport compute_report(const std::vector<ClassLabel>& expected,
                                const std::vector<ClassLabel>& predicted,
                                double elapsed_ms) {
    if (expected.empty()) throw EmptyInput("compute_report: empty input");
    if (expected.size() != predicted.size()) {
        throw LengthMismatch("compute_report: " + std::to_string(expected.size()) +
                             " expected vs " + std::to_string(predicted.size()) + " predicted");
    }

    EvaluationReport report;
    report.classification_time_ms = elapsed_ms;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        report.matrix.counts[static_cast<std::size_t>(expected[i])]
                            [static_cast<std::size_t>(predicted[i])] += 1;
    }

    report.total_accuracy = static_cast<double>(report.matrix.trace()) /
                            static_cast<double>(report.matrix.total());

    int scored_classes = 0;
    for (ClassLabel c : kAllClasses) {
        const std::uint64_t n_t = report.matrix.row_sum(c);
        const std::uint64_t n_s = report.matrix.col_sum(c);
        const std::uint64_t n_c =
            report.matrix.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        ClassMetrics m;
        m.precision = n_s > 0 ? static_cast<double>(n_c) / static_cast<double>(n_s) : 0.0;
        m.recall = n_t > 0 ? static_cast<double>(n_c) / static_cast<double>(n_t) : 0.0;
        m.f_measure = (m.precision + m.recall) > 0.0
                          ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                          : 0.0;
        report.per_class.emplace(c, m);
        if (n_t > 0) {
            report.macro_precision += m.precision;
            report.macro_recall += m.recall;
            report.macro_f += m.f_measure;
            ++scored_classes;
        }
    }
    if (scored_classes > 0) {
        report.macro_precision /= scored_classes;
        report.macro_recall /= scored_classes;
        report.macro_f /= scored_classes;
    }
    return report;
}

std::vector<int> stratified_folds(const std::vector<ClassLabel>& labels, int k,
                                  std::uint64_t seed) {
    if (k < 2) throw InvalidK("k must be at least 2, got " + std::to_string(k));

    std::map<ClassLabel, std::vector<std::size_t>> per_class;
    for (std::size_t i = 0; i < labels.size(); ++i) per_class[labels[i]].push_back(i);
    for (const auto& [label, indices] : per_class) {
        if (indices.size() < static_cast<std::size_t>(k)) {
            throw TooFewSamples("class " + std::string(to_name(label)) + " has " +
                                std::to_string(indices.size()) + " samples, needs at least " +
                                std::to_string(k));
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(labels.size(), 0);
    for (auto& [label, indices] : per_class) {
        seeded_shuffle(indices, rng);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            fold_of[indices[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
        }
    }
    return fold_of;
}

EvaluationReport cross_validate(const std::vector<Sample>& samples, int k, std::uint64_t seed,
                                const PipelineConfig& cfg, int jobs) {
    std::vector<ClassLabel> labels;
    labels.reserve(samples.size());
    for (const auto& s : samples) {
        if (!s.gold_class) throw EmptyInput("cross_validate: unlabeled sample " + s.id);
        labels.push_back(*s.gold_class);
    }
    const std::vector<int> fold_of = stratified_folds(labels, k, seed);
    const std::set<ClassLabel> required = classes_of(samples);

    std::vector<EvaluationReport> fold_reports;
    fold_reports.reserve(static_cast<std::size_t>(k));
    for (int fold = 0; fold < k; ++fold) {
        std::vector<Sample> train_set;
        std::vector<Sample> test_set;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            (fold_of[i] == fold ? test_set : train_set).push_back(samples[i]);
        }
        fold_reports.push_back(evaluate_split(train_set, test_set, cfg, jobs, required));
    }
    return aggregate(fold_reports);
}

EvaluationReport two_fold_swap(const std::vector<Sample>& a, const std::vector<Sample>& b,
                               const PipelineConfig& cfg, int jobs) {
    if (a.empty() || b.empty()) throw EmptyInput("two_fold_swap: empty dataset");
    std::set<ClassLabel> required = classes_of(a);
    for (ClassLabel c : classes_of(b)) required.insert(c);

    std::vector<EvaluationReport> halves;
    halves.push_back(evaluate_split(a, b, cfg, jobs, required));
    halves.push_back(evaluate_split(b, a, cfg, jobs, required));
    return aggregate(halves);
}

std::string format_report_text(const EvaluationReport& report, bool omit_times) {
    std::string out;
    out += "accuracy: " + format_metric(report.total_accuracy) + "\n";
    out += "macroPrecision: " + format_metric(report.macro_precision) + "\n";
    out += "macroRecall: " + format_metric(report.macro_recall) + "\n";
    out += "macroF: " + format_metric(report.macro_f) + "\n";
    out += "timeMs: " + format_time(report.classification_time_ms, omit_times) + "\n";
    for (const auto& [label, m] : report.per_class) {
        const std::string name(to_name(label));
        out += "class." + name + ".precision: " + format_metric(m.precision) + "\n";
        out += "class." + name + ".recall: " + format_metric(m.recall) + "\n";
        out += "class." + name + ".f: " + format_metric(m.f_measure) + "\n";
    }
    for (ClassLabel c : kAllClasses) {
        out += "matrix." + std::string(to_name(c)) + ":";
        for (std::uint64_t v : report.matrix.counts[static_cast<std::size_t>(c)]) {
            out += " " + std::to_string(v);
        }
        out += "\n";
    }
    return out;
}

std::string format_report_tsv_row(const std::string& config, const EvaluationReport& report,
                                  bool omit_times) {
    std::string out = config;
    out += '\t';
    out += format_metric(report.total_accuracy);
    out += '\t';
    out += format_metric(report.macro_precision);
    out += '\t';
    out += format_metric(report.macro_recall);
    out += '\t';
    out += format_metric(report.macro_f);
    out += '\t';
    out += format_time(report.classification_time_ms, omit_times);
    return out;
}

} // namespace sigclass
