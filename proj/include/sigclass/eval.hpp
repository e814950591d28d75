// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_EVAL_HPP
#define SIGCLASS_EVAL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigclass/pipeline.hpp"

namespace sigclass {

// Rows are expected classes, columns predicted classes.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kClassCount>, kClassCount> counts{};

    std::uint64_t total() const;
    std::uint64_t trace() const;
    std::uint64_t row_sum(ClassLabel c) const;
    std::uint64_t col_sum(ClassLabel c) const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

struct EvaluationReport {
    ConfusionMatrix matrix;
    double total_accuracy = 0.0;
    std::map<ClassLabel, ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f = 0.0;
    double classification_time_ms = 0.0;
};

// Per class c: precision = n_c/n_s (0 when n_s = 0), recall = n_c/n_t,
// F = 2PR/(P+R) (0 when P+R = 0). Macro values average the per-class values
// over classes with n_t > 0; macro F averages per-class F values rather than
// taking the harmonic mean of the macro P and R.
EvaluationReport compute_report(const std::vector<ClassLabel>& expected,
                                const std::vector<ClassLabel>& predicted,
                                double elapsed_ms);

// Seed-deterministic stratified fold assignment: per class, a shuffled deal
// into folds 0..k-1. Returns the fold index of every sample. Throws InvalidK
// when k < 2 and TooFewSamples when any class has fewer than k samples.
std::vector<int> stratified_folds(const std::vector<ClassLabel>& labels, int k,
                                  std::uint64_t seed);

// k-fold cross-validation of one pipeline configuration: per fold, train on
// the rest and classify the fold. The returned report carries the summed
// confusion matrix, fold-averaged metrics, and summed classification time.
EvaluationReport cross_validate(const std::vector<Sample>& samples, int k, std::uint64_t seed,
                                const PipelineConfig& cfg, int jobs = 1);

// Train on A / test on B and the swap, averaged the same way.
EvaluationReport two_fold_swap(const std::vector<Sample>& a, const std::vector<Sample>& b,
                               const PipelineConfig& cfg, int jobs = 1);

// Key-value rendering with the confusion matrix, and the fixed-column
// machine-readable row (config, accuracy, macroP, macroR, macroF, timeMs).
std::string format_report_text(const EvaluationReport& report, bool omit_times = false);
std::string format_report_tsv_row(const std::string& config, const EvaluationReport& report,
                                  bool omit_times = false);

} // namespace sigclass

#endif
