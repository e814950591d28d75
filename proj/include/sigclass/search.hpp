// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_SEARCH_HPP
#define SIGCLASS_SEARCH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigclass/eval.hpp"

namespace sigclass {

struct SweepRow {
    int index = 0; // position in enumeration order
    PipelineConfig config;
    EvaluationReport report;
    bool ok = true;
    std::string error;
};

// The canonical lattice: 4 preparations x 9 preprocessings x 4 feature
// extractors x 6 distance classifiers = 864 configurations, in lexicographic
// order, loader fixed to bigrams, clustering as given. Cosine stays outside
// the canonical sweep set.
std::vector<PipelineConfig> enumerate_configs(ClusteringKind clustering);

// Evaluates every enumerated configuration on the train/test pair. A
// configuration that fails yields a row flagged failed with the error
// recorded; the sweep itself never aborts. Row order equals enumeration
// order for any parallelism.
std::vector<SweepRow> run_sweep(const std::vector<Sample>& train_set,
                                const std::vector<Sample>& test_set,
                                ClusteringKind clustering, int jobs = 1);

// Default ranking policy: successful rows first, then accuracy descending,
// macro F descending, classification time ascending, enumeration index
// ascending. Total and deterministic.
std::vector<SweepRow> rank_rows(std::vector<SweepRow> rows);

struct CaseSpec {
    DescType desc_type = DescType::Wsdl;
    CtxVariant train_variant = CtxVariant::Plain;
    CtxVariant test_variant = CtxVariant::Plain;
    ClusteringKind clustering = ClusteringKind::None;
};

struct CaseResult {
    CaseSpec spec;
    bool available = false;
    std::string error;       // set when unavailable
    double best_accuracy = 0.0;
    int best_index = -1;
    PipelineConfig best_config;
    double best_time_ms = 0.0;
};

// Supplies the dataset for one (description type, context variant) corner;
// nullopt when that dataset does not exist.
using DatasetProvider =
    std::function<std::optional<std::vector<Sample>>(DescType, CtxVariant, bool train)>;

// Runs the full sweep per case and records the best row. Missing datasets
// mark the cell, they do not abort the matrix.
std::vector<CaseResult> run_case_matrix(const std::vector<CaseSpec>& cases,
                                        const DatasetProvider& datasets, int jobs = 1);

// One line per configuration: index, prep, preproc, feature, distance,
// clustering, accuracy, macroP, macroR, macroF, timeMs, status.
std::string format_sweep_report(const std::vector<SweepRow>& rows, bool omit_times = false);

// Accuracy grid shaped clustering x (train/test context pairing), one section
// per description type, plus the winning configuration per case.
std::string format_case_matrix(const std::vector<CaseResult>& results);

// Case file line: descType<TAB>trainVariant<TAB>testVariant<TAB>clustering.
std::vector<CaseSpec> parse_case_specs(std::string_view text);

} // namespace sigclass

#endif
