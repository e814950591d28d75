// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "sigclass/errors.hpp"
#include "sigclass/search.hpp"

namespace {

using namespace sigclass;

struct ConfigFlags {
    std::string prep = "raw";
    std::string preproc = "raw";
    std::string feature = "fft";
    std::string distance = "eucl";
    std::string clustering = "none";
    int ngram = 2;
    double silence_threshold = kDefaultSilenceThreshold;
    double minkowski_p = kDefaultMinkowskiP;
    double diff_delta = kDefaultDelta;

    PipelineConfig to_config() const {
        PipelineConfig cfg;
        cfg.loader.ngram = static_cast<NgramKind>(ngram);
        cfg.preparation = parse_preparation(prep);
        cfg.preprocess = parse_preprocess(preproc);
        cfg.feature = parse_feature(feature);
        cfg.distance = parse_distance(distance);
        cfg.clustering = parse_clustering(clustering);
        cfg.silence_threshold = silence_threshold;
        cfg.minkowski_p = minkowski_p;
        cfg.diff_delta = diff_delta;
        return cfg;
    }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
    cmd->add_option("--prep", flags.prep, "Preparation stage")
        ->check(CLI::IsMember({"raw", "noise", "silence", "silence-noise"}));
    cmd->add_option("--preproc", flags.preproc, "Preprocessing stage")
        ->check(CLI::IsMember({"raw", "norm", "low", "high", "band", "bandstop", "endp",
                               "norm-low", "norm-endp"}));
    cmd->add_option("--fe", flags.feature, "Feature extractor")
        ->check(CLI::IsMember({"fft", "lpc", "minmax", "hybrid"}));
    cmd->add_option("--cl", flags.distance, "Distance classifier")
        ->check(CLI::IsMember({"cheb", "eucl", "mink", "maha", "diff", "hamming", "cos"}));
    cmd->add_option("--cluster", flags.clustering, "Clustering of training vectors")
        ->check(CLI::IsMember({"mean", "median", "none"}));
    cmd->add_option("--ngram", flags.ngram, "Loader n-gram size")->check(CLI::IsMember({1, 2, 3}));
    cmd->add_option("--silence-threshold", flags.silence_threshold, "Silence removal threshold");
    cmd->add_option("--mink-p", flags.minkowski_p, "Minkowski order p");
    cmd->add_option("--diff-delta", flags.diff_delta, "Diff/Hamming tolerance");
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path);
    return bytes;
}

void write_file_or_throw(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure: " + path);
}

std::vector<Sample> ingest_manifest(const std::string& path) {
    return ingest(load_manifest(path));
}

void emit(const std::optional<std::string>& out_path, const std::string& text) {
    if (out_path) {
        write_file_or_throw(*out_path, text);
    } else {
        std::fwrite(text.data(), 1, text.size(), stdout);
    }
}

int default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Byte-stream signal classification toolkit"};
    app.require_subcommand(1);

    int jobs = default_jobs();
    bool omit_times = false;

    // strip-html
    std::string strip_in, strip_out;
    auto* strip_cmd = app.add_subcommand("strip-html", "Strip tags from an HTML file");
    strip_cmd->add_option("in", strip_in, "Input HTML file")->required();
    strip_cmd->add_option("out", strip_out, "Output text file")->required();

    // ingest
    std::string ingest_manifest_path;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate and read a manifest");
    ingest_cmd->add_option("--manifest", ingest_manifest_path, "Manifest file")->required();

    // train
    std::string train_manifest, train_model_out;
    ConfigFlags train_flags;
    auto* train_cmd = app.add_subcommand("train", "Train a model from a labeled manifest");
    train_cmd->add_option("--manifest", train_manifest, "Training manifest")->required();
    train_cmd->add_option("-o,--out", train_model_out, "Model output path")->required();
    add_config_flags(train_cmd, train_flags);
    train_cmd->add_option("--jobs", jobs, "Worker threads");

    // classify
    std::string classify_model, classify_manifest;
    ConfigFlags classify_flags;
    auto* classify_cmd = app.add_subcommand("classify", "Classify samples against a model");
    classify_cmd->add_option("--model", classify_model, "Model file")->required();
    classify_cmd->add_option("--manifest", classify_manifest, "Manifest of samples")->required();
    add_config_flags(classify_cmd, classify_flags);
    classify_cmd->add_option("--jobs", jobs, "Worker threads");

    // evaluate
    std::string eval_train, eval_test;
    ConfigFlags eval_flags;
    bool eval_tsv = false;
    auto* eval_cmd = app.add_subcommand("evaluate", "Train/test evaluation of one configuration");
    eval_cmd->add_option("--train-manifest", eval_train, "Training manifest")->required();
    eval_cmd->add_option("--test-manifest", eval_test, "Testing manifest")->required();
    add_config_flags(eval_cmd, eval_flags);
    eval_cmd->add_flag("--tsv", eval_tsv, "Emit the tabular report row");
    eval_cmd->add_flag("--omit-times", omit_times, "Replace time fields with '-'");
    eval_cmd->add_option("--jobs", jobs, "Worker threads");

    // crossval
    std::string cv_manifest;
    ConfigFlags cv_flags;
    int cv_k = 10;
    std::uint64_t cv_seed = 42;
    bool cv_tsv = false;
    auto* cv_cmd = app.add_subcommand("crossval", "k-fold cross-validation");
    cv_cmd->add_option("--manifest", cv_manifest, "Labeled manifest")->required();
    cv_cmd->add_option("--k", cv_k, "Number of folds");
    cv_cmd->add_option("--seed", cv_seed, "Shuffle seed");
    add_config_flags(cv_cmd, cv_flags);
    cv_cmd->add_flag("--tsv", cv_tsv, "Emit the tabular report row");
    cv_cmd->add_flag("--omit-times", omit_times, "Replace time fields with '-'");
    cv_cmd->add_option("--jobs", jobs, "Worker threads");

    // search
    std::string search_train, search_test, search_cluster = "none";
    std::optional<std::string> search_out;
    bool search_no_rank = false;
    auto* search_cmd = app.add_subcommand("search", "Exhaustive configuration sweep");
    search_cmd->add_option("--train-manifest", search_train, "Training manifest")->required();
    search_cmd->add_option("--test-manifest", search_test, "Testing manifest")->required();
    search_cmd->add_option("--cluster", search_cluster, "Clustering of training vectors")
        ->check(CLI::IsMember({"mean", "median", "none"}));
    search_cmd->add_option("-o,--out", search_out, "Report output file (default stdout)");
    search_cmd->add_flag("--no-rank", search_no_rank, "Keep enumeration order");
    search_cmd->add_flag("--omit-times", omit_times, "Replace time fields with '-'");
    search_cmd->add_option("--jobs", jobs, "Worker threads");

    // case-matrix
    std::string cases_path, data_dir;
    std::optional<std::string> matrix_out;
    auto* matrix_cmd = app.add_subcommand("case-matrix", "Best accuracy per case grid");
    matrix_cmd->add_option("--cases", cases_path, "Case spec file")->required();
    matrix_cmd->add_option("--data", data_dir, "Directory of per-variant manifests")->required();
    matrix_cmd->add_option("-o,--out", matrix_out, "Report output file (default stdout)");
    matrix_cmd->add_option("--jobs", jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*strip_cmd) {
            write_file_or_throw(strip_out, strip_html(read_file_or_throw(strip_in)));
        } else if (*ingest_cmd) {
            for (const Sample& s : ingest_manifest(ingest_manifest_path)) {
                std::string cls = s.gold_class ? std::string(to_name(*s.gold_class)) : "-";
                std::printf("%s\t%s\t%s\t%s\t%zu\n", s.id.c_str(),
                            std::string(to_name(s.desc_type)).c_str(),
                            std::string(to_name(s.ctx_variant)).c_str(), cls.c_str(),
                            s.bytes.size());
            }
        } else if (*train_cmd) {
            const PipelineConfig cfg = train_flags.to_config();
            const TrainedModel model =
                train_pipeline(ingest_manifest(train_manifest), cfg, nullptr, jobs);
            save_model(model, train_model_out);
        } else if (*classify_cmd) {
            const TrainedModel model = load_model(classify_model);
            PipelineConfig cfg = config_from_fingerprint(model.pipeline_fingerprint);
            cfg.clustering = model.clustering;
            // Featurization flags, when given, must agree with the model.
            const ConfigFlags& f = classify_flags;
            auto check = [&](const char* flag, std::string_view given, std::string_view have) {
                if (classify_cmd->count(flag) > 0 && given != have) {
                    throw FingerprintMismatch(std::string(flag) + "=" + std::string(given) +
                                              " does not match the model's " + std::string(have));
                }
            };
            check("--prep", f.prep, to_name(cfg.preparation));
            check("--preproc", f.preproc, to_name(cfg.preprocess));
            check("--fe", f.feature, to_name(cfg.feature));
            check("--cluster", f.clustering, to_name(cfg.clustering));
            if (classify_cmd->count("--ngram") > 0 &&
                f.ngram != static_cast<int>(cfg.loader.ngram)) {
                throw FingerprintMismatch("--ngram does not match the model's loader");
            }
            if (classify_cmd->count("--silence-threshold") > 0 &&
                f.silence_threshold != cfg.silence_threshold) {
                throw FingerprintMismatch("--silence-threshold does not match the model");
            }
            cfg.distance = parse_distance(f.distance);
            cfg.minkowski_p = f.minkowski_p;
            cfg.diff_delta = f.diff_delta;

            const std::vector<Sample> samples = ingest_manifest(classify_manifest);
            const BatchResult batch = classify_batch(samples, model, cfg, nullptr, jobs);
            std::string out;
            char buf[64];
            for (std::size_t i = 0; i < samples.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.6f", batch.results[i].score);
                out += samples[i].id + "\t" + std::string(to_name(batch.results[i].label)) +
                       "\t" + buf + "\n";
            }
            std::fwrite(out.data(), 1, out.size(), stdout);
        } else if (*eval_cmd) {
            const PipelineConfig cfg = eval_flags.to_config();
            const std::vector<Sample> train_set = ingest_manifest(eval_train);
            const std::vector<Sample> test_set = ingest_manifest(eval_test);
            const TrainedModel model = train_pipeline(train_set, cfg, nullptr, jobs);
            const BatchResult batch = classify_batch(test_set, model, cfg, nullptr, jobs);
            std::vector<ClassLabel> expected, predicted;
            for (std::size_t i = 0; i < test_set.size(); ++i) {
                if (!test_set[i].gold_class) {
                    throw EmptyInput("evaluate: unlabeled sample " + test_set[i].id);
                }
                expected.push_back(*test_set[i].gold_class);
                predicted.push_back(batch.results[i].label);
            }
            const EvaluationReport report = compute_report(expected, predicted, batch.elapsed_ms);
            emit(std::nullopt, eval_tsv
                                   ? format_report_tsv_row(config_summary(cfg), report, omit_times) + "\n"
                                   : format_report_text(report, omit_times));
        } else if (*cv_cmd) {
            const PipelineConfig cfg = cv_flags.to_config();
            const EvaluationReport report =
                cross_validate(ingest_manifest(cv_manifest), cv_k, cv_seed, cfg, jobs);
            emit(std::nullopt,
                 cv_tsv ? format_report_tsv_row(config_summary(cfg), report, omit_times) + "\n"
                        : format_report_text(report, omit_times));
        } else if (*search_cmd) {
            std::vector<SweepRow> rows =
                run_sweep(ingest_manifest(search_train), ingest_manifest(search_test),
                          parse_clustering(search_cluster), jobs);
            if (!search_no_rank) rows = rank_rows(std::move(rows));
            emit(search_out, format_sweep_report(rows, omit_times));
        } else if (*matrix_cmd) {
            const std::vector<CaseSpec> cases = parse_case_specs(read_file_or_throw(cases_path));
            const std::filesystem::path dir(data_dir);
            const DatasetProvider provider =
                [&dir](DescType type, CtxVariant variant,
                       bool train) -> std::optional<std::vector<Sample>> {
                const std::filesystem::path manifest =
                    dir / ((train ? std::string("train_") : std::string("test_")) +
                           std::string(to_name(type)) + "_" + std::string(to_name(variant)) +
                           ".tsv");
                if (!std::filesystem::exists(manifest)) return std::nullopt;
                return ingest(load_manifest(manifest));
            };
            emit(matrix_out, format_case_matrix(run_case_matrix(cases, provider, jobs)));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
