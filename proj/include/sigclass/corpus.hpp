// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_CORPUS_HPP
#define SIGCLASS_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigclass {

enum class DescType { Wsdl, Wadl, Html, Text };

enum class CtxVariant { Plain, PlainPlusContext, ContextOnly };

// Closed five-class set. The ordinal order is fixed and used for
// deterministic tie-breaking in classification.
enum class ClassLabel { Weather, Social, Tourism, Entertainment, Financial };

inline constexpr int kClassCount = 5;

inline constexpr ClassLabel kAllClasses[kClassCount] = {
    ClassLabel::Weather, ClassLabel::Social, ClassLabel::Tourism,
    ClassLabel::Entertainment, ClassLabel::Financial};

/// One ingested document: raw bytes plus provenance metadata.
struct Sample {
    std::string id;
    std::string bytes;
    DescType desc_type = DescType::Text;
    CtxVariant ctx_variant = CtxVariant::Plain;
    std::optional<ClassLabel> gold_class;
    std::string source_path;
};

struct ManifestEntry {
    std::string source_path;
    DescType desc_type = DescType::Text;
    CtxVariant ctx_variant = CtxVariant::Plain;
    std::optional<ClassLabel> gold_class;
};

struct Manifest {
    std::string dataset_name;
    std::filesystem::path base_dir; // relative entry paths resolve against this
    std::vector<ManifestEntry> entries;
};

// Removes element tags, script/style bodies and comments, decodes the named
// entities amp/lt/gt/quot/apos plus numeric references, and collapses
// whitespace. Malformed markup is handled leniently (unclosed constructs run
// to end of input). The pass is iterated to a fixpoint so the result is
// idempotent even when decoded entities re-form tag-like text.
std::string strip_html(std::string_view html);

// Description bytes, a single '\n' separator, then context bytes.
// Throws EmptyInput when either argument is empty.
std::string combine_with_context(std::string_view description, std::string_view context);

// Parses the tab-separated manifest format:
//   path<TAB>descType<TAB>ctxVariant[<TAB>class]
// with descType in {wsdl,wadl,html,text}, ctxVariant in {plain,plainctx,ctx}
// and class in {weather,social,tourism,entertainment,financial}. Lines
// starting with '#' and blank lines are skipped.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view text, std::string dataset_name,
                        std::filesystem::path base_dir = {});

// Reads every entry's bytes. PlainPlusContext entries are materialized as
// combine_with_context(description, context) where the context file lives at
// "<path>.ctx"; ContextOnly entries name the context file directly. Per-file
// failures are collected and reported together. Results keep manifest order.
std::vector<Sample> ingest(const Manifest& manifest);

std::string_view to_name(DescType t);
std::string_view to_name(CtxVariant v);
std::string_view to_name(ClassLabel c);
DescType parse_desc_type(std::string_view name);
CtxVariant parse_ctx_variant(std::string_view name);
ClassLabel parse_class_label(std::string_view name);

} // namespace sigclass

#endif
