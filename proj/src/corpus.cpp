// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool matches_ci(std::string_view s, std::size_t pos, std::string_view kw) {
    if (pos + kw.size() > s.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
        if (to_lower_ascii(s[pos + i]) != kw[i]) return false;
    }
    return true;
}

// '<' starts markup only when followed by a letter, "/", "!" or "?";
// any other '<' is literal text.
bool tag_opens_at(std::string_view s, std::size_t i) {
    if (i + 1 >= s.size()) return false;
    char c = s[i + 1];
    if (is_ascii_alpha(c) || c == '!' || c == '?') return true;
    if (c == '/') {
        if (i + 2 >= s.size()) return false;
        return is_ascii_alpha(s[i + 2]) || s[i + 2] == '>';
    }
    return false;
}

// Matches "<script" / "<style" as an element name, not a prefix of a longer name.
bool element_opens_at(std::string_view s, std::size_t i, std::string_view name) {
    if (!matches_ci(s, i + 1, name)) return false;
    std::size_t after = i + 1 + name.size();
    if (after >= s.size()) return true; // unclosed at end of input
    char c = s[after];
    return is_space_byte(c) || c == '>' || c == '/';
}

// Skips the content of <script>/<style> through the matching close tag.
std::size_t skip_element(std::string_view s, std::size_t i, std::string_view name) {
    std::size_t pos = i + 1 + name.size();
    while (pos < s.size()) {
        if (s[pos] == '<' && pos + 1 < s.size() && s[pos + 1] == '/' &&
            matches_ci(s, pos + 2, name)) {
            std::size_t end = s.find('>', pos);
            return end == std::string_view::npos ? s.size() : end + 1;
        }
        ++pos;
    }
    return s.size();
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes the entity starting at s[i] (s[i] == '&'). Returns the number of
// input bytes consumed, or 0 when the sequence is not a recognized entity.
std::size_t decode_entity(std::string_view s, std::size_t i, std::string& out) {
    struct Named {
        std::string_view text;
        char value;
    };
    static constexpr Named kNamed[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
    for (const auto& e : kNamed) {
        if (s.compare(i, e.text.size(), e.text) == 0) {
            out.push_back(e.value);
            return e.text.size();
        }
    }
    if (i + 2 >= s.size() || s[i + 1] != '#') return 0;
    std::size_t pos = i + 2;
    bool hex = pos < s.size() && (s[pos] == 'x' || s[pos] == 'X');
    if (hex) ++pos;
    std::uint64_t value = 0;
    std::size_t digits = 0;
    while (pos < s.size()) {
        char c = s[pos];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else break;
        value = value * (hex ? 16 : 10) + static_cast<std::uint64_t>(d);
        if (value > 0x10FFFF) return 0;
        ++digits;
        ++pos;
    }
    if (digits == 0 || pos >= s.size() || s[pos] != ';') return 0;
    if (value == 0 || (value >= 0xD800 && value <= 0xDFFF)) return 0;
    append_utf8(out, static_cast<std::uint32_t>(value));
    return pos + 1 - i;
}

// One pass of tag/comment/script removal, entity decoding and whitespace
// collapsing. strip_html iterates this to a fixpoint.
std::string strip_pass(std::string_view s) {
    std::string text;
    text.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '<') {
            if (matches_ci(s, i, "<!--")) {
                std::size_t end = s.find("-->", i + 4);
                i = end == std::string_view::npos ? s.size() : end + 3;
                continue;
            }
            if (element_opens_at(s, i, "script")) {
                i = skip_element(s, i, "script");
                continue;
            }
            if (element_opens_at(s, i, "style")) {
                i = skip_element(s, i, "style");
                continue;
            }
            if (tag_opens_at(s, i)) {
                std::size_t end = s.find('>', i);
                i = end == std::string_view::npos ? s.size() : end + 1;
                continue;
            }
            text.push_back('<');
            ++i;
        } else if (c == '&') {
            std::size_t consumed = decode_entity(s, i, text);
            if (consumed == 0) {
                text.push_back('&');
                ++i;
            } else {
                i += consumed;
            }
        } else {
            text.push_back(c);
            ++i;
        }
    }

    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space_byte(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path.string());
    return std::move(buf).str();
}

std::filesystem::path resolve(const Manifest& manifest, const std::string& source_path) {
    std::filesystem::path p(source_path);
    if (p.is_absolute() || manifest.base_dir.empty()) return p;
    return manifest.base_dir / p;
}

} // namespace

std::string strip_html(std::string_view html) {
    std::string current(html);
    for (;;) {
        std::string next = strip_pass(current);
        if (next == current) return current;
        current = std::move(next);
    }
}

std::string combine_with_context(std::string_view description, std::string_view context) {
    if (description.empty()) throw EmptyInput("combine_with_context: empty description");
    if (context.empty()) throw EmptyInput("combine_with_context: empty context");
    std::string out;
    out.reserve(description.size() + 1 + context.size());
    out.append(description);
    out.push_back('\n');
    out.append(context);
    return out;
}

std::string_view to_name(DescType t) {
    switch (t) {
        case DescType::Wsdl: return "wsdl";
        case DescType::Wadl: return "wadl";
        case DescType::Html: return "html";
        case DescType::Text: return "text";
    }
    return "?";
}

std::string_view to_name(CtxVariant v) {
    switch (v) {
        case CtxVariant::Plain: return "plain";
        case CtxVariant::PlainPlusContext: return "plainctx";
        case CtxVariant::ContextOnly: return "ctx";
    }
    return "?";
}

std::string_view to_name(ClassLabel c) {
    switch (c) {
        case ClassLabel::Weather: return "weather";
        case ClassLabel::Social: return "social";
        case ClassLabel::Tourism: return "tourism";
        case ClassLabel::Entertainment: return "entertainment";
        case ClassLabel::Financial: return "financial";
    }
    return "?";
}

DescType parse_desc_type(std::string_view name) {
    if (name == "wsdl") return DescType::Wsdl;
    if (name == "wadl") return DescType::Wadl;
    if (name == "html") return DescType::Html;
    if (name == "text") return DescType::Text;
    throw UnknownLabel("unknown description type: " + std::string(name));
}

CtxVariant parse_ctx_variant(std::string_view name) {
    if (name == "plain") return CtxVariant::Plain;
    if (name == "plainctx") return CtxVariant::PlainPlusContext;
    if (name == "ctx") return CtxVariant::ContextOnly;
    throw UnknownLabel("unknown context variant: " + std::string(name));
}

ClassLabel parse_class_label(std::string_view name) {
    for (ClassLabel c : kAllClasses) {
        if (to_name(c) == name) return c;
    }
    throw UnknownLabel("unknown class: " + std::string(name));
}

Manifest parse_manifest(std::string_view text, std::string dataset_name,
                        std::filesystem::path base_dir) {
    Manifest manifest;
    manifest.dataset_name = std::move(dataset_name);
    manifest.base_dir = std::move(base_dir);

    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
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
            std::size_t tab = line.find('\t', start);
            if (tab == std::string_view::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() < 3 || fields.size() > 4) {
            throw ParseError("manifest line " + std::to_string(line_no) +
                             ": expected 3 or 4 tab-separated fields, got " +
                             std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ParseError("manifest line " + std::to_string(line_no) + ": empty path");
        }

        ManifestEntry entry;
        entry.source_path = std::string(fields[0]);
        try {
            entry.desc_type = parse_desc_type(fields[1]);
            entry.ctx_variant = parse_ctx_variant(fields[2]);
            if (fields.size() == 4 && !fields[3].empty()) {
                entry.gold_class = parse_class_label(fields[3]);
            }
        } catch (const UnknownLabel& e) {
            throw UnknownLabel("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(entry.source_path).second) {
            throw DuplicatePath("manifest line " + std::to_string(line_no) +
                                ": duplicate path " + entry.source_path);
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::string text = read_file(path);
    return parse_manifest(text, path.stem().string(), path.parent_path());
}

std::vector<Sample> ingest(const Manifest& manifest) {
    std::vector<Sample> samples;
    samples.reserve(manifest.entries.size());
    std::vector<std::string> io_failures;
    std::vector<std::string> empty_failures;

    for (const auto& entry : manifest.entries) {
        Sample sample;
        sample.id = entry.source_path;
        sample.desc_type = entry.desc_type;
        sample.ctx_variant = entry.ctx_variant;
        sample.gold_class = entry.gold_class;
        sample.source_path = entry.source_path;

        const std::filesystem::path main_path = resolve(manifest, entry.source_path);
        try {
            std::string main_bytes = read_file(main_path);
            if (main_bytes.empty()) {
                empty_failures.push_back(main_path.string());
                continue;
            }
            if (entry.ctx_variant == CtxVariant::PlainPlusContext) {
                std::filesystem::path ctx_path = main_path;
                ctx_path += ".ctx";
                std::string ctx_bytes = read_file(ctx_path);
                if (ctx_bytes.empty()) {
                    empty_failures.push_back(ctx_path.string());
                    continue;
                }
                sample.bytes = combine_with_context(main_bytes, ctx_bytes);
            } else {
                sample.bytes = std::move(main_bytes);
            }
        } catch (const IoError& e) {
            io_failures.emplace_back(e.what());
            continue;
        }
        samples.push_back(std::move(sample));
    }

    if (!io_failures.empty() || !empty_failures.empty()) {
        std::string msg = "ingestion failed for " +
                          std::to_string(io_failures.size() + empty_failures.size()) +
                          " file(s):";
        for (const auto& f : io_failures) msg += "\n  " + f;
        for (const auto& f : empty_failures) msg += "\n  empty file: " + f;
        if (io_failures.empty()) throw EmptyFile(msg);
        throw IoError(msg);
    }
    return samples;
}

} // namespace sigclass
