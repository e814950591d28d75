// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#include "sigclass/classify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "sigclass/errors.hpp"

namespace sigclass {

namespace {

constexpr std::uint16_t kModelVersion = 1;
constexpr char kMagic[4] = {'S', 'G', 'C', 'M'};

double minkowski(const std::vector<double>& a, const std::vector<double>& b, double p) {
    double peak = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) peak = std::max(peak, std::abs(a[i] - b[i]));
    if (peak == 0.0) return 0.0;
    // Scale by the peak difference so large p neither overflows nor
    // underflows the per-term powers.
    double sum = 0.0;
    if (p == 3.0) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double r = std::abs(a[i] - b[i]) / peak;
            sum += r * r * r;
        }
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double r = std::abs(a[i] - b[i]) / peak;
            sum += r * r;
        }
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double r = std::abs(a[i] - b[i]) / peak;
            if (r > 0.0) sum += std::pow(r, p);
        }
    }
    return peak * std::pow(sum, 1.0 / p);
}

struct Writer {
    std::string out;

    void raw(const void* data, std::size_t n) {
        out.append(static_cast<const char*>(data), n);
    }
    void u8(std::uint8_t v) { out.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
};

struct Reader {
    std::string_view data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > data.size()) throw CorruptModel("model file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data[pos++]);
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
        return std::bit_cast<double>(v);
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(data.substr(pos, n));
        pos += n;
        return s;
    }
};

std::uint32_t crc32(std::string_view data) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (char ch : data) {
        crc = table[(crc ^ static_cast<std::uint8_t>(ch)) & 0xFF] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

double element_median(std::vector<double>& scratch) {
    std::sort(scratch.begin(), scratch.end());
    const std::size_t n = scratch.size();
    if (n % 2 == 1) return scratch[n / 2];
    return 0.5 * (scratch[n / 2 - 1] + scratch[n / 2]);
}

} // namespace

double distance(const std::vector<double>& a, const std::vector<double>& b,
                DistanceKind kind, const DistanceParams& params) {
    if (a.size() != b.size()) {
        throw LengthMismatch("distance: vector lengths " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
    }
    switch (kind) {
        case DistanceKind::Chebyshev: {
            double best = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
            return best;
        }
        case DistanceKind::Euclidean: {
            double sum = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                sum += d * d;
            }
            return std::sqrt(sum);
        }
        case DistanceKind::Minkowski:
            return minkowski(a, b, params.minkowski_p);
        case DistanceKind::Mahalanobis: {
            const std::vector<double>* var = params.variances;
            if (var && var->size() != a.size()) {
                throw LengthMismatch("mahalanobis variance length " +
                                     std::to_string(var->size()) + " vs vector length " +
                                     std::to_string(a.size()));
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                const double v = var ? std::max((*var)[i], kVarianceFloor) : 1.0;
                sum += d * d / v;
            }
            return std::sqrt(sum);
        }
        case DistanceKind::Diff: {
            double sum = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = std::abs(a[i] - b[i]);
                if (d > params.delta) sum += d;
            }
            return sum;
        }
        case DistanceKind::Hamming: {
            double count = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (std::abs(a[i] - b[i]) > params.delta) count += 1.0;
            }
            return count;
        }
        case DistanceKind::Cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0.0 || nb == 0.0) return 1.0;
            return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
        }
    }
    return 0.0;
}

std::size_t TrainedModel::vector_length() const {
    for (const auto& [label, vectors] : per_class) {
        if (!vectors.empty()) return vectors.front().size();
    }
    return 0;
}

TrainedModel train(const std::vector<std::pair<FeatureVector, ClassLabel>>& samples,
                   ClusteringKind clustering) {
    if (samples.empty()) throw EmptyClass("train: no samples");

    const std::size_t dim = samples.front().first.values.size();
    const FeatureKind kind = samples.front().first.extractor;
    std::map<ClassLabel, std::vector<const std::vector<double>*>> groups;
    for (const auto& [fv, label] : samples) {
        if (fv.values.size() != dim || fv.extractor != kind) {
            throw LengthMismatch("train: mixed feature shapes in training set");
        }
        groups[label].push_back(&fv.values);
    }

    TrainedModel model;
    model.clustering = clustering;
    model.feature_kind = kind;

    for (const auto& [label, vectors] : groups) {
        std::vector<std::vector<double>> stored;
        switch (clustering) {
            case ClusteringKind::None:
                stored.reserve(vectors.size());
                for (const auto* v : vectors) stored.push_back(*v);
                break;
            case ClusteringKind::Mean: {
                std::vector<double> mean(dim, 0.0);
                for (const auto* v : vectors) {
                    for (std::size_t i = 0; i < dim; ++i) mean[i] += (*v)[i];
                }
                for (double& m : mean) m /= static_cast<double>(vectors.size());
                stored.push_back(std::move(mean));
                break;
            }
            case ClusteringKind::Median: {
                std::vector<double> median(dim, 0.0);
                std::vector<double> scratch(vectors.size());
                for (std::size_t i = 0; i < dim; ++i) {
                    for (std::size_t j = 0; j < vectors.size(); ++j) scratch[j] = (*vectors[j])[i];
                    median[i] = element_median(scratch);
                }
                stored.push_back(std::move(median));
                break;
            }
        }
        model.per_class.emplace(label, std::move(stored));
    }

    // Pooled within-class variance for Mahalanobis.
    std::vector<double> sums(dim, 0.0);
    std::size_t total = samples.size();
    model.diag_variance.assign(dim, 0.0);
    for (const auto& [label, vectors] : groups) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (const auto* v : vectors) {
            for (std::size_t i = 0; i < dim; ++i) sums[i] += (*v)[i];
        }
        for (double& s : sums) s /= static_cast<double>(vectors.size());
        for (const auto* v : vectors) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = (*v)[i] - sums[i];
                model.diag_variance[i] += d * d;
            }
        }
    }
    const std::size_t dof = total > groups.size() ? total - groups.size() : 1;
    for (double& v : model.diag_variance) v /= static_cast<double>(dof);

    return model;
}

ClassificationResult classify_one(const std::vector<double>& v, const TrainedModel& model,
                                  DistanceKind kind, const DistanceParams& params) {
    DistanceParams effective = params;
    if (kind == DistanceKind::Mahalanobis && effective.variances == nullptr &&
        !model.diag_variance.empty()) {
        effective.variances = &model.diag_variance;
    }

    ClassificationResult result;
    double best = std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto& [label, vectors] : model.per_class) {
        double class_best = std::numeric_limits<double>::infinity();
        for (const auto& stored : vectors) {
            class_best = std::min(class_best, distance(v, stored, kind, effective));
        }
        result.per_class_best.emplace(label, class_best);
        // Strict comparison and ordinal map order give the lowest-ordinal
        // class on ties.
        if (first || class_best < best) {
            best = class_best;
            result.label = label;
            first = false;
        }
    }
    result.score = best;
    return result;
}

std::string serialize_model(const TrainedModel& model) {
    Writer w;
    w.raw(kMagic, 4);
    w.u16(kModelVersion);
    w.u8(static_cast<std::uint8_t>(model.clustering));
    w.u8(static_cast<std::uint8_t>(model.feature_kind));
    w.str(model.pipeline_fingerprint);
    w.u8(model.diag_variance.empty() ? 0 : 1);
    if (!model.diag_variance.empty()) {
        w.u32(static_cast<std::uint32_t>(model.diag_variance.size()));
        for (double v : model.diag_variance) w.f64(v);
    }
    w.u32(static_cast<std::uint32_t>(model.per_class.size()));
    for (const auto& [label, vectors] : model.per_class) {
        w.u8(static_cast<std::uint8_t>(label));
        w.u32(static_cast<std::uint32_t>(vectors.size()));
        w.u32(vectors.empty() ? 0 : static_cast<std::uint32_t>(vectors.front().size()));
        for (const auto& vec : vectors) {
            for (double v : vec) w.f64(v);
        }
    }
    w.u32(crc32(w.out));
    return std::move(w.out);
}

TrainedModel deserialize_model(std::string_view data) {
    if (data.size() < 4 + 2 + 4) throw CorruptModel("model file truncated");
    if (std::memcmp(data.data(), kMagic, 4) != 0) {
        throw CorruptModel("bad magic bytes, not a model file");
    }
    const std::uint32_t stored_crc = [&] {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<std::uint8_t>(data[data.size() - 4 + static_cast<std::size_t>(i)]))
                 << (8 * i);
        }
        return v;
    }();
    if (crc32(data.substr(0, data.size() - 4)) != stored_crc) {
        throw CorruptModel("model checksum mismatch");
    }

    Reader r{data.substr(0, data.size() - 4), 4};
    const std::uint16_t version = r.u16();
    if (version > kModelVersion) {
        throw FormatVersionMismatch("model format version " + std::to_string(version) +
                                    " is newer than supported version " +
                                    std::to_string(kModelVersion));
    }

    TrainedModel model;
    const std::uint8_t clustering = r.u8();
    if (clustering > 2) throw CorruptModel("invalid clustering kind");
    model.clustering = static_cast<ClusteringKind>(clustering);
    const std::uint8_t feature = r.u8();
    if (feature > 3) throw CorruptModel("invalid feature kind");
    model.feature_kind = static_cast<FeatureKind>(feature);
    model.pipeline_fingerprint = r.str();
    if (r.u8() != 0) {
        const std::uint32_t n = r.u32();
        model.diag_variance.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) model.diag_variance[i] = r.f64();
    }

    const std::uint32_t classes = r.u32();
    std::size_t dim = 0;
    for (std::uint32_t c = 0; c < classes; ++c) {
        const std::uint8_t label = r.u8();
        if (label >= kClassCount) throw CorruptModel("invalid class label");
        const std::uint32_t count = r.u32();
        const std::uint32_t len = r.u32();
        if (count == 0) throw CorruptModel("class with no stored vectors");
        if (dim == 0) dim = len;
        if (len != dim) throw CorruptModel("inconsistent vector lengths");
        if (model.clustering != ClusteringKind::None && count != 1) {
            throw CorruptModel("clustered model with more than one vector per class");
        }
        std::vector<std::vector<double>> vectors(count, std::vector<double>(len));
        for (auto& vec : vectors) {
            for (auto& v : vec) v = r.f64();
        }
        if (!model.per_class.emplace(static_cast<ClassLabel>(label), std::move(vectors)).second) {
            throw CorruptModel("duplicate class block");
        }
    }
    if (r.pos != r.data.size()) throw CorruptModel("trailing bytes after class blocks");
    return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    const std::string bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path.string());
    return deserialize_model(bytes);
}

} // namespace sigclass
