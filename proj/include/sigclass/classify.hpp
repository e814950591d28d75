// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_CLASSIFY_HPP
#define SIGCLASS_CLASSIFY_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sigclass/corpus.hpp"
#include "sigclass/features.hpp"

namespace sigclass {

enum class ClusteringKind { Mean, Median, None };

enum class DistanceKind { Chebyshev, Euclidean, Minkowski, Mahalanobis, Diff, Hamming, Cosine };

inline constexpr double kDefaultMinkowskiP = 3.0;
inline constexpr double kDefaultDelta = 1e-4; // Diff / Hamming tolerance
inline constexpr double kVarianceFloor = 1e-6;

struct DistanceParams {
    double minkowski_p = kDefaultMinkowskiP;
    double delta = kDefaultDelta;
    // Per-dimension variances for Mahalanobis; identity when null.
    const std::vector<double>* variances = nullptr;
};

// Chebyshev   max_i |a_i - b_i|
// Euclidean   sqrt(sum (a_i - b_i)^2)
// Minkowski   (sum |a_i - b_i|^p)^(1/p)
// Mahalanobis sqrt(sum (a_i - b_i)^2 / max(var_i, 1e-6))
// Diff        sum of |a_i - b_i| over coordinates where it exceeds delta
// Hamming     count of coordinates where |a_i - b_i| exceeds delta
// Cosine      1 - a.b/(|a||b|), 1 when either norm is zero
// Throws LengthMismatch on unequal lengths.
double distance(const std::vector<double>& a, const std::vector<double>& b,
                DistanceKind kind, const DistanceParams& params = {});

struct TrainedModel {
    // Singleton vector per class for Mean/Median, full collection for None.
    std::map<ClassLabel, std::vector<std::vector<double>>> per_class;
    ClusteringKind clustering = ClusteringKind::None;
    FeatureKind feature_kind = FeatureKind::Fft;
    std::string pipeline_fingerprint;
    // Pooled within-class per-dimension variance; empty when unavailable.
    std::vector<double> diag_variance;

    std::size_t vector_length() const;
};

// None stores every vector per class, Mean the element-wise mean, Median the
// element-wise median (mean of the middle two for even counts). Pooled
// per-dimension variance is always computed for Mahalanobis use.
TrainedModel train(const std::vector<std::pair<FeatureVector, ClassLabel>>& samples,
                   ClusteringKind clustering);

struct ClassificationResult {
    ClassLabel label = ClassLabel::Weather;
    double score = 0.0; // distance of the winning match, lower is better
    std::map<ClassLabel, double> per_class_best;
};

// Nearest stored vector per class; the winning label attains the minimum,
// ties broken by class ordinal. Mahalanobis draws variances from the model
// when params does not supply any.
ClassificationResult classify_one(const std::vector<double>& v, const TrainedModel& model,
                                  DistanceKind kind, const DistanceParams& params = {});

// Model file: "SGCM", u16 version, header (clustering, feature kind,
// fingerprint, optional variances, class list), per-class blocks of 64-bit
// little-endian floats, then a CRC-32 of everything before it.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view data);

} // namespace sigclass

#endif
