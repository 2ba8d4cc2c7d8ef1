#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vizsim/image.hpp"
#include "vizsim/msssim.hpp"

namespace vizsim {

/// Symmetric pairwise distances with zero diagonal, entries in [0, 1].
struct DistanceMatrix {
    int n = 0;
    std::vector<double> d;  // row-major n*n

    DistanceMatrix() = default;
    explicit DistanceMatrix(int items) : n(items), d(static_cast<std::size_t>(items) * items, 0.0) {}

    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }

    /// Throws DomainError on asymmetry, nonzero diagonal, or out-of-range
    /// entries.
    void validate() const;
};

/// Item groups over items 0..n-1. Hard clusterings partition the items;
/// overlapping membership is allowed only when allow_overlap is set (the
/// empirical-input form consumed by consensus_distance).
struct Clustering {
    int n = 0;
    std::vector<std::vector<int>> groups;
    bool allow_overlap = false;

    static Clustering from_labels(const std::vector<int>& labels);

    /// Group index per item; requires a hard clustering.
    std::vector<int> labels() const;

    /// Every item in >= 1 group, ids in range; hard clusterings additionally
    /// in exactly 1 group.
    void validate() const;
};

struct MergeStep {
    int a = 0;       // cluster ids; originals 0..n-1, merges n, n+1, ...
    int b = 0;       // a < b
    double height = 0.0;
    int size = 0;    // items in the merged cluster
};

struct Dendrogram {
    std::vector<MergeStep> merges;  // n-1 steps, non-decreasing heights
};

/// Pairwise similarity_to_distance(ms_ssim) over the upper triangle,
/// mirrored. Grayscale planes.
DistanceMatrix distance_matrix(const std::vector<Plane>& images, const MsSsimParams& params);

/// RGB variant honoring params.color_mode (channel-averaged for YUV).
DistanceMatrix distance_matrix(const std::vector<ImageRGB>& images, const MsSsimParams& params);

/// d_ij = (1/N) sum over participants of (1 - c_ij / min(c_i, c_j)), where
/// c_i counts groups containing item i and c_ij groups containing both.
DistanceMatrix consensus_distance(const std::vector<Clustering>& participants);

/// Agglomerative Ward clustering via the Lance-Williams update on squared
/// distances. Returns the full dendrogram (scipy id convention) and the
/// horizontal cut with exactly k clusters. Ties break on the smallest id
/// pair.
std::pair<Dendrogram, Clustering> ward_cluster(const DistanceMatrix& dist, int k);

struct QualityScores {
    double ri = 0.0;
    double ari = 0.0;
    double nmi = 0.0;
    double ami = 0.0;
    // The literature admits several normalizations; ours are recorded so
    // downstream reports are unambiguous.
    std::string nmi_normalization = "arithmetic";
    std::string ami_normalization = "max";
};

/// Agreement between two hard clusterings of the same items: Rand index,
/// adjusted Rand index (permutation model), normalized mutual information
/// (arithmetic-mean normalization), adjusted mutual information (expected
/// MI under the hypergeometric model, max-entropy normalization).
QualityScores cluster_quality(const Clustering& a, const Clustering& b);

/// CSV item_id,group_id; repeated item ids express overlap when
/// allow_overlap is set.
Clustering read_clustering_csv(const std::string& path, bool allow_overlap);
void write_clustering_csv(const std::string& path, const Clustering& clustering);

/// Dense square CSV with row/column headers d0..d{n-1}.
DistanceMatrix read_distance_csv(const std::string& path);
void write_distance_csv(const std::string& path, const DistanceMatrix& dist);

/// CSV cluster_a,cluster_b,height,size.
void write_dendrogram_csv(const std::string& path, const Dendrogram& dendrogram);

}  // namespace vizsim
