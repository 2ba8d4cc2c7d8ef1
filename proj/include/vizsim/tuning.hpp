#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vizsim/clustering.hpp"
#include "vizsim/msssim.hpp"
#include "vizsim/rng.hpp"

namespace vizsim {

/// One similarity judgment: the anchor is more similar to the positive than
/// to the negative iff ground_truth is 1.
struct Triplet {
    int anchor = 0;
    int positive = 0;
    int negative = 0;
    int ground_truth = 1;

    void validate(int item_count) const;
};

struct TuneConfig {
    double learning_rate = 0.05;
    int batch_size = 8;
    int epochs = 50;
    double grad_epsilon = 1e-3;  // central-difference step
    double alpha = 0.5;          // regularization steepness
    double reg_scale = 0.0;
    std::uint64_t seed = 1;
    double weight_lo = 0.01;  // clip interval, strictly inside (0,1)
    double weight_hi = 0.99;
    double holdout_fraction = 0.2;

    /// Throws ConfigError on invalid fields. alpha > 1 inverts the
    /// boundary penalty into a reward; it is accepted but reported through
    /// warnings() rather than silently corrected.
    void validate() const;
    std::vector<std::string> warnings() const;
};

/// Precomputed pair profiles for an image collection. Building the store is
/// the only expensive step; score(i, j, W) afterwards costs O(scales), which
/// is what makes numerical-gradient training affordable. Reads are
/// const and safe to share across threads.
class SimilarityStore {
  public:
    static SimilarityStore from_planes(const std::vector<Plane>& images,
                                       const MsSsimParams& params);
    static SimilarityStore from_images(const std::vector<ImageRGB>& images,
                                       const MsSsimParams& params);

    int size() const { return n_; }
    int scales() const { return scales_; }

    /// MS-SSIM of images i and j under weights w; symmetric, 1 on the
    /// diagonal. Throws DomainError for unknown ids.
    double score(int i, int j, const WeightVector& w) const;

  private:
    int n_ = 0;
    int scales_ = 0;
    std::vector<PairProfile> profiles_;  // upper triangle, row-major

    const PairProfile& profile(int i, int j) const;
};

/// 1 iff score(i, j) >= score(i, k); ties resolve to 1.
int triplet_label(int i, int j, int k, const WeightVector& w, const SimilarityStore& store);

/// R(W) = sum W_i^(alpha-1) (1-W_i)^(alpha-1). Throws DomainError when any
/// weight is outside the open interval (0, 1).
double regularization(const WeightVector& w, double alpha);

/// Sum of squared similarity gaps over misordered triplets plus
/// reg_scale * R(W).
double triplet_loss(const std::vector<Triplet>& batch, const WeightVector& w,
                    const TuneConfig& cfg, const SimilarityStore& store);

struct GradientResult {
    std::vector<double> g;
    bool clipped = false;  // some coordinate fell back to a one-sided difference
};

/// Central-difference gradient of loss_at. Coordinates whose +-eps probe
/// would leave [lo, hi] use a clipped one-sided difference and set the
/// clipped flag.
GradientResult numeric_gradient(const std::function<double(const WeightVector&)>& loss_at,
                                const WeightVector& w, double eps, double lo, double hi);

struct TraceRow {
    int epoch = 0;  // 0 = before any update
    double loss = 0.0;
    double holdout_accuracy = 0.0;
};

struct FitResult {
    WeightVector weights;
    std::vector<TraceRow> trace;
    bool gradient_clipped = false;
    std::vector<std::string> warnings;
};

/// Mini-batch gradient descent on triplet_loss with a fresh seeded shuffle
/// per epoch; weights clipped to [weight_lo, weight_hi] after every step.
/// A holdout_fraction split (taken after one seeded shuffle) supplies the
/// per-epoch holdout accuracy; with no holdout the training set stands in.
/// Deterministic for a fixed config.
FitResult sgd_fit(const std::vector<Triplet>& triplets, const TuneConfig& cfg,
                  const SimilarityStore& store);

/// Fraction of triplets whose label under w matches ground truth.
double triplet_accuracy(const std::vector<Triplet>& triplets, const WeightVector& w,
                        const SimilarityStore& store);

/// Every (anchor, {j, k}) combination with distinct ids, labeled from the
/// distance matrix: ground_truth = 1 iff d(anchor, j) <= d(anchor, k).
std::vector<Triplet> triplets_from_distance(const DistanceMatrix& dist);

/// Seeded sample without replacement from the exhaustive enumeration.
std::vector<Triplet> triplets_from_distance(const DistanceMatrix& dist, int count, Rng& rng);

/// Positives from the anchor's cluster, negatives from any other cluster;
/// exhaustive, all labels 1.
std::vector<Triplet> triplets_from_clustering(const Clustering& clustering);

/// CSV anchor,positive,negative. Rows with ground_truth 0 are canonicalized
/// on write by swapping positive and negative.
std::vector<Triplet> read_triplets_csv(const std::string& path);
void write_triplets_csv(const std::string& path, const std::vector<Triplet>& triplets);

/// CSV epoch,loss,holdout_accuracy.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

/// CSV id,path mapping triplet ids to image files; ids must cover 0..n-1.
std::vector<std::string> read_image_manifest(const std::string& path);
void write_image_manifest(const std::string& path, const std::vector<std::string>& paths);

}  // namespace vizsim
