#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vizsim/msssim.hpp"
#include "vizsim/render.hpp"
#include "vizsim/rng.hpp"

namespace vizsim {

/// Per-category Gaussian model of q1: sample mean and population sd.
struct CategoryModel {
    std::string category;
    double mean = 0.0;
    double sd = 0.0;
};

/// One fitted model per category in the table; every category needs at
/// least 2 rows.
std::vector<CategoryModel> fit_category_models(const DatasetTable& data);

/// Entropy factor levels, realized as multipliers on the fitted sd.
enum class EntropyLevel { kFitted, kLow, kHigh };
double entropy_multiplier(EntropyLevel level);  // 1.0, 0.5, 1.5
EntropyLevel entropy_from_string(const std::string& name);
std::string to_string(EntropyLevel level);

struct BenchmarkCondition {
    int cardinality = 3;   // number of categories
    int per_category = 3;  // rows per category
    EncodingName encoding = EncodingName::kYXColor;
    int replicates = 20;
    std::uint64_t seed = 1;
    EntropyLevel entropy_q1 = EntropyLevel::kFitted;

    void validate() const;  // replicates >= 2 so pairwise distances exist
};

/// n fresh tables: categories and q2 kept, every q1 redrawn from its
/// category model (sd scaled by sd_multiplier) and clamped to domain_q1.
/// Deterministic per seed.
std::vector<DatasetTable> simulate_replacements(const DatasetTable& data,
                                                const std::vector<CategoryModel>& models,
                                                int n, std::uint64_t seed,
                                                const ValueRange& domain_q1,
                                                double sd_multiplier = 1.0);

/// Exchange q1 values positionally between categories a and b (k-th row of
/// a swaps with k-th row of b); q2 and all other categories untouched.
/// Applying the same swap twice restores the input exactly.
DatasetTable swap_categories(const DatasetTable& data, const std::string& a,
                             const std::string& b);

struct DiscriminabilityScore {
    BenchmarkCondition condition;
    double score = 0.0;  // mean pairwise distance, in [0,1]
    int pair_count = 0;
};

/// Renders every table under cond.encoding (spec_template supplies canvas,
/// palette, domains) and averages similarity_to_distance(ms_ssim_yuv) over
/// all unordered pairs, in fixed pair order.
DiscriminabilityScore global_discriminability(const BenchmarkCondition& cond,
                                              const std::vector<DatasetTable>& tables,
                                              const EncodingSpec& spec_template,
                                              const MsSsimParams& params);

/// Mean rendered distance over (original, swapped) pairs.
DiscriminabilityScore local_discriminability(
    const BenchmarkCondition& cond,
    const std::vector<std::pair<DatasetTable, DatasetTable>>& pairs,
    const EncodingSpec& spec_template, const MsSsimParams& params);

/// Sample Pearson correlation; needs length >= 3 and nonzero variance on
/// both sides.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct RankedEncoding {
    EncodingName encoding = EncodingName::kYXColor;
    double mean_score = 0.0;
    int rank = 0;     // 1-based within the group
    bool tied = false;  // shares its mean with a neighbor; order is alphabetical
};

struct RankingGroup {
    std::string group;  // e.g. "cardinality=3", or "all"
    std::vector<RankedEncoding> entries;
};

/// Group scores by a factor ("none", "cardinality", "per_category",
/// "entropy_q1"), average per encoding, and sort descending; exact ties
/// fall back to alphabetical encoding order and are flagged.
std::vector<RankingGroup> rank_encodings(const std::vector<DiscriminabilityScore>& scores,
                                         const std::string& group_by);

/// Seeded synthetic base table for a condition: per-category q1 means
/// spread across the middle of domain_q1 with sd = sd_fraction * span,
/// q2 uniform. Category labels c00, c01, ... sort alphabetically.
DatasetTable synthesize_condition_table(const BenchmarkCondition& cond,
                                        const ValueRange& domain_q1,
                                        const ValueRange& domain_q2, double sd_fraction,
                                        Rng& rng);

/// CSV writers for benchmark reports, plus the reader that feeds the
/// rank/correlate commands.
void write_scores_csv(const std::string& path, const std::vector<DiscriminabilityScore>& scores);
std::vector<DiscriminabilityScore> read_scores_csv(const std::string& path);
void write_rankings_csv(const std::string& path, const std::vector<RankingGroup>& groups);

}  // namespace vizsim
