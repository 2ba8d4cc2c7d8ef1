#include "vizsim/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"

namespace vizsim {

std::vector<CategoryModel> fit_category_models(const DatasetTable& data) {
    data.validate();
    std::vector<CategoryModel> out;
    for (const std::string& category : data.category_order) {
        std::vector<double> values;
        for (const DataRow& row : data.rows) {
            if (row.category == category) values.push_back(row.q1);
        }
        if (values.size() < 2) {
            std::ostringstream msg;
            msg << "fit_category_models: category '" << category << "' has " << values.size()
                << " rows, need at least 2";
            throw DomainError(msg.str());
        }
        CategoryModel m;
        m.category = category;
        double acc = 0.0;
        for (double v : values) acc += v;
        m.mean = acc / static_cast<double>(values.size());
        double sq = 0.0;
        for (double v : values) sq += (v - m.mean) * (v - m.mean);
        m.sd = std::sqrt(sq / static_cast<double>(values.size()));
        out.push_back(m);
    }
    return out;
}

double entropy_multiplier(EntropyLevel level) {
    switch (level) {
        case EntropyLevel::kFitted: return 1.0;
        case EntropyLevel::kLow: return 0.5;
        case EntropyLevel::kHigh: return 1.5;
    }
    throw DomainError("unreachable entropy level");
}

EntropyLevel entropy_from_string(const std::string& name) {
    if (name == "fitted") return EntropyLevel::kFitted;
    if (name == "low") return EntropyLevel::kLow;
    if (name == "high") return EntropyLevel::kHigh;
    throw ConfigError("unknown entropy level '" + name + "' (expected fitted, low, or high)");
}

std::string to_string(EntropyLevel level) {
    switch (level) {
        case EntropyLevel::kFitted: return "fitted";
        case EntropyLevel::kLow: return "low";
        case EntropyLevel::kHigh: return "high";
    }
    throw DomainError("unreachable entropy level");
}

void BenchmarkCondition::validate() const {
    std::vector<std::string> problems;
    if (cardinality < 1) problems.push_back("cardinality must be >= 1");
    if (per_category < 1) problems.push_back("per_category must be >= 1");
    if (replicates < 2) problems.push_back("replicates must be >= 2");
    if (!problems.empty()) {
        std::string msg = "benchmark condition invalid:";
        for (const std::string& p : problems) msg += " " + p + ";";
        throw ConfigError(msg);
    }
}

std::vector<DatasetTable> simulate_replacements(const DatasetTable& data,
                                                const std::vector<CategoryModel>& models,
                                                int n, std::uint64_t seed,
                                                const ValueRange& domain_q1,
                                                double sd_multiplier) {
    data.validate();
    if (n < 1) throw DomainError("simulate_replacements: n must be >= 1");
    if (!(sd_multiplier >= 0.0)) {
        throw DomainError("simulate_replacements: sd multiplier must be >= 0");
    }
    std::map<std::string, const CategoryModel*> by_category;
    for (const CategoryModel& m : models) by_category[m.category] = &m;
    for (const std::string& category : data.category_order) {
        if (by_category.find(category) == by_category.end()) {
            throw DomainError("simulate_replacements: no model for category '" + category + "'");
        }
    }

    Rng rng(seed);
    std::vector<DatasetTable> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int rep = 0; rep < n; ++rep) {
        DatasetTable table = data;
        for (DataRow& row : table.rows) {
            const CategoryModel& m = *by_category.at(row.category);
            const double drawn = rng.normal(m.mean, m.sd * sd_multiplier);
            row.q1 = std::min(domain_q1.hi, std::max(domain_q1.lo, drawn));
        }
        out.push_back(std::move(table));
    }
    return out;
}

DatasetTable swap_categories(const DatasetTable& data, const std::string& a,
                             const std::string& b) {
    data.validate();
    if (a == b) throw DomainError("swap_categories: categories must differ");
    std::vector<std::size_t> rows_a, rows_b;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        if (data.rows[i].category == a) rows_a.push_back(i);
        if (data.rows[i].category == b) rows_b.push_back(i);
    }
    if (rows_a.empty() || rows_b.empty()) {
        throw DomainError("swap_categories: category '" + (rows_a.empty() ? a : b) +
                          "' not present");
    }
    if (rows_a.size() != rows_b.size()) {
        std::ostringstream msg;
        msg << "swap_categories: '" << a << "' has " << rows_a.size() << " rows but '" << b
            << "' has " << rows_b.size() << "; positional swap needs equal counts";
        throw DomainError(msg.str());
    }
    DatasetTable out = data;
    for (std::size_t k = 0; k < rows_a.size(); ++k) {
        std::swap(out.rows[rows_a[k]].q1, out.rows[rows_b[k]].q1);
    }
    return out;
}

namespace {

double mean_pairwise_distance(const std::vector<ImageRGB>& images, const MsSsimParams& params,
                              int& pair_count) {
    const int n = static_cast<int>(images.size());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<double> distances(pairs.size(), 0.0);
    const int total = static_cast<int>(pairs.size());
    // errors surface after the loop; exceptions must not cross the region
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < total; ++p) {
        if (failed) continue;
        try {
            const auto [i, j] = pairs[static_cast<std::size_t>(p)];
            distances[static_cast<std::size_t>(p)] = similarity_to_distance(
                ms_ssim_yuv(images[static_cast<std::size_t>(i)],
                            images[static_cast<std::size_t>(j)], params));
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) {
                    failed = true;
                    failure = e.what();
                }
            }
        }
    }
    if (failed) throw DomainError(failure);
    // fixed-order serial reduction keeps the score reproducible
    double acc = 0.0;
    for (double d : distances) acc += d;
    pair_count = total;
    return acc / static_cast<double>(total);
}

ImageRGB render_indexed(const DatasetTable& table, const EncodingSpec& spec, int index,
                        const char* role) {
    try {
        return render(table, spec);
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << role << " " << index << ": " << e.what();
        throw DomainError(msg.str());
    }
}

}  // namespace

DiscriminabilityScore global_discriminability(const BenchmarkCondition& cond,
                                              const std::vector<DatasetTable>& tables,
                                              const EncodingSpec& spec_template,
                                              const MsSsimParams& params) {
    cond.validate();
    if (tables.size() < 2) {
        throw DomainError("global_discriminability: need at least 2 tables");
    }
    EncodingSpec spec = spec_template;
    spec.name = cond.encoding;
    std::vector<ImageRGB> images;
    images.reserve(tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
        images.push_back(render_indexed(tables[i], spec, static_cast<int>(i), "table"));
    }
    DiscriminabilityScore out;
    out.condition = cond;
    out.score = mean_pairwise_distance(images, params, out.pair_count);
    return out;
}

DiscriminabilityScore local_discriminability(
    const BenchmarkCondition& cond,
    const std::vector<std::pair<DatasetTable, DatasetTable>>& pairs,
    const EncodingSpec& spec_template, const MsSsimParams& params) {
    cond.validate();
    if (pairs.empty()) throw DomainError("local_discriminability: need at least 1 pair");
    EncodingSpec spec = spec_template;
    spec.name = cond.encoding;
    const int total = static_cast<int>(pairs.size());
    std::vector<double> distances(pairs.size(), 0.0);
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < total; ++p) {
        if (failed) continue;
        try {
            const ImageRGB original = render_indexed(pairs[static_cast<std::size_t>(p)].first,
                                                     spec, p, "pair");
            const ImageRGB swapped = render_indexed(pairs[static_cast<std::size_t>(p)].second,
                                                    spec, p, "pair");
            distances[static_cast<std::size_t>(p)] =
                similarity_to_distance(ms_ssim_yuv(original, swapped, params));
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) {
                    failed = true;
                    failure = e.what();
                }
            }
        }
    }
    if (failed) throw DomainError(failure);
    double acc = 0.0;
    for (double d : distances) acc += d;
    DiscriminabilityScore out;
    out.condition = cond;
    out.score = acc / static_cast<double>(total);
    out.pair_count = total;
    return out;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        std::ostringstream msg;
        msg << "pearson: length mismatch (" << xs.size() << " vs " << ys.size() << ")";
        throw DimensionError(msg.str());
    }
    if (xs.size() < 3) throw DomainError("pearson: need at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DomainError("pearson: zero variance in " +
                          std::string(sxx == 0.0 ? "first" : "second") + " sequence");
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::min(1.0, std::max(-1.0, r));
}

std::vector<RankingGroup> rank_encodings(const std::vector<DiscriminabilityScore>& scores,
                                         const std::string& group_by) {
    if (scores.empty()) throw DomainError("rank_encodings: no scores");
    auto group_label = [&](const BenchmarkCondition& c) -> std::string {
        if (group_by == "none") return "all";
        if (group_by == "cardinality") return "cardinality=" + std::to_string(c.cardinality);
        if (group_by == "per_category") return "per_category=" + std::to_string(c.per_category);
        if (group_by == "entropy_q1") return "entropy_q1=" + to_string(c.entropy_q1);
        throw ConfigError("unknown group_by '" + group_by +
                          "' (expected none, cardinality, per_category, or entropy_q1)");
    };

    // group -> encoding name -> accumulated scores
    std::map<std::string, std::map<std::string, std::vector<double>>> grouped;
    for (const DiscriminabilityScore& s : scores) {
        grouped[group_label(s.condition)][to_string(s.condition.encoding)].push_back(s.score);
    }

    std::vector<RankingGroup> out;
    for (const auto& [label, by_encoding] : grouped) {
        RankingGroup group;
        group.group = label;
        for (const auto& [name, values] : by_encoding) {
            RankedEncoding entry;
            entry.encoding = encoding_from_string(name);
            double acc = 0.0;
            for (double v : values) acc += v;
            entry.mean_score = acc / static_cast<double>(values.size());
            group.entries.push_back(entry);
        }
        // descending mean; alphabetical fallback courtesy of std::map order
        std::stable_sort(group.entries.begin(), group.entries.end(),
                         [](const RankedEncoding& a, const RankedEncoding& b) {
                             return a.mean_score > b.mean_score;
                         });
        for (std::size_t i = 0; i < group.entries.size(); ++i) {
            group.entries[i].rank = static_cast<int>(i) + 1;
            const bool tie_prev =
                i > 0 && group.entries[i - 1].mean_score == group.entries[i].mean_score;
            const bool tie_next = i + 1 < group.entries.size() &&
                                  group.entries[i + 1].mean_score == group.entries[i].mean_score;
            group.entries[i].tied = tie_prev || tie_next;
        }
        out.push_back(std::move(group));
    }
    return out;
}

DatasetTable synthesize_condition_table(const BenchmarkCondition& cond,
                                        const ValueRange& domain_q1,
                                        const ValueRange& domain_q2, double sd_fraction,
                                        Rng& rng) {
    cond.validate();
    if (!(sd_fraction >= 0.0)) {
        throw DomainError("synthesize_condition_table: sd_fraction must be >= 0");
    }
    DatasetTable table;
    const double span1 = domain_q1.hi - domain_q1.lo;
    for (int c = 0; c < cond.cardinality; ++c) {
        std::ostringstream label;
        label << "c" << std::setw(2) << std::setfill('0') << c;
        table.category_order.push_back(label.str());
    }
    for (int c = 0; c < cond.cardinality; ++c) {
        // per-category center within the middle 70% of the domain
        const double center = domain_q1.lo + span1 * (0.15 + 0.7 * rng.uniform());
        const double sd = sd_fraction * span1;
        for (int r = 0; r < cond.per_category; ++r) {
            DataRow row;
            row.category = table.category_order[static_cast<std::size_t>(c)];
            row.q1 = std::min(domain_q1.hi, std::max(domain_q1.lo, rng.normal(center, sd)));
            row.q2 = rng.uniform(domain_q2.lo, domain_q2.hi);
            table.rows.push_back(std::move(row));
        }
    }
    table.validate();
    return table;
}

void write_scores_csv(const std::string& path,
                      const std::vector<DiscriminabilityScore>& scores) {
    csv::Table table;
    table.header = {"cardinality", "per_category", "entropy_q1", "encoding",
                    "replicates",  "seed",         "score",      "pair_count"};
    for (const DiscriminabilityScore& s : scores) {
        const BenchmarkCondition& c = s.condition;
        table.rows.push_back({std::to_string(c.cardinality), std::to_string(c.per_category),
                              to_string(c.entropy_q1), to_string(c.encoding),
                              std::to_string(c.replicates), std::to_string(c.seed),
                              csv::format_double(s.score), std::to_string(s.pair_count)});
    }
    csv::write_file(path, table);
}

std::vector<DiscriminabilityScore> read_scores_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t cardinality = table.column("cardinality");
    const std::size_t per_category = table.column("per_category");
    const std::size_t entropy = table.column("entropy_q1");
    const std::size_t encoding = table.column("encoding");
    const std::size_t replicates = table.column("replicates");
    const std::size_t seed = table.column("seed");
    const std::size_t score = table.column("score");
    const std::size_t pair_count = table.column("pair_count");
    std::vector<DiscriminabilityScore> out;
    for (const csv::Row& row : table.rows) {
        DiscriminabilityScore s;
        s.condition.cardinality = static_cast<int>(csv::parse_long(row[cardinality]));
        s.condition.per_category = static_cast<int>(csv::parse_long(row[per_category]));
        s.condition.entropy_q1 = entropy_from_string(row[entropy]);
        s.condition.encoding = encoding_from_string(row[encoding]);
        s.condition.replicates = static_cast<int>(csv::parse_long(row[replicates]));
        s.condition.seed = static_cast<std::uint64_t>(csv::parse_long(row[seed]));
        s.score = csv::parse_double(row[score]);
        s.pair_count = static_cast<int>(csv::parse_long(row[pair_count]));
        out.push_back(s);
    }
    return out;
}

void write_rankings_csv(const std::string& path, const std::vector<RankingGroup>& groups) {
    csv::Table table;
    table.header = {"group", "rank", "encoding", "mean_score", "tied"};
    for (const RankingGroup& group : groups) {
        for (const RankedEncoding& entry : group.entries) {
            table.rows.push_back({group.group, std::to_string(entry.rank),
                                  to_string(entry.encoding),
                                  csv::format_double(entry.mean_score),
                                  entry.tied ? "1" : "0"});
        }
    }
    csv::write_file(path, table);
}

}  // namespace vizsim
