#include "vizsim/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"

namespace vizsim {

void Triplet::validate(int item_count) const {
    if (anchor == positive || anchor == negative || positive == negative) {
        std::ostringstream msg;
        msg << "triplet (" << anchor << "," << positive << "," << negative
            << "): ids must be distinct";
        throw DomainError(msg.str());
    }
    for (int id : {anchor, positive, negative}) {
        if (id < 0 || id >= item_count) {
            std::ostringstream msg;
            msg << "triplet references image " << id << ", collection has " << item_count;
            throw DomainError(msg.str());
        }
    }
    if (ground_truth != 0 && ground_truth != 1) {
        std::ostringstream msg;
        msg << "triplet label must be 0 or 1, got " << ground_truth;
        throw DomainError(msg.str());
    }
}

void TuneConfig::validate() const {
    std::vector<std::string> problems;
    if (!(learning_rate > 0.0)) problems.push_back("learning_rate must be > 0");
    if (batch_size < 1) problems.push_back("batch_size must be >= 1");
    if (epochs < 1) problems.push_back("epochs must be >= 1");
    if (!(grad_epsilon > 0.0)) problems.push_back("grad_epsilon must be > 0");
    if (!(alpha > 0.0)) problems.push_back("alpha must be > 0");
    if (reg_scale < 0.0) problems.push_back("reg_scale must be >= 0");
    if (!(weight_lo > 0.0 && weight_hi < 1.0 && weight_lo < weight_hi)) {
        problems.push_back("weight bounds must satisfy 0 < lo < hi < 1");
    }
    if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
        problems.push_back("holdout_fraction must be in [0, 1)");
    }
    if (!problems.empty()) {
        std::string msg = "tune config invalid:";
        for (const std::string& p : problems) msg += " " + p + ";";
        throw ConfigError(msg);
    }
}

std::vector<std::string> TuneConfig::warnings() const {
    std::vector<std::string> out;
    if (alpha > 1.0) {
        out.push_back(
            "alpha > 1 turns the boundary penalty into a boundary reward; "
            "the regularizer now favors weights near 0 or 1");
    }
    return out;
}

namespace {

struct StoreData {
    int n = 0;
    std::vector<PairProfile> profiles;
};

template <typename ImageT, typename ProfileFn>
StoreData build_profiles(const std::vector<ImageT>& images, ProfileFn make_profile) {
    StoreData data;
    data.n = static_cast<int>(images.size());
    if (data.n < 2) throw DomainError("similarity store: need at least 2 images");
    const int pairs = data.n * (data.n - 1) / 2;
    data.profiles.assign(static_cast<std::size_t>(pairs), PairProfile{});
    std::vector<std::pair<int, int>> index;
    index.reserve(static_cast<std::size_t>(pairs));
    for (int i = 0; i < data.n; ++i) {
        for (int j = i + 1; j < data.n; ++j) index.emplace_back(i, j);
    }
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < pairs; ++p) {
        if (failed) continue;
        try {
            const auto [i, j] = index[static_cast<std::size_t>(p)];
            data.profiles[static_cast<std::size_t>(p)] = make_profile(
                images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
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
    return data;
}

}  // namespace

SimilarityStore SimilarityStore::from_planes(const std::vector<Plane>& images,
                                             const MsSsimParams& params) {
    StoreData data = build_profiles(images, [&](const Plane& a, const Plane& b) {
        PairProfile p;
        p.channels.push_back(ms_ssim_profile(a, b, params));
        return p;
    });
    SimilarityStore store;
    store.n_ = data.n;
    store.scales_ = params.weights.scales();
    store.profiles_ = std::move(data.profiles);
    return store;
}

SimilarityStore SimilarityStore::from_images(const std::vector<ImageRGB>& images,
                                             const MsSsimParams& params) {
    StoreData data = build_profiles(images, [&](const ImageRGB& a, const ImageRGB& b) {
        return pair_profile(a, b, params);
    });
    SimilarityStore store;
    store.n_ = data.n;
    store.scales_ = params.weights.scales();
    store.profiles_ = std::move(data.profiles);
    return store;
}

const PairProfile& SimilarityStore::profile(int i, int j) const {
    // upper-triangle index for i < j
    const std::size_t row_start =
        static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2;
    return profiles_[row_start + static_cast<std::size_t>(j - i - 1)];
}

double SimilarityStore::score(int i, int j, const WeightVector& w) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) {
        std::ostringstream msg;
        msg << "similarity store: image id " << (i < 0 || i >= n_ ? i : j) << " outside [0,"
            << n_ << ")";
        throw DomainError(msg.str());
    }
    if (i == j) return 1.0;
    if (i > j) std::swap(i, j);
    return combine_profile(profile(i, j), w);
}

int triplet_label(int i, int j, int k, const WeightVector& w, const SimilarityStore& store) {
    return store.score(i, j, w) >= store.score(i, k, w) ? 1 : 0;
}

double regularization(const WeightVector& w, double alpha) {
    w.validate();
    double acc = 0.0;
    for (double wi : w.w) {
        if (!(wi > 0.0 && wi < 1.0)) {
            std::ostringstream msg;
            msg << "regularization: weight " << wi << " outside the open interval (0,1)";
            throw DomainError(msg.str());
        }
        acc += std::pow(wi, alpha - 1.0) * std::pow(1.0 - wi, alpha - 1.0);
    }
    return acc;
}

double triplet_loss(const std::vector<Triplet>& batch, const WeightVector& w,
                    const TuneConfig& cfg, const SimilarityStore& store) {
    if (batch.empty()) throw DomainError("triplet_loss: empty batch");
    double data = 0.0;
    for (const Triplet& t : batch) {
        const double s_ij = store.score(t.anchor, t.positive, w);
        const double s_ik = store.score(t.anchor, t.negative, w);
        const int f = (s_ij >= s_ik) ? 1 : 0;
        if (f != t.ground_truth) {
            const double gap = s_ij - s_ik;
            data += gap * gap;
        }
    }
    if (cfg.reg_scale > 0.0) data += cfg.reg_scale * regularization(w, cfg.alpha);
    return data;
}

GradientResult numeric_gradient(const std::function<double(const WeightVector&)>& loss_at,
                                const WeightVector& w, double eps, double lo, double hi) {
    if (!(eps > 0.0)) throw DomainError("numeric_gradient: eps must be > 0");
    GradientResult out;
    out.g.resize(w.w.size(), 0.0);
    WeightVector probe = w;
    for (std::size_t i = 0; i < w.w.size(); ++i) {
        const double wi = w.w[i];
        const bool up_ok = wi + eps <= hi;
        const bool down_ok = wi - eps >= lo;
        double g;
        if (up_ok && down_ok) {
            probe.w[i] = wi + eps;
            const double up = loss_at(probe);
            probe.w[i] = wi - eps;
            const double down = loss_at(probe);
            g = (up - down) / (2.0 * eps);
        } else if (up_ok) {
            probe.w[i] = wi + eps;
            const double up = loss_at(probe);
            probe.w[i] = wi;
            const double here = loss_at(probe);
            g = (up - here) / eps;
            out.clipped = true;
        } else if (down_ok) {
            probe.w[i] = wi;
            const double here = loss_at(probe);
            probe.w[i] = wi - eps;
            const double down = loss_at(probe);
            g = (here - down) / eps;
            out.clipped = true;
        } else {
            std::ostringstream msg;
            msg << "numeric_gradient: eps = " << eps << " exceeds the feasible interval around w"
                << (i + 1) << " = " << wi;
            throw DomainError(msg.str());
        }
        probe.w[i] = wi;
        out.g[i] = g;
    }
    return out;
}

double triplet_accuracy(const std::vector<Triplet>& triplets, const WeightVector& w,
                        const SimilarityStore& store) {
    if (triplets.empty()) throw DomainError("triplet_accuracy: empty set");
    int hits = 0;
    for (const Triplet& t : triplets) {
        if (triplet_label(t.anchor, t.positive, t.negative, w, store) == t.ground_truth) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(triplets.size());
}

FitResult sgd_fit(const std::vector<Triplet>& triplets, const TuneConfig& cfg,
                  const SimilarityStore& store) {
    cfg.validate();
    if (triplets.empty()) throw DomainError("sgd_fit: no triplets");
    for (const Triplet& t : triplets) t.validate(store.size());

    FitResult result;
    result.warnings = cfg.warnings();

    Rng rng(cfg.seed);

    // holdout split after one seeded shuffle
    std::vector<Triplet> shuffled = triplets;
    rng.shuffle(shuffled);
    const int holdout_count =
        static_cast<int>(cfg.holdout_fraction * static_cast<double>(shuffled.size()));
    std::vector<Triplet> holdout(shuffled.begin(), shuffled.begin() + holdout_count);
    std::vector<Triplet> train(shuffled.begin() + holdout_count, shuffled.end());
    if (train.empty()) throw DomainError("sgd_fit: holdout split leaves no training triplets");
    const std::vector<Triplet>& eval_set = holdout.empty() ? train : holdout;

    WeightVector w;
    w.w.assign(static_cast<std::size_t>(store.scales()), 0.5);

    auto record = [&](int epoch) {
        TraceRow row;
        row.epoch = epoch;
        row.loss = triplet_loss(train, w, cfg, store);
        row.holdout_accuracy = triplet_accuracy(eval_set, w, store);
        result.trace.push_back(row);
    };
    record(0);

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Triplet> batch;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t b = start; b < stop; ++b) batch.push_back(train[order[b]]);
            const GradientResult grad = numeric_gradient(
                [&](const WeightVector& probe) { return triplet_loss(batch, probe, cfg, store); },
                w, cfg.grad_epsilon, cfg.weight_lo, cfg.weight_hi);
            if (grad.clipped) result.gradient_clipped = true;
            for (std::size_t i = 0; i < w.w.size(); ++i) {
                const double stepped = w.w[i] - cfg.learning_rate * grad.g[i];
                w.w[i] = std::min(cfg.weight_hi, std::max(cfg.weight_lo, stepped));
            }
        }
        record(epoch);
    }
    result.weights = w;
    return result;
}

std::vector<Triplet> triplets_from_distance(const DistanceMatrix& dist) {
    dist.validate();
    std::vector<Triplet> out;
    for (int i = 0; i < dist.n; ++i) {
        for (int j = 0; j < dist.n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < dist.n; ++k) {
                if (k == i) continue;
                Triplet t;
                t.anchor = i;
                t.positive = j;
                t.negative = k;
                t.ground_truth = dist.at(i, j) <= dist.at(i, k) ? 1 : 0;
                out.push_back(t);
            }
        }
    }
    return out;
}

std::vector<Triplet> triplets_from_distance(const DistanceMatrix& dist, int count, Rng& rng) {
    std::vector<Triplet> all = triplets_from_distance(dist);
    if (count < 0 || count > static_cast<int>(all.size())) {
        std::ostringstream msg;
        msg << "triplet sample of " << count << " from " << all.size() << " available";
        throw DomainError(msg.str());
    }
    rng.shuffle(all);
    all.resize(static_cast<std::size_t>(count));
    return all;
}

std::vector<Triplet> triplets_from_clustering(const Clustering& clustering) {
    clustering.validate();
    if (clustering.allow_overlap) {
        throw DomainError("triplets_from_clustering: requires a hard clustering");
    }
    const std::vector<int> labels = clustering.labels();
    std::vector<Triplet> out;
    const int n = clustering.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || labels[static_cast<std::size_t>(j)] != labels[static_cast<std::size_t>(i)])
                continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j ||
                    labels[static_cast<std::size_t>(k)] == labels[static_cast<std::size_t>(i)])
                    continue;
                Triplet t;
                t.anchor = i;
                t.positive = j;
                t.negative = k;
                t.ground_truth = 1;
                out.push_back(t);
            }
        }
    }
    return out;
}

std::vector<Triplet> read_triplets_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t a = table.column("anchor");
    const std::size_t p = table.column("positive");
    const std::size_t k = table.column("negative");
    std::vector<Triplet> out;
    out.reserve(table.rows.size());
    for (const csv::Row& row : table.rows) {
        Triplet t;
        t.anchor = static_cast<int>(csv::parse_long(row[a]));
        t.positive = static_cast<int>(csv::parse_long(row[p]));
        t.negative = static_cast<int>(csv::parse_long(row[k]));
        t.ground_truth = 1;
        out.push_back(t);
    }
    return out;
}

void write_triplets_csv(const std::string& path, const std::vector<Triplet>& triplets) {
    csv::Table table;
    table.header = {"anchor", "positive", "negative"};
    for (const Triplet& t : triplets) {
        const int pos = t.ground_truth == 1 ? t.positive : t.negative;
        const int neg = t.ground_truth == 1 ? t.negative : t.positive;
        table.rows.push_back(
            {std::to_string(t.anchor), std::to_string(pos), std::to_string(neg)});
    }
    csv::write_file(path, table);
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    csv::Table table;
    table.header = {"epoch", "loss", "holdout_accuracy"};
    for (const TraceRow& row : trace) {
        table.rows.push_back({std::to_string(row.epoch), csv::format_double(row.loss),
                              csv::format_double(row.holdout_accuracy)});
    }
    csv::write_file(path, table);
}

std::vector<std::string> read_image_manifest(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    const std::size_t path_col = table.column("path");
    std::vector<std::string> out(table.rows.size());
    std::vector<bool> seen(table.rows.size(), false);
    for (const csv::Row& row : table.rows) {
        const long id = csv::parse_long(row[id_col]);
        if (id < 0 || id >= static_cast<long>(out.size()) || seen[static_cast<std::size_t>(id)]) {
            std::ostringstream msg;
            msg << "image manifest: ids must cover 0.." << out.size() - 1
                << " exactly once (saw " << id << ")";
            throw IoError(msg.str());
        }
        seen[static_cast<std::size_t>(id)] = true;
        out[static_cast<std::size_t>(id)] = row[path_col];
    }
    return out;
}

void write_image_manifest(const std::string& path, const std::vector<std::string>& paths) {
    csv::Table table;
    table.header = {"id", "path"};
    for (std::size_t i = 0; i < paths.size(); ++i) {
        table.rows.push_back({std::to_string(i), paths[i]});
    }
    csv::write_file(path, table);
}

}  // namespace vizsim
