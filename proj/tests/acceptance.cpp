// Release gate: one pass/fail line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "test_util.hpp"
#include "vizsim/clustering.hpp"
#include "vizsim/error.hpp"
#include "vizsim/msssim.hpp"
#include "vizsim/png_io.hpp"
#include "vizsim/reference.hpp"
#include "vizsim/render.hpp"
#include "vizsim/rng.hpp"
#include "vizsim/simbench.hpp"
#include "vizsim/ssim.hpp"
#include "vizsim/tuning.hpp"

using namespace vizsim;
using namespace vizsim::testutil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    int number;
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int number, const std::string& name, bool passed, const std::string& detail) {
    g_results.push_back({number, name, passed, detail});
    std::cout << (passed ? "pass" : "fail") << " criterion " << number << ": " << name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
}

template <typename Fn>
void run_criterion(int number, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(number, name, false, std::string("exception: ") + e.what());
    }
}

// ------------------------------------------------------------ criterion 1

void metric_identity_suite() {
    const auto start = Clock::now();
    Rng rng(101);
    const SsimParams ssim;
    const MsSsimParams msssim;
    int failures = 0;
    std::string first_failure;
    for (int trial = 0; trial < 500; ++trial) {
        const Plane x = random_plane(48, 48, rng);
        const Plane y = random_plane(48, 48, rng);

        const double m_xy = mean_ssim(x, y, ssim);
        const double m_yx = mean_ssim(y, x, ssim);
        const double s_xy = ms_ssim(x, y, msssim);
        const double s_yx = ms_ssim(y, x, msssim);
        const double self_m = mean_ssim(x, x, ssim);
        const double self_s = ms_ssim(x, x, msssim);

        bool ok = bits_equal(m_xy, m_yx) && bits_equal(s_xy, s_yx);
        ok = ok && std::abs(self_m - 1.0) <= 1e-9 && std::abs(self_s - 1.0) <= 1e-9;
        const SimilarityMap map = ssim_map(x, y, ssim);
        for (double v : map.values.samples) {
            if (!(v >= -1.0 && v <= 1.0)) ok = false;
        }
        if (!ok && ++failures == 1) {
            std::ostringstream msg;
            msg << "trial " << trial << ": mean " << m_xy << "/" << m_yx << ", multi " << s_xy
                << "/" << s_yx << ", self " << self_m << "/" << self_s;
            first_failure = msg.str();
        }
    }
    const double elapsed = seconds_since(start);
    const bool in_time = elapsed < 60.0;
    std::ostringstream detail;
    detail << "500 pairs, " << failures << " failures, " << elapsed << " s";
    if (!first_failure.empty()) detail << "; " << first_failure;
    report(1, "metric identity, symmetry, and bounds", failures == 0 && in_time, detail.str());
}

// ------------------------------------------------------------ criterion 2

void oracle_equivalence() {
    Rng rng(202);
    const SsimParams params;
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Plane x = random_plane(8, 8, rng);
        const Plane y = random_plane(8, 8, rng);
        const SimilarityMap fast = ssim_map(x, y, params);
        const SimilarityMap naive = ref::ssim_map(x, y, params);
        bool ok = fast.values.width == naive.values.width &&
                  fast.values.height == naive.values.height;
        if (ok) {
            for (std::size_t i = 0; i < fast.values.samples.size(); ++i) {
                const double gap = std::abs(fast.values.samples[i] - naive.values.samples[i]);
                worst = std::max(worst, gap);
                if (gap > 1e-9) ok = false;
            }
        }
        const double gap = std::abs(mean_ssim(x, y, params) - ref::mean_ssim(x, y, params));
        worst = std::max(worst, gap);
        if (gap > 1e-9) ok = false;
        if (!ok) ++failures;
    }
    std::ostringstream detail;
    detail << "100 planes, worst gap " << worst;
    report(2, "fast path equals brute-force recomputation", failures == 0, detail.str());
}

// ------------------------------------------------------------ criterion 3

void single_scale_reduction() {
    Rng rng(303);
    MsSsimParams params;
    params.weights = WeightVector({1.0});
    const SsimParams ssim = params.base;
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Plane x = random_plane(16, 16, rng);
        const Plane y = random_plane(16, 16, rng);
        const double gap = std::abs(ms_ssim(x, y, params) - mean_ssim(x, y, ssim));
        worst = std::max(worst, gap);
        if (gap > 1e-9) ++failures;
    }
    std::ostringstream detail;
    detail << "50 pairs, worst gap " << worst;
    report(3, "single-scale multi-scale equals mean ssim", failures == 0, detail.str());
}

// ------------------------------------------------------------ criterion 4

void color_swap_sensitivity() {
    int successes = 0;
    double min_gray = 1.0;
    double min_drop = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(1000 + static_cast<std::uint64_t>(trial));
        DatasetTable t;
        t.category_order = {"a", "b"};
        for (int i = 0; i < 16; ++i) {
            t.rows.push_back(
                {i % 2 == 0 ? "a" : "b", rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
        }
        EncodingSpec spec;
        spec.name = EncodingName::kXYColor;
        spec.canvas_width = 128;
        spec.canvas_height = 128;
        spec.mark_radius = 5.0;
        const ImageRGB base = render(t, spec);
        std::swap(spec.palette[0], spec.palette[1]);
        const ImageRGB swapped = render(t, spec);

        MsSsimParams gray_params;
        const double gray = ms_ssim(to_grayscale(base), to_grayscale(swapped), gray_params);
        MsSsimParams yuv_params;
        yuv_params.color_mode = MsSsimParams::ColorMode::kYuv;
        const double yuv = ms_ssim_yuv(base, swapped, yuv_params);
        min_gray = std::min(min_gray, gray);
        min_drop = std::min(min_drop, gray - yuv);
        if (gray >= 0.99 && gray - yuv >= 0.005) ++successes;
    }
    std::ostringstream detail;
    detail << successes << "/20 trials, min grayscale " << min_gray << ", min drop " << min_drop;
    report(4, "palette swaps move the color-aware score only", successes == 20, detail.str());
}

// ------------------------------------------------------------ criterion 5

void tuning_recovery() {
    const auto start = Clock::now();
    const std::vector<Plane> images = pyramid_images(64);
    MsSsimParams params;  // five unit weights
    const SimilarityStore store = SimilarityStore::from_planes(images, params);
    const std::vector<Triplet> triplets = pyramid_triplets();

    TuneConfig cfg;
    cfg.learning_rate = 0.02;
    cfg.batch_size = 8;
    cfg.epochs = 30;
    cfg.seed = 7;
    cfg.reg_scale = 0.0;
    const FitResult fit = sgd_fit(triplets, cfg, store);

    const double baseline = fit.trace.front().holdout_accuracy;  // uniform weights
    const double final_acc = fit.trace.back().holdout_accuracy;
    const std::vector<double>& w = fit.weights.w;
    const bool coarse_heavy = w.size() == 5 && (w[3] + w[4] > w[0] + w[1]);
    const double elapsed = seconds_since(start);
    const bool ok = final_acc >= 0.9 && final_acc > baseline && coarse_heavy && elapsed < 300.0;
    std::ostringstream detail;
    detail << "holdout accuracy " << baseline << " -> " << final_acc << ", w4+w5 "
           << (w.size() == 5 ? w[3] + w[4] : 0.0) << " vs w1+w2 "
           << (w.size() == 5 ? w[0] + w[1] : 0.0) << ", " << elapsed << " s";
    report(5, "weight tuning recovers the separating scales", ok, detail.str());
}

// ------------------------------------------------------------ criterion 6

void cluster_index_calibration() {
    Rng rng(606);
    double ari_sum = 0.0;
    double ami_sum = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> la(60), lb(60);
        for (int i = 0; i < 60; ++i) {
            la[i] = static_cast<int>(rng.uniform_index(6));
            lb[i] = static_cast<int>(rng.uniform_index(6));
        }
        const QualityScores q =
            cluster_quality(Clustering::from_labels(la), Clustering::from_labels(lb));
        ari_sum += q.ari;
        ami_sum += q.ami;
    }
    const double ari_mean = ari_sum / 200.0;
    const double ami_mean = ami_sum / 200.0;
    const bool centered = std::abs(ari_mean) <= 0.05 && std::abs(ami_mean) <= 0.05;

    std::vector<int> labels(60);
    for (int i = 0; i < 60; ++i) labels[i] = i % 6;
    const Clustering self = Clustering::from_labels(labels);
    const QualityScores perfect = cluster_quality(self, self);
    const bool all_one = perfect.ri == 1.0 && perfect.ari == 1.0 && perfect.nmi == 1.0 &&
                         perfect.ami == 1.0;

    const QualityScores crossed = cluster_quality(Clustering::from_labels({0, 0, 1, 1}),
                                                  Clustering::from_labels({0, 1, 0, 1}));
    const bool fixture_ok =
        std::abs(crossed.ri - 1.0 / 3.0) <= 1e-12 && std::abs(crossed.ari + 0.5) <= 1e-12;

    std::ostringstream detail;
    detail << "mean ari " << ari_mean << ", mean ami " << ami_mean << ", perfect "
           << (all_one ? "all 1" : "not all 1") << ", crossed ri " << crossed.ri << " ari "
           << crossed.ari;
    report(6, "agreement indices are chance-centered and calibrated",
           centered && all_one && fixture_ok, detail.str());
}

// ------------------------------------------------------------ criterion 7

void global_discriminability_direction() {
    const auto start = Clock::now();
    EncodingSpec spec_template;
    spec_template.canvas_width = 256;
    spec_template.canvas_height = 256;
    MsSsimParams params;
    params.color_mode = MsSsimParams::ColorMode::kYuv;
    const double sd_fraction = 0.08;
    const std::vector<EncodingName> encodings = {EncodingName::kYXColor, EncodingName::kSizeYX,
                                                 EncodingName::kColorYX};

    std::vector<DiscriminabilityScore> scores;
    for (int cardinality : {3, 10}) {
        BenchmarkCondition cond;
        cond.cardinality = cardinality;
        cond.per_category = 3;
        cond.replicates = 20;
        cond.seed = cardinality == 3 ? 1 : 2;
        Rng rng(cond.seed);
        const DatasetTable base = synthesize_condition_table(
            cond, spec_template.domain_q1, spec_template.domain_q2, sd_fraction, rng);
        const std::vector<CategoryModel> models = fit_category_models(base);
        const std::vector<DatasetTable> tables = simulate_replacements(
            base, models, cond.replicates, cond.seed + 1, spec_template.domain_q1,
            entropy_multiplier(cond.entropy_q1));
        for (EncodingName encoding : encodings) {
            BenchmarkCondition scored = cond;
            scored.encoding = encoding;
            EncodingSpec spec = spec_template;
            spec.name = encoding;
            scores.push_back(global_discriminability(scored, tables, spec, params));
        }
    }

    const std::vector<RankingGroup> ranked = rank_encodings(scores, "none");
    bool ordering = ranked.size() == 1 && ranked[0].entries.size() == 3;
    if (ordering) {
        const std::vector<RankedEncoding>& e = ranked[0].entries;
        ordering = e[0].encoding == EncodingName::kYXColor &&
                   e[1].encoding == EncodingName::kSizeYX &&
                   e[2].encoding == EncodingName::kColorYX && !e[0].tied && !e[1].tied;
    }

    // monotone synthetic accuracy: position > size > color, regardless of
    // condition
    std::vector<double> xs, ys;
    for (const DiscriminabilityScore& s : scores) {
        xs.push_back(s.score);
        switch (s.condition.encoding) {
            case EncodingName::kYXColor: ys.push_back(0.9); break;
            case EncodingName::kSizeYX: ys.push_back(0.7); break;
            default: ys.push_back(0.5); break;
        }
    }
    const double r = pearson(xs, ys);
    const double elapsed = seconds_since(start);
    const bool ok = ordering && r > 0.4 && elapsed < 600.0;
    std::ostringstream detail;
    detail << "means";
    if (ranked.size() == 1) {
        for (const RankedEncoding& e : ranked[0].entries) {
            detail << " " << to_string(e.encoding) << "=" << e.mean_score;
        }
    }
    detail << ", r=" << r << ", " << elapsed << " s";
    report(7, "spatial encodings dominate the discriminability ranking", ok, detail.str());
}

// ------------------------------------------------------------ criterion 8

void swap_involution() {
    // a swap that exchanges identical values changes nothing, and scores 0
    DatasetTable flat;
    flat.category_order = {"a", "b"};
    flat.rows = {{"a", 0.3, 0.2}, {"b", 0.3, 0.8}, {"a", 0.6, 0.4}, {"b", 0.6, 0.6}};
    BenchmarkCondition cond;
    cond.replicates = 2;
    EncodingSpec spec;
    spec.canvas_width = 64;
    spec.canvas_height = 64;
    MsSsimParams params;
    params.color_mode = MsSsimParams::ColorMode::kYuv;
    const DatasetTable noop = swap_categories(flat, "a", "b");
    std::vector<std::pair<DatasetTable, DatasetTable>> pairs = {{flat, noop}, {flat, flat}};
    const DiscriminabilityScore score = local_discriminability(cond, pairs, spec, params);
    const bool zero_ok = score.score == 0.0;

    Rng rng(808);
    int restored = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int categories = 2 + static_cast<int>(rng.uniform_index(3));
        const int per_category = 2 + static_cast<int>(rng.uniform_index(3));
        DatasetTable t;
        for (int c = 0; c < categories; ++c) {
            t.category_order.push_back(std::string(1, static_cast<char>('a' + c)));
        }
        for (int i = 0; i < per_category; ++i) {
            for (int c = 0; c < categories; ++c) {
                t.rows.push_back({t.category_order[static_cast<std::size_t>(c)],
                                  rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
            }
        }
        const std::size_t a = rng.uniform_index(static_cast<std::size_t>(categories));
        std::size_t b = rng.uniform_index(static_cast<std::size_t>(categories - 1));
        if (b >= a) ++b;
        const DatasetTable twice = swap_categories(
            swap_categories(t, t.category_order[a], t.category_order[b]), t.category_order[a],
            t.category_order[b]);
        bool equal = twice.rows.size() == t.rows.size();
        for (std::size_t i = 0; equal && i < t.rows.size(); ++i) {
            equal = twice.rows[i].category == t.rows[i].category &&
                    bits_equal(twice.rows[i].q1, t.rows[i].q1) &&
                    bits_equal(twice.rows[i].q2, t.rows[i].q2);
        }
        if (equal) ++restored;
    }
    std::ostringstream detail;
    detail << "no-op score " << score.score << ", " << restored << "/100 double swaps restored";
    report(8, "swaps are involutions and no-ops score zero", zero_ok && restored == 100,
           detail.str());
}

// ------------------------------------------------------------ criterion 9

void end_to_end_determinism() {
    TempDir dir("vizsim_acceptance");
    const std::string config_path = dir.file("config.json");
    write_text(config_path,
               "{\"seed\": 11,\n"
               " \"encoding\": {\"canvas_width\": 64, \"canvas_height\": 64},\n"
               " \"bench\": {\n"
               "   \"conditions\": [{\"cardinality\": 3, \"per_category\": 3, "
               "\"replicates\": 4},\n"
               "                    {\"cardinality\": 5, \"per_category\": 2, "
               "\"replicates\": 3}],\n"
               "   \"encodings\": [\"y_x_color\", \"size_y_x\", \"color_y_x\"]}}");
    auto run_into = [&](const char* command, const std::string& out_dir) {
        std::ostringstream out, err;
        const char* argv[] = {"vizsim", command, "--config", config_path.c_str(),
                              "--output-dir", out_dir.c_str()};
        const int code = run_cli(6, argv, out, err);
        if (code != 0) {
            throw std::runtime_error(std::string(command) + " exited " + std::to_string(code) +
                                     ": " + err.str());
        }
    };
    run_into("bench-global", dir.file("global_a"));
    run_into("bench-global", dir.file("global_b"));
    run_into("bench-local", dir.file("local_a"));
    run_into("bench-local", dir.file("local_b"));
    const bool global_ok = read_bytes(dir.file("global_a") + "/scores.csv") ==
                           read_bytes(dir.file("global_b") + "/scores.csv");
    const bool local_ok = read_bytes(dir.file("local_a") + "/scores.csv") ==
                          read_bytes(dir.file("local_b") + "/scores.csv");
    const bool manifest_ok = read_bytes(dir.file("global_a") + "/manifest.json") ==
                             read_bytes(dir.file("global_b") + "/manifest.json");
    std::ostringstream detail;
    detail << "global " << (global_ok ? "identical" : "differs") << ", local "
           << (local_ok ? "identical" : "differs") << ", manifest "
           << (manifest_ok ? "identical" : "differs");
    report(9, "benchmark reruns are byte-identical", global_ok && local_ok && manifest_ok,
           detail.str());
}

}  // namespace

int main() {
    run_criterion(1, "metric identity, symmetry, and bounds", metric_identity_suite);
    run_criterion(2, "fast path equals brute-force recomputation", oracle_equivalence);
    run_criterion(3, "single-scale multi-scale equals mean ssim", single_scale_reduction);
    run_criterion(4, "palette swaps move the color-aware score only", color_swap_sensitivity);
    run_criterion(5, "weight tuning recovers the separating scales", tuning_recovery);
    run_criterion(6, "agreement indices are chance-centered and calibrated",
                  cluster_index_calibration);
    run_criterion(7, "spatial encodings dominate the discriminability ranking",
                  global_discriminability_direction);
    run_criterion(8, "swaps are involutions and no-ops score zero", swap_involution);
    run_criterion(9, "benchmark reruns are byte-identical", end_to_end_determinism);

    int failed = 0;
    for (const Criterion& c : g_results) {
        if (!c.passed) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
