#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vizsim/clustering.hpp"
#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"
#include "vizsim/image.hpp"
#include "vizsim/msssim.hpp"
#include "vizsim/png_io.hpp"
#include "vizsim/render.hpp"
#include "vizsim/rng.hpp"
#include "vizsim/simbench.hpp"
#include "vizsim/ssim.hpp"
#include "vizsim/tuning.hpp"

namespace vizsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json config = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config '" + path + "'");
        try {
            in >> config;
        } catch (const json::exception& e) {
            throw ConfigError("config '" + path + "': " + e.what());
        }
        if (!config.is_object()) throw ConfigError("config '" + path + "' must be an object");
    }
    for (const std::string& entry : overrides) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + entry + "'");
        }
        std::string key = entry.substr(0, eq);
        const std::string raw = entry.substr(eq + 1);
        std::replace(key.begin(), key.end(), '.', '/');
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw;  // unparseable values pass through as strings
        }
        try {
            config[json::json_pointer("/" + key)] = value;
        } catch (const json::exception& e) {
            throw ConfigError("--set " + entry + ": " + e.what());
        }
    }
    return config;
}

template <typename T>
T value_or(const json& section, const std::string& key, T fallback) {
    if (!section.is_object() || !section.contains(key)) return fallback;
    try {
        return section.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

std::string require_string(const json& section, const std::string& key,
                           const std::string& where) {
    if (!section.is_object() || !section.contains(key)) {
        throw ConfigError("config: missing required field '" + where + "." + key + "'");
    }
    try {
        return section.at(key).get<std::string>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + where + "." + key + "' must be a string");
    }
}

SsimParams ssim_params_from(const json& config) {
    const json section = config.value("ssim", json::object());
    SsimParams p;
    const int window_size = value_or<int>(section, "window_size", 3);
    const double sigma = value_or<double>(section, "sigma", 1.0);
    const std::string window = value_or<std::string>(section, "window", "gaussian");
    if (window == "gaussian") {
        p.window = gaussian_kernel(window_size, sigma);
    } else if (window == "uniform") {
        p.window = uniform_kernel(window_size);
    } else {
        throw ConfigError("ssim.window must be 'gaussian' or 'uniform', got '" + window + "'");
    }
    p.c1 = value_or<double>(section, "c1", p.c1);
    p.c2 = value_or<double>(section, "c2", p.c2);
    p.c3 = value_or<double>(section, "c3", p.c3);
    p.alpha = value_or<double>(section, "alpha", 1.0);
    p.beta = value_or<double>(section, "beta", 1.0);
    p.gamma = value_or<double>(section, "gamma", 1.0);
    p.unbiased_stats = value_or<bool>(section, "unbiased_stats", false);
    const std::string padding = value_or<std::string>(section, "padding", "zero");
    if (padding == "zero") {
        p.padding = Padding::kZero;
    } else if (padding == "valid") {
        p.padding = Padding::kValid;
    } else {
        throw ConfigError("ssim.padding must be 'zero' or 'valid', got '" + padding + "'");
    }
    return p;
}

MsSsimParams msssim_params_from(const json& config) {
    MsSsimParams p;
    p.base = ssim_params_from(config);
    const json section = config.value("msssim", json::object());
    if (section.contains("weights")) {
        p.weights = WeightVector(section.at("weights").get<std::vector<double>>());
    }
    const std::string mode = value_or<std::string>(section, "color_mode", "grayscale");
    if (mode == "grayscale") {
        p.color_mode = MsSsimParams::ColorMode::kGrayscale;
    } else if (mode == "yuv") {
        p.color_mode = MsSsimParams::ColorMode::kYuv;
    } else {
        throw ConfigError("msssim.color_mode must be 'grayscale' or 'yuv', got '" + mode + "'");
    }
    p.weights.validate();
    return p;
}

EncodingSpec encoding_spec_from(const json& config) {
    const json section = config.value("encoding", json::object());
    EncodingSpec spec;
    spec.canvas_width = value_or<int>(section, "canvas_width", 256);
    spec.canvas_height = value_or<int>(section, "canvas_height", 256);
    spec.mark_radius = value_or<double>(section, "mark_radius", 4.0);
    spec.size_min = value_or<double>(section, "size_min", 2.0);
    spec.size_max = value_or<double>(section, "size_max", 12.0);
    spec.palette = categorical_palette(value_or<int>(section, "palette_size", 30));
    if (section.contains("domain_q1")) {
        const auto v = section.at("domain_q1").get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("encoding.domain_q1 must be [lo, hi]");
        spec.domain_q1 = {v[0], v[1]};
    }
    if (section.contains("domain_q2")) {
        const auto v = section.at("domain_q2").get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("encoding.domain_q2 must be [lo, hi]");
        spec.domain_q2 = {v[0], v[1]};
    }
    if (section.contains("name")) {
        spec.name = encoding_from_string(section.at("name").get<std::string>());
    }
    spec.validate();
    return spec;
}

// ------------------------------------------------------------- manifest

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    std::uint64_t seed, std::vector<std::string> outputs) {
    std::sort(outputs.begin(), outputs.end());
    json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = fnv1a_hex(config.dump());
    manifest["seed"] = seed;
    manifest["outputs"] = outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << manifest.dump(2) << "\n";
}

fs::path prepare_output_dir(const json& config, const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) dir = value_or<std::string>(config, "output_dir", "out");
    fs::create_directories(dir);
    return {dir};
}

// ------------------------------------------------------------- helpers

ImageRGB load_rgb(const std::string& path) { return load_image(path); }

void check_same_size(const ImageRGB& a, const ImageRGB& b, const std::string& path_a,
                     const std::string& path_b) {
    if (!a.same_size(b)) {
        std::ostringstream msg;
        msg << "image dimensions differ: '" << path_a << "' is " << a.width << "x" << a.height
            << ", '" << path_b << "' is " << b.width << "x" << b.height;
        throw DimensionError(msg.str());
    }
}

std::vector<ImageRGB> load_manifest_images(const std::string& manifest_path) {
    const std::vector<std::string> paths = read_image_manifest(manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<ImageRGB> images;
    images.reserve(paths.size());
    for (const std::string& p : paths) {
        const fs::path resolved = fs::path(p).is_absolute() ? fs::path(p) : base / p;
        images.push_back(load_image(resolved.string()));
    }
    return images;
}

// ------------------------------------------------------------- commands

struct CompareOptions {
    std::string image_a;
    std::string image_b;
    std::string config;
    std::vector<std::string> sets;
    std::string map_out;
};

int cmd_compare(const CompareOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const SsimParams ssim = ssim_params_from(config);
    MsSsimParams msssim = msssim_params_from(config);
    msssim.base = ssim;

    const ImageRGB a = load_rgb(opt.image_a);
    const ImageRGB b = load_rgb(opt.image_b);
    check_same_size(a, b, opt.image_a, opt.image_b);
    const Plane ga = to_grayscale(a);
    const Plane gb = to_grayscale(b);

    const double mean = mean_ssim(ga, gb, ssim);
    const double multi = ms_ssim(ga, gb, msssim);
    const double multi_yuv = ms_ssim_yuv(a, b, msssim);
    const double distance = similarity_to_distance(multi_yuv);

    out << "metric,value\r\n";
    out << "mean_ssim," << csv::format_double(mean) << "\r\n";
    out << "ms_ssim," << csv::format_double(multi) << "\r\n";
    out << "ms_ssim_yuv," << csv::format_double(multi_yuv) << "\r\n";
    out << "distance," << csv::format_double(distance) << "\r\n";

    if (!opt.map_out.empty()) {
        const SimilarityMap map = ssim_map(ga, gb, ssim);
        save_plane(similarity_map_to_plane(map), opt.map_out);
    }
    return 0;
}

struct MapOptions {
    std::string image_a;
    std::string image_b;
    std::string out_path;
    std::string config;
    std::vector<std::string> sets;
};

int cmd_map(const MapOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const SsimParams ssim = ssim_params_from(config);
    const ImageRGB a = load_rgb(opt.image_a);
    const ImageRGB b = load_rgb(opt.image_b);
    check_same_size(a, b, opt.image_a, opt.image_b);
    const SimilarityMap map = ssim_map(to_grayscale(a), to_grayscale(b), ssim);
    save_plane(similarity_map_to_plane(map), opt.out_path);
    double acc = 0.0;
    for (double v : map.values.samples) acc += v;
    out << "metric,value\r\n";
    out << "mean_ssim," << csv::format_double(acc / static_cast<double>(map.values.sample_count()))
        << "\r\n";
    return 0;
}

struct ConfigOptions {
    std::string config;
    std::vector<std::string> sets;
    std::string output_dir;
};

TuneConfig tune_config_from(const json& section, std::uint64_t default_seed) {
    TuneConfig cfg;
    cfg.learning_rate = value_or<double>(section, "learning_rate", cfg.learning_rate);
    cfg.batch_size = value_or<int>(section, "batch_size", cfg.batch_size);
    cfg.epochs = value_or<int>(section, "epochs", cfg.epochs);
    cfg.grad_epsilon = value_or<double>(section, "grad_epsilon", cfg.grad_epsilon);
    cfg.alpha = value_or<double>(section, "alpha", cfg.alpha);
    cfg.reg_scale = value_or<double>(section, "reg_scale", cfg.reg_scale);
    cfg.seed = value_or<std::uint64_t>(section, "seed", default_seed);
    cfg.weight_lo = value_or<double>(section, "weight_lo", cfg.weight_lo);
    cfg.weight_hi = value_or<double>(section, "weight_hi", cfg.weight_hi);
    cfg.holdout_fraction = value_or<double>(section, "holdout_fraction", cfg.holdout_fraction);
    cfg.validate();
    return cfg;
}

int cmd_tune(const ConfigOptions& opt, std::ostream& out, std::ostream& err) {
    const json config = load_config(opt.config, opt.sets);
    const json section = config.value("tune", json::object());
    const std::string images_path = require_string(section, "images", "tune");
    const std::string triplets_path = require_string(section, "triplets", "tune");
    const std::uint64_t global_seed = value_or<std::uint64_t>(config, "seed", 1);
    const TuneConfig cfg = tune_config_from(section, global_seed);
    MsSsimParams params = msssim_params_from(config);

    const std::vector<ImageRGB> images = load_manifest_images(images_path);
    const std::vector<Triplet> triplets = read_triplets_csv(triplets_path);
    const SimilarityStore store = SimilarityStore::from_images(images, params);

    const FitResult fit = sgd_fit(triplets, cfg, store);
    for (const std::string& warning : fit.warnings) err << "warning: " << warning << "\n";
    if (fit.gradient_clipped) {
        err << "warning: some gradient probes were clipped to one-sided differences\n";
    }

    const fs::path dir = prepare_output_dir(config, opt.output_dir);
    csv::Table weights;
    weights.header = {"scale", "weight"};
    for (std::size_t i = 0; i < fit.weights.w.size(); ++i) {
        weights.rows.push_back({std::to_string(i + 1), csv::format_double(fit.weights.w[i])});
    }
    csv::write_file((dir / "weights.csv").string(), weights);
    write_trace_csv((dir / "trace.csv").string(), fit.trace);
    write_manifest(dir / "manifest.json", "tune", config, cfg.seed,
                   {"weights.csv", "trace.csv"});

    out << "scale,weight\r\n";
    for (std::size_t i = 0; i < fit.weights.w.size(); ++i) {
        out << (i + 1) << "," << csv::format_double(fit.weights.w[i]) << "\r\n";
    }
    return 0;
}

int cmd_cluster(const ConfigOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const json section = config.value("cluster", json::object());
    const int k = value_or<int>(section, "k", 0);
    if (k < 1) throw ConfigError("config: cluster.k must be a positive integer");

    DistanceMatrix dist;
    if (section.contains("distances")) {
        dist = read_distance_csv(section.at("distances").get<std::string>());
    } else if (section.contains("images")) {
        const MsSsimParams params = msssim_params_from(config);
        dist = distance_matrix(load_manifest_images(section.at("images").get<std::string>()),
                               params);
    } else {
        throw ConfigError("config: cluster needs either 'distances' or 'images'");
    }

    const auto [dendrogram, clustering] = ward_cluster(dist, k);
    const fs::path dir = prepare_output_dir(config, opt.output_dir);
    write_clustering_csv((dir / "clusters.csv").string(), clustering);
    write_dendrogram_csv((dir / "dendrogram.csv").string(), dendrogram);
    const std::uint64_t seed = value_or<std::uint64_t>(config, "seed", 0);
    write_manifest(dir / "manifest.json", "cluster", config, seed,
                   {"clusters.csv", "dendrogram.csv"});

    out << "group,size\r\n";
    for (std::size_t g = 0; g < clustering.groups.size(); ++g) {
        out << g << "," << clustering.groups[g].size() << "\r\n";
    }
    return 0;
}

struct QualityOptions {
    std::string path_a;
    std::string path_b;
};

int cmd_quality(const QualityOptions& opt, std::ostream& out) {
    const Clustering a = read_clustering_csv(opt.path_a, false);
    const Clustering b = read_clustering_csv(opt.path_b, false);
    const QualityScores q = cluster_quality(a, b);
    out << "ri,ari,nmi,ami,nmi_normalization,ami_normalization\r\n";
    out << csv::format_double(q.ri) << "," << csv::format_double(q.ari) << ","
        << csv::format_double(q.nmi) << "," << csv::format_double(q.ami) << ","
        << q.nmi_normalization << "," << q.ami_normalization << "\r\n";
    return 0;
}

int cmd_simulate(const ConfigOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const json section = config.value("simulate", json::object());
    const std::string table_path = require_string(section, "table", "simulate");
    const int replicates = value_or<int>(section, "replicates", 20);
    const double sd_multiplier = value_or<double>(section, "sd_multiplier", 1.0);
    const std::uint64_t seed =
        value_or<std::uint64_t>(section, "seed", value_or<std::uint64_t>(config, "seed", 1));
    const EncodingSpec spec = encoding_spec_from(config);

    const DatasetTable base = read_table_csv(table_path);
    const std::vector<CategoryModel> models = fit_category_models(base);
    const std::vector<DatasetTable> tables =
        simulate_replacements(base, models, replicates, seed, spec.domain_q1, sd_multiplier);

    const fs::path dir = prepare_output_dir(config, opt.output_dir);
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        std::ostringstream name;
        name << "replicate_" << std::setw(3) << std::setfill('0') << i << ".csv";
        write_table_csv((dir / name.str()).string(), tables[i]);
        outputs.push_back(name.str());
    }
    write_manifest(dir / "manifest.json", "simulate", config, seed, outputs);
    out << "replicates," << tables.size() << "\r\n";
    return 0;
}

struct ConditionSetup {
    BenchmarkCondition condition;
    DatasetTable base;
    std::vector<CategoryModel> models;
    std::vector<DatasetTable> tables;
};

std::vector<BenchmarkCondition> conditions_from(const json& bench, std::uint64_t global_seed) {
    std::vector<BenchmarkCondition> out;
    std::vector<std::string> problems;
    const json list = bench.value("conditions", json::array());
    if (!list.is_array() || list.empty()) {
        throw ConfigError("config: bench.conditions must be a non-empty array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        const json& c = list.at(i);
        BenchmarkCondition cond;
        cond.cardinality = value_or<int>(c, "cardinality", 3);
        cond.per_category = value_or<int>(c, "per_category", 3);
        cond.replicates = value_or<int>(c, "replicates", 20);
        cond.seed = value_or<std::uint64_t>(c, "seed", global_seed + i);
        cond.entropy_q1 = entropy_from_string(value_or<std::string>(c, "entropy_q1", "fitted"));
        try {
            cond.validate();
        } catch (const Error& e) {
            problems.push_back("conditions[" + std::to_string(i) + "]: " + e.what());
        }
        out.push_back(cond);
    }
    if (!problems.empty()) {
        std::string msg = "config:";
        for (const std::string& p : problems) msg += " " + p + ";";
        throw ConfigError(msg);
    }
    return out;
}

std::vector<EncodingName> encodings_from(const json& bench) {
    const json list = bench.value("encodings", json::array());
    if (!list.is_array() || list.empty()) {
        throw ConfigError("config: bench.encodings must be a non-empty array");
    }
    std::vector<EncodingName> out;
    for (const json& name : list) out.push_back(encoding_from_string(name.get<std::string>()));
    return out;
}

ConditionSetup set_up_condition(const BenchmarkCondition& cond, const EncodingSpec& spec,
                                double sd_fraction) {
    ConditionSetup setup;
    setup.condition = cond;
    Rng rng(cond.seed);
    setup.base = synthesize_condition_table(cond, spec.domain_q1, spec.domain_q2, sd_fraction,
                                            rng);
    setup.models = fit_category_models(setup.base);
    setup.tables = simulate_replacements(setup.base, setup.models, cond.replicates,
                                         cond.seed + 1, spec.domain_q1,
                                         entropy_multiplier(cond.entropy_q1));
    return setup;
}

void dump_stimuli(const fs::path& dir, const ConditionSetup& setup, const EncodingSpec& spec,
                  std::size_t condition_index, std::vector<std::string>& outputs) {
    const fs::path sub = dir / "stimuli";
    fs::create_directories(sub);
    for (std::size_t t = 0; t < setup.tables.size(); ++t) {
        std::ostringstream name;
        name << "c" << condition_index << "_" << to_string(spec.name) << "_r" << std::setw(3)
             << std::setfill('0') << t << ".png";
        save_image(render(setup.tables[t], spec), (sub / name.str()).string());
        outputs.push_back("stimuli/" + name.str());
    }
}

int cmd_bench_global(const ConfigOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const json bench = config.value("bench", json::object());
    const std::uint64_t global_seed = value_or<std::uint64_t>(config, "seed", 1);
    const std::vector<BenchmarkCondition> conditions = conditions_from(bench, global_seed);
    const std::vector<EncodingName> encodings = encodings_from(bench);
    const double sd_fraction = value_or<double>(bench, "sd_fraction", 0.08);
    const bool dump = value_or<bool>(bench, "dump_stimuli", false);
    const EncodingSpec spec_template = encoding_spec_from(config);
    const MsSsimParams params = msssim_params_from(config);

    const fs::path dir = prepare_output_dir(config, opt.output_dir);
    std::vector<std::string> outputs = {"scores.csv"};
    std::vector<DiscriminabilityScore> scores;
    for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
        // one simulation per condition, shared across encodings so that
        // encoding scores are comparable
        ConditionSetup setup = set_up_condition(conditions[ci], spec_template, sd_fraction);
        for (EncodingName encoding : encodings) {
            BenchmarkCondition cond = setup.condition;
            cond.encoding = encoding;
            scores.push_back(
                global_discriminability(cond, setup.tables, spec_template, params));
            if (dump) {
                EncodingSpec spec = spec_template;
                spec.name = encoding;
                dump_stimuli(dir, setup, spec, ci, outputs);
            }
        }
    }
    write_scores_csv((dir / "scores.csv").string(), scores);
    write_manifest(dir / "manifest.json", "bench-global", config, global_seed, outputs);
    out << "scores," << scores.size() << "\r\n";
    return 0;
}

int cmd_bench_local(const ConfigOptions& opt, std::ostream& out) {
    const json config = load_config(opt.config, opt.sets);
    const json bench = config.value("bench", json::object());
    const std::uint64_t global_seed = value_or<std::uint64_t>(config, "seed", 1);
    const std::vector<BenchmarkCondition> conditions = conditions_from(bench, global_seed);
    const std::vector<EncodingName> encodings = encodings_from(bench);
    const double sd_fraction = value_or<double>(bench, "sd_fraction", 0.08);
    const EncodingSpec spec_template = encoding_spec_from(config);
    const MsSsimParams params = msssim_params_from(config);

    const fs::path dir = prepare_output_dir(config, opt.output_dir);
    std::vector<DiscriminabilityScore> scores;
    for (const BenchmarkCondition& base_cond : conditions) {
        if (base_cond.cardinality < 2) {
            throw ConfigError("config: bench-local needs cardinality >= 2 to swap categories");
        }
        ConditionSetup setup = set_up_condition(base_cond, spec_template, sd_fraction);
        // seeded swap choice per replicate
        Rng swap_rng(base_cond.seed + 2);
        std::vector<std::pair<DatasetTable, DatasetTable>> pairs;
        for (const DatasetTable& table : setup.tables) {
            const std::size_t m = table.category_order.size();
            const std::size_t a = static_cast<std::size_t>(swap_rng.uniform_index(m));
            std::size_t b = static_cast<std::size_t>(swap_rng.uniform_index(m - 1));
            if (b >= a) ++b;
            DatasetTable swapped =
                swap_categories(table, table.category_order[a], table.category_order[b]);
            pairs.emplace_back(table, std::move(swapped));
        }
        for (EncodingName encoding : encodings) {
            BenchmarkCondition cond = setup.condition;
            cond.encoding = encoding;
            scores.push_back(local_discriminability(cond, pairs, spec_template, params));
        }
    }
    write_scores_csv((dir / "scores.csv").string(), scores);
    write_manifest(dir / "manifest.json", "bench-local", config, global_seed, {"scores.csv"});
    out << "scores," << scores.size() << "\r\n";
    return 0;
}

struct RankOptions {
    std::string scores;
    std::string group_by = "none";
    std::string out_path;
};

int cmd_rank(const RankOptions& opt, std::ostream& out) {
    const std::vector<DiscriminabilityScore> scores = read_scores_csv(opt.scores);
    const std::vector<RankingGroup> groups = rank_encodings(scores, opt.group_by);
    if (!opt.out_path.empty()) write_rankings_csv(opt.out_path, groups);
    out << "group,rank,encoding,mean_score,tied\r\n";
    for (const RankingGroup& group : groups) {
        for (const RankedEncoding& entry : group.entries) {
            out << group.group << "," << entry.rank << "," << to_string(entry.encoding) << ","
                << csv::format_double(entry.mean_score) << "," << (entry.tied ? "1" : "0")
                << "\r\n";
        }
    }
    return 0;
}

struct CorrelateOptions {
    std::string scores;
    std::string accuracy;
    std::string group_by = "none";
    std::string out_path;
};

int cmd_correlate(const CorrelateOptions& opt, std::ostream& out) {
    const std::vector<DiscriminabilityScore> scores = read_scores_csv(opt.scores);
    const std::vector<RankingGroup> groups = rank_encodings(scores, opt.group_by);

    const csv::Table accuracy = csv::read_file(opt.accuracy);
    const std::size_t enc_col = accuracy.column("encoding");
    const std::size_t factor_col = accuracy.column("factor");
    const std::size_t acc_col = accuracy.column("accuracy");
    std::map<std::pair<std::string, std::string>, double> accuracy_by_key;
    for (const csv::Row& row : accuracy.rows) {
        accuracy_by_key[{row[factor_col], row[enc_col]}] = csv::parse_double(row[acc_col]);
    }

    csv::Table result;
    result.header = {"factor", "r", "n"};
    for (const RankingGroup& group : groups) {
        std::vector<double> xs, ys;
        for (const RankedEncoding& entry : group.entries) {
            const auto it = accuracy_by_key.find({group.group, to_string(entry.encoding)});
            if (it == accuracy_by_key.end()) continue;
            xs.push_back(entry.mean_score);
            ys.push_back(it->second);
        }
        if (xs.size() < 3) {
            throw DomainError("correlate: group '" + group.group + "' matches only " +
                              std::to_string(xs.size()) +
                              " encodings in the accuracy file; need >= 3");
        }
        result.rows.push_back({group.group, csv::format_double(pearson(xs, ys)),
                               std::to_string(xs.size())});
    }
    if (!opt.out_path.empty()) csv::write_file(opt.out_path, result);
    out << "factor,r,n\r\n";
    for (const csv::Row& row : result.rows) {
        out << row[0] << "," << row[1] << "," << row[2] << "\r\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"perceptual similarity toolkit for visualization images"};
    app.name("vizsim");
    app.require_subcommand(1);

    auto compare_opt = std::make_shared<CompareOptions>();
    CLI::App* compare = app.add_subcommand(
        "compare", "Mean-SSIM, MS-SSIM, MS-SSIM-YUV and distance for an image pair");
    compare->add_option("image_a", compare_opt->image_a, "first PNG")->required();
    compare->add_option("image_b", compare_opt->image_b, "second PNG")->required();
    compare->add_option("--config", compare_opt->config, "JSON config file");
    compare->add_option("--set", compare_opt->sets, "config override key=value");
    compare->add_option("--map", compare_opt->map_out, "write the SSIM map PNG here");

    auto map_opt = std::make_shared<MapOptions>();
    CLI::App* map_cmd = app.add_subcommand("map", "SSIM heatmap PNG for an image pair");
    map_cmd->add_option("image_a", map_opt->image_a, "first PNG")->required();
    map_cmd->add_option("image_b", map_opt->image_b, "second PNG")->required();
    map_cmd->add_option("--out", map_opt->out_path, "output PNG path")->required();
    map_cmd->add_option("--config", map_opt->config, "JSON config file");
    map_cmd->add_option("--set", map_opt->sets, "config override key=value");

    auto tune_opt = std::make_shared<ConfigOptions>();
    CLI::App* tune = app.add_subcommand("tune", "fit MS-SSIM scale weights to triplets");
    tune->add_option("--config", tune_opt->config, "JSON config file")->required();
    tune->add_option("--set", tune_opt->sets, "config override key=value");
    tune->add_option("--output-dir", tune_opt->output_dir, "output directory");

    auto cluster_opt = std::make_shared<ConfigOptions>();
    CLI::App* cluster = app.add_subcommand("cluster", "Ward clustering with a fixed-k cut");
    cluster->add_option("--config", cluster_opt->config, "JSON config file")->required();
    cluster->add_option("--set", cluster_opt->sets, "config override key=value");
    cluster->add_option("--output-dir", cluster_opt->output_dir, "output directory");

    auto quality_opt = std::make_shared<QualityOptions>();
    CLI::App* quality = app.add_subcommand("quality", "agreement indices of two clusterings");
    quality->add_option("--a", quality_opt->path_a, "first clustering CSV")->required();
    quality->add_option("--b", quality_opt->path_b, "second clustering CSV")->required();

    auto simulate_opt = std::make_shared<ConfigOptions>();
    CLI::App* simulate = app.add_subcommand("simulate", "redraw q1 from fitted category models");
    simulate->add_option("--config", simulate_opt->config, "JSON config file")->required();
    simulate->add_option("--set", simulate_opt->sets, "config override key=value");
    simulate->add_option("--output-dir", simulate_opt->output_dir, "output directory");

    auto bench_global_opt = std::make_shared<ConfigOptions>();
    CLI::App* bench_global =
        app.add_subcommand("bench-global", "global discriminability benchmark");
    bench_global->add_option("--config", bench_global_opt->config, "JSON config file")
        ->required();
    bench_global->add_option("--set", bench_global_opt->sets, "config override key=value");
    bench_global->add_option("--output-dir", bench_global_opt->output_dir, "output directory");

    auto bench_local_opt = std::make_shared<ConfigOptions>();
    CLI::App* bench_local =
        app.add_subcommand("bench-local", "local (swap) discriminability benchmark");
    bench_local->add_option("--config", bench_local_opt->config, "JSON config file")->required();
    bench_local->add_option("--set", bench_local_opt->sets, "config override key=value");
    bench_local->add_option("--output-dir", bench_local_opt->output_dir, "output directory");

    auto rank_opt = std::make_shared<RankOptions>();
    CLI::App* rank = app.add_subcommand("rank", "rank encodings by mean score");
    rank->add_option("--scores", rank_opt->scores, "scores CSV")->required();
    rank->add_option("--group-by", rank_opt->group_by,
                     "none, cardinality, per_category, or entropy_q1");
    rank->add_option("--out", rank_opt->out_path, "rankings CSV path");

    auto correlate_opt = std::make_shared<CorrelateOptions>();
    CLI::App* correlate =
        app.add_subcommand("correlate", "Pearson r of scores against empirical accuracy");
    correlate->add_option("--scores", correlate_opt->scores, "scores CSV")->required();
    correlate->add_option("--accuracy", correlate_opt->accuracy,
                          "CSV encoding,factor,accuracy")
        ->required();
    correlate->add_option("--group-by", correlate_opt->group_by,
                          "none, cardinality, per_category, or entropy_q1");
    correlate->add_option("--out", correlate_opt->out_path, "correlations CSV path");

    try {
        app.parse(argc, argv);
        if (compare->parsed()) return cmd_compare(*compare_opt, out);
        if (map_cmd->parsed()) return cmd_map(*map_opt, out);
        if (tune->parsed()) return cmd_tune(*tune_opt, out, err);
        if (cluster->parsed()) return cmd_cluster(*cluster_opt, out);
        if (quality->parsed()) return cmd_quality(*quality_opt, out);
        if (simulate->parsed()) return cmd_simulate(*simulate_opt, out);
        if (bench_global->parsed()) return cmd_bench_global(*bench_global_opt, out);
        if (bench_local->parsed()) return cmd_bench_local(*bench_local_opt, out);
        if (rank->parsed()) return cmd_rank(*rank_opt, out);
        if (correlate->parsed()) return cmd_correlate(*correlate_opt, out);
        err << "error: no command selected\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace vizsim
