#pragma once

#include <vector>

#include "vizsim/image.hpp"
#include "vizsim/ssim.hpp"

namespace vizsim {

/// Per-scale exponents, finest scale first. All entries must be finite
/// and positive.
struct WeightVector {
    std::vector<double> w;

    WeightVector() : w{1.0, 1.0, 1.0, 1.0, 1.0} {}
    explicit WeightVector(std::vector<double> weights) : w(std::move(weights)) {}
    int scales() const { return static_cast<int>(w.size()); }

    void validate() const;
};

struct MsSsimParams {
    enum class ColorMode { kGrayscale, kYuv };

    WeightVector weights;  // K = weights.scales()
    SsimParams base;       // window, padding, stabilization constants
    ColorMode color_mode = ColorMode::kGrayscale;
};

/// Weight-independent per-scale summary of an image pair: the spatial mean
/// of the contrast*structure map at scales 1..K-1 and of the full similarity
/// map at the coarsest scale (where the luminance term enters, following the
/// reference multi-scale formulation). Combining a profile with a weight
/// vector is O(K), which makes weight tuning cheap.
struct ScaleProfile {
    std::vector<double> cs_means;  // K-1 entries, finest first
    double coarsest_ssim_mean = 1.0;

    int scales() const { return static_cast<int>(cs_means.size()) + 1; }
};

/// One profile per color channel (1 for grayscale, 3 for YUV).
struct PairProfile {
    std::vector<ScaleProfile> channels;
};

/// Largest K for which min(width, height) >= 2^(K-1) * window_size.
int max_feasible_scales(int width, int height, int window_size);

ScaleProfile ms_ssim_profile(const Plane& x, const Plane& y, const MsSsimParams& params);

/// Weighted product of the per-scale means: prod cs_i^{w_i} over the finer
/// scales times coarsest_ssim_mean^{w_K}. Non-positive means are floored at
/// 1e-6 before fractional powers; a weight of exactly 1 uses the mean as-is.
double combine_profile(const ScaleProfile& profile, const WeightVector& weights);

/// Channel-averaged combination of a multi-channel profile.
double combine_profile(const PairProfile& profile, const WeightVector& weights);

/// Multi-scale SSIM over a dyadic pyramid; 1 for identical images.
double ms_ssim(const Plane& x, const Plane& y, const MsSsimParams& params);

/// YUV variant: mean of the per-channel multi-scale scores.
double ms_ssim_yuv(const ImageRGB& x, const ImageRGB& y, const MsSsimParams& params);

/// Profile of an image pair honoring params.color_mode (grayscale or YUV).
PairProfile pair_profile(const ImageRGB& x, const ImageRGB& y, const MsSsimParams& params);

/// d = (1 - s) / 2, mapping similarity in [-1, 1] to distance in [0, 1].
double similarity_to_distance(double s);

}  // namespace vizsim
