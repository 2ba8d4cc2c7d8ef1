#pragma once

#include "vizsim/image.hpp"

namespace vizsim {

/// Parameters of the single-scale structural similarity computation.
///
/// The stabilization constants default to the Wang values for a dynamic
/// range of 1.0. Setting them to 0 reproduces the unstabilized component
/// ratios, which raise DomainError on flat patches.
struct SsimParams {
    Kernel window;                     // local statistics window
    Padding padding = Padding::kZero;  // zero padding keeps map dimensions
    double c1 = 0.01 * 0.01;
    double c2 = 0.03 * 0.03;
    double c3 = 0.03 * 0.03 / 2.0;
    double alpha = 1.0;  // luminance exponent
    double beta = 1.0;   // contrast exponent
    double gamma = 1.0;  // structure exponent
    // Apply the D/(D-1) correction to variances and covariance, giving the
    // unweighted sample estimator when the window is uniform. Requires a
    // window with more than one tap.
    bool unbiased_stats = false;

    SsimParams();

    /// 11x11 / sigma 1.5 preset for cross-checks against classic SSIM codes.
    static SsimParams classic11();
};

/// Tap-weighted first- and second-order statistics of one window pair.
struct WindowStats {
    double mu_x = 0.0;
    double mu_y = 0.0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double sigma_xy = 0.0;
};

/// Per-pixel local SSIM values for an image pair.
struct SimilarityMap {
    Plane values;
};

/// (2 mu_x mu_y + C1) / (mu_x^2 + mu_y^2 + C1); in [0, 1], 1 when equal.
double luminance_similarity(double mu_x, double mu_y, double c1);

/// (2 sigma_x sigma_y + C2) / (sigma_x^2 + sigma_y^2 + C2); in [0, 1].
double contrast_similarity(double sigma_x, double sigma_y, double c2);

/// (sigma_xy + C3) / (sigma_x sigma_y + C3); in [-1, 1].
double structure_similarity(const WindowStats& stats, double c3);

/// Windowed similarity map: each sample is l^alpha c^beta s^gamma of the
/// window centered there (zero padding) or anchored there (valid).
SimilarityMap ssim_map(const Plane& x, const Plane& y, const SsimParams& params);

/// Arithmetic mean of the similarity map; symmetric in its arguments.
double mean_ssim(const Plane& x, const Plane& y, const SsimParams& params);

/// Per-window component planes (luminance, contrast, structure), shared by
/// the single-scale map and the multi-scale pyramid.
struct ComponentMaps {
    Plane luminance;
    Plane contrast;
    Plane structure;
};
ComponentMaps ssim_component_maps(const Plane& x, const Plane& y, const SsimParams& params);

/// Rescale a similarity map from [-1, 1] into [0, 1] for PNG export
/// (brighter = more similar).
Plane similarity_map_to_plane(const SimilarityMap& map);

}  // namespace vizsim
