#include "vizsim/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vizsim/error.hpp"

namespace vizsim {

namespace {

constexpr double kComponentFloor = 1e-6;  // floor before fractional powers

double raise(double base, double exponent) {
    if (exponent == 1.0) return base;
    return std::pow(std::max(base, kComponentFloor), exponent);
}

Plane multiply(const Plane& a, const Plane& b) {
    Plane out(a.width, a.height);
    for (std::size_t i = 0; i < a.sample_count(); ++i) {
        out.samples[i] = a.samples[i] * b.samples[i];
    }
    return out;
}

}  // namespace

SsimParams::SsimParams() : window(gaussian_kernel(3, 1.0)) {}

SsimParams SsimParams::classic11() {
    SsimParams p;
    p.window = gaussian_kernel(11, 1.5);
    return p;
}

double luminance_similarity(double mu_x, double mu_y, double c1) {
    const double den = mu_x * mu_x + mu_y * mu_y + c1;
    if (den == 0.0) {
        throw DomainError("luminance_similarity: both means zero with C1 = 0");
    }
    return (2.0 * mu_x * mu_y + c1) / den;
}

double contrast_similarity(double sigma_x, double sigma_y, double c2) {
    const double den = sigma_x * sigma_x + sigma_y * sigma_y + c2;
    if (den == 0.0) {
        throw DomainError("contrast_similarity: both deviations zero with C2 = 0");
    }
    return (2.0 * sigma_x * sigma_y + c2) / den;
}

double structure_similarity(const WindowStats& stats, double c3) {
    const double den = stats.sigma_x * stats.sigma_y + c3;
    if (den == 0.0) {
        throw DomainError("structure_similarity: zero denominator with C3 = 0");
    }
    return (stats.sigma_xy + c3) / den;
}

ComponentMaps ssim_component_maps(const Plane& x, const Plane& y, const SsimParams& params) {
    if (!x.same_size(y)) {
        std::ostringstream msg;
        msg << "ssim: plane dimensions differ (" << x.width << "x" << x.height << " vs "
            << y.width << "x" << y.height << ")";
        throw DimensionError(msg.str());
    }
    const Kernel& k = params.window;
    const int taps = k.size * k.size;
    if (params.unbiased_stats && taps < 2) {
        throw DomainError("ssim: unbiased statistics need a window with more than one tap");
    }
    const double bessel = params.unbiased_stats
                              ? static_cast<double>(taps) / static_cast<double>(taps - 1)
                              : 1.0;

    // fast path: five filtered planes, then pointwise statistics
    const Plane mu_x = convolve(x, k, params.padding);
    const Plane mu_y = convolve(y, k, params.padding);
    const Plane e_xx = convolve(multiply(x, x), k, params.padding);
    const Plane e_yy = convolve(multiply(y, y), k, params.padding);
    const Plane e_xy = convolve(multiply(x, y), k, params.padding);

    ComponentMaps maps;
    maps.luminance = Plane(mu_x.width, mu_x.height);
    maps.contrast = Plane(mu_x.width, mu_x.height);
    maps.structure = Plane(mu_x.width, mu_x.height);

    const std::size_t n = mu_x.sample_count();
    for (std::size_t i = 0; i < n; ++i) {
        WindowStats s;
        s.mu_x = mu_x.samples[i];
        s.mu_y = mu_y.samples[i];
        const double var_x = std::max(e_xx.samples[i] - s.mu_x * s.mu_x, 0.0) * bessel;
        const double var_y = std::max(e_yy.samples[i] - s.mu_y * s.mu_y, 0.0) * bessel;
        s.sigma_x = std::sqrt(var_x);
        s.sigma_y = std::sqrt(var_y);
        s.sigma_xy = (e_xy.samples[i] - s.mu_x * s.mu_y) * bessel;
        maps.luminance.samples[i] = luminance_similarity(s.mu_x, s.mu_y, params.c1);
        maps.contrast.samples[i] = contrast_similarity(s.sigma_x, s.sigma_y, params.c2);
        maps.structure.samples[i] = structure_similarity(s, params.c3);
    }
    return maps;
}

SimilarityMap ssim_map(const Plane& x, const Plane& y, const SsimParams& params) {
    const ComponentMaps maps = ssim_component_maps(x, y, params);
    SimilarityMap out;
    out.values = Plane(maps.luminance.width, maps.luminance.height);
    for (std::size_t i = 0; i < out.values.sample_count(); ++i) {
        const double v = raise(maps.luminance.samples[i], params.alpha) *
                         raise(maps.contrast.samples[i], params.beta) *
                         raise(maps.structure.samples[i], params.gamma);
        // guard against ulp-level excursions outside the analytic bounds
        out.values.samples[i] = std::min(1.0, std::max(-1.0, v));
    }
    return out;
}

double mean_ssim(const Plane& x, const Plane& y, const SsimParams& params) {
    const SimilarityMap map = ssim_map(x, y, params);
    double acc = 0.0;
    for (double v : map.values.samples) acc += v;
    return acc / static_cast<double>(map.values.sample_count());
}

Plane similarity_map_to_plane(const SimilarityMap& map) {
    Plane out(map.values.width, map.values.height);
    for (std::size_t i = 0; i < out.sample_count(); ++i) {
        out.samples[i] = (map.values.samples[i] + 1.0) / 2.0;
    }
    return out;
}

}  // namespace vizsim
