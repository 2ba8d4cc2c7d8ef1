#include "vizsim/msssim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vizsim/error.hpp"

namespace vizsim {

namespace {

constexpr double kComponentFloor = 1e-6;

double raise(double base, double exponent) {
    if (exponent == 1.0) return base;
    return std::pow(std::max(base, kComponentFloor), exponent);
}

double plane_mean(const Plane& p) {
    double acc = 0.0;
    for (double v : p.samples) acc += v;
    return acc / static_cast<double>(p.sample_count());
}

}  // namespace

void WeightVector::validate() const {
    if (w.empty()) throw DomainError("weight vector must have at least one scale");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] <= 0.0) {
            std::ostringstream msg;
            msg << "weight w" << (i + 1) << " must be finite and positive, got " << w[i];
            throw DomainError(msg.str());
        }
    }
}

int max_feasible_scales(int width, int height, int window_size) {
    const int min_dim = std::min(width, height);
    int k = 0;
    // min_dim >= 2^(k-1) * window_size
    long long need = window_size;
    while (need <= min_dim) {
        ++k;
        need *= 2;
    }
    return k;
}

ScaleProfile ms_ssim_profile(const Plane& x, const Plane& y, const MsSsimParams& params) {
    params.weights.validate();
    if (!x.same_size(y)) {
        std::ostringstream msg;
        msg << "ms_ssim: plane dimensions differ (" << x.width << "x" << x.height << " vs "
            << y.width << "x" << y.height << ")";
        throw DimensionError(msg.str());
    }
    const int scales = params.weights.scales();
    const int feasible = max_feasible_scales(x.width, x.height, params.base.window.size);
    if (scales > feasible) {
        std::ostringstream msg;
        msg << "ms_ssim: " << x.width << "x" << x.height << " image too small for " << scales
            << " scales with a " << params.base.window.size << "x" << params.base.window.size
            << " window; max feasible K is " << feasible;
        throw DomainError(msg.str());
    }

    ScaleProfile profile;
    profile.cs_means.reserve(scales - 1);
    Plane px = x;
    Plane py = y;
    for (int level = 0; level < scales; ++level) {
        if (level + 1 < scales) {
            const ComponentMaps maps = ssim_component_maps(px, py, params.base);
            Plane cs(maps.contrast.width, maps.contrast.height);
            for (std::size_t i = 0; i < cs.sample_count(); ++i) {
                cs.samples[i] = maps.contrast.samples[i] * maps.structure.samples[i];
            }
            profile.cs_means.push_back(plane_mean(cs));
            px = downsample2(px);
            py = downsample2(py);
        } else {
            // coarsest scale carries the luminance term; exponents come from
            // the weight vector, so the per-window product is unexponentiated
            SsimParams base = params.base;
            base.alpha = 1.0;
            base.beta = 1.0;
            base.gamma = 1.0;
            profile.coarsest_ssim_mean = mean_ssim(px, py, base);
        }
    }
    return profile;
}

double combine_profile(const ScaleProfile& profile, const WeightVector& weights) {
    weights.validate();
    if (weights.scales() != profile.scales()) {
        std::ostringstream msg;
        msg << "combine_profile: " << weights.scales() << " weights for a " << profile.scales()
            << "-scale profile";
        throw DimensionError(msg.str());
    }
    double result = 1.0;
    for (std::size_t i = 0; i < profile.cs_means.size(); ++i) {
        result *= raise(profile.cs_means[i], weights.w[i]);
    }
    result *= raise(profile.coarsest_ssim_mean, weights.w.back());
    return std::min(1.0, std::max(-1.0, result));
}

double combine_profile(const PairProfile& profile, const WeightVector& weights) {
    if (profile.channels.empty()) throw DomainError("combine_profile: empty profile");
    double acc = 0.0;
    for (const ScaleProfile& ch : profile.channels) acc += combine_profile(ch, weights);
    return acc / static_cast<double>(profile.channels.size());
}

double ms_ssim(const Plane& x, const Plane& y, const MsSsimParams& params) {
    return combine_profile(ms_ssim_profile(x, y, params), params.weights);
}

double ms_ssim_yuv(const ImageRGB& x, const ImageRGB& y, const MsSsimParams& params) {
    if (!x.same_size(y)) {
        std::ostringstream msg;
        msg << "ms_ssim_yuv: image dimensions differ (" << x.width << "x" << x.height << " vs "
            << y.width << "x" << y.height << ")";
        throw DimensionError(msg.str());
    }
    const YuvPlanes a = to_yuv(x);
    const YuvPlanes b = to_yuv(y);
    const double sy = ms_ssim(a.y, b.y, params);
    const double su = ms_ssim(a.u, b.u, params);
    const double sv = ms_ssim(a.v, b.v, params);
    return (sy + su + sv) / 3.0;
}

PairProfile pair_profile(const ImageRGB& x, const ImageRGB& y, const MsSsimParams& params) {
    PairProfile out;
    if (params.color_mode == MsSsimParams::ColorMode::kYuv) {
        const YuvPlanes a = to_yuv(x);
        const YuvPlanes b = to_yuv(y);
        out.channels.push_back(ms_ssim_profile(a.y, b.y, params));
        out.channels.push_back(ms_ssim_profile(a.u, b.u, params));
        out.channels.push_back(ms_ssim_profile(a.v, b.v, params));
    } else {
        out.channels.push_back(ms_ssim_profile(to_grayscale(x), to_grayscale(y), params));
    }
    return out;
}

double similarity_to_distance(double s) {
    if (!(s >= -1.0 && s <= 1.0)) {
        std::ostringstream msg;
        msg << "similarity_to_distance: " << s << " outside [-1, 1]";
        throw DomainError(msg.str());
    }
    return (1.0 - s) / 2.0;
}

}  // namespace vizsim
