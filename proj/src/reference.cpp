#include "vizsim/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vizsim/error.hpp"

namespace vizsim::ref {

namespace {

// Window-pair statistics straight from the definitions: weighted mean and
// weighted central moments gathered tap by tap, with out-of-bounds samples
// reading as zero under zero padding. Deliberately avoids the filtered-plane
// trick of the fast path.
WindowStats window_stats(const Plane& x, const Plane& y, const Kernel& k, int base_x,
                         int base_y, bool unbiased) {
    WindowStats s;
    for (int i = 0; i < k.size; ++i) {
        for (int j = 0; j < k.size; ++j) {
            const int sx = base_x + j;
            const int sy = base_y + i;
            double vx = 0.0, vy = 0.0;
            if (sx >= 0 && sx < x.width && sy >= 0 && sy < x.height) {
                vx = x.at(sx, sy);
                vy = y.at(sx, sy);
            }
            s.mu_x += k.tap(i, j) * vx;
            s.mu_y += k.tap(i, j) * vy;
        }
    }
    double var_x = 0.0, var_y = 0.0, cov = 0.0;
    for (int i = 0; i < k.size; ++i) {
        for (int j = 0; j < k.size; ++j) {
            const int sx = base_x + j;
            const int sy = base_y + i;
            double vx = 0.0, vy = 0.0;
            if (sx >= 0 && sx < x.width && sy >= 0 && sy < x.height) {
                vx = x.at(sx, sy);
                vy = y.at(sx, sy);
            }
            const double dx = vx - s.mu_x;
            const double dy = vy - s.mu_y;
            var_x += k.tap(i, j) * dx * dx;
            var_y += k.tap(i, j) * dy * dy;
            cov += k.tap(i, j) * dx * dy;
        }
    }
    const int taps = k.size * k.size;
    const double bessel =
        unbiased ? static_cast<double>(taps) / static_cast<double>(taps - 1) : 1.0;
    s.sigma_x = std::sqrt(var_x * bessel);
    s.sigma_y = std::sqrt(var_y * bessel);
    s.sigma_xy = cov * bessel;
    return s;
}

double raise(double base, double exponent) {
    if (exponent == 1.0) return base;
    return std::pow(std::max(base, 1e-6), exponent);
}

}  // namespace

Plane convolve(const Plane& p, const Kernel& k, Padding padding) {
    if (k.size > p.width || k.size > p.height) {
        throw DimensionError("ref::convolve: kernel larger than plane");
    }
    const int half = k.size / 2;
    int out_w = p.width, out_h = p.height;
    if (padding == Padding::kValid) {
        out_w = p.width - k.size + 1;
        out_h = p.height - k.size + 1;
    }
    Plane out(out_w, out_h);
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            const int base_x = (padding == Padding::kZero) ? ox - half : ox;
            const int base_y = (padding == Padding::kZero) ? oy - half : oy;
            double acc = 0.0;
            for (int i = 0; i < k.size; ++i) {
                for (int j = 0; j < k.size; ++j) {
                    const int sx = base_x + j;
                    const int sy = base_y + i;
                    if (sx < 0 || sx >= p.width || sy < 0 || sy >= p.height) continue;
                    acc += k.tap(i, j) * p.at(sx, sy);
                }
            }
            out.at(ox, oy) = acc;
        }
    }
    return out;
}

SimilarityMap ssim_map(const Plane& x, const Plane& y, const SsimParams& params) {
    if (!x.same_size(y)) {
        std::ostringstream msg;
        msg << "ref::ssim_map: plane dimensions differ (" << x.width << "x" << x.height
            << " vs " << y.width << "x" << y.height << ")";
        throw DimensionError(msg.str());
    }
    const Kernel& k = params.window;
    if (k.size > x.width || k.size > x.height) {
        throw DimensionError("ref::ssim_map: window larger than plane");
    }
    const int half = k.size / 2;
    int out_w = x.width, out_h = x.height;
    if (params.padding == Padding::kValid) {
        out_w = x.width - k.size + 1;
        out_h = x.height - k.size + 1;
    }
    SimilarityMap out;
    out.values = Plane(out_w, out_h);
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            const int base_x = (params.padding == Padding::kZero) ? ox - half : ox;
            const int base_y = (params.padding == Padding::kZero) ? oy - half : oy;
            const WindowStats s =
                window_stats(x, y, k, base_x, base_y, params.unbiased_stats);
            const double l = luminance_similarity(s.mu_x, s.mu_y, params.c1);
            const double c = contrast_similarity(s.sigma_x, s.sigma_y, params.c2);
            const double st = structure_similarity(s, params.c3);
            const double v =
                raise(l, params.alpha) * raise(c, params.beta) * raise(st, params.gamma);
            out.values.at(ox, oy) = std::min(1.0, std::max(-1.0, v));
        }
    }
    return out;
}

double mean_ssim(const Plane& x, const Plane& y, const SsimParams& params) {
    const SimilarityMap map = ref::ssim_map(x, y, params);
    double acc = 0.0;
    for (double v : map.values.samples) acc += v;
    return acc / static_cast<double>(map.values.sample_count());
}

double ms_ssim(const Plane& x, const Plane& y, const MsSsimParams& params) {
    params.weights.validate();
    if (!x.same_size(y)) {
        throw DimensionError("ref::ms_ssim: plane dimensions differ");
    }
    const int scales = static_cast<int>(params.weights.w.size());
    Plane a = x, b = y;
    double product = 1.0;
    SsimParams cs_params = params.base;
    cs_params.alpha = 1.0;
    cs_params.beta = 1.0;
    cs_params.gamma = 1.0;
    for (int level = 0; level < scales; ++level) {
        const double w = params.weights.w[static_cast<std::size_t>(level)];
        if (level == scales - 1) {
            product *= raise(ref::mean_ssim(a, b, cs_params), w);
            break;
        }
        // mean of the contrast*structure map, gathered window by window
        const Kernel& k = cs_params.window;
        const int half = k.size / 2;
        int out_w = a.width, out_h = a.height;
        if (cs_params.padding == Padding::kValid) {
            out_w = a.width - k.size + 1;
            out_h = a.height - k.size + 1;
        }
        double acc = 0.0;
        for (int oy = 0; oy < out_h; ++oy) {
            for (int ox = 0; ox < out_w; ++ox) {
                const int base_x = (cs_params.padding == Padding::kZero) ? ox - half : ox;
                const int base_y = (cs_params.padding == Padding::kZero) ? oy - half : oy;
                const WindowStats s =
                    window_stats(a, b, k, base_x, base_y, cs_params.unbiased_stats);
                const double c = contrast_similarity(s.sigma_x, s.sigma_y, cs_params.c2);
                const double st = structure_similarity(s, cs_params.c3);
                acc += c * st;
            }
        }
        product *= raise(acc / (static_cast<double>(out_w) * out_h), w);
        a = downsample2(a);
        b = downsample2(b);
    }
    return std::min(1.0, std::max(-1.0, product));
}

std::vector<std::vector<double>> distance_matrix(const std::vector<Plane>& images,
                                                 const MsSsimParams& params) {
    const std::size_t n = images.size();
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = (1.0 - ref::ms_ssim(images[i], images[j], params)) / 2.0;
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    return out;
}

}  // namespace vizsim::ref
