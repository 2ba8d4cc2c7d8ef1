#include "vizsim/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vizsim/error.hpp"

namespace vizsim {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// BT.601 luma weights and classic analog chroma scale factors.
constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;
constexpr double kUScale = 0.492;  // U = 0.492 (B - Y), |U| <= 0.436
constexpr double kVScale = 0.877;  // V = 0.877 (R - Y), |V| <= 0.615
constexpr double kUSpan = 0.872;   // 2 * 0.436
constexpr double kVSpan = 1.230;   // 2 * 0.615

}  // namespace

Plane::Plane(int w, int h, double fill)
    : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw DimensionError("plane dimensions must be non-negative");
}

ImageRGB::ImageRGB(int w, int h, double fill)
    : width(w), height(h), r(w, h, fill), g(w, h, fill), b(w, h, fill) {}

Kernel gaussian_kernel(int size, double sigma) {
    if (size < 1 || size % 2 == 0) {
        std::ostringstream msg;
        msg << "gaussian_kernel: size must be odd and >= 1, got " << size;
        throw DomainError(msg.str());
    }
    if (!(sigma > 0.0)) {
        std::ostringstream msg;
        msg << "gaussian_kernel: sigma must be positive, got " << sigma;
        throw DomainError(msg.str());
    }
    Kernel k;
    k.size = size;
    k.sigma = sigma;
    k.taps.resize(static_cast<std::size_t>(size) * size);
    const int half = size / 2;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            const double dy = i - half;
            const double dx = j - half;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k.taps[static_cast<std::size_t>(i) * size + j] = v;
            sum += v;
        }
    }
    for (double& t : k.taps) t /= sum;
    return k;
}

Kernel uniform_kernel(int size) {
    if (size < 1 || size % 2 == 0) {
        std::ostringstream msg;
        msg << "uniform_kernel: size must be odd and >= 1, got " << size;
        throw DomainError(msg.str());
    }
    Kernel k;
    k.size = size;
    k.sigma = 0.0;
    k.taps.assign(static_cast<std::size_t>(size) * size,
                  1.0 / (static_cast<double>(size) * size));
    return k;
}

Plane convolve(const Plane& p, const Kernel& k, Padding padding) {
    if (k.size > p.width || k.size > p.height) {
        std::ostringstream msg;
        msg << "convolve: kernel " << k.size << "x" << k.size << " larger than plane "
            << p.width << "x" << p.height;
        throw DimensionError(msg.str());
    }
    const int half = k.size / 2;
    const int out_w = padding == Padding::kZero ? p.width : p.width - (k.size - 1);
    const int out_h = padding == Padding::kZero ? p.height : p.height - (k.size - 1);
    Plane out(out_w, out_h);

#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            // top-left image coordinate covered by the window
            const int base_y = padding == Padding::kZero ? oy - half : oy;
            const int base_x = padding == Padding::kZero ? ox - half : ox;
            double acc = 0.0;
            for (int i = 0; i < k.size; ++i) {
                const int sy = base_y + i;
                if (sy < 0 || sy >= p.height) continue;
                const double* src = p.row(sy);
                const double* tap = k.taps.data() + static_cast<std::size_t>(i) * k.size;
                for (int j = 0; j < k.size; ++j) {
                    const int sx = base_x + j;
                    if (sx < 0 || sx >= p.width) continue;
                    acc += tap[j] * src[sx];
                }
            }
            out.at(ox, oy) = acc;
        }
    }
    return out;
}

Plane downsample2(const Plane& p) {
    if (p.width < 2 || p.height < 2) {
        std::ostringstream msg;
        msg << "downsample2: plane must be at least 2x2, got " << p.width << "x" << p.height;
        throw DimensionError(msg.str());
    }
    Plane out(p.width / 2, p.height / 2);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out.height; ++y) {
        const double* r0 = p.row(2 * y);
        const double* r1 = p.row(2 * y + 1);
        double* dst = out.row(y);
        for (int x = 0; x < out.width; ++x) {
            dst[x] = 0.25 * (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]);
        }
    }
    return out;
}

Plane to_grayscale(const ImageRGB& img) {
    Plane out(img.width, img.height);
    for (std::size_t i = 0; i < out.sample_count(); ++i) {
        out.samples[i] = clamp01(kLumaR * img.r.samples[i] + kLumaG * img.g.samples[i] +
                                 kLumaB * img.b.samples[i]);
    }
    return out;
}

void rgb_to_yuv(double r, double g, double b, double& y, double& u, double& v) {
    y = kLumaR * r + kLumaG * g + kLumaB * b;
    u = kUScale * (b - y) / kUSpan + 0.5;
    v = kVScale * (r - y) / kVSpan + 0.5;
}

void yuv_to_rgb(double y, double u, double v, double& r, double& g, double& b) {
    b = y + (u - 0.5) * kUSpan / kUScale;
    r = y + (v - 0.5) * kVSpan / kVScale;
    g = (y - kLumaR * r - kLumaB * b) / kLumaG;
}

YuvPlanes to_yuv(const ImageRGB& img) {
    YuvPlanes out;
    out.y = Plane(img.width, img.height);
    out.u = Plane(img.width, img.height);
    out.v = Plane(img.width, img.height);
    for (std::size_t i = 0; i < out.y.sample_count(); ++i) {
        double y, u, v;
        rgb_to_yuv(img.r.samples[i], img.g.samples[i], img.b.samples[i], y, u, v);
        out.y.samples[i] = clamp01(y);
        out.u.samples[i] = clamp01(u);
        out.v.samples[i] = clamp01(v);
    }
    return out;
}

ImageRGB yuv_to_rgb(const YuvPlanes& yuv) {
    ImageRGB out(yuv.y.width, yuv.y.height);
    for (std::size_t i = 0; i < yuv.y.sample_count(); ++i) {
        double r, g, b;
        yuv_to_rgb(yuv.y.samples[i], yuv.u.samples[i], yuv.v.samples[i], r, g, b);
        out.r.samples[i] = clamp01(r);
        out.g.samples[i] = clamp01(g);
        out.b.samples[i] = clamp01(b);
    }
    return out;
}

double mse(const Plane& a, const Plane& b) {
    if (!a.same_size(b)) throw DimensionError("mse: plane dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.sample_count(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        acc += d * d;
    }
    return a.sample_count() == 0 ? 0.0 : acc / static_cast<double>(a.sample_count());
}

}  // namespace vizsim
