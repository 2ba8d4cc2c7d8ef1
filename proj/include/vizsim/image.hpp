#pragma once

#include <cstddef>
#include <vector>

namespace vizsim {

/// Single-channel 2-D array of real intensities, row-major.
/// All similarity math operates on planes with samples in [0, 1].
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> samples;

    Plane() = default;
    Plane(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
    const double* row(int y) const { return samples.data() + static_cast<std::size_t>(y) * width; }
    double* row(int y) { return samples.data() + static_cast<std::size_t>(y) * width; }

    std::size_t sample_count() const { return samples.size(); }
    bool same_size(const Plane& other) const {
        return width == other.width && height == other.height;
    }
};

/// Three-plane RGB image; planes share dimensions, samples in [0, 1].
struct ImageRGB {
    int width = 0;
    int height = 0;
    Plane r, g, b;

    ImageRGB() = default;
    ImageRGB(int w, int h, double fill = 1.0);

    bool same_size(const ImageRGB& other) const {
        return width == other.width && height == other.height;
    }
};

/// Luma/chroma decomposition of an RGB image (see to_yuv).
struct YuvPlanes {
    Plane y, u, v;
};

/// Square convolution kernel; taps sum to 1 and are 4-fold symmetric.
struct Kernel {
    int size = 0;
    double sigma = 0.0;
    std::vector<double> taps;  // size*size, row-major

    double tap(int i, int j) const { return taps[static_cast<std::size_t>(i) * size + j]; }
};

enum class Padding {
    kZero,   // out-of-bounds samples read as 0; output keeps input dimensions
    kValid,  // kernel fully inside; output shrinks by size-1 per axis
};

/// Sampled 2-D Gaussian renormalized to sum 1. size must be odd and >= 1,
/// sigma > 0.
Kernel gaussian_kernel(int size, double sigma);

/// Flat kernel with all taps equal; supports the unweighted-statistics
/// configuration of the SSIM window.
Kernel uniform_kernel(int size);

/// 2-D convolution of a plane with a kernel. The kernel must not be larger
/// than the plane in either dimension.
Plane convolve(const Plane& p, const Kernel& k, Padding padding);

/// 2x2 box low-pass followed by stride-2 decimation. Output dimensions are
/// floor(dim/2); a trailing odd row/column is dropped. Requires >= 2x2 input.
Plane downsample2(const Plane& p);

/// Per-pixel BT.601 luma, clamped to [0, 1].
Plane to_grayscale(const ImageRGB& img);

/// BT.601 luma/chroma split. U and V are affinely rescaled into [0, 1] so
/// that achromatic pixels map to exactly 0.5 on both chroma planes.
YuvPlanes to_yuv(const ImageRGB& img);

/// Inverse of to_yuv (exact up to floating point; output clamped to [0, 1]).
ImageRGB yuv_to_rgb(const YuvPlanes& yuv);

/// Single RGB triple through the to_yuv transform; used for palette design.
void rgb_to_yuv(double r, double g, double b, double& y, double& u, double& v);
void yuv_to_rgb(double y, double u, double v, double& r, double& g, double& b);

/// Mean squared error between two equal-sized planes.
double mse(const Plane& a, const Plane& b);

}  // namespace vizsim
