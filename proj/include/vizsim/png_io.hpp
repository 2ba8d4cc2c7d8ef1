#pragma once

#include <string>

#include "vizsim/image.hpp"

namespace vizsim {

/// Decode a PNG file into real-valued planes in [0, 1].
/// Accepts 8- and 16-bit grayscale, grayscale+alpha, palette, RGB and RGBA;
/// alpha is composited over white.
ImageRGB load_image(const std::string& path);

/// Write an image as 8-bit RGB PNG. Samples are clamped to [0, 1] and
/// rounded to the nearest of 256 levels. Output bytes are deterministic.
void save_image(const ImageRGB& img, const std::string& path);

/// Write a single plane as 8-bit grayscale PNG (all three channels equal).
void save_plane(const Plane& p, const std::string& path);

}  // namespace vizsim
