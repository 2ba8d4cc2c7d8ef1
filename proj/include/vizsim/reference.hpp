#pragma once

#include <vector>

#include "vizsim/image.hpp"
#include "vizsim/msssim.hpp"
#include "vizsim/ssim.hpp"

namespace vizsim::ref {

/// Serial reference implementations used to validate and benchmark the
/// OpenMP fast paths. Each function recomputes its result directly from the
/// definition (per-window loops, no shared filtered planes), so agreement
/// with the fast path is a meaningful check rather than a tautology.

Plane convolve(const Plane& p, const Kernel& k, Padding padding);

SimilarityMap ssim_map(const Plane& x, const Plane& y, const SsimParams& params);

double mean_ssim(const Plane& x, const Plane& y, const SsimParams& params);

double ms_ssim(const Plane& x, const Plane& y, const MsSsimParams& params);

/// Pairwise distance matrix by a plain double loop over ms_ssim, stored
/// row-major; mirrors clustering::distance_matrix output values.
std::vector<std::vector<double>> distance_matrix(const std::vector<Plane>& images,
                                                 const MsSsimParams& params);

}  // namespace vizsim::ref
