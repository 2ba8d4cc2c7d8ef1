#pragma once

#include <cmath>
#include <vector>

#include "vizsim/image.hpp"
#include "vizsim/tuning.hpp"

namespace vizsim::testutil {

/// 12 planes on a 4x3 grid of (coarse phase, fine texture). The phase
/// offsets move only the low-frequency component; the two textures sit at
/// the pixel-alternation frequency and cancel exactly under one 2x2 box
/// downsample. Same-phase pairs therefore differ at the finest scale only,
/// while different-phase pairs differ almost entirely at the coarse scales.
inline std::vector<Plane> pyramid_images(int n = 64) {
    std::vector<Plane> images;
    for (int c = 0; c < 4; ++c) {
        for (int t = 0; t < 3; ++t) {
            Plane p(n, n);
            for (int y = 0; y < n; ++y) {
                for (int x = 0; x < n; ++x) {
                    const double coarse =
                        std::sin(2.0 * M_PI * static_cast<double>(x + y) / 32.0 + 0.3 * c);
                    double fine = 0.0;
                    if (t == 1) fine = ((x + y) % 2 == 0) ? 1.0 : -1.0;
                    if (t == 2) fine = (y % 2 == 0) ? 1.0 : -1.0;
                    p.at(x, y) = 0.5 + 0.3 * coarse + 0.12 * fine;
                }
            }
            images.push_back(std::move(p));
        }
    }
    return images;
}

inline int pyramid_id(int c, int t) { return c * 3 + t; }

/// Anchors pair with a same-phase positive (texture changed) and a
/// different-phase negative (texture kept); the coarse structure is what
/// should drive the judgment, so every label is 1.
inline std::vector<Triplet> pyramid_triplets() {
    std::vector<Triplet> out;
    for (int c = 0; c < 4; ++c) {
        for (int t = 0; t < 3; ++t) {
            for (int t2 = 0; t2 < 3; ++t2) {
                if (t2 == t) continue;
                for (int c2 = 0; c2 < 4; ++c2) {
                    if (c2 == c) continue;
                    Triplet tr;
                    tr.anchor = pyramid_id(c, t);
                    tr.positive = pyramid_id(c, t2);
                    tr.negative = pyramid_id(c2, t);
                    tr.ground_truth = 1;
                    out.push_back(tr);
                }
            }
        }
    }
    return out;
}

}  // namespace vizsim::testutil
