// Timing harness for the OpenMP fast paths against the serial reference
// implementations. Build in Release; run with no arguments for the default
// size sweep or pass "small" for a quick pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vizsim/image.hpp"
#include "vizsim/msssim.hpp"
#include "vizsim/reference.hpp"
#include "vizsim/rng.hpp"
#include "vizsim/ssim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

vizsim::Plane random_plane(int w, int h, vizsim::Rng& rng) {
    vizsim::Plane p(w, h);
    for (double& v : p.samples) v = rng.uniform();
    return p;
}

template <typename Fn>
double best_ms(Fn&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        fn();
        const auto stop = Clock::now();
        const double ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

volatile double g_sink = 0.0;  // keeps the optimizer honest

}  // namespace

int main(int argc, char** argv) {
    const bool small = argc > 1 && std::strcmp(argv[1], "small") == 0;
    const std::vector<int> sizes = small ? std::vector<int>{64, 128} : std::vector<int>{64, 128, 256, 512};
    const int reps = small ? 2 : 3;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled at build time\n");
#endif
    std::printf("%-10s %-10s %12s %12s %9s\n", "kernel", "size", "serial ms", "fast ms",
                "speedup");

    vizsim::Rng rng(7);
    for (int size : sizes) {
        const vizsim::Plane x = random_plane(size, size, rng);
        const vizsim::Plane y = random_plane(size, size, rng);
        const vizsim::Kernel k = vizsim::gaussian_kernel(7, 1.5);
        vizsim::SsimParams ssim;
        vizsim::MsSsimParams msssim;
        msssim.weights =
            vizsim::WeightVector(std::vector<double>(static_cast<std::size_t>(
                std::min(5, vizsim::max_feasible_scales(size, size, 3))), 1.0));

        const double conv_ref = best_ms(
            [&] { g_sink = vizsim::ref::convolve(x, k, vizsim::Padding::kZero).samples[0]; },
            reps);
        const double conv_fast = best_ms(
            [&] { g_sink = vizsim::convolve(x, k, vizsim::Padding::kZero).samples[0]; }, reps);
        std::printf("%-10s %-10d %12.3f %12.3f %8.2fx\n", "convolve", size, conv_ref, conv_fast,
                    conv_ref / conv_fast);

        const double ssim_ref =
            best_ms([&] { g_sink = vizsim::ref::mean_ssim(x, y, ssim); }, reps);
        const double ssim_fast = best_ms([&] { g_sink = vizsim::mean_ssim(x, y, ssim); }, reps);
        std::printf("%-10s %-10d %12.3f %12.3f %8.2fx\n", "ssim", size, ssim_ref, ssim_fast,
                    ssim_ref / ssim_fast);

        const double ms_ref =
            best_ms([&] { g_sink = vizsim::ref::ms_ssim(x, y, msssim); }, reps);
        const double ms_fast = best_ms([&] { g_sink = vizsim::ms_ssim(x, y, msssim); }, reps);
        std::printf("%-10s %-10d %12.3f %12.3f %8.2fx\n", "ms_ssim", size, ms_ref, ms_fast,
                    ms_ref / ms_fast);
    }
    return 0;
}
