#pragma once

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vizsim/image.hpp"
#include "vizsim/rng.hpp"

namespace vizsim::testutil {

inline Plane random_plane(int w, int h, Rng& rng) {
    Plane p(w, h);
    for (double& s : p.samples) s = rng.uniform();
    return p;
}

inline ImageRGB random_image(int w, int h, Rng& rng) {
    ImageRGB img(w, h);
    for (double& s : img.r.samples) s = rng.uniform();
    for (double& s : img.g.samples) s = rng.uniform();
    for (double& s : img.b.samples) s = rng.uniform();
    return img;
}

inline Plane plane_from(int w, int h, const std::vector<double>& row_major) {
    Plane p(w, h);
    p.samples = row_major;
    return p;
}

inline bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            auto candidate = base / (tag + "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                break;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string path() const { return path_.string(); }

  private:
    std::filesystem::path path_;
};

inline std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_bytes(const std::string& path, const unsigned char* data, std::size_t len) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Tiny hand-checked PNG files, kept as byte arrays so decoder tests do not
// depend on the encoder under test.

// 2x2 8-bit RGB: (0,0) black, (1,0) white, (0,1) red, (1,1) blue.
inline const unsigned char kPngRgb2x2[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00,
    0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00, 0x15, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x05, 0xc1, 0x01, 0x01, 0x00, 0x00, 0x00, 0x80, 0x10, 0xff, 0x4f, 0x17, 0x50,
    0x09, 0x1a, 0x21, 0xec, 0x04, 0xfc, 0x92, 0x6f, 0x8c, 0x55, 0x00, 0x00, 0x00, 0x00,
    0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x2 8-bit grayscale, every sample 128.
inline const unsigned char kPngGray128[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00,
    0x00, 0x57, 0xdd, 0x52, 0xf8, 0x00, 0x00, 0x00, 0x0e, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0x6c, 0x60, 0x60, 0x62, 0x60, 0x00, 0x00, 0x02, 0x92, 0x00, 0x84, 0xf7,
    0x7c, 0xa3, 0x58, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60,
    0x82};

// 2x2 8-bit RGBA: (0,0) red alpha 0, (1,0) green alpha 255,
// (0,1) blue alpha 128, (1,1) white alpha 255.
inline const unsigned char kPngRgba2x2[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x06, 0x00, 0x00,
    0x00, 0x72, 0xb6, 0x0d, 0x24, 0x00, 0x00, 0x00, 0x19, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x05, 0xc1, 0x01, 0x0d, 0x00, 0x00, 0x08, 0xc0, 0x20, 0xdc, 0x0c, 0x6e, 0xf3,
    0x0b, 0x82, 0xb4, 0xa3, 0x0b, 0x0f, 0x33, 0x8d, 0x05, 0x81, 0xcc, 0xff, 0x2a, 0x55,
    0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x1 16-bit grayscale, samples 0 and 32768.
inline const unsigned char kPngGray16[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00,
    0x00, 0x81, 0xd9, 0xfc, 0x15, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0x60, 0x60, 0x68, 0x60, 0x00, 0x00, 0x01, 0x05, 0x00, 0x81, 0x23, 0x17,
    0xba, 0xb0, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 4x4 intensity fixture pair; the frozen map/mean values in the tests were
// computed for this exact pair by an independent per-window implementation.
inline Plane fixture_x4() {
    return plane_from(4, 4,
                      {0.076308, 0.779919, 0.438409, 0.723465, 0.977990, 0.538496, 0.501120,
                       0.072051, 0.268439, 0.499883, 0.679230, 0.803739, 0.380941, 0.065936,
                       0.288146, 0.909594});
}

inline Plane fixture_y4() {
    return plane_from(4, 4,
                      {0.213385, 0.452124, 0.931206, 0.024899, 0.600549, 0.950130, 0.230303,
                       0.548490, 0.909128, 0.133169, 0.523413, 0.750410, 0.669013, 0.467753,
                       0.204849, 0.490766});
}

}  // namespace vizsim::testutil
