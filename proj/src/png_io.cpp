#include "vizsim/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

#include "vizsim/error.hpp"

namespace vizsim {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    // rethrow through longjmp; message recovered at the jump target
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg ? msg : "unknown libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

}  // namespace

ImageRGB load_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("load_image: cannot open '" + path + "'");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw IoError("load_image: '" + path + "' is not a PNG file");
    }

    std::string libpng_msg;
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &libpng_msg, png_error_fn, png_warning_fn);
    if (!png) throw IoError("load_image: libpng init failed for '" + path + "'");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("load_image: libpng init failed for '" + path + "'");
    }

    std::vector<unsigned char> raw;
    std::vector<png_bytep> row_ptrs;
    png_uint_32 w = 0, h = 0;
    int bit_depth = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("load_image: decode error in '" + path + "': " + libpng_msg);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    // normalize every variant to RGBA at the source bit depth
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_add_alpha(png, 0xFFFF, PNG_FILLER_AFTER);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);  // 8 or 16 after transforms
    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = raw.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageRGB img(static_cast<int>(w), static_cast<int>(h));
    const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = raw.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            double c[4];
            if (bit_depth == 16) {
                const unsigned char* px = row + x * 8;
                for (int k = 0; k < 4; ++k) {
                    c[k] = static_cast<double>((px[2 * k] << 8) | px[2 * k + 1]) * scale;
                }
            } else {
                const unsigned char* px = row + x * 4;
                for (int k = 0; k < 4; ++k) c[k] = static_cast<double>(px[k]) * scale;
            }
            const double a = c[3];
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            // composite over white
            img.r.samples[i] = a * c[0] + (1.0 - a);
            img.g.samples[i] = a * c[1] + (1.0 - a);
            img.b.samples[i] = a * c[2] + (1.0 - a);
        }
    }
    return img;
}

void save_image(const ImageRGB& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0) {
        throw DimensionError("save_image: empty image");
    }
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("save_image: cannot open '" + path + "' for writing");

    std::string libpng_msg;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &libpng_msg, png_error_fn, png_warning_fn);
    if (!png) throw IoError("save_image: libpng init failed for '" + path + "'");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("save_image: libpng init failed for '" + path + "'");
    }

    std::vector<unsigned char> raw(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < img.r.sample_count(); ++i) {
        auto quantize = [](double v) {
            v = std::min(1.0, std::max(0.0, v));
            return static_cast<unsigned char>(std::lround(v * 255.0));
        };
        raw[3 * i + 0] = quantize(img.r.samples[i]);
        raw[3 * i + 1] = quantize(img.g.samples[i]);
        raw[3 * i + 2] = quantize(img.b.samples[i]);
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("save_image: encode error in '" + path + "': " + libpng_msg);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(png, raw.data() + static_cast<std::size_t>(y) * img.width * 3);
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

void save_plane(const Plane& p, const std::string& path) {
    ImageRGB img(p.width, p.height);
    img.r = p;
    img.g = p;
    img.b = p;
    save_image(img, path);
}

}  // namespace vizsim
