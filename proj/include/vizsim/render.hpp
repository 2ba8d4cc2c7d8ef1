#pragma once

#include <array>
#include <string>
#include <vector>

#include "vizsim/image.hpp"

namespace vizsim {

struct DataRow {
    std::string category;
    double q1 = 0.0;
    double q2 = 0.0;
};

/// Rows of (category, q1, q2) plus an explicit category ordering that fixes
/// palette and band assignment across datasets.
struct DatasetTable {
    std::vector<DataRow> rows;
    std::vector<std::string> category_order;

    void validate() const;
    /// Index into category_order; throws DomainError for unknown labels.
    int category_index(const std::string& label) const;
};

/// Fixed [lo, hi] value range; rendering never autoscales, so value changes
/// always move marks.
struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    /// Position of v within the range as t in [0, 1].
    double unit(double v) const { return (v - lo) / (hi - lo); }
};

/// Channel patterns follow first_second_third = Q1, Q2, N. The five
/// canonical encodings plus kColorYX, the analog that routes the continuous
/// Q1 through a constant-luma color ramp (for the color-channel arm of the
/// discriminability benchmarks).
enum class EncodingName {
    kYXColor,   // Q1 -> y position, Q2 -> x position, N -> mark color
    kXYColor,   // Q1 -> x position, Q2 -> y position, N -> mark color
    kSizeYX,    // Q1 -> mark size,  Q2 -> y position, N -> x column
    kSizeXY,    // Q1 -> mark size,  Q2 -> x position, N -> y column
    kXYRow,     // Q1 -> x position, Q2 -> y position, N -> horizontal band
    kColorYX,   // Q1 -> mark color (ramp), Q2 -> y position, N -> x column
};

EncodingName encoding_from_string(const std::string& name);
std::string to_string(EncodingName name);
/// The five canonical encodings, in a fixed order (excludes kColorYX).
const std::vector<EncodingName>& canonical_encodings();

using Color = std::array<double, 3>;  // rgb in [0,1]

/// count near-equiluminant categorical colors: constant luma 0.5, fixed
/// chroma radius, golden-angle hue stepping. Swapping any two entries
/// leaves the BT.601 grayscale of a rendering essentially unchanged.
std::vector<Color> categorical_palette(int count);

/// Continuous constant-luma ramp for t in [0, 1] (kColorYX's Q1 channel).
Color color_ramp(double t);

struct EncodingSpec {
    EncodingName name = EncodingName::kYXColor;
    int canvas_width = 256;
    int canvas_height = 256;
    double mark_radius = 4.0;          // px, constant-size encodings
    std::vector<Color> palette = categorical_palette(30);
    double size_min = 2.0;             // px radius bounds for size encodings
    double size_max = 12.0;
    ValueRange domain_q1;
    ValueRange domain_q2;

    void validate() const;
};

/// Deterministic accessory-free rasterization: white background, circular
/// marks, draw order = row order (later rows paint over earlier ones),
/// 4x supersampling box-filtered down to the canvas size.
ImageRGB render(const DatasetTable& data, const EncodingSpec& spec);

/// CSV category,q1,q2; category_order is the order of first appearance.
DatasetTable read_table_csv(const std::string& path);
void write_table_csv(const std::string& path, const DatasetTable& table);

}  // namespace vizsim
