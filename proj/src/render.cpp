#include "vizsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"

namespace vizsim {

namespace {

constexpr int kSupersample = 4;  // subsamples per pixel edge
constexpr double kGoldenAngle = 2.399963229728653;
constexpr double kChromaRadius = 0.25;   // stays inside the RGB gamut at luma 0.5
constexpr double kRampArc = 4.71238898038469;  // 3*pi/2, keeps ramp ends distinct
constexpr Color kNeutralMark = {0.2, 0.2, 0.2};  // when no color channel is in play

Color yuv_color(double angle) {
    Color c;
    yuv_to_rgb(0.5, 0.5 + kChromaRadius * std::cos(angle),
               0.5 + kChromaRadius * std::sin(angle), c[0], c[1], c[2]);
    for (double& v : c) v = std::min(1.0, std::max(0.0, v));
    return c;
}

}  // namespace

void DatasetTable::validate() const {
    for (std::size_t i = 0; i < category_order.size(); ++i) {
        for (std::size_t j = i + 1; j < category_order.size(); ++j) {
            if (category_order[i] == category_order[j]) {
                throw DomainError("dataset: duplicate category '" + category_order[i] +
                                  "' in category_order");
            }
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const DataRow& row = rows[r];
        if (!std::isfinite(row.q1) || !std::isfinite(row.q2)) {
            std::ostringstream msg;
            msg << "dataset row " << r << ": non-finite "
                << (!std::isfinite(row.q1) ? "q1" : "q2");
            throw DomainError(msg.str());
        }
        if (std::find(category_order.begin(), category_order.end(), row.category) ==
            category_order.end()) {
            std::ostringstream msg;
            msg << "dataset row " << r << ": category '" << row.category
                << "' missing from category_order";
            throw DomainError(msg.str());
        }
    }
}

int DatasetTable::category_index(const std::string& label) const {
    for (std::size_t i = 0; i < category_order.size(); ++i) {
        if (category_order[i] == label) return static_cast<int>(i);
    }
    throw DomainError("dataset: unknown category '" + label + "'");
}

EncodingName encoding_from_string(const std::string& name) {
    if (name == "y_x_color") return EncodingName::kYXColor;
    if (name == "x_y_color") return EncodingName::kXYColor;
    if (name == "size_y_x") return EncodingName::kSizeYX;
    if (name == "size_x_y") return EncodingName::kSizeXY;
    if (name == "x_y_row") return EncodingName::kXYRow;
    if (name == "color_y_x") return EncodingName::kColorYX;
    throw ConfigError("unknown encoding '" + name +
                      "' (expected y_x_color, x_y_color, size_y_x, size_x_y, x_y_row, "
                      "or color_y_x)");
}

std::string to_string(EncodingName name) {
    switch (name) {
        case EncodingName::kYXColor: return "y_x_color";
        case EncodingName::kXYColor: return "x_y_color";
        case EncodingName::kSizeYX: return "size_y_x";
        case EncodingName::kSizeXY: return "size_x_y";
        case EncodingName::kXYRow: return "x_y_row";
        case EncodingName::kColorYX: return "color_y_x";
    }
    throw DomainError("unreachable encoding name");
}

const std::vector<EncodingName>& canonical_encodings() {
    static const std::vector<EncodingName> names = {
        EncodingName::kYXColor, EncodingName::kXYColor, EncodingName::kSizeYX,
        EncodingName::kSizeXY, EncodingName::kXYRow};
    return names;
}

std::vector<Color> categorical_palette(int count) {
    if (count < 1) throw DomainError("palette: count must be positive");
    std::vector<Color> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(yuv_color(static_cast<double>(i) * kGoldenAngle));
    }
    return out;
}

Color color_ramp(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        std::ostringstream msg;
        msg << "color_ramp: t = " << t << " outside [0,1]";
        throw DomainError(msg.str());
    }
    return yuv_color(t * kRampArc);
}

void EncodingSpec::validate() const {
    std::vector<std::string> problems;
    if (canvas_width < 8 || canvas_height < 8) problems.push_back("canvas must be at least 8x8");
    if (!(mark_radius > 0.0)) problems.push_back("mark_radius must be > 0");
    if (!(size_min > 0.0)) problems.push_back("size_range minimum must be > 0");
    if (!(size_max >= size_min)) problems.push_back("size_range maximum must be >= minimum");
    if (!(domain_q1.lo < domain_q1.hi)) problems.push_back("domain_q1 must have lo < hi");
    if (!(domain_q2.lo < domain_q2.hi)) problems.push_back("domain_q2 must have lo < hi");
    if (palette.empty()) problems.push_back("palette must not be empty");
    if (!problems.empty()) {
        std::string msg = "encoding spec invalid:";
        for (const std::string& p : problems) msg += " " + p + ";";
        throw ConfigError(msg);
    }
}

namespace {

struct Mark {
    double x = 0.0;       // pixel coordinates of the center
    double y = 0.0;
    double radius = 0.0;  // pixels
    Color color = kNeutralMark;
};

// Continuous position scale: domain -> [0, dim-1] pixel coordinates;
// y grows downward, so the y scale inverts (larger value = higher mark).
double scale_x(double t, int width) { return t * static_cast<double>(width - 1); }
double scale_y(double t, int height) { return (1.0 - t) * static_cast<double>(height - 1); }

// Categorical position scale: band centers over the category order.
double band_center(int index, int bands, int dim) {
    return (static_cast<double>(index) + 0.5) / static_cast<double>(bands) *
           static_cast<double>(dim);
}

void check_domain(double v, const ValueRange& range, std::size_t row, const char* variable) {
    if (!range.contains(v)) {
        std::ostringstream msg;
        msg << "render: row " << row << " " << variable << " = " << v << " outside domain ["
            << range.lo << "," << range.hi << "]";
        throw DomainError(msg.str());
    }
}

}  // namespace

ImageRGB render(const DatasetTable& data, const EncodingSpec& spec) {
    spec.validate();
    data.validate();

    const bool uses_palette =
        spec.name == EncodingName::kYXColor || spec.name == EncodingName::kXYColor;
    const int categories = static_cast<int>(data.category_order.size());
    if (uses_palette && categories > static_cast<int>(spec.palette.size())) {
        std::ostringstream msg;
        msg << "render: " << categories << " categories exhaust a palette of "
            << spec.palette.size();
        throw DomainError(msg.str());
    }

    std::vector<Mark> marks;
    marks.reserve(data.rows.size());
    const int w = spec.canvas_width;
    const int h = spec.canvas_height;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        const DataRow& row = data.rows[r];
        check_domain(row.q1, spec.domain_q1, r, "q1");
        check_domain(row.q2, spec.domain_q2, r, "q2");
        const double t1 = spec.domain_q1.unit(row.q1);
        const double t2 = spec.domain_q2.unit(row.q2);
        const int cat = data.category_index(row.category);

        Mark m;
        m.radius = spec.mark_radius;
        switch (spec.name) {
            case EncodingName::kYXColor:
                m.y = scale_y(t1, h);
                m.x = scale_x(t2, w);
                m.color = spec.palette[static_cast<std::size_t>(cat)];
                break;
            case EncodingName::kXYColor:
                m.x = scale_x(t1, w);
                m.y = scale_y(t2, h);
                m.color = spec.palette[static_cast<std::size_t>(cat)];
                break;
            case EncodingName::kSizeYX:
                m.radius = spec.size_min + t1 * (spec.size_max - spec.size_min);
                m.y = scale_y(t2, h);
                m.x = band_center(cat, categories, w);
                break;
            case EncodingName::kSizeXY:
                m.radius = spec.size_min + t1 * (spec.size_max - spec.size_min);
                m.x = scale_x(t2, w);
                m.y = band_center(cat, categories, h);
                break;
            case EncodingName::kXYRow: {
                // horizontal band per category; q2's y scale lives inside it
                const double band_h = static_cast<double>(h) / static_cast<double>(categories);
                const double top = static_cast<double>(cat) * band_h;
                m.x = scale_x(t1, w);
                m.y = top + (1.0 - t2) * (band_h - 1.0);
                break;
            }
            case EncodingName::kColorYX:
                m.color = color_ramp(t1);
                m.y = scale_y(t2, h);
                m.x = band_center(cat, categories, w);
                break;
        }
        marks.push_back(m);
    }

    // supersampled paint-over compositing, then box-filter reduction
    const int sw = w * kSupersample;
    const int sh = h * kSupersample;
    std::vector<Color> buffer(static_cast<std::size_t>(sw) * sh, Color{1.0, 1.0, 1.0});
    for (const Mark& m : marks) {
        // center and radius in subpixel units; +0.5 targets the pixel center
        const double cx = (m.x + 0.5) * kSupersample;
        const double cy = (m.y + 0.5) * kSupersample;
        const double radius = m.radius * kSupersample;
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
        const int x1 = std::min(sw - 1, static_cast<int>(std::ceil(cx + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
        const int y1 = std::min(sh - 1, static_cast<int>(std::ceil(cy + radius)));
        const double r2 = radius * radius;
        for (int sy = y0; sy <= y1; ++sy) {
            const double dy = static_cast<double>(sy) + 0.5 - cy;
            for (int sx = x0; sx <= x1; ++sx) {
                const double dx = static_cast<double>(sx) + 0.5 - cx;
                if (dx * dx + dy * dy <= r2) {
                    buffer[static_cast<std::size_t>(sy) * sw + sx] = m.color;
                }
            }
        }
    }

    ImageRGB out(w, h, 1.0);
#pragma omp parallel for schedule(static)
    for (int py = 0; py < h; ++py) {
        for (int px = 0; px < w; ++px) {
            double acc_r = 0.0, acc_g = 0.0, acc_b = 0.0;
            for (int sy = 0; sy < kSupersample; ++sy) {
                const std::size_t base =
                    (static_cast<std::size_t>(py) * kSupersample + sy) * sw +
                    static_cast<std::size_t>(px) * kSupersample;
                for (int sx = 0; sx < kSupersample; ++sx) {
                    const Color& c = buffer[base + static_cast<std::size_t>(sx)];
                    acc_r += c[0];
                    acc_g += c[1];
                    acc_b += c[2];
                }
            }
            const double inv = 1.0 / (kSupersample * kSupersample);
            out.r.at(px, py) = acc_r * inv;
            out.g.at(px, py) = acc_g * inv;
            out.b.at(px, py) = acc_b * inv;
        }
    }
    return out;
}

DatasetTable read_table_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t cat_col = table.column("category");
    const std::size_t q1_col = table.column("q1");
    const std::size_t q2_col = table.column("q2");
    DatasetTable out;
    for (const csv::Row& row : table.rows) {
        DataRow r;
        r.category = row[cat_col];
        r.q1 = csv::parse_double(row[q1_col]);
        r.q2 = csv::parse_double(row[q2_col]);
        if (std::find(out.category_order.begin(), out.category_order.end(), r.category) ==
            out.category_order.end()) {
            out.category_order.push_back(r.category);
        }
        out.rows.push_back(std::move(r));
    }
    out.validate();
    return out;
}

void write_table_csv(const std::string& path, const DatasetTable& table) {
    csv::Table out;
    out.header = {"category", "q1", "q2"};
    for (const DataRow& row : table.rows) {
        out.rows.push_back(
            {row.category, csv::format_double(row.q1), csv::format_double(row.q2)});
    }
    csv::write_file(path, out);
}

}  // namespace vizsim
