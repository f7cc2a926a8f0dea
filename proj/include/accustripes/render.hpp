#pragma once

#include "accustripes/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accustripes {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    std::string hex() const;
    static std::optional<Rgb> parseHex(std::string_view text);
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr std::size_t kColorLevels = 12;

//! Viridis sampled at t = (level - 0.5) / 12 for levels 1..12.
inline constexpr std::array<Rgb, kColorLevels> kViridis12 = {{
    {0x47, 0x11, 0x63}, {0x47, 0x2d, 0x7b}, {0x40, 0x46, 0x88}, {0x35, 0x5d, 0x8d},
    {0x2c, 0x72, 0x8e}, {0x24, 0x86, 0x8e}, {0x1f, 0x9a, 0x8a}, {0x28, 0xae, 0x80},
    {0x47, 0xc0, 0x6f}, {0x75, 0xd0, 0x54}, {0xab, 0xdc, 0x32}, {0xe3, 0xe4, 0x18},
}};

inline constexpr Rgb kDefaultBackground = {0x1e, 0x1e, 0x1e};
inline constexpr Rgb kCurveStroke = {0xd0, 0xd0, 0xd0};

enum class ColorScope { Global, PerDistribution };
enum class Layout { Bin, BinCurve, FilledCurve };

const char* toString(ColorScope scope) noexcept;
const char* toString(Layout layout) noexcept;
//! "global" | "per".
std::optional<ColorScope> parseColorScope(std::string_view text) noexcept;
//! "bin" | "bin-curve" | "filled-curve".
std::optional<Layout> parseLayout(std::string_view text) noexcept;

struct ColorScale {
    std::array<Rgb, kColorLevels> levels = kViridis12;
    Rgb background = kDefaultBackground;
    ColorScope scope = ColorScope::Global;

    //! Index 0 is the background, 1..12 the levels.
    Rgb color(std::size_t index) const;
    friend bool operator==(const ColorScale&, const ColorScale&) = default;
};

//! WCAG relative luminance.
double relativeLuminance(Rgb color);

//! 0 for an empty bin, otherwise ceil(12 * count / cMax) clamped to [1, 12].
std::size_t colorIndex(std::size_t count, std::size_t cMax);

struct Stripe {
    double x0 = 0.0;
    double x1 = 0.0;
    std::size_t colorIndex = 0;
    std::size_t count = 0;
    friend bool operator==(const Stripe&, const Stripe&) = default;
};

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RenderRow {
    std::string name;
    std::vector<Stripe> stripes;
    std::optional<std::vector<CurvePoint>> curve;
    Layout layout = Layout::Bin;
    friend bool operator==(const RenderRow&, const RenderRow&) = default;
};

struct Geometry {
    double rowHeightPx = 60.0;
    double rowGapPx = 8.0;
    double widthPx = 900.0;
    double labelGutterPx = 120.0;
    friend bool operator==(const Geometry&, const Geometry&) = default;
};

//! Resolution-independent description of one stacked chart.
struct RenderSpec {
    std::vector<RenderRow> rows;
    NormalizedRange range{0.0, 1.0};
    ColorScale colorScale;
    Geometry geometry;
    friend bool operator==(const RenderSpec&, const RenderSpec&) = default;
};

struct RenderOptions {
    Layout layout = Layout::Bin;
    ColorScope scope = ColorScope::Global;
    Geometry geometry;
    Rgb background = kDefaultBackground;
};

//! Maps partitions into the common unit range and assigns colors. Densities are
//! required for the curve layouts. Throws MismatchedInputs or MissingDensity.
RenderSpec buildRenderSpec(std::span<const Distribution> set, std::span<const BinPartition> partitions,
                           std::span<const DensityEstimate> densities, const RenderOptions& options);

//! Primitive shapes in pixel space, the layer between a spec and its SVG text.
struct Shape {
    enum class Kind { Rect, Polygon, Polyline, Text };
    Kind kind = Kind::Rect;
    std::vector<std::array<double, 2>> points; // Rect: top-left and bottom-right
    Rgb fill;
    std::optional<Rgb> stroke;
    double strokeWidth = 0.0;
    std::string text;
};

struct Scene {
    double width = 0.0;
    double height = 0.0;
    std::vector<Shape> shapes;
};

Scene layoutScene(const RenderSpec& spec);

//! SVG 1.1 text with every coordinate printed with three decimals.
std::string renderSvg(const RenderSpec& spec);

} // namespace accustripes
