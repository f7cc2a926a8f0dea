#include "accustripes/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace accustripes {

std::string Rgb::hex() const {
    char buffer[8];
    std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", r, g, b);
    return buffer;
}

std::optional<Rgb> Rgb::parseHex(std::string_view text) {
    if (text.size() != 7 || text[0] != '#') {
        return std::nullopt;
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::array<int, 6> digits{};
    for (std::size_t i = 0; i < 6; ++i) {
        digits[i] = nibble(text[i + 1]);
        if (digits[i] < 0) return std::nullopt;
    }
    return Rgb{static_cast<std::uint8_t>(digits[0] * 16 + digits[1]), static_cast<std::uint8_t>(digits[2] * 16 + digits[3]),
               static_cast<std::uint8_t>(digits[4] * 16 + digits[5])};
}

const char* toString(ColorScope scope) noexcept {
    return scope == ColorScope::Global ? "global" : "per";
}

const char* toString(Layout layout) noexcept {
    switch (layout) {
    case Layout::Bin: return "bin";
    case Layout::BinCurve: return "bin-curve";
    case Layout::FilledCurve: return "filled-curve";
    }
    return "unknown";
}

std::optional<ColorScope> parseColorScope(std::string_view text) noexcept {
    if (text == "global") return ColorScope::Global;
    if (text == "per") return ColorScope::PerDistribution;
    return std::nullopt;
}

std::optional<Layout> parseLayout(std::string_view text) noexcept {
    if (text == "bin") return Layout::Bin;
    if (text == "bin-curve") return Layout::BinCurve;
    if (text == "filled-curve") return Layout::FilledCurve;
    return std::nullopt;
}

Rgb ColorScale::color(std::size_t index) const {
    if (index == 0) {
        return background;
    }
    if (index > kColorLevels) {
        throw Error(ErrorCode::OutOfRange, "color index above 12");
    }
    return levels[index - 1];
}

double relativeLuminance(Rgb color) {
    auto linear = [](std::uint8_t channel) {
        const double c = channel / 255.0;
        return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    };
    return 0.2126 * linear(color.r) + 0.7152 * linear(color.g) + 0.0722 * linear(color.b);
}

std::size_t colorIndex(std::size_t count, std::size_t cMax) {
    if (count == 0) {
        return 0;
    }
    if (cMax == 0 || count > cMax) {
        throw Error(ErrorCode::OutOfRange, "bin count above the color maximum");
    }
    const std::size_t level = (kColorLevels * count + cMax - 1) / cMax;
    return std::clamp<std::size_t>(level, 1, kColorLevels);
}

namespace {

double interpolate(const DensityEstimate& density, double x) {
    const auto& xs = density.xs;
    if (xs.empty() || x < xs.front() || x > xs.back()) {
        return 0.0;
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) {
        return density.ys.back();
    }
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return density.ys[lo] + t * (density.ys[hi] - density.ys[lo]);
}

std::vector<CurvePoint> unitCurve(const DensityEstimate& density, const NormalizedRange& range) {
    const std::size_t samples = std::max<std::size_t>(density.xs.size(), 2);
    std::vector<CurvePoint> curve(samples);
    double peak = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(samples - 1);
        curve[j] = {u, interpolate(density, range.fromUnit(u))};
        peak = std::max(peak, curve[j].y);
    }
    if (peak > 0.0) {
        for (auto& point : curve) point.y /= peak;
    }
    return curve;
}

} // namespace

RenderSpec buildRenderSpec(std::span<const Distribution> set, std::span<const BinPartition> partitions,
                           std::span<const DensityEstimate> densities, const RenderOptions& options) {
    if (set.empty() || set.size() != partitions.size()) {
        throw Error(ErrorCode::MismatchedInputs, "need one partition per distribution");
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& p = partitions[i];
        const std::size_t total = std::accumulate(p.counts.begin(), p.counts.end(), std::size_t{0});
        if (p.edges.size() != p.counts.size() + 1 || p.edges.size() < 2 || p.edges.front() != set[i].min() ||
            p.edges.back() != set[i].max() || total != set[i].size()) {
            throw Error(ErrorCode::MismatchedInputs, "partition " + std::to_string(i) + " does not belong to '" +
                                                         set[i].name() + "'");
        }
    }
    const bool curves = options.layout != Layout::Bin;
    if (curves && densities.size() != set.size()) {
        throw Error(ErrorCode::MissingDensity, std::string("layout ") + toString(options.layout) + " needs a density per row");
    }

    RenderSpec spec;
    spec.range = NormalizedRange::common(set);
    spec.colorScale.scope = options.scope;
    spec.colorScale.background = options.background;
    spec.geometry = options.geometry;

    std::size_t globalMax = 0;
    for (const auto& p : partitions) {
        globalMax = std::max(globalMax, *std::max_element(p.counts.begin(), p.counts.end()));
    }

    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& p = partitions[i];
        const std::size_t cMax =
            options.scope == ColorScope::Global ? globalMax : *std::max_element(p.counts.begin(), p.counts.end());

        RenderRow row;
        row.name = set[i].name();
        row.layout = options.layout;
        std::vector<double> unitEdges(p.edges.size());
        for (std::size_t e = 0; e < p.edges.size(); ++e) {
            unitEdges[e] = spec.range.toUnit(p.edges[e]);
        }
        // filler outside the row's data
        if (unitEdges.front() > 0.0) {
            row.stripes.push_back({0.0, unitEdges.front(), 0, 0});
        }
        for (std::size_t b = 0; b < p.counts.size(); ++b) {
            row.stripes.push_back({unitEdges[b], unitEdges[b + 1], colorIndex(p.counts[b], cMax), p.counts[b]});
        }
        if (unitEdges.back() < 1.0) {
            row.stripes.push_back({unitEdges.back(), 1.0, 0, 0});
        }
        if (curves) {
            row.curve = unitCurve(densities[i], spec.range);
        }
        spec.rows.push_back(std::move(row));
    }
    return spec;
}

//////// Scene + SVG ////////

namespace {

double curveAt(const std::vector<CurvePoint>& curve, double x) {
    if (curve.empty()) return 0.0;
    auto it = std::lower_bound(curve.begin(), curve.end(), x, [](const CurvePoint& p, double v) { return p.x < v; });
    if (it == curve.begin()) return curve.front().y;
    if (it == curve.end()) return curve.back().y;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.x == lo.x) return hi.y;
    return lo.y + (x - lo.x) / (hi.x - lo.x) * (hi.y - lo.y);
}

} // namespace

Scene layoutScene(const RenderSpec& spec) {
    const Geometry& g = spec.geometry;
    const auto rows = spec.rows.size();
    Scene scene;
    scene.width = g.labelGutterPx + g.widthPx;
    scene.height = rows == 0 ? 0.0 : static_cast<double>(rows) * g.rowHeightPx + static_cast<double>(rows - 1) * g.rowGapPx;

    Shape backdrop;
    backdrop.kind = Shape::Kind::Rect;
    backdrop.points = {{0.0, 0.0}, {scene.width, scene.height}};
    backdrop.fill = spec.colorScale.background;
    scene.shapes.push_back(backdrop);

    for (std::size_t r = 0; r < rows; ++r) {
        const RenderRow& row = spec.rows[r];
        const double top = static_cast<double>(r) * (g.rowHeightPx + g.rowGapPx);
        const double bottom = top + g.rowHeightPx;
        auto px = [&](double u) { return g.labelGutterPx + u * g.widthPx; };

        Shape label;
        label.kind = Shape::Kind::Text;
        label.points = {{g.labelGutterPx - 8.0, top + 0.5 * g.rowHeightPx}};
        label.fill = kCurveStroke;
        label.text = row.name;
        scene.shapes.push_back(label);

        if (row.layout == Layout::FilledCurve && row.curve) {
            const auto& curve = *row.curve;
            auto py = [&](double y) { return bottom - y * g.rowHeightPx; };
            for (const Stripe& stripe : row.stripes) {
                Shape area;
                area.kind = Shape::Kind::Polygon;
                area.fill = spec.colorScale.color(stripe.colorIndex);
                area.points.push_back({px(stripe.x0), bottom});
                area.points.push_back({px(stripe.x0), py(curveAt(curve, stripe.x0))});
                for (const CurvePoint& p : curve) {
                    if (p.x > stripe.x0 && p.x < stripe.x1) {
                        area.points.push_back({px(p.x), py(p.y)});
                    }
                }
                area.points.push_back({px(stripe.x1), py(curveAt(curve, stripe.x1))});
                area.points.push_back({px(stripe.x1), bottom});
                scene.shapes.push_back(std::move(area));
            }
            continue;
        }

        for (const Stripe& stripe : row.stripes) {
            Shape rect;
            rect.kind = Shape::Kind::Rect;
            rect.points = {{px(stripe.x0), top}, {px(stripe.x1), bottom}};
            rect.fill = spec.colorScale.color(stripe.colorIndex);
            scene.shapes.push_back(std::move(rect));
        }
        if (row.layout == Layout::BinCurve && row.curve) {
            Shape line;
            line.kind = Shape::Kind::Polyline;
            line.stroke = kCurveStroke;
            line.strokeWidth = 1.5;
            for (const CurvePoint& p : *row.curve) {
                line.points.push_back({px(p.x), bottom - p.y * 0.9 * g.rowHeightPx});
            }
            scene.shapes.push_back(std::move(line));
        }
    }
    return scene;
}

namespace {

std::string fixed3(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.3f", value);
    std::string text = buffer;
    if (text == "-0.000") {
        text = "0.000";
    }
    return text;
}

std::string xmlEscape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void writePoints(std::ostringstream& out, const std::vector<std::array<double, 2>>& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) out << ' ';
        out << fixed3(points[i][0]) << ',' << fixed3(points[i][1]);
    }
}

} // namespace

std::string renderSvg(const RenderSpec& spec) {
    const Scene scene = layoutScene(spec);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed3(scene.width) << "\" height=\""
        << fixed3(scene.height) << "\" viewBox=\"0.000 0.000 " << fixed3(scene.width) << ' ' << fixed3(scene.height)
        << "\">\n";
    for (const Shape& shape : scene.shapes) {
        switch (shape.kind) {
        case Shape::Kind::Rect: {
            const auto& a = shape.points[0];
            const auto& b = shape.points[1];
            out << "<rect x=\"" << fixed3(a[0]) << "\" y=\"" << fixed3(a[1]) << "\" width=\"" << fixed3(b[0] - a[0])
                << "\" height=\"" << fixed3(b[1] - a[1]) << "\" fill=\"" << shape.fill.hex() << "\"/>\n";
            break;
        }
        case Shape::Kind::Polygon:
            out << "<polygon points=\"";
            writePoints(out, shape.points);
            out << "\" fill=\"" << shape.fill.hex() << "\"/>\n";
            break;
        case Shape::Kind::Polyline:
            out << "<polyline points=\"";
            writePoints(out, shape.points);
            out << "\" fill=\"none\" stroke=\"" << shape.stroke.value_or(kCurveStroke).hex() << "\" stroke-width=\""
                << fixed3(shape.strokeWidth) << "\"/>\n";
            break;
        case Shape::Kind::Text:
            out << "<text x=\"" << fixed3(shape.points[0][0]) << "\" y=\"" << fixed3(shape.points[0][1])
                << "\" fill=\"" << shape.fill.hex()
                << "\" font-family=\"sans-serif\" font-size=\"12.000\" text-anchor=\"end\" dominant-baseline=\"middle\">"
                << xmlEscape(shape.text) << "</text>\n";
            break;
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace accustripes
