#include "accustripes/json_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace accustripes {

namespace fs = std::filesystem;

std::string readFile(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeFile(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parseNumber(const std::string& text) {
    if (text.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) return std::nullopt;
    return value;
}

} // namespace

Distribution parseValueLines(const std::string& text, std::string name) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    std::size_t lineNumber = 0;
    bool seenContent = false;
    while (std::getline(in, line)) {
        ++lineNumber;
        const std::string field = trim(line);
        if (field.empty()) continue;
        const auto value = parseNumber(field);
        if (!value) {
            if (!seenContent) {
                seenContent = true;
                continue;
            }
            throw Error(ErrorCode::Parse, "line " + std::to_string(lineNumber) + ": not a number: '" + field + "'");
        }
        seenContent = true;
        values.push_back(*value);
    }
    return ingest(values, std::move(name));
}

DatasetFile parseDatasetJson(const std::string& text, std::string fallbackName) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
        throw Error(ErrorCode::Parse, "dataset JSON needs a \"values\" array");
    }
    std::vector<double> values;
    values.reserve(doc["values"].size());
    for (const auto& v : doc["values"]) {
        if (!v.is_number()) {
            throw Error(ErrorCode::Parse, "dataset values must be numbers");
        }
        values.push_back(v.get<double>());
    }
    std::string name = std::move(fallbackName);
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) {
            throw Error(ErrorCode::Parse, "dataset name must be a string");
        }
        name = doc["name"].get<std::string>();
    }
    std::optional<Json> meta;
    if (doc.contains("meta")) {
        meta = doc["meta"];
    }
    return DatasetFile{ingest(values, std::move(name)), std::move(meta)};
}

DatasetFile loadDataset(const fs::path& path) {
    const std::string text = readFile(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    const std::string stem = path.stem().string();
    if (first != std::string::npos && text[first] == '{') {
        return parseDatasetJson(text, stem);
    }
    return DatasetFile{parseValueLines(text, stem), std::nullopt};
}

void saveDataset(const fs::path& path, const Distribution& d, const std::optional<Json>& meta) {
    Json doc;
    doc["name"] = d.name();
    doc["values"] = std::vector<double>(d.values().begin(), d.values().end());
    if (meta) {
        doc["meta"] = *meta;
    }
    writeFile(path, doc.dump() + "\n");
}

bool isManifest(const fs::path& path) {
    if (path.extension() != ".json") return false;
    try {
        const Json doc = Json::parse(readFile(path));
        return doc.is_object() && doc.contains("datasets");
    } catch (const Json::exception&) {
        return false;
    }
}

std::vector<fs::path> readManifest(const fs::path& path) {
    Json doc;
    try {
        doc = Json::parse(readFile(path));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("invalid manifest: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("datasets") || !doc["datasets"].is_array()) {
        throw Error(ErrorCode::Parse, "manifest needs a \"datasets\" array");
    }
    std::vector<fs::path> paths;
    for (const auto& entry : doc["datasets"]) {
        if (!entry.is_string()) {
            throw Error(ErrorCode::Parse, "manifest entries must be paths");
        }
        fs::path p = entry.get<std::string>();
        paths.push_back(p.is_absolute() ? p : path.parent_path() / p);
    }
    return paths;
}

std::vector<fs::path> expandInputs(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> expanded;
    for (const auto& input : inputs) {
        if (isManifest(input)) {
            for (auto& p : readManifest(input)) expanded.push_back(std::move(p));
        } else {
            expanded.push_back(input);
        }
    }
    return expanded;
}

Json generationMeta(std::size_t baseSize, std::uint64_t seed, const FlawSpec& flaw, std::size_t points) {
    Json flawJson = {{"kind", toString(flaw.kind)}, {"severity", flaw.severity}, {"seed", flaw.seed}};
    flawJson["location"] = flaw.location ? Json(*flaw.location) : Json(nullptr);
    return Json{
        {"n", baseSize},
        {"points", points},
        {"seed", seed},
        {"flaw", flawJson},
        {"generator",
         {{"rng", "mt19937_64"},
          {"meanRange", {kMeanLo, kMeanHi}},
          {"sigmaRange", {kSigmaLo, kSigmaHi}},
          {"support", {0.0, 1.0}}}},
    };
}

Json toJson(const BinPartition& partition) {
    Json params;
    std::visit(
        [&](const auto& info) {
            using T = std::decay_t<decltype(info)>;
            if constexpr (std::is_same_v<T, UniformInfo>) {
                params = {{"binCount", info.binCount}};
            } else if constexpr (std::is_same_v<T, BayesianBlocksInfo>) {
                params = {{"p0", info.p0}, {"ncpPrior", info.ncpPrior}, {"cellCount", info.cellCount},
                          {"quantized", info.quantized}};
            } else {
                params = {{"gvfThreshold", info.gvfThreshold}, {"kMax", info.kMax}, {"kChosen", info.kChosen},
                          {"gvfAchieved", info.gvfAchieved}};
            }
        },
        partition.params);
    return Json{{"method", toString(partition.method)}, {"edges", partition.edges}, {"counts", partition.counts},
                {"params", params}};
}

Json toJson(const DensityEstimate& estimate) {
    return Json{{"xs", estimate.xs}, {"ys", estimate.ys}, {"bandwidth", estimate.bandwidth}};
}

Json toJson(const RenderSpec& spec) {
    Json rows = Json::array();
    for (const auto& row : spec.rows) {
        Json stripes = Json::array();
        for (const auto& s : row.stripes) {
            stripes.push_back({{"x0", s.x0}, {"x1", s.x1}, {"colorIndex", s.colorIndex}, {"count", s.count}});
        }
        Json entry = {{"name", row.name}, {"stripes", stripes}, {"layout", toString(row.layout)}};
        if (row.curve) {
            Json curve = Json::array();
            for (const auto& p : *row.curve) {
                curve.push_back({{"x", p.x}, {"y", p.y}});
            }
            entry["curve"] = curve;
        }
        rows.push_back(entry);
    }
    Json levels = Json::array();
    for (const auto& c : spec.colorScale.levels) levels.push_back(c.hex());
    return Json{
        {"rows", rows},
        {"range", {{"lo", spec.range.lo()}, {"hi", spec.range.hi()}}},
        {"colorScale",
         {{"levels", levels}, {"background", spec.colorScale.background.hex()}, {"scope", toString(spec.colorScale.scope)}}},
        {"geometry",
         {{"rowHeightPx", spec.geometry.rowHeightPx},
          {"rowGapPx", spec.geometry.rowGapPx},
          {"widthPx", spec.geometry.widthPx},
          {"labelGutterPx", spec.geometry.labelGutterPx}}},
    };
}

namespace {

Rgb colorFromJson(const Json& j) {
    const auto parsed = Rgb::parseHex(j.get<std::string>());
    if (!parsed) {
        throw Error(ErrorCode::Parse, "invalid color '" + j.get<std::string>() + "'");
    }
    return *parsed;
}

} // namespace

RenderSpec renderSpecFromJson(const Json& json) {
    try {
        RenderSpec spec;
        spec.range = NormalizedRange(json.at("range").at("lo").get<double>(), json.at("range").at("hi").get<double>());
        const auto& scale = json.at("colorScale");
        const auto& levels = scale.at("levels");
        if (levels.size() != kColorLevels) {
            throw Error(ErrorCode::Parse, "color scale needs exactly 12 levels");
        }
        for (std::size_t i = 0; i < kColorLevels; ++i) {
            spec.colorScale.levels[i] = colorFromJson(levels[i]);
        }
        spec.colorScale.background = colorFromJson(scale.at("background"));
        const auto scope = parseColorScope(scale.at("scope").get<std::string>());
        if (!scope) throw Error(ErrorCode::Parse, "unknown color scope");
        spec.colorScale.scope = *scope;
        const auto& g = json.at("geometry");
        spec.geometry = {g.at("rowHeightPx").get<double>(), g.at("rowGapPx").get<double>(), g.at("widthPx").get<double>(),
                         g.at("labelGutterPx").get<double>()};
        for (const auto& r : json.at("rows")) {
            RenderRow row;
            row.name = r.at("name").get<std::string>();
            const auto layout = parseLayout(r.at("layout").get<std::string>());
            if (!layout) throw Error(ErrorCode::Parse, "unknown layout");
            row.layout = *layout;
            for (const auto& s : r.at("stripes")) {
                const auto index = s.at("colorIndex").get<std::size_t>();
                if (index > kColorLevels) throw Error(ErrorCode::Parse, "color index above 12");
                row.stripes.push_back({s.at("x0").get<double>(), s.at("x1").get<double>(), index,
                                       s.value("count", std::size_t{0})});
            }
            if (r.contains("curve")) {
                std::vector<CurvePoint> curve;
                for (const auto& p : r.at("curve")) {
                    curve.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
                }
                row.curve = std::move(curve);
            }
            spec.rows.push_back(std::move(row));
        }
        return spec;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("invalid render spec: ") + e.what());
    }
}

Json toJson(const EvalReport& report) {
    Json perMethod = Json::object();
    for (const auto& [method, summary] : report.perMethod) {
        perMethod[toString(method)] = {{"meanSilhouette", summary.meanSilhouette},
                                       {"variance", summary.variance},
                                       {"perDistribution", summary.perDistribution}};
    }
    Json cases = Json::array();
    for (const auto& c : report.cases) {
        cases.push_back({{"size", c.size}, {"flaw", c.flaw}, {"severity", c.severity}, {"seed", c.seed}, {"points", c.points}});
    }
    Json anova = {{"fStatistic", nullptr}, {"pValue", report.anova.pValue}, {"degenerate", report.anova.degenerate}};
    if (std::isfinite(report.anova.fStatistic)) {
        anova["fStatistic"] = report.anova.fStatistic;
    }
    return Json{
        {"perMethod", perMethod},
        {"anova", anova},
        {"protocol",
         {{"sizes", report.protocol.sizes},
          {"perSize", report.protocol.perSize},
          {"seed", report.protocol.seed},
          {"silhouetteSubsample", report.protocol.silhouetteSubsample},
          {"cases", cases}}},
    };
}

} // namespace accustripes
