#pragma once

#include "accustripes/binning.hpp"
#include "accustripes/datagen.hpp"
#include "accustripes/evalmetrics.hpp"
#include "accustripes/model.hpp"
#include "accustripes/render.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace accustripes {

using Json = nlohmann::json;

//! A dataset file: the distribution plus generator metadata when present.
struct DatasetFile {
    Distribution distribution;
    std::optional<Json> meta;
};

//! One value per line; a non-numeric first line is taken as a header.
Distribution parseValueLines(const std::string& text, std::string name);
//! {"name": string, "values": [numbers], "meta": {...}?}
DatasetFile parseDatasetJson(const std::string& text, std::string fallbackName);

//! Reads CSV/plain text or JSON, chosen by content (a leading '{' means JSON).
DatasetFile loadDataset(const std::filesystem::path& path);
void saveDataset(const std::filesystem::path& path, const Distribution& d, const std::optional<Json>& meta);

bool isManifest(const std::filesystem::path& path);
//! Paths listed by {"datasets": [...]}, resolved against the manifest directory.
std::vector<std::filesystem::path> readManifest(const std::filesystem::path& path);
//! Replaces every manifest among the inputs by the paths it lists.
std::vector<std::filesystem::path> expandInputs(const std::vector<std::filesystem::path>& inputs);

//! Generator metadata written by `gen`.
Json generationMeta(std::size_t baseSize, std::uint64_t seed, const FlawSpec& flaw, std::size_t points);

Json toJson(const BinPartition& partition);
Json toJson(const DensityEstimate& estimate);
Json toJson(const RenderSpec& spec);
Json toJson(const EvalReport& report);

//! Inverse of toJson(RenderSpec). Throws Parse on malformed input.
RenderSpec renderSpecFromJson(const Json& json);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& content);

} // namespace accustripes
