#include "accustripes/accustripes.h"

#include "accustripes/binning.hpp"
#include "accustripes/datagen.hpp"
#include "accustripes/density.hpp"
#include "accustripes/evalmetrics.hpp"
#include "accustripes/json_io.hpp"
#include "accustripes/render.hpp"
#include "accustripes/server.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>

using namespace accustripes;

struct as_dataset {
    Distribution distribution;
    std::optional<Json> meta;
};

struct as_partition {
    BinPartition partition;
};

struct as_render_spec {
    RenderSpec spec;
};

struct as_eval_report {
    EvalReport report;
};

struct as_server {
    ApiServer server;
};

namespace {

thread_local std::string g_LastError;

as_status statusFor(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyInput: return AS_ERR_EMPTY_INPUT;
    case ErrorCode::NonFiniteValue: return AS_ERR_NON_FINITE;
    case ErrorCode::TooLarge: return AS_ERR_TOO_LARGE;
    case ErrorCode::TooFewValues: return AS_ERR_TOO_FEW_VALUES;
    case ErrorCode::OutOfRange: return AS_ERR_OUT_OF_RANGE;
    case ErrorCode::DegenerateRange: return AS_ERR_DEGENERATE_RANGE;
    case ErrorCode::SingleBin: return AS_ERR_SINGLE_BIN;
    case ErrorCode::InsufficientData: return AS_ERR_INSUFFICIENT_DATA;
    case ErrorCode::GapTooLarge: return AS_ERR_GAP_TOO_LARGE;
    case ErrorCode::InvalidSize: return AS_ERR_INVALID_SIZE;
    case ErrorCode::InvalidArgument: return AS_ERR_INVALID_ARGUMENT;
    case ErrorCode::MismatchedInputs: return AS_ERR_MISMATCHED_INPUTS;
    case ErrorCode::MissingDensity: return AS_ERR_MISSING_DENSITY;
    case ErrorCode::Io: return AS_ERR_IO;
    case ErrorCode::Parse: return AS_ERR_PARSE;
    case ErrorCode::Network: return AS_ERR_NETWORK;
    }
    return AS_ERR_INTERNAL;
}

as_status fail(as_status status, std::string message) {
    g_LastError = std::move(message);
    return status;
}

//! Runs body, translating exceptions into status codes.
template <typename F>
as_status guarded(F&& body) {
    g_LastError.clear();
    try {
        body();
        return AS_OK;
    } catch (const Error& e) {
        return fail(statusFor(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(AS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(AS_ERR_INTERNAL, e.what());
    }
}

char* duplicate(const std::string& text) {
    char* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (!copy) throw std::bad_alloc();
    std::memcpy(copy, text.c_str(), text.size() + 1);
    return copy;
}

BinMethod toMethod(as_method method) {
    switch (method) {
    case AS_METHOD_UNIFORM: return BinMethod::Uniform;
    case AS_METHOD_BB: return BinMethod::BayesianBlocks;
    case AS_METHOD_NB: return BinMethod::NaturalBreaks;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown binning method");
}

BinningOptions toBinningOptions(const as_bin_options& options) {
    BinningOptions result;
    result.bb.p0 = options.p0;
    result.nb.gvfThreshold = options.gvf_threshold;
    result.nb.kMax = options.k_max;
    return result;
}

FlawKind toFlaw(as_flaw flaw) {
    switch (flaw) {
    case AS_FLAW_NONE: return FlawKind::None;
    case AS_FLAW_GAP: return FlawKind::Gap;
    case AS_FLAW_OUTLIER: return FlawKind::Outlier;
    case AS_FLAW_SPIKE: return FlawKind::Spike;
    case AS_FLAW_NOISE: return FlawKind::Noise;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown flaw kind");
}

#define AS_REQUIRE(cond, what)                                                                                         \
    do {                                                                                                               \
        if (!(cond)) return fail(AS_ERR_INVALID_ARGUMENT, what);                                                       \
    } while (0)

FlawSpec flawSpecFor(const as_gen_options& options, double severity) {
    FlawSpec flaw;
    flaw.kind = toFlaw(options.flaw);
    flaw.severity = severity;
    if (options.has_location) flaw.location = options.location;
    flaw.seed = options.seed + 1;
    return flaw;
}

as_dataset* wrapGenerated(Distribution d, const as_gen_options& options, const FlawSpec& flaw) {
    Json meta = generationMeta(options.size, options.seed, flaw, d.size());
    return new as_dataset{std::move(d), std::move(meta)};
}

} // namespace

extern "C" {

const char* as_last_error(void) {
    return g_LastError.c_str();
}

const char* as_status_name(as_status status) {
    switch (status) {
    case AS_OK: return "ok";
    case AS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case AS_ERR_EMPTY_INPUT: return "EmptyInput";
    case AS_ERR_NON_FINITE: return "NonFiniteValue";
    case AS_ERR_TOO_LARGE: return "TooLarge";
    case AS_ERR_TOO_FEW_VALUES: return "TooFewValues";
    case AS_ERR_OUT_OF_RANGE: return "OutOfRange";
    case AS_ERR_DEGENERATE_RANGE: return "DegenerateRange";
    case AS_ERR_SINGLE_BIN: return "SingleBin";
    case AS_ERR_INSUFFICIENT_DATA: return "InsufficientData";
    case AS_ERR_GAP_TOO_LARGE: return "GapTooLarge";
    case AS_ERR_INVALID_SIZE: return "InvalidSize";
    case AS_ERR_MISMATCHED_INPUTS: return "MismatchedInputs";
    case AS_ERR_MISSING_DENSITY: return "MissingDensity";
    case AS_ERR_IO: return "Io";
    case AS_ERR_PARSE: return "Parse";
    case AS_ERR_NETWORK: return "Network";
    case AS_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

void as_string_free(char* text) {
    std::free(text);
}

as_status as_method_parse(const char* text, as_method* out) {
    AS_REQUIRE(text && out, "null argument");
    const auto method = parseBinMethod(text);
    if (!method) return fail(AS_ERR_INVALID_ARGUMENT, std::string("unknown method '") + text + "'");
    *out = *method == BinMethod::Uniform ? AS_METHOD_UNIFORM : *method == BinMethod::BayesianBlocks ? AS_METHOD_BB : AS_METHOD_NB;
    return AS_OK;
}

as_status as_layout_parse(const char* text, as_layout* out) {
    AS_REQUIRE(text && out, "null argument");
    const auto layout = parseLayout(text);
    if (!layout) return fail(AS_ERR_INVALID_ARGUMENT, std::string("unknown layout '") + text + "'");
    *out = static_cast<as_layout>(*layout);
    return AS_OK;
}

as_status as_scope_parse(const char* text, as_scope* out) {
    AS_REQUIRE(text && out, "null argument");
    const auto scope = parseColorScope(text);
    if (!scope) return fail(AS_ERR_INVALID_ARGUMENT, std::string("unknown color scope '") + text + "'");
    *out = *scope == ColorScope::Global ? AS_SCOPE_GLOBAL : AS_SCOPE_PER;
    return AS_OK;
}

as_status as_flaw_parse(const char* text, as_flaw* out) {
    AS_REQUIRE(text && out, "null argument");
    const auto kind = parseFlawKind(text);
    if (!kind) return fail(AS_ERR_INVALID_ARGUMENT, std::string("unknown flaw '") + text + "'");
    *out = static_cast<as_flaw>(*kind);
    return AS_OK;
}

//////// datasets ////////

as_status as_dataset_from_values(const double* values, size_t count, const char* name, as_dataset** out) {
    AS_REQUIRE(out, "null output");
    AS_REQUIRE(values || count == 0, "null values");
    return guarded([&] {
        Distribution d = ingest(std::span<const double>(values, count), name ? name : "dataset");
        *out = new as_dataset{std::move(d), std::nullopt};
    });
}

as_status as_dataset_load(const char* path, as_dataset** out) {
    AS_REQUIRE(path && out, "null argument");
    return guarded([&] {
        DatasetFile file = loadDataset(path);
        *out = new as_dataset{std::move(file.distribution), std::move(file.meta)};
    });
}

as_status as_dataset_save(const as_dataset* dataset, const char* path) {
    AS_REQUIRE(dataset && path, "null argument");
    return guarded([&] { saveDataset(path, dataset->distribution, dataset->meta); });
}

void as_dataset_free(as_dataset* dataset) {
    delete dataset;
}

size_t as_dataset_size(const as_dataset* dataset) {
    return dataset ? dataset->distribution.size() : 0;
}

const double* as_dataset_values(const as_dataset* dataset) {
    return dataset ? dataset->distribution.values().data() : nullptr;
}

const char* as_dataset_name(const as_dataset* dataset) {
    return dataset ? dataset->distribution.name().c_str() : nullptr;
}

as_status as_dataset_load_many(const char* const* paths, size_t path_count, as_dataset*** out, size_t* count) {
    AS_REQUIRE(out && count && (paths || path_count == 0), "null argument");
    *out = nullptr;
    *count = 0;
    std::vector<as_dataset*> loaded;
    const as_status status = guarded([&] {
        std::vector<std::filesystem::path> inputs(paths, paths + path_count);
        for (const auto& path : expandInputs(inputs)) {
            DatasetFile file = loadDataset(path);
            loaded.push_back(new as_dataset{std::move(file.distribution), std::move(file.meta)});
        }
        auto* array = new as_dataset*[loaded.size()];
        std::copy(loaded.begin(), loaded.end(), array);
        *out = array;
        *count = loaded.size();
    });
    if (status != AS_OK) {
        for (auto* d : loaded) delete d;
    }
    return status;
}

void as_dataset_list_free(as_dataset** datasets, size_t count) {
    if (!datasets) return;
    for (size_t i = 0; i < count; ++i) delete datasets[i];
    delete[] datasets;
}

//////// generation ////////

void as_gen_options_init(as_gen_options* options) {
    if (!options) return;
    options->size = 10000;
    options->seed = 0;
    options->flaw = AS_FLAW_NONE;
    options->severity = 0.0;
    options->has_location = 0;
    options->location = 0.5;
}

as_status as_generate(const as_gen_options* options, as_dataset** out) {
    AS_REQUIRE(options && out, "null argument");
    return guarded([&] {
        const FlawSpec flaw = flawSpecFor(*options, options->severity);
        Distribution d = applyFlaw(genGaussian(options->size, options->seed), flaw);
        *out = wrapGenerated(std::move(d), *options, flaw);
    });
}

as_status as_generate_sweep(const as_gen_options* options, as_dataset* out[4]) {
    AS_REQUIRE(options && out, "null argument");
    return guarded([&] {
        const FlawKind kind = toFlaw(options->flaw);
        auto sweep = flawSweep(options->size, kind, options->seed,
                               options->has_location ? std::optional<double>(options->location) : std::nullopt);
        std::array<as_dataset*, 4> made{};
        try {
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                FlawSpec flaw = flawSpecFor(*options, i == 0 ? 0.0 : kSweepSeverities[i - 1]);
                if (i == 0) flaw.kind = FlawKind::None;
                if (!flaw.location) flaw.location = 0.5;
                made[i] = wrapGenerated(std::move(sweep[i]), *options, flaw);
            }
        } catch (...) {
            for (auto* d : made) delete d;
            throw;
        }
        std::copy(made.begin(), made.end(), out);
    });
}

//////// binning ////////

void as_bin_options_init(as_bin_options* options) {
    if (!options) return;
    options->method = AS_METHOD_BB;
    options->p0 = BBParams{}.p0;
    options->gvf_threshold = NBParams{}.gvfThreshold;
    options->k_max = NBParams{}.kMax;
}

as_status as_bin(const as_dataset* dataset, const as_bin_options* options, as_partition** out) {
    AS_REQUIRE(dataset && options && out, "null argument");
    return guarded([&] {
        BinPartition p = binDistribution(dataset->distribution, toMethod(options->method), toBinningOptions(*options));
        *out = new as_partition{std::move(p)};
    });
}

void as_partition_free(as_partition* partition) {
    delete partition;
}

size_t as_partition_bin_count(const as_partition* partition) {
    return partition ? partition->partition.binCount() : 0;
}

const double* as_partition_edges(const as_partition* partition) {
    return partition ? partition->partition.edges.data() : nullptr;
}

const size_t* as_partition_counts(const as_partition* partition) {
    return partition ? partition->partition.counts.data() : nullptr;
}

as_status as_partition_to_json(const as_partition* partition, char** json) {
    AS_REQUIRE(partition && json, "null argument");
    return guarded([&] { *json = duplicate(toJson(partition->partition).dump()); });
}

//////// rendering ////////

void as_render_options_init(as_render_options* options) {
    if (!options) return;
    options->layout = AS_LAYOUT_BIN;
    options->scope = AS_SCOPE_GLOBAL;
    as_bin_options_init(&options->binning);
}

as_status as_render_build(const as_dataset* const* datasets, size_t count, const as_render_options* options,
                          as_render_spec** out) {
    AS_REQUIRE(datasets && options && out, "null argument");
    return guarded([&] {
        std::vector<Distribution> set;
        for (size_t i = 0; i < count; ++i) {
            if (!datasets[i]) throw Error(ErrorCode::InvalidArgument, "null dataset");
            set.push_back(datasets[i]->distribution);
        }
        const BinMethod method = toMethod(options->binning.method);
        const BinningOptions binning = toBinningOptions(options->binning);
        RenderOptions render;
        render.layout = static_cast<Layout>(options->layout);
        render.scope = options->scope == AS_SCOPE_GLOBAL ? ColorScope::Global : ColorScope::PerDistribution;

        std::vector<BinPartition> partitions;
        std::vector<DensityEstimate> densities;
        for (const auto& d : set) {
            partitions.push_back(binDistribution(d, method, binning));
            if (render.layout != Layout::Bin) {
                densities.push_back(kde(d, silvermanBandwidth(d)));
            }
        }
        *out = new as_render_spec{buildRenderSpec(set, partitions, densities, render)};
    });
}

as_status as_render_spec_from_json(const char* json, as_render_spec** out) {
    AS_REQUIRE(json && out, "null argument");
    return guarded([&] {
        Json doc;
        try {
            doc = Json::parse(json);
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
        }
        *out = new as_render_spec{renderSpecFromJson(doc)};
    });
}

void as_render_spec_free(as_render_spec* spec) {
    delete spec;
}

size_t as_render_spec_row_count(const as_render_spec* spec) {
    return spec ? spec->spec.rows.size() : 0;
}

as_status as_render_spec_to_json(const as_render_spec* spec, char** json) {
    AS_REQUIRE(spec && json, "null argument");
    return guarded([&] { *json = duplicate(toJson(spec->spec).dump() + "\n"); });
}

as_status as_render_spec_to_svg(const as_render_spec* spec, char** svg) {
    AS_REQUIRE(spec && svg, "null argument");
    return guarded([&] { *svg = duplicate(renderSvg(spec->spec)); });
}

//////// evaluation ////////

void as_eval_options_init(as_eval_options* options) {
    if (!options) return;
    options->seed = 1;
    options->sizes = nullptr;
    options->size_count = 0;
    options->per_size = 24;
}

as_status as_eval_run(const as_eval_options* options, as_eval_report** out) {
    AS_REQUIRE(options && out, "null argument");
    return guarded([&] {
        EvalProtocol protocol;
        protocol.seed = options->seed;
        protocol.perSize = options->per_size;
        if (options->sizes) {
            protocol.sizes.assign(options->sizes, options->sizes + options->size_count);
        }
        *out = new as_eval_report{runEvaluation(protocol)};
    });
}

void as_eval_report_free(as_eval_report* report) {
    delete report;
}

double as_eval_report_mean(const as_eval_report* report, as_method method) {
    if (!report) return 0.0;
    return report->report.perMethod.at(toMethod(method)).meanSilhouette;
}

double as_eval_report_variance(const as_eval_report* report, as_method method) {
    if (!report) return 0.0;
    return report->report.perMethod.at(toMethod(method)).variance;
}

double as_eval_report_p_value(const as_eval_report* report) {
    return report ? report->report.anova.pValue : 1.0;
}

as_status as_eval_report_to_json(const as_eval_report* report, char** json) {
    AS_REQUIRE(report && json, "null argument");
    return guarded([&] { *json = duplicate(toJson(report->report).dump(2) + "\n"); });
}

as_status as_eval_report_table(const as_eval_report* report, char** table) {
    AS_REQUIRE(report && table, "null argument");
    return guarded([&] { *table = duplicate(formatReportTable(report->report)); });
}

//////// server ////////

as_status as_server_create(const as_dataset* const* datasets, size_t count, const char* host, const char* static_dir,
                           as_server** out) {
    AS_REQUIRE(out && (datasets || count == 0), "null argument");
    return guarded([&] {
        std::vector<Distribution> set;
        for (size_t i = 0; i < count; ++i) {
            if (!datasets[i]) throw Error(ErrorCode::InvalidArgument, "null dataset");
            set.push_back(datasets[i]->distribution);
        }
        ServerOptions options;
        if (host) options.host = host;
        if (static_dir) options.staticDir = static_dir;
        *out = new as_server{ApiServer(std::move(set), std::move(options))};
    });
}

as_status as_server_bind(as_server* server, int port, int* bound_port) {
    AS_REQUIRE(server, "null server");
    return guarded([&] {
        const int bound = server->server.bind(port);
        if (bound_port) *bound_port = bound;
    });
}

as_status as_server_listen(as_server* server) {
    AS_REQUIRE(server, "null server");
    return guarded([&] { server->server.listen(); });
}

void as_server_stop(as_server* server) {
    if (server) server->server.stop();
}

void as_server_free(as_server* server) {
    delete server;
}

} // extern "C"
