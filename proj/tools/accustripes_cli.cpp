// accustripes command-line tool: gen | bin | render | eval | serve.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include "accustripes/accustripes.h"

#include "CLI11.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError {
    std::string message;
};

struct DataError {
    std::string message;
};

void check(as_status status, const std::string& context) {
    if (status != AS_OK) {
        throw DataError{context + ": " + as_status_name(status) + ": " + as_last_error()};
    }
}

struct CString {
    char* text = nullptr;
    ~CString() { as_string_free(text); }
};

struct DatasetPtr {
    as_dataset* handle = nullptr;
    ~DatasetPtr() { as_dataset_free(handle); }
};

struct DatasetList {
    as_dataset** items = nullptr;
    size_t count = 0;
    ~DatasetList() { as_dataset_list_free(items, count); }
};

void writeText(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError{"cannot write '" + path + "'"};
    out << text;
    if (!out) throw DataError{"write to '" + path + "' failed"};
}

as_method parseMethod(const std::string& text) {
    as_method method;
    if (as_method_parse(text.c_str(), &method) != AS_OK) throw UsageError{as_last_error()};
    return method;
}

//////// gen ////////

struct GenArgs {
    size_t size = 10000;
    std::string flaw = "none";
    double severity = 0.0;
    std::optional<double> location;
    uint64_t seed = 0;
    std::string out;
    bool sweep = false;
};

std::string sweepPath(const GenArgs& args, const char* suffix) {
    std::string stem = args.out.empty() ? args.flaw + "_s" + std::to_string(args.seed) : args.out;
    if (stem.size() > 5 && stem.compare(stem.size() - 5, 5, ".json") == 0) {
        stem.resize(stem.size() - 5);
    }
    return stem + "_" + suffix + ".json";
}

int runGen(const GenArgs& args) {
    as_gen_options options;
    as_gen_options_init(&options);
    options.size = args.size;
    options.seed = args.seed;
    options.severity = args.severity;
    if (as_flaw_parse(args.flaw.c_str(), &options.flaw) != AS_OK) throw UsageError{as_last_error()};
    if (args.location) {
        if (!(*args.location > 0.0 && *args.location < 1.0)) throw UsageError{"--location must lie in (0, 1)"};
        options.has_location = 1;
        options.location = *args.location;
    }
    const bool needsLocation = options.flaw == AS_FLAW_GAP || options.flaw == AS_FLAW_SPIKE;
    if (needsLocation && !args.location) throw UsageError{"--flaw " + args.flaw + " needs --location"};
    if (args.size < 2) throw UsageError{"--size must be at least 2"};

    if (args.sweep) {
        if (options.flaw == AS_FLAW_NONE) throw UsageError{"--sweep needs a --flaw other than none"};
        as_dataset* made[4] = {nullptr, nullptr, nullptr, nullptr};
        check(as_generate_sweep(&options, made), "gen");
        DatasetPtr owned[4] = {{made[0]}, {made[1]}, {made[2]}, {made[3]}};
        const char* suffixes[4] = {"00", "05", "15", "25"};
        for (int i = 0; i < 4; ++i) {
            const std::string path = sweepPath(args, suffixes[i]);
            check(as_dataset_save(owned[i].handle, path.c_str()), "gen");
            std::cout << path << " (" << as_dataset_size(owned[i].handle) << " values)\n";
        }
        return 0;
    }
    if (args.out.empty()) throw UsageError{"--out is required unless --sweep is given"};
    DatasetPtr dataset;
    check(as_generate(&options, &dataset.handle), "gen");
    check(as_dataset_save(dataset.handle, args.out.c_str()), "gen");
    std::cout << args.out << " (" << as_dataset_size(dataset.handle) << " values)\n";
    return 0;
}

//////// bin ////////

struct BinArgs {
    std::string method;
    std::string input;
    std::string out;
    double p0 = 0.05;
    double gvfThreshold = 0.9;
    size_t kMax = 50;
};

int runBin(const BinArgs& args) {
    as_bin_options options;
    as_bin_options_init(&options);
    options.method = parseMethod(args.method);
    options.p0 = args.p0;
    options.gvf_threshold = args.gvfThreshold;
    options.k_max = args.kMax;

    DatasetPtr dataset;
    check(as_dataset_load(args.input.c_str(), &dataset.handle), args.input);
    as_partition* partition = nullptr;
    check(as_bin(dataset.handle, &options, &partition), "bin");
    std::unique_ptr<as_partition, decltype(&as_partition_free)> owned(partition, &as_partition_free);
    CString json;
    check(as_partition_to_json(partition, &json.text), "bin");
    writeText(args.out, (std::string(json.text) + "\n").c_str());
    std::cout << args.out << " (" << as_partition_bin_count(partition) << " bins)\n";
    return 0;
}

//////// render ////////

struct RenderArgs {
    std::string layout = "bin";
    std::string method;
    std::vector<std::string> inputs;
    std::string out;
    std::string scope = "global";
    std::string emit = "svg";
};

int runRender(const RenderArgs& args) {
    as_render_options options;
    as_render_options_init(&options);
    options.binning.method = parseMethod(args.method);
    if (as_layout_parse(args.layout.c_str(), &options.layout) != AS_OK) throw UsageError{as_last_error()};
    if (as_scope_parse(args.scope.c_str(), &options.scope) != AS_OK) throw UsageError{as_last_error()};

    std::vector<const char*> paths;
    for (const auto& p : args.inputs) paths.push_back(p.c_str());
    DatasetList datasets;
    check(as_dataset_load_many(paths.data(), paths.size(), &datasets.items, &datasets.count), "render");

    as_render_spec* spec = nullptr;
    check(as_render_build(datasets.items, datasets.count, &options, &spec), "render");
    std::unique_ptr<as_render_spec, decltype(&as_render_spec_free)> owned(spec, &as_render_spec_free);
    CString text;
    if (args.emit == "spec") {
        check(as_render_spec_to_json(spec, &text.text), "render");
    } else {
        check(as_render_spec_to_svg(spec, &text.text), "render");
    }
    writeText(args.out, text.text);
    std::cout << args.out << " (" << as_render_spec_row_count(spec) << " rows)\n";
    return 0;
}

//////// eval ////////

struct EvalArgs {
    uint64_t seed = 1;
    std::vector<size_t> sizes;
    size_t perSize = 24;
    std::string out = "eval_report.json";
};

int runEval(const EvalArgs& args) {
    as_eval_options options;
    as_eval_options_init(&options);
    options.seed = args.seed;
    options.per_size = args.perSize;
    if (!args.sizes.empty()) {
        options.sizes = args.sizes.data();
        options.size_count = args.sizes.size();
    }
    as_eval_report* report = nullptr;
    check(as_eval_run(&options, &report), "eval");
    std::unique_ptr<as_eval_report, decltype(&as_eval_report_free)> owned(report, &as_eval_report_free);
    CString json;
    check(as_eval_report_to_json(report, &json.text), "eval");
    writeText(args.out, json.text);
    CString table;
    check(as_eval_report_table(report, &table.text), "eval");
    std::cout << table.text;
    return 0;
}

//////// serve ////////

struct ServeArgs {
    int port = 8080;
    std::vector<std::string> inputs;
    std::string host = "127.0.0.1";
    std::string staticDir;
};

as_server* g_Server = nullptr;

extern "C" void onSignal(int) {
    if (g_Server) as_server_stop(g_Server);
}

int runServe(const ServeArgs& args) {
    std::vector<const char*> paths;
    for (const auto& p : args.inputs) paths.push_back(p.c_str());
    DatasetList datasets;
    check(as_dataset_load_many(paths.data(), paths.size(), &datasets.items, &datasets.count), "serve");

    as_server* server = nullptr;
    check(as_server_create(datasets.items, datasets.count, args.host.c_str(),
                           args.staticDir.empty() ? nullptr : args.staticDir.c_str(), &server),
          "serve");
    std::unique_ptr<as_server, decltype(&as_server_free)> owned(server, &as_server_free);
    int bound = 0;
    check(as_server_bind(server, args.port, &bound), "serve");
    std::cout << "listening on http://" << args.host << ":" << bound << std::endl;

    g_Server = server;
    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    const as_status status = as_server_listen(server);
    g_Server = nullptr;
    check(status, "serve");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AccuStripes: adaptive binning and stacked stripe charts for comparing distributions"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* genCmd = app.add_subcommand("gen", "Generate a flawed Gaussian dataset (or a 0/5/15/25% sweep)");
    genCmd->add_option("--size", gen.size, "Base point count")->capture_default_str();
    genCmd->add_option("--flaw", gen.flaw, "Flaw kind")
        ->check(CLI::IsMember({"none", "gap", "outlier", "spike", "noise"}))
        ->capture_default_str();
    genCmd->add_option("--severity", gen.severity, "Flawed share of the base count")
        ->check(CLI::Range(0.0, 0.25))
        ->capture_default_str();
    genCmd->add_option("--location", gen.location, "Gap centre or spike value in (0, 1)");
    genCmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    genCmd->add_option("--out", gen.out, "Output JSON path (prefix for --sweep)");
    genCmd->add_flag("--sweep", gen.sweep, "Write the base and its 5/15/25% variants");

    BinArgs bin;
    auto* binCmd = app.add_subcommand("bin", "Bin one dataset and write the partition JSON");
    binCmd->add_option("--method", bin.method, "Binning method")
        ->required()
        ->check(CLI::IsMember({"uniform", "bb", "nb"}));
    binCmd->add_option("--input", bin.input, "Dataset (CSV or JSON)")->required();
    binCmd->add_option("--out", bin.out, "Output JSON path")->required();
    binCmd->add_option("--p0", bin.p0, "Bayesian Blocks false-alarm probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    binCmd->add_option("--gvf-threshold", bin.gvfThreshold, "Natural breaks stopping GVF")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    binCmd->add_option("--k-max", bin.kMax, "Natural breaks class cap")->check(CLI::Range(2, 100000))->capture_default_str();

    RenderArgs render;
    auto* renderCmd = app.add_subcommand("render", "Render stacked AccuStripes as SVG or RenderSpec JSON");
    renderCmd->add_option("--layout", render.layout, "Layout")
        ->check(CLI::IsMember({"bin", "bin-curve", "filled-curve"}))
        ->capture_default_str();
    renderCmd->add_option("--method", render.method, "Binning method")
        ->required()
        ->check(CLI::IsMember({"uniform", "bb", "nb"}));
    renderCmd->add_option("--inputs", render.inputs, "Datasets or manifests, one row each, top to bottom")->required();
    renderCmd->add_option("--out", render.out, "Output path")->required();
    renderCmd->add_option("--color-scope", render.scope, "Color maximum over all rows or per row")
        ->check(CLI::IsMember({"global", "per"}))
        ->capture_default_str();
    renderCmd->add_option("--emit", render.emit, "Output kind")->check(CLI::IsMember({"svg", "spec"}))->capture_default_str();

    EvalArgs eval;
    auto* evalCmd = app.add_subcommand("eval", "Silhouette evaluation of the three binning methods");
    evalCmd->add_option("--seed", eval.seed, "Random seed")->capture_default_str();
    evalCmd->add_option("--sizes", eval.sizes, "Size categories (comma separated)")->delimiter(',');
    evalCmd->add_option("--per-size", eval.perSize, "Distributions per size category")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evalCmd->add_option("--out", eval.out, "EvalReport JSON path")->capture_default_str();

    ServeArgs serve;
    auto* serveCmd = app.add_subcommand("serve", "Serve the JSON API (and UI assets) over a compared set");
    serveCmd->add_option("--port", serve.port, "TCP port, 0 picks a free one")->check(CLI::Range(0, 65535))->capture_default_str();
    serveCmd->add_option("--inputs", serve.inputs, "Datasets or manifests")->required();
    serveCmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
    serveCmd->add_option("--static", serve.staticDir, "Directory with built UI assets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (genCmd->parsed()) return runGen(gen);
        if (binCmd->parsed()) return runBin(bin);
        if (renderCmd->parsed()) return runRender(render);
        if (evalCmd->parsed()) return runEval(eval);
        if (serveCmd->parsed()) return runServe(serve);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.message << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitData;
    }
    return kExitUsage;
}
