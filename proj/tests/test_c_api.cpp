#include "accustripes/accustripes.h"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace {

struct Text {
    char* p = nullptr;
    ~Text() { as_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

std::string tempPath(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / "accustripes_capi_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

TEST_SUITE("c_api") {

TEST_CASE("dataset from values") {
    const double xs[] = {0.3, 0.1, 0.2, 0.9};
    as_dataset* d = nullptr;
    REQUIRE(as_dataset_from_values(xs, 4, "mine", &d) == AS_OK);
    CHECK(as_dataset_size(d) == 4);
    CHECK(as_dataset_values(d)[0] == 0.1);
    CHECK(std::string(as_dataset_name(d)) == "mine");
    as_dataset_free(d);
}

TEST_CASE("errors carry a status and message") {
    as_dataset* d = nullptr;
    const double one[] = {1.0};
    CHECK(as_dataset_from_values(one, 1, "x", &d) == AS_ERR_TOO_FEW_VALUES);
    CHECK(d == nullptr);
    CHECK(std::string(as_last_error()).size() > 0);
    CHECK(as_dataset_from_values(nullptr, 3, "x", &d) == AS_ERR_INVALID_ARGUMENT);
    CHECK(as_dataset_load(tempPath("absent.json").c_str(), &d) == AS_ERR_IO);
    CHECK(std::string(as_status_name(AS_ERR_GAP_TOO_LARGE)) == "GapTooLarge");
    const double nan[] = {1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK(as_dataset_from_values(nan, 2, "n", &d) == AS_ERR_NON_FINITE);
}

TEST_CASE("parse helpers") {
    as_method m;
    as_layout l;
    as_scope s;
    as_flaw f;
    CHECK(as_method_parse("nb", &m) == AS_OK);
    CHECK(m == AS_METHOD_NB);
    CHECK(as_layout_parse("filled-curve", &l) == AS_OK);
    CHECK(l == AS_LAYOUT_FILLED_CURVE);
    CHECK(as_scope_parse("per", &s) == AS_OK);
    CHECK(s == AS_SCOPE_PER);
    CHECK(as_flaw_parse("spike", &f) == AS_OK);
    CHECK(f == AS_FLAW_SPIKE);
    CHECK(as_method_parse("median", &m) == AS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("generate, save, load and bin") {
    as_gen_options g;
    as_gen_options_init(&g);
    g.size = 2000;
    g.seed = 4;
    g.flaw = AS_FLAW_OUTLIER;
    g.severity = 0.05;
    as_dataset* d = nullptr;
    REQUIRE(as_generate(&g, &d) == AS_OK);
    CHECK(as_dataset_size(d) == 2100);
    const auto path = tempPath("gen.json");
    REQUIRE(as_dataset_save(d, path.c_str()) == AS_OK);
    as_dataset* back = nullptr;
    REQUIRE(as_dataset_load(path.c_str(), &back) == AS_OK);
    CHECK(as_dataset_size(back) == 2100);

    as_bin_options b;
    as_bin_options_init(&b);
    CHECK(b.p0 == 0.05);
    CHECK(b.gvf_threshold == 0.9);
    CHECK(b.k_max == 50);
    for (as_method m : {AS_METHOD_UNIFORM, AS_METHOD_BB, AS_METHOD_NB}) {
        b.method = m;
        as_partition* p = nullptr;
        REQUIRE(as_bin(back, &b, &p) == AS_OK);
        const size_t bins = as_partition_bin_count(p);
        size_t total = 0;
        for (size_t i = 0; i < bins; ++i) total += as_partition_counts(p)[i];
        CHECK(total == 2100);
        CHECK(as_partition_edges(p)[0] == as_dataset_values(back)[0]);
        Text json;
        CHECK(as_partition_to_json(p, &json.p) == AS_OK);
        CHECK(json.str().find("\"edges\"") != std::string::npos);
        as_partition_free(p);
    }
    as_dataset_free(d);
    as_dataset_free(back);
}

TEST_CASE("generation argument checks") {
    as_gen_options g;
    as_gen_options_init(&g);
    g.flaw = AS_FLAW_GAP;
    g.severity = 0.1;
    as_dataset* d = nullptr;
    CHECK(as_generate(&g, &d) == AS_ERR_INVALID_ARGUMENT);
    g.has_location = 1;
    g.location = 0.5;
    g.size = 1;
    CHECK(as_generate(&g, &d) == AS_ERR_INVALID_SIZE);
}

TEST_CASE("sweep, render and svg") {
    as_gen_options g;
    as_gen_options_init(&g);
    g.size = 1000;
    g.seed = 2;
    g.flaw = AS_FLAW_GAP;
    g.has_location = 1;
    g.location = 0.5;
    as_dataset* sweep[4] = {};
    REQUIRE(as_generate_sweep(&g, sweep) == AS_OK);
    CHECK(as_dataset_size(sweep[3]) == 750);

    as_render_options r;
    as_render_options_init(&r);
    r.layout = AS_LAYOUT_BIN_CURVE;
    as_render_spec* spec = nullptr;
    REQUIRE(as_render_build(sweep, 4, &r, &spec) == AS_OK);
    CHECK(as_render_spec_row_count(spec) == 4);
    Text json, svg, again;
    REQUIRE(as_render_spec_to_json(spec, &json.p) == AS_OK);
    REQUIRE(as_render_spec_to_svg(spec, &svg.p) == AS_OK);
    CHECK(svg.str().find("<polyline") != std::string::npos);

    as_render_spec* parsed = nullptr;
    REQUIRE(as_render_spec_from_json(json.p, &parsed) == AS_OK);
    REQUIRE(as_render_spec_to_svg(parsed, &again.p) == AS_OK);
    CHECK(again.str() == svg.str());
    CHECK(as_render_spec_from_json("{}", &parsed) == AS_ERR_PARSE);

    as_render_spec_free(spec);
    as_render_spec_free(parsed);
    for (auto* d : sweep) as_dataset_free(d);
}

TEST_CASE("small evaluation") {
    as_eval_options e;
    as_eval_options_init(&e);
    const size_t sizes[] = {300};
    e.sizes = sizes;
    e.size_count = 1;
    e.per_size = 8;
    as_eval_report* report = nullptr;
    REQUIRE(as_eval_run(&e, &report) == AS_OK);
    const double u = as_eval_report_mean(report, AS_METHOD_UNIFORM);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(as_eval_report_variance(report, AS_METHOD_NB) >= 0.0);
    const double p = as_eval_report_p_value(report);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    Text json, table;
    CHECK(as_eval_report_to_json(report, &json.p) == AS_OK);
    CHECK(json.str().find("perMethod") != std::string::npos);
    CHECK(as_eval_report_table(report, &table.p) == AS_OK);
    as_eval_report_free(report);
}

TEST_CASE("server bind and stop") {
    const double xs[] = {0.1, 0.4, 0.5, 0.9};
    as_dataset* d = nullptr;
    REQUIRE(as_dataset_from_values(xs, 4, "s", &d) == AS_OK);
    as_server* server = nullptr;
    REQUIRE(as_server_create(&d, 1, nullptr, nullptr, &server) == AS_OK);
    int port = 0;
    CHECK(as_server_bind(server, 0, &port) == AS_OK);
    CHECK(port > 0);
    as_server_stop(server);
    as_server_free(server);
    as_dataset_free(d);
}

}
