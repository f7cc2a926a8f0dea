#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workDir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "accustripes_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string command =
        "cd '" + workDir().string() + "' && '" ACCUSTRIPES_CLI "' " + args + " > last_stdout.txt 2> last_stderr.txt";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
    std::ifstream in(workDir() / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes a dataset") {
    CHECK(run("gen --size 1000 --seed 3 --out base.json") == 0);
    const auto j = nlohmann::json::parse(slurp("base.json"));
    CHECK(j["values"].size() == 1000);
    CHECK(j["meta"]["seed"] == 3);
    CHECK(run("gen --size 1000 --seed 3 --out again.json") == 0);
    CHECK(slurp("again.json") == slurp("base.json"));
}

TEST_CASE("gen sweep") {
    CHECK(run("gen --size 500 --flaw outlier --seed 9 --sweep --out out") == 0);
    for (const char* s : {"00", "05", "15", "25"}) CHECK(fs::exists(workDir() / (std::string("out_") + s + ".json")));
    CHECK(run("gen --size 500 --flaw spike --location 0.4 --seed 9 --sweep") == 0);
    CHECK(fs::exists(workDir() / "spike_s9_25.json"));
}

TEST_CASE("gen usage errors") {
    CHECK(run("gen --size 100 --severity 0.3 --flaw noise --out x.json") == 1);
    CHECK(run("gen --size 100 --flaw gap --severity 0.1 --out x.json") == 1);
    CHECK(run("gen --size 100 --flaw blob --out x.json") == 1);
    CHECK(run("gen --size 100 --bogus --out x.json") == 1);
    CHECK(run("gen --size 100") == 1);
    CHECK(run("gen --size 1 --out x.json") == 1);
    CHECK(run("gen --sweep") == 1);
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("bin") {
    REQUIRE(run("gen --size 800 --seed 1 --out b.json") == 0);
    CHECK(run("bin --method nb --input b.json --out nb.json") == 0);
    const auto j = nlohmann::json::parse(slurp("nb.json"));
    CHECK(j["method"] == "nb");
    CHECK(j["params"]["kChosen"] == j["counts"].size());
    CHECK(run("bin --method bb --p0 0.01 --input b.json --out bb.json") == 0);
    CHECK(nlohmann::json::parse(slurp("bb.json"))["params"]["p0"] == 0.01);
    CHECK(run("bin --method xx --input b.json --out o.json") == 1);
    CHECK(run("bin --method bb --input missing.json --out o.json") == 2);
}

TEST_CASE("bin data errors") {
    std::ofstream(workDir() / "flat.csv") << "v\n1\n1\n1\n";
    std::ofstream(workDir() / "bad.csv") << "1\n2\nfoo\n";
    std::ofstream(workDir() / "nan.csv") << "1\nnan\n";
    CHECK(run("bin --method uniform --input flat.csv --out o.json") == 2);
    CHECK(slurp("last_stderr.txt").find("DegenerateRange") != std::string::npos);
    CHECK(run("bin --method uniform --input bad.csv --out o.json") == 2);
    CHECK(run("bin --method uniform --input nan.csv --out o.json") == 2);
}

TEST_CASE("render svg and spec") {
    REQUIRE(run("gen --size 600 --seed 5 --out r1.json") == 0);
    REQUIRE(run("gen --size 700 --seed 6 --out r2.json") == 0);
    CHECK(run("render --layout bin-curve --method bb --inputs r1.json r2.json --out r.svg --color-scope per") == 0);
    CHECK(slurp("r.svg").find("<svg") != std::string::npos);
    CHECK(run("render --layout bin-curve --method bb --inputs r1.json r2.json --out r.json --color-scope per --emit spec") == 0);
    const auto spec = nlohmann::json::parse(slurp("r.json"));
    CHECK(spec["rows"].size() == 2);
    CHECK(spec["colorScale"]["scope"] == "per");

    std::ofstream(workDir() / "pair.json") << R"({"datasets": ["r1.json", "r2.json"]})";
    CHECK(run("render --method bb --layout bin-curve --color-scope per --inputs pair.json --out m.svg") == 0);
    CHECK(slurp("m.svg") == slurp("r.svg"));

    CHECK(run("render --method bb --layout pie --inputs r1.json --out x.svg") == 1);
    CHECK(run("render --method bb --inputs r1.json missing.json --out x.svg") == 2);
}

TEST_CASE("eval writes a report") {
    CHECK(run("eval --seed 2 --sizes 300,400 --per-size 4 --out ev.json") == 0);
    const auto j = nlohmann::json::parse(slurp("ev.json"));
    CHECK(j["protocol"]["sizes"].size() == 2);
    CHECK(j["perMethod"].contains("nb"));
    CHECK(slurp("last_stdout.txt").find("ANOVA") != std::string::npos);
    CHECK(run("eval --per-size 0") == 1);
}

TEST_CASE("serve prints its port and answers") {
    REQUIRE(run("gen --size 300 --seed 1 --out s.json") == 0);
    const std::string command =
        "cd '" + workDir().string() + "' && timeout 5 '" ACCUSTRIPES_CLI "' serve --port 0 --inputs s.json";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    char line[256] = {};
    REQUIRE(std::fgets(line, sizeof line, pipe));
    const std::string text = line;
    const auto colon = text.rfind(':');
    REQUIRE(colon != std::string::npos);
    const int port = std::stoi(text.substr(colon + 1));
    CHECK(port > 0);
    httplib::Client client("127.0.0.1", port);
    const auto r = client.Get("/api/datasets");
    REQUIRE(r);
    CHECK(nlohmann::json::parse(r->body)[0]["n"] == 300);
    CHECK(std::system("pkill -INT -x accustripes") == 0);
    const int status = pclose(pipe);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("serve on a taken port is a data error") {
    REQUIRE(run("gen --size 300 --seed 1 --out t.json") == 0);
    httplib::Server holder;
    const int port = holder.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    CHECK(run("serve --port " + std::to_string(port) + " --inputs t.json") == 2);
    CHECK(run("serve --port 70000 --inputs t.json") == 1);
}

}
