#include "accustripes/datagen.hpp"
#include "accustripes/json_io.hpp"
#include "accustripes/server.hpp"

#include "doctest.h"
#include "httplib.h"

#include <future>
#include <thread>

using namespace accustripes;

namespace {

std::vector<Distribution> compared(std::size_t count) {
    std::vector<Distribution> set;
    for (std::size_t i = 0; i < count; ++i) set.push_back(genGaussian(400 + 100 * i, 70 + i));
    return set;
}

using Query = std::multimap<std::string, std::string>;

} // namespace

TEST_SUITE("server") {

TEST_CASE("datasets endpoint lists in load order") {
    SessionState session(compared(8));
    const auto r = handleApiRequest(session, "/api/datasets", {});
    CHECK(r.status == 200);
    const auto j = Json::parse(r.body);
    REQUIRE(j.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(j[i]["index"] == i);
        CHECK(j[i]["n"] == 400 + 100 * i);
        CHECK(j[i]["name"] == session.datasets()[i].name());
        CHECK(j[i]["min"] == session.datasets()[i].min());
    }
}

TEST_CASE("bin endpoint caches") {
    SessionState session(compared(2));
    const auto first = handleApiRequest(session, "/api/bin", Query{{"dataset", "0"}, {"method", "nb"}});
    CHECK(first.status == 200);
    CHECK(first.headers.at("X-Cache") == "miss");
    CHECK(Json::parse(first.body)["params"].contains("kChosen"));
    const auto second = handleApiRequest(session, "/api/bin", Query{{"dataset", "0"}, {"method", "nb"}});
    CHECK(second.headers.at("X-Cache") == "hit");
    CHECK(second.body == first.body);
}

TEST_CASE("bin endpoint errors") {
    SessionState session(compared(2));
    CHECK(handleApiRequest(session, "/api/bin", Query{{"dataset", "99"}, {"method", "bb"}}).status == 404);
    CHECK(handleApiRequest(session, "/api/bin", Query{{"dataset", "x"}, {"method", "bb"}}).status == 400);
    CHECK(handleApiRequest(session, "/api/bin", Query{{"dataset", "0"}, {"method", "xx"}}).status == 400);
    CHECK(handleApiRequest(session, "/api/bin", Query{{"dataset", "0"}}).status == 400);
    CHECK(handleApiRequest(session, "/api/nothing", {}).status == 404);
}

TEST_CASE("renderspec endpoint") {
    SessionState session(compared(3));
    const auto bin = handleApiRequest(session, "/api/renderspec", Query{{"method", "bb"}, {"layout", "bin"}});
    CHECK(bin.status == 200);
    const auto j = Json::parse(bin.body);
    CHECK(j["rows"].size() == 3);
    for (const auto& row : j["rows"]) CHECK_FALSE(row.contains("curve"));
    const auto again = handleApiRequest(session, "/api/renderspec", Query{{"method", "bb"}, {"layout", "bin"}});
    CHECK(again.body == bin.body);

    const auto curve =
        handleApiRequest(session, "/api/renderspec", Query{{"method", "nb"}, {"layout", "filled-curve"}, {"scope", "per"}});
    CHECK(curve.status == 200);
    const auto c = Json::parse(curve.body);
    CHECK(c["rows"][0].contains("curve"));
    CHECK(c["colorScale"]["scope"] == "per");

    const auto bad = handleApiRequest(session, "/api/renderspec", Query{{"method", "xx"}});
    CHECK(bad.status == 400);
    CHECK(Json::parse(bad.body).contains("error"));
    CHECK(handleApiRequest(session, "/api/renderspec", Query{{"layout", "pie"}}).status == 400);
    CHECK(handleApiRequest(session, "/api/renderspec", Query{{"scope", "local"}}).status == 400);
}

TEST_CASE("responses match a fresh session") {
    const auto set = compared(3);
    SessionState warm(set);
    handleApiRequest(warm, "/api/bin", Query{{"dataset", "1"}, {"method", "uniform"}});
    handleApiRequest(warm, "/api/renderspec", Query{{"method", "uniform"}, {"layout", "bin-curve"}});
    SessionState fresh(set);
    const Query q{{"method", "uniform"}, {"layout", "bin-curve"}};
    CHECK(handleApiRequest(warm, "/api/renderspec", q).body == handleApiRequest(fresh, "/api/renderspec", q).body);
}

TEST_CASE("concurrent identical requests") {
    SessionState session(compared(4));
    const Query q{{"method", "nb"}, {"layout", "filled-curve"}};
    std::vector<std::future<std::string>> results;
    for (int i = 0; i < 8; ++i) {
        results.push_back(std::async(std::launch::async, [&] { return handleApiRequest(session, "/api/renderspec", q).body; }));
    }
    const auto first = results[0].get();
    for (std::size_t i = 1; i < results.size(); ++i) CHECK(results[i].get() == first);
}

TEST_CASE("http server over loopback") {
    ApiServer server(compared(2));
    const int port = server.bind(0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    httplib::Result r;
    for (int attempt = 0; attempt < 50 && !r; ++attempt) {
        r = client.Get("/api/datasets");
        if (!r) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(Json::parse(r->body).size() == 2);
    CHECK(r->get_header_value("Content-Type").find("application/json") != std::string::npos);

    const auto miss = client.Get("/api/bin?dataset=1&method=bb");
    const auto hit = client.Get("/api/bin?dataset=1&method=bb");
    REQUIRE(miss);
    REQUIRE(hit);
    CHECK(miss->get_header_value("X-Cache") == "miss");
    CHECK(hit->get_header_value("X-Cache") == "hit");

    httplib::Headers origin = {{"Origin", "http://localhost:5173"}};
    const auto cors = client.Get("/api/datasets", origin);
    REQUIRE(cors);
    CHECK(cors->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    httplib::Headers foreign = {{"Origin", "http://example.com"}};
    const auto blocked = client.Get("/api/datasets", foreign);
    REQUIRE(blocked);
    CHECK_FALSE(blocked->has_header("Access-Control-Allow-Origin"));

    CHECK(client.Get("/api/renderspec?method=zz")->status == 400);
    CHECK(client.Get("/")->status == 200);
    server.stop();
    loop.join();
}

TEST_CASE("binding a taken port fails") {
    ApiServer a(compared(2));
    const int port = a.bind(0);
    ApiServer b(compared(2));
    try {
        b.bind(port);
        FAIL("expected Network error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Network);
    }
}

}
