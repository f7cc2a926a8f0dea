#include "accustripes/server.hpp"

#include "accustripes/density.hpp"
#include "accustripes/json_io.hpp"
#include "accustripes/render.hpp"

#include "httplib.h"

#include <charconv>

namespace accustripes {

SessionState::SessionState(std::vector<Distribution> datasets, BinningOptions options)
    : m_Datasets(std::move(datasets)), m_Options(options) {}

std::shared_ptr<const BinPartition> SessionState::partition(std::size_t index, BinMethod method, bool* hit) {
    const auto key = std::make_pair(index, method);
    {
        std::lock_guard lock(m_Mutex);
        if (auto it = m_Partitions.find(key); it != m_Partitions.end()) {
            if (hit) *hit = true;
            return it->second;
        }
    }
    // first insert wins
    auto computed = std::make_shared<const BinPartition>(binDistribution(m_Datasets.at(index), method, m_Options));
    std::lock_guard lock(m_Mutex);
    auto [it, inserted] = m_Partitions.emplace(key, std::move(computed));
    if (hit) *hit = false;
    return it->second;
}

std::shared_ptr<const DensityEstimate> SessionState::density(std::size_t index, bool* hit) {
    {
        std::lock_guard lock(m_Mutex);
        if (auto it = m_Densities.find(index); it != m_Densities.end()) {
            if (hit) *hit = true;
            return it->second;
        }
    }
    const Distribution& d = m_Datasets.at(index);
    auto computed = std::make_shared<const DensityEstimate>(kde(d, silvermanBandwidth(d)));
    std::lock_guard lock(m_Mutex);
    auto [it, inserted] = m_Densities.emplace(index, std::move(computed));
    if (hit) *hit = false;
    return it->second;
}

namespace {

ApiResponse jsonResponse(int status, const Json& body) {
    ApiResponse response;
    response.status = status;
    response.body = body.dump();
    return response;
}

ApiResponse errorResponse(int status, const std::string& message) {
    return jsonResponse(status, Json{{"error", message}});
}

std::optional<std::string> param(const std::multimap<std::string, std::string>& query, const std::string& key) {
    auto it = query.find(key);
    if (it == query.end()) return std::nullopt;
    return it->second;
}

int dataErrorStatus(const Error& e) {
    switch (e.code()) {
    case ErrorCode::InvalidArgument: return 400;
    default: return 422;
    }
}

} // namespace

ApiResponse handleApiRequest(SessionState& session, const std::string& path,
                             const std::multimap<std::string, std::string>& query) {
    try {
        if (path == "/api/datasets") {
            Json list = Json::array();
            const auto& datasets = session.datasets();
            for (std::size_t i = 0; i < datasets.size(); ++i) {
                list.push_back({{"index", i}, {"name", datasets[i].name()}, {"n", datasets[i].size()},
                                {"min", datasets[i].min()}, {"max", datasets[i].max()}});
            }
            return jsonResponse(200, list);
        }

        if (path == "/api/bin") {
            const auto datasetText = param(query, "dataset");
            const auto methodText = param(query, "method");
            if (!datasetText || !methodText) {
                return errorResponse(400, "dataset and method are required");
            }
            const auto method = parseBinMethod(*methodText);
            if (!method) {
                return errorResponse(400, "unknown method '" + *methodText + "'");
            }
            std::size_t index = 0;
            const auto* end = datasetText->data() + datasetText->size();
            const auto [ptr, ec] = std::from_chars(datasetText->data(), end, index);
            if (ec != std::errc() || ptr != end) {
                return errorResponse(400, "dataset must be a non-negative integer");
            }
            if (index >= session.datasets().size()) {
                return errorResponse(404, "no dataset with index " + *datasetText);
            }
            bool hit = false;
            const auto partition = session.partition(index, *method, &hit);
            ApiResponse response = jsonResponse(200, toJson(*partition));
            response.headers["X-Cache"] = hit ? "hit" : "miss";
            return response;
        }

        if (path == "/api/renderspec") {
            const auto method = parseBinMethod(param(query, "method").value_or("bb"));
            const auto layout = parseLayout(param(query, "layout").value_or("bin"));
            const auto scope = parseColorScope(param(query, "scope").value_or("global"));
            if (!method) return errorResponse(400, "method must be one of uniform, bb, nb");
            if (!layout) return errorResponse(400, "layout must be one of bin, bin-curve, filled-curve");
            if (!scope) return errorResponse(400, "scope must be global or per");

            const auto& datasets = session.datasets();
            std::vector<BinPartition> partitions;
            std::vector<DensityEstimate> densities;
            for (std::size_t i = 0; i < datasets.size(); ++i) {
                partitions.push_back(*session.partition(i, *method));
                if (*layout != Layout::Bin) {
                    densities.push_back(*session.density(i));
                }
            }
            RenderOptions options;
            options.layout = *layout;
            options.scope = *scope;
            return jsonResponse(200, toJson(buildRenderSpec(datasets, partitions, densities, options)));
        }
        return errorResponse(404, "unknown endpoint " + path);
    } catch (const Error& e) {
        return errorResponse(dataErrorStatus(e), e.what());
    }
}

//////// HTTP ////////

struct ApiServer::Impl {
    SessionState session;
    ServerOptions options;
    httplib::Server http;
    bool bound = false;

    Impl(std::vector<Distribution> datasets, ServerOptions opts) : session(std::move(datasets)), options(std::move(opts)) {}
};

namespace {

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>AccuStripes</title></head>"
    "<body><p>AccuStripes API is running. Endpoints: /api/datasets, /api/renderspec, /api/bin.</p></body></html>";

void allowLocalOrigin(const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (origin.rfind("http://localhost", 0) == 0 || origin.rfind("http://127.0.0.1", 0) == 0) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
    }
}

} // namespace

ApiServer::ApiServer(std::vector<Distribution> datasets, ServerOptions options)
    : m_Impl(std::make_unique<Impl>(std::move(datasets), std::move(options))) {
    auto& http = m_Impl->http;
    // no SO_REUSEPORT: a taken port must fail to bind
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
#ifdef _WIN32
        setsockopt(sock, SOL_SOCKET, SO_EXCLUSIVEADDRUSE, reinterpret_cast<const char*>(&yes), sizeof(yes));
#else
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
#endif
    });
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
        const ApiResponse response = handleApiRequest(m_Impl->session, req.path, query);
        res.status = response.status;
        for (const auto& [key, value] : response.headers) {
            res.set_header(key, value);
        }
        allowLocalOrigin(req, res);
        res.set_content(response.body, response.contentType);
    };
    http.Get("/api/datasets", handler);
    http.Get("/api/bin", handler);
    http.Get("/api/renderspec", handler);

    if (m_Impl->options.staticDir) {
        if (!http.set_mount_point("/", m_Impl->options.staticDir->string())) {
            throw Error(ErrorCode::Io, "static directory '" + m_Impl->options.staticDir->string() + "' not found");
        }
    } else {
        http.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kPlaceholderPage, "text/html"); });
    }
}

ApiServer::~ApiServer() {
    stop();
}

int ApiServer::bind(int port) {
    int bound = -1;
    if (port == 0) {
        bound = m_Impl->http.bind_to_any_port(m_Impl->options.host);
    } else if (m_Impl->http.bind_to_port(m_Impl->options.host, port)) {
        bound = port;
    }
    if (bound <= 0) {
        throw Error(ErrorCode::Network, "cannot bind " + m_Impl->options.host + ":" + std::to_string(port));
    }
    m_Impl->bound = true;
    return bound;
}

void ApiServer::listen() {
    if (!m_Impl->bound) {
        throw Error(ErrorCode::Network, "server is not bound");
    }
    m_Impl->http.listen_after_bind();
}

void ApiServer::stop() {
    if (m_Impl) {
        m_Impl->http.stop();
    }
}

bool ApiServer::running() const {
    return m_Impl->http.is_running();
}

SessionState& ApiServer::session() noexcept {
    return m_Impl->session;
}

} // namespace accustripes
