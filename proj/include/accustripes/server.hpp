#pragma once

#include "accustripes/binning.hpp"
#include "accustripes/model.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace accustripes {

//! Loaded compared set plus lazily computed, immutable per-dataset results.
class SessionState {
public:
    explicit SessionState(std::vector<Distribution> datasets, BinningOptions options = {});

    const std::vector<Distribution>& datasets() const noexcept { return m_Datasets; }

    //! Cached partition; hit reports whether it was already computed.
    std::shared_ptr<const BinPartition> partition(std::size_t index, BinMethod method, bool* hit = nullptr);
    std::shared_ptr<const DensityEstimate> density(std::size_t index, bool* hit = nullptr);

private:
    std::vector<Distribution> m_Datasets;
    BinningOptions m_Options;
    std::mutex m_Mutex;
    std::map<std::pair<std::size_t, BinMethod>, std::shared_ptr<const BinPartition>> m_Partitions;
    std::map<std::size_t, std::shared_ptr<const DensityEstimate>> m_Densities;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string contentType = "application/json";
    std::map<std::string, std::string> headers;
};

//! Routes GET requests for the /api endpoints. Independent of any socket.
ApiResponse handleApiRequest(SessionState& session, const std::string& path,
                             const std::multimap<std::string, std::string>& query);

struct ServerOptions {
    std::string host = "127.0.0.1";
    //! Directory served at "/" (built web UI); a placeholder page when absent.
    std::optional<std::filesystem::path> staticDir;
};

//! HTTP front end over a SessionState.
class ApiServer {
public:
    ApiServer(std::vector<Distribution> datasets, ServerOptions options = {});
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    //! Binds the listening socket; port 0 picks a free port. Returns the bound
    //! port, throws Network on failure.
    int bind(int port);
    //! Serves until stop() is called. Requires bind().
    void listen();
    void stop();
    bool running() const;

    SessionState& session() noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> m_Impl;
};

} // namespace accustripes
