#pragma once

// Local HTTP service behind the studio UI. Each session is one slide plus an
// append-only event log; the log stores backend results, so replaying it
// never calls a backend.
//
//   POST /sessions                      deck/slide JSON or .pptx bytes (?slide=N)
//   GET  /sessions/{id}/slide           current doc + SVG
//   POST /sessions/{id}/branch          {"n": 2, "seed": 0}
//   POST /sessions/{id}/select          {"branch_id": "b1"}
//   POST /sessions/{id}/labels          {"element_ids": [...]}
//   POST /sessions/{id}/review          flagged ids
//   GET  /sessions/{id}/trace           history and traces
//   GET  /sessions/{id}/export.pptx
//
// Mutations on one session are single-writer: a second one while the first
// is in flight gets 409.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "slidelab/config.hpp"
#include "slidelab/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace slidelab {

struct SessionState {
    std::string session_id;
    SlideDoc parent;
    SlideDoc current;
    /// Candidates from the latest branch call, by branch id.
    std::vector<std::pair<std::string, SlideDoc>> branches;
    std::vector<RefinementTrace> traces;
    /// The event log, oldest first.
    std::vector<Json> history;
};

/// Rebuilds a session from its event log. Throws SchemaError for a log that
/// does not start with a create event or references unknown branches.
SessionState replay_session(const std::vector<Json>& events);

struct ServiceOptions {
    AppConfig config;
    /// Where event logs live; empty keeps sessions in memory only.
    std::filesystem::path data_dir;
    /// Test hook: mutations hold the session lock at least this long.
    std::chrono::milliseconds mutation_delay{0};
};

class Service {
public:
    /// Backends default to the ones named in the config. Existing logs under
    /// data_dir are replayed.
    explicit Service(ServiceOptions opts, std::shared_ptr<Reviewer> reviewer = nullptr,
                     std::shared_ptr<Contributor> contributor = nullptr);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds (port 0 picks a free one) and returns the port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void run();
    void stop();
    void wait_until_ready();

    std::optional<SessionState> session(const std::string& id) const;
    std::vector<std::string> session_ids() const;

private:
    struct Session;
    void routes();
    std::shared_ptr<Session> find(const std::string& id) const;
    std::shared_ptr<Session> create(SlideDoc doc);
    void append(Session& s, Json event);

    ServiceOptions opts_;
    std::shared_ptr<Reviewer> reviewer_;
    std::shared_ptr<Contributor> contributor_;
    std::unique_ptr<httplib::Server> server_;
    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace slidelab
