#include "slidelab/service.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "slidelab/error.hpp"
#include "slidelab/pptx.hpp"
#include "slidelab/render.hpp"
#include "slidelab/validate.hpp"

namespace slidelab {

namespace {

Json doc_json(const SlideDoc& d) { return to_json_value(d); }

RefinementTrace user_trace(const SlideDoc& before, const std::set<std::string>& labels, const SlideDoc& after) {
    RefinementTrace t;
    t.options.max_iterations = 1;
    t.snapshots = {with_all_final(before), after};
    t.passes = {{0, labels, "user"}};
    t.iterations_used = 1;
    t.stop_reason = StopReason::max_iterations;
    return t;
}

void apply_event(SessionState& s, const Json& e) {
    const auto type = e.at("type").get<std::string>();
    if (type == "create") {
        s.session_id = e.at("session_id").get<std::string>();
        s.parent = from_json_value(e.at("doc"));
        s.current = s.parent;
    } else if (type == "branch") {
        s.branches.clear();
        for (const auto& b : e.at("branches"))
            s.branches.emplace_back(b.at("branch_id").get<std::string>(), from_json_value(b.at("doc")));
    } else if (type == "select") {
        const auto id = e.at("branch_id").get<std::string>();
        const auto it = std::find_if(s.branches.begin(), s.branches.end(), [&](const auto& b) { return b.first == id; });
        if (it == s.branches.end()) throw SchemaError("$.branch_id", "select of unknown branch \"" + id + "\"");
        s.current = it->second;
    } else if (type == "labels") {
        const auto ids = e.at("element_ids").get<std::set<std::string>>();
        const auto result = from_json_value(e.at("result"));
        s.traces.push_back(user_trace(s.current, ids, result));
        s.current = result;
    } else if (type != "review") {
        throw SchemaError("$.type", "unknown event \"" + type + "\"");
    }
    s.history.push_back(e);
}

std::string new_session_id() {
    static std::mutex mu;
    static std::mt19937_64 gen{std::random_device{}()};
    std::lock_guard lock(mu);
    std::ostringstream o;
    o << "s" << std::hex << (gen() & 0xFFFFFFFFFFFFull);
    return o.str();
}

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

Json error_body(std::string_view kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

// Maps library errors onto HTTP statuses.
void send_error(httplib::Response& res, const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const UnknownIdsError& e) {
        auto body = error_body(to_string(e.kind()), e.what());
        body["error"]["ids"] = e.ids();
        send_json(res, 422, body);
    } catch (const ValidationError& e) {
        auto body = error_body(to_string(e.kind()), e.what());
        body["error"]["ids"] = e.element_ids();
        send_json(res, 422, body);
    } catch (const BackendError& e) {
        auto body = error_body(to_string(e.kind()), e.what());
        body["error"]["raw"] = e.raw();
        send_json(res, 502, body);
    } catch (const Error& e) {
        int status = 400;
        if (e.kind() == ErrorKind::precondition || e.kind() == ErrorKind::scope || e.kind() == ErrorKind::budget) status = 422;
        if (e.kind() == ErrorKind::io) status = 500;
        send_json(res, status, error_body(to_string(e.kind()), e.what()));
    } catch (const Json::exception& e) {
        send_json(res, 400, error_body("parse", e.what()));
    } catch (const std::exception& e) {
        send_json(res, 500, error_body("internal", e.what()));
    }
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    try {
        return Json::parse(req.body);
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
}

std::string highlighted_svg(const SlideDoc& d) {
    RenderOptions o;
    o.highlight_tentative = true;
    return render_svg(d, o);
}

}  // namespace

SessionState replay_session(const std::vector<Json>& events) {
    if (events.empty() || events.front().value("type", "") != "create")
        throw SchemaError("$[0]", "session log must start with a create event");
    SessionState s;
    try {
        for (const auto& e : events) apply_event(s, e);
    } catch (const Json::exception& e) {
        throw SchemaError("$", std::string("malformed event: ") + e.what());
    }
    return s;
}

struct Service::Session {
    std::mutex write_mu;          // held for the whole mutation
    mutable std::mutex state_mu;  // guards `state`
    SessionState state;

    SessionState snapshot() const {
        std::lock_guard lock(state_mu);
        return state;
    }
};

Service::Service(ServiceOptions opts, std::shared_ptr<Reviewer> reviewer, std::shared_ptr<Contributor> contributor)
    : opts_(std::move(opts)),
      reviewer_(reviewer ? std::move(reviewer) : std::shared_ptr<Reviewer>(make_reviewer(opts_.config))),
      contributor_(contributor ? std::move(contributor) : std::shared_ptr<Contributor>(make_contributor(opts_.config))),
      server_(std::make_unique<httplib::Server>()) {
    if (!opts_.data_dir.empty()) {
        std::filesystem::create_directories(opts_.data_dir);
        for (const auto& f : std::filesystem::directory_iterator(opts_.data_dir)) {
            if (f.path().extension() != ".jsonl") continue;
            std::ifstream in(f.path());
            std::vector<Json> events;
            for (std::string line; std::getline(in, line);)
                if (!line.empty()) events.push_back(Json::parse(line));
            auto s = std::make_shared<Session>();
            s->state = replay_session(events);
            sessions_[s->state.session_id] = s;
        }
    }
    routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    if (!server_->bind_to_port(host, port)) throw Error(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

void Service::wait_until_ready() { server_->wait_until_ready(); }

std::optional<SessionState> Service::session(const std::string& id) const {
    auto s = find(id);
    if (!s) return std::nullopt;
    return s->snapshot();
}

std::vector<std::string> Service::session_ids() const {
    std::shared_lock lock(sessions_mu_);
    std::vector<std::string> ids;
    for (const auto& [id, s] : sessions_) ids.push_back(id);
    return ids;
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

void Service::append(Session& s, Json event) {
    if (!opts_.data_dir.empty()) {
        std::ofstream out(opts_.data_dir / (s.state.session_id + ".jsonl"), std::ios::app);
        out << event.dump() << "\n";
        out.flush();
        if (!out) throw Error(ErrorKind::io, "cannot append to the session log");
    }
    std::lock_guard lock(s.state_mu);
    apply_event(s.state, event);
}

std::shared_ptr<Service::Session> Service::create(SlideDoc doc) {
    ensure_valid(doc);
    auto s = std::make_shared<Session>();
    s->state.session_id = new_session_id();
    append(*s, {{"type", "create"}, {"session_id", s->state.session_id}, {"doc", doc_json(with_all_final(std::move(doc)))}});
    std::unique_lock lock(sessions_mu_);
    sessions_[s->state.session_id] = s;
    return s;
}

void Service::routes() {
    auto& srv = *server_;
    using httplib::Request;
    using httplib::Response;

    // Wraps a handler so library errors become JSON error responses.
    const auto guarded = [](auto fn) {
        return [fn](const Request& req, Response& res) {
            try {
                fn(req, res);
            } catch (...) {
                send_error(res, std::current_exception());
            }
        };
    };
    // Looks up the session and runs `fn` as its single writer.
    const auto mutating = [this, guarded](auto fn) {
        return guarded([this, fn](const Request& req, Response& res) {
            auto s = find(req.matches[1]);
            if (!s) return send_json(res, 404, error_body("not_found", "unknown session"));
            std::unique_lock writer(s->write_mu, std::try_to_lock);
            if (!writer.owns_lock())
                return send_json(res, 409, error_body("conflict", "another change to this session is in progress"));
            if (opts_.mutation_delay.count() > 0) std::this_thread::sleep_for(opts_.mutation_delay);
            fn(req, res, *s);
        });
    };
    const auto reading = [this, guarded](auto fn) {
        return guarded([this, fn](const Request& req, Response& res) {
            auto s = find(req.matches[1]);
            if (!s) return send_json(res, 404, error_body("not_found", "unknown session"));
            fn(req, res, s->snapshot());
        });
    };

    srv.Post("/sessions", guarded([this](const Request& req, Response& res) {
        const std::size_t slide = req.has_param("slide") ? std::stoul(req.get_param_value("slide")) : 0;
        std::vector<SlideDoc> slides;
        if (req.body.rfind("PK", 0) == 0) {
            slides = load_pptx(req.body, "upload").deck.slides;
        } else {
            const auto j = parse_body(req);
            if (j.contains("slides")) slides = deck_from_json(req.body).slides;
            else slides = {from_json_value(j)};
        }
        if (slide >= slides.size())
            throw Error(ErrorKind::precondition, "slide " + std::to_string(slide) + " out of range (" +
                                                     std::to_string(slides.size()) + " slides)");
        auto s = create(slides[slide]);
        const auto st = s->snapshot();
        send_json(res, 201, {{"session_id", st.session_id}, {"doc", doc_json(st.current)}, {"svg", render_svg(st.current)}});
    }));

    srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/slide)", reading([](const Request&, Response& res, const SessionState& st) {
        Json ids = Json::array();
        for (const auto& [id, d] : st.branches) ids.push_back(id);
        send_json(res, 200,
                  {{"session_id", st.session_id},
                   {"doc", doc_json(st.current)},
                   {"svg", render_svg(st.current)},
                   {"branch_ids", ids},
                   {"history_length", st.history.size()}});
    }));

    srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/trace)", reading([](const Request&, Response& res, const SessionState& st) {
        Json traces = Json::array();
        for (const auto& t : st.traces) traces.push_back(trace_to_json(t));
        send_json(res, 200,
                  {{"session_id", st.session_id},
                   {"parent", doc_json(st.parent)},
                   {"current", doc_json(st.current)},
                   {"history", st.history},
                   {"traces", traces}});
    }));

    srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/export\.pptx)", reading([](const Request&, Response& res, const SessionState& st) {
        Deck deck;
        deck.slides = {st.current};
        deck.metadata.title = st.session_id;
        deck.metadata.slide_count = 1;
        res.set_header("Content-Disposition", "attachment; filename=\"" + st.session_id + ".pptx\"");
        res.set_content(export_pptx(deck), "application/vnd.openxmlformats-officedocument.presentationml.presentation");
    }));

    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/branch)", mutating([this](const Request& req, Response& res, Session& s) {
        const auto body = parse_body(req);
        const int n = body.value("n", 2);
        if (n < 1 || n > 16) throw Error(ErrorKind::precondition, "n must be in 1..16");
        const std::uint64_t seed = body.value("seed", opts_.config.branch_seed);
        const auto set = branch(s.snapshot().current, *contributor_, n, seed);

        Json event{{"type", "branch"}, {"n", n}, {"seed", seed}, {"branches", Json::array()}, {"failures", Json::array()}};
        Json out{{"branches", Json::array()}, {"failures", Json::array()}};
        for (const auto& b : set.branches) {
            event["branches"].push_back({{"branch_id", b.branch_id}, {"doc", doc_json(b.doc)}});
            out["branches"].push_back({{"branch_id", b.branch_id}, {"doc", doc_json(b.doc)}, {"svg", render_svg(b.doc)}});
        }
        for (const auto& f : set.failures) {
            event["failures"].push_back({{"branch_id", f.branch_id}, {"message", f.message}});
            out["failures"].push_back({{"branch_id", f.branch_id}, {"message", f.message}, {"raw", f.raw}});
        }
        append(s, event);
        send_json(res, 200, out);
    }));

    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/select)", mutating([this](const Request& req, Response& res, Session& s) {
        const auto body = parse_body(req);
        if (!body.contains("branch_id") || !body["branch_id"].is_string())
            throw SchemaError("$.branch_id", "expected a string");
        const auto id = body["branch_id"].get<std::string>();
        const auto st = s.snapshot();
        if (std::none_of(st.branches.begin(), st.branches.end(), [&](const auto& b) { return b.first == id; }))
            throw UnknownIdsError({id});
        append(s, {{"type", "select"}, {"branch_id", id}});
        const auto now = s.snapshot();
        send_json(res, 200, {{"doc", doc_json(now.current)}, {"svg", render_svg(now.current)}});
    }));

    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/labels)", mutating([this](const Request& req, Response& res, Session& s) {
        const auto body = parse_body(req);
        if (!body.contains("element_ids") || !body["element_ids"].is_array())
            throw SchemaError("$.element_ids", "expected an array of ids");
        const auto ids = body["element_ids"].get<std::vector<std::string>>();
        const auto labeled = apply_user_labels(s.snapshot().current, ids);
        auto result = with_all_final(contributor_->contribute(labeled));
        try {
            ensure_valid(result);
        } catch (const ValidationError& e) {
            throw BackendError(std::string("contributor returned an invalid slide: ") + e.what(), to_json_value(result).dump());
        }
        append(s, {{"type", "labels"}, {"element_ids", ids}, {"result", doc_json(result)}});
        send_json(res, 200, {{"doc", doc_json(result)}, {"svg", render_svg(result)}, {"labels", ids}});
    }));

    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/review)", mutating([this](const Request&, Response& res, Session& s) {
        const auto reviewed = reviewer_->review(s.snapshot().current);
        const auto flagged = reviewed.tentative_ids();
        append(s, {{"type", "review"}, {"flagged", flagged}});
        send_json(res, 200, {{"flagged", flagged}, {"svg", highlighted_svg(reviewed)}});
    }));
}

}  // namespace slidelab
