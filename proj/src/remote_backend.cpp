#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>

#include <httplib.h>

#include "slidelab/backend.hpp"
#include "slidelab/chat.hpp"
#include "slidelab/error.hpp"
#include "slidelab/slide_json.hpp"
#include "slidelab/validate.hpp"

namespace slidelab {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw Error(ErrorKind::validation, "remote endpoint must start with http://: " + url);
    const auto slash = url.find('/', scheme.size());
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

// Caps concurrent requests per endpoint across all backends in the process.
class Limiter {
public:
    explicit Limiter(int slots) : free_(std::max(1, slots)) {}
    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return free_ > 0; });
        --free_;
    }
    void release() {
        {
            std::lock_guard lock(mu_);
            ++free_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int free_;
};

std::shared_ptr<Limiter> limiter_for(const RemoteModelConfig& c) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<Limiter>> limiters;
    std::lock_guard lock(mu);
    auto& slot = limiters[c.endpoint];
    if (!slot) slot = std::make_shared<Limiter>(c.max_in_flight);
    return slot;
}

class RemoteClient {
public:
    explicit RemoteClient(RemoteModelConfig c) : config_(std::move(c)), endpoint_(split_endpoint(config_.endpoint)) {
        if (config_.max_tokens <= 0 || config_.max_tokens > 2048)
            throw Error(ErrorKind::validation, "max_tokens must be in 1..2048");
        if (config_.max_retries < 0) throw Error(ErrorKind::validation, "max_retries must be >= 0");
        limiter_ = limiter_for(config_);
    }

    /// Sends the prompt and hands each raw reply to `accept` until one
    /// passes or retries run out.
    template <typename F>
    SlideDoc run(Role role, const SlideDoc& doc, F&& accept) const {
        const auto messages = format_prompt(role, doc);
        nlohmann::json body{{"model", config_.model},
                            {"temperature", config_.temperature},
                            {"max_tokens", config_.max_tokens},
                            {"messages", nlohmann::json::array()}};
        for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
        const std::string payload = body.dump();

        std::string last_error, last_raw;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            std::string content;
            try {
                content = post(payload);
            } catch (const BackendError& e) {
                last_error = e.what();
                last_raw = e.raw();
                continue;
            }
            last_raw = content;
            try {
                return accept(parse_response(role, content));
            } catch (const Error& e) {
                last_error = std::string("unusable response: ") + e.what();
            }
        }
        throw BackendError(std::string(to_string(role)) + " backend failed after " +
                               std::to_string(config_.max_retries + 1) + " attempts: " + last_error,
                           last_raw);
    }

private:
    std::string post(const std::string& payload) const {
        httplib::Client client(endpoint_.origin);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

        limiter_->acquire();
        auto res = client.Post(endpoint_.path, headers, payload, "application/json");
        limiter_->release();

        if (!res) throw BackendError("request failed: " + httplib::to_string(res.error()));
        if (res->status != 200) throw BackendError("HTTP " + std::to_string(res->status), res->body);
        try {
            const auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("malformed completion: ") + e.what(), res->body);
        }
    }

    RemoteModelConfig config_;
    Endpoint endpoint_;
    std::shared_ptr<Limiter> limiter_;
};

class RemoteReviewer final : public Reviewer {
public:
    explicit RemoteReviewer(RemoteModelConfig c) : client_(std::move(c)) {}
    std::string name() const override { return "remote"; }

    SlideDoc review(const SlideDoc& doc) const override {
        return client_.run(Role::reviewer, doc, [&](const SlideDoc& answer) {
            // Only statuses are taken from the model; ids must match exactly.
            SlideDoc out = with_all_final(doc);
            std::set<std::string> want, got;
            for (const auto& e : out.elements) want.insert(e.id);
            for (const auto& e : answer.elements) got.insert(e.id);
            if (want != got || answer.elements.size() != out.elements.size())
                throw Error(ErrorKind::consistency, "reviewer response changed the element ids");
            for (const auto& e : answer.elements) out.find(e.id)->status = e.status;
            return out;
        });
    }

private:
    RemoteClient client_;
};

class RemoteContributor final : public Contributor {
public:
    explicit RemoteContributor(RemoteModelConfig c) : client_(std::move(c)) {}
    std::string name() const override { return "remote"; }

    SlideDoc contribute(const SlideDoc& labeled) const override {
        if (!labeled.any_tentative()) return labeled;
        return client_.run(Role::contributor, labeled, [&](SlideDoc answer) {
            answer.source_id = labeled.source_id;
            std::set<std::string> seen;
            for (auto& e : answer.elements) {
                if (e.id.empty() || !seen.insert(e.id).second) {
                    e.id = fresh_element_id(answer);
                    seen.insert(e.id);
                }
            }
            answer = with_all_final(std::move(answer));
            ensure_valid(answer);
            return answer;
        });
    }

private:
    RemoteClient client_;
};

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

RemoteModelConfig remote_config_from_env() {
    RemoteModelConfig c;
    c.endpoint = env_or("SLIDELAB_REMOTE_URL", "http://127.0.0.1:8000/v1/chat/completions");
    c.model = env_or("SLIDELAB_REMOTE_MODEL", "slidelab");
    c.api_key = env_or("SLIDELAB_API_KEY", "");
    return c;
}

std::unique_ptr<Reviewer> make_remote_reviewer(RemoteModelConfig config) {
    return std::make_unique<RemoteReviewer>(std::move(config));
}

std::unique_ptr<Contributor> make_remote_contributor(RemoteModelConfig config) {
    return std::make_unique<RemoteContributor>(std::move(config));
}

}  // namespace slidelab
