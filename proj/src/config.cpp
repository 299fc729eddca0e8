#include "slidelab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "slidelab/error.hpp"

namespace slidelab {

namespace {

void check_keys(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw SchemaError(path + "." + k, "unknown config key");
}

template <typename T>
void read(const Json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw SchemaError(path + "." + key, "wrong type");
    }
}

}  // namespace

AppConfig config_from_json(const Json& j) {
    AppConfig c;
    check_keys(j, "$", {"backend", "perturb", "refine", "heuristic", "remote", "service"});
    read(j, "$", "backend", c.backend);
    if (c.backend != "heuristic" && c.backend != "remote")
        throw SchemaError("$.backend", "expected \"heuristic\" or \"remote\"");

    if (j.contains("perturb")) {
        const auto& p = j["perturb"];
        check_keys(p, "$.perturb", {"seed", "severity", "kinds"});
        read(p, "$.perturb", "seed", c.perturb.seed);
        read(p, "$.perturb", "severity", c.perturb.severity);
        if (p.contains("kinds")) {
            std::string kinds;
            read(p, "$.perturb", "kinds", kinds);
            c.perturb.enabled_kinds = parse_kind_list(kinds);
        }
    }
    if (j.contains("refine")) {
        const auto& r = j["refine"];
        check_keys(r, "$.refine", {"max_iterations", "early_stop", "initial_all_tentative"});
        read(r, "$.refine", "max_iterations", c.refine.max_iterations);
        read(r, "$.refine", "early_stop", c.refine.early_stop);
        read(r, "$.refine", "initial_all_tentative", c.refine.initial_all_tentative);
    }
    if (j.contains("heuristic")) {
        const auto& h = j["heuristic"];
        check_keys(h, "$.heuristic", {"align_tolerance", "align_window", "duplicate_iou", "house_font", "grid_columns"});
        read(h, "$.heuristic", "align_tolerance", c.heuristic.align_tolerance);
        read(h, "$.heuristic", "align_window", c.heuristic.align_window);
        read(h, "$.heuristic", "duplicate_iou", c.heuristic.duplicate_iou);
        read(h, "$.heuristic", "house_font", c.heuristic.house_font);
        read(h, "$.heuristic", "grid_columns", c.heuristic.grid_columns);
    }
    if (j.contains("remote")) {
        const auto& r = j["remote"];
        check_keys(r, "$.remote",
                   {"endpoint", "model", "max_tokens", "temperature", "max_retries", "max_in_flight", "timeout_seconds"});
        read(r, "$.remote", "endpoint", c.remote.endpoint);
        read(r, "$.remote", "model", c.remote.model);
        read(r, "$.remote", "max_tokens", c.remote.max_tokens);
        read(r, "$.remote", "temperature", c.remote.temperature);
        read(r, "$.remote", "max_retries", c.remote.max_retries);
        read(r, "$.remote", "max_in_flight", c.remote.max_in_flight);
        read(r, "$.remote", "timeout_seconds", c.remote.timeout_seconds);
    }
    if (j.contains("service")) {
        const auto& s = j["service"];
        check_keys(s, "$.service", {"port", "data_dir", "branch_seed"});
        read(s, "$.service", "port", c.port);
        read(s, "$.service", "data_dir", c.data_dir);
        read(s, "$.service", "branch_seed", c.branch_seed);
    }
    return c;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
        j = Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), e.byte);
    }
    return config_from_json(j);
}

std::unique_ptr<Reviewer> make_reviewer(const AppConfig& c) {
    if (c.backend == "heuristic") return make_heuristic_reviewer(c.heuristic);
    if (c.backend == "remote") return make_remote_reviewer(c.remote);
    throw Error(ErrorKind::validation, "unknown backend \"" + c.backend + "\"");
}

std::unique_ptr<Contributor> make_contributor(const AppConfig& c) {
    if (c.backend == "heuristic") return make_heuristic_contributor(c.heuristic);
    if (c.backend == "remote") return make_remote_contributor(c.remote);
    throw Error(ErrorKind::validation, "unknown backend \"" + c.backend + "\"");
}

}  // namespace slidelab
