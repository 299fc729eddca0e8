#pragma once

// Settings shared by the CLI and the service, loadable from a JSON file.
// Every key is optional:
//
//   {
//     "backend": "heuristic" | "remote",
//     "perturb":  {"seed": 0, "severity": 0.3, "kinds": "all"},
//     "refine":   {"max_iterations": 5, "early_stop": true, "initial_all_tentative": true},
//     "heuristic": {"align_tolerance": 0.005, "align_window": 0.05, "duplicate_iou": 0.9,
//                   "house_font": "Montserrat", "grid_columns": 8},
//     "remote":   {"endpoint": "...", "model": "...", "max_tokens": 2048, "temperature": 0.2,
//                  "max_retries": 2, "max_in_flight": 4, "timeout_seconds": 120},
//     "service":  {"port": 8080, "data_dir": "sessions", "branch_seed": 0}
//   }
//
// The remote API key only comes from the environment.

#include <filesystem>
#include <memory>
#include <string>

#include "slidelab/backend.hpp"
#include "slidelab/orchestrator.hpp"
#include "slidelab/perturb.hpp"

namespace slidelab {

struct AppConfig {
    std::string backend = "heuristic";
    PerturbConfig perturb;
    RefineOptions refine;
    HeuristicOptions heuristic;
    RemoteModelConfig remote = remote_config_from_env();
    int port = 8080;
    std::string data_dir;
    std::uint64_t branch_seed = 0;
};

/// Overlays `j` on the defaults. Throws SchemaError for unknown keys or
/// wrongly typed values.
AppConfig config_from_json(const Json& j);
/// Throws Error(io) / ParseError / SchemaError.
AppConfig load_config(const std::filesystem::path& path);

/// Throws Error(validation) for an unknown backend name.
std::unique_ptr<Reviewer> make_reviewer(const AppConfig& c);
std::unique_ptr<Contributor> make_contributor(const AppConfig& c);

}  // namespace slidelab
