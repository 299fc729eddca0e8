#include "slidelab/error.hpp"

namespace slidelab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::parse: return "parse";
        case ErrorKind::schema: return "schema";
        case ErrorKind::scope: return "scope";
        case ErrorKind::budget: return "budget";
        case ErrorKind::not_an_archive: return "not_an_archive";
        case ErrorKind::missing_presentation_part: return "missing_presentation_part";
        case ErrorKind::ingest: return "ingest";
        case ErrorKind::backend: return "backend";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::consistency: return "consistency";
        case ErrorKind::unknown_ids: return "unknown_ids";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

namespace {
std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}
}  // namespace

UnknownIdsError::UnknownIdsError(std::vector<std::string> ids)
    : Error(ErrorKind::unknown_ids, "unknown element ids: " + join_ids(ids)), ids_(std::move(ids)) {}

}  // namespace slidelab
