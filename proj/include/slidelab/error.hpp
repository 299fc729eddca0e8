#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slidelab {

enum class ErrorKind {
    validation,
    parse,
    schema,
    scope,
    budget,
    not_an_archive,
    missing_presentation_part,
    ingest,
    backend,
    precondition,
    consistency,
    unknown_ids,
    io,
};

std::string_view to_string(ErrorKind kind);

/// Base error for every failure surfaced by the library. The kind is stable
/// and machine readable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed JSON. `offset` is the byte position reported by the parser.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(ErrorKind::parse, message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Well-formed JSON that does not match the document schema.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& message)
        : Error(ErrorKind::schema, path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Content outside the supported design scope (e.g. an unknown shape name).
class ScopeError : public Error {
public:
    ScopeError(std::string element_id, const std::string& message)
        : Error(ErrorKind::scope, message), element_id_(std::move(element_id)) {}

    const std::string& element_id() const noexcept { return element_id_; }

private:
    std::string element_id_;
};

/// Carries the offending element ids.
class ValidationError : public Error {
public:
    ValidationError(std::vector<std::string> ids, const std::string& message)
        : Error(ErrorKind::validation, message), ids_(std::move(ids)) {}

    const std::vector<std::string>& element_ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

class UnknownIdsError : public Error {
public:
    explicit UnknownIdsError(std::vector<std::string> ids);

    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

/// Failure of a reviewer/contributor backend. `raw` holds the last raw
/// response text when one was received.
class BackendError : public Error {
public:
    BackendError(const std::string& message, std::string raw = {})
        : Error(ErrorKind::backend, message), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

}  // namespace slidelab
