#pragma once

#include <stdexcept>
#include <string>

namespace srzoo {

enum class ErrorCode {
    invalid_argument,
    shape_mismatch,
    graph,
    parse,
    fingerprint,
    io,
    unsupported_format,
    busy,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::shape_mismatch: return "shape_mismatch";
        case ErrorCode::graph: return "graph";
        case ErrorCode::parse: return "parse";
        case ErrorCode::fingerprint: return "fingerprint";
        case ErrorCode::io: return "io";
        case ErrorCode::unsupported_format: return "unsupported_format";
        case ErrorCode::busy: return "busy";
    }
    return "unknown";
}

/// Every failure in the library is reported as an Error carrying a category,
/// so callers (the CLI in particular) can map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace srzoo
