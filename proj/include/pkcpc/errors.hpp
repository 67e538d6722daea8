#pragma once

#include <stdexcept>
#include <string>

namespace pkcpc {

// Bad arguments at an API boundary: dimension mismatches, out-of-range
// indices, invalid parameter combinations.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A structural invariant that should hold by construction was violated
// (e.g. a matrix expected to be unit lower triangular is not).
class StructureError : public std::runtime_error {
public:
    explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

// Serialized material failed to parse.  `code()` distinguishes the cause.
class ParseError : public std::runtime_error {
public:
    enum class Code {
        bad_magic,
        bad_version,
        bad_record_type,
        truncated,
        trailing_bytes,
        invariant_violation,
    };

    ParseError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// Internal consistency failure; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace pkcpc
