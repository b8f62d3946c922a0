#pragma once

#include <stdexcept>
#include <string>

namespace dnc {

/// Raised for invalid input to any engine (bad indices, mismatched spaces,
/// inconsistent structure constants, malformed data).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects that must share structure constants do not.
class StructureMismatch : public Error {
public:
    StructureMismatch(int i, int j, const std::string& detail)
        : Error(detail), i_(i), j_(j) {}
    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

/// Malformed text input; position is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& detail)
        : Error(detail + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace dnc
