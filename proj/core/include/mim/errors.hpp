#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mim {

// Error taxonomy shared by every module. The CLI maps kinds onto exit codes:
// validation/parse/io -> 2, network -> 3.
class Error : public std::runtime_error {
public:
    enum class Kind { validation, parse, io, network };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(Kind::validation, std::move(message)) {}
};

class IoError : public Error {
public:
    explicit IoError(std::string message) : Error(Kind::io, std::move(message)) {}
};

class NetworkError : public Error {
public:
    explicit NetworkError(std::string message)
        : Error(Kind::network, std::move(message)) {}
};

// Rejected input at a known byte position (XML, JSON, config files).
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error(Kind::parse, message + " (byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace mim
