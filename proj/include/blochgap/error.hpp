#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace blochgap {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// p = q, or a crossing with |k1| >= |k3|.
class DegenerateIntersection : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InadmissibleIntersection : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AmbiguousWindow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GapNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

}  // namespace blochgap
