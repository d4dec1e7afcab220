#include "blochgap/error.hpp"

namespace blochgap {

namespace {

std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}

}  // namespace blochgap
