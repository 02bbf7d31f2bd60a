#pragma once

#include <stdexcept>
#include <string>

namespace mira {

// Every failure carries a short kind tag (NonIntegral, RankTooSmall, ...) so
// callers and tests can dispatch on it without parsing the message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace mira
