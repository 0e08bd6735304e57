#pragma once

#include <stdexcept>
#include <string>

namespace openconvoy {

/// Scenario/configuration problem; `field` names the offending key when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message, std::string field = {})
        : std::runtime_error(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Socket or bind failure in the multicast transport, with OS detail.
class TransportError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trace file does not conform to the CSV schema; message names the column.
class MalformedTraceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace openconvoy
