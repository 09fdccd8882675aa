#pragma once

#include <stdexcept>
#include <string>

namespace imedub {

/// An argument outside its documented domain (bad mean, bad arm index, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation invoked on statistics that do not satisfy its precondition,
/// e.g. selecting an arm before every arm has been pulled once.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid experiment configuration. `field()` names the offending entry
/// as a path such as "policies[1].gamma".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input data (trace records, trace files).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace imedub
