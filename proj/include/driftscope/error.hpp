#pragma once

#include <stdexcept>
#include <string>

namespace driftscope {

/// Invalid argument, configuration, or usage. Maps to CLI exit code 1.
class ValueError : public std::runtime_error {
public:
    explicit ValueError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, malformed, or unwritable inputs and outputs. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A broken internal invariant; indicates a bug. Maps to CLI exit code 3.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace driftscope
