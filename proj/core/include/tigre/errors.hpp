#pragma once

#include <stdexcept>
#include <string>

namespace tigre {

/// Bad shapes, invalid arguments, or a numeric failure inside the engine.
class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

/// Unparsable or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Missing or malformed input data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Task/dataset mismatch, e.g. recommendation on a non-bipartite set (CLI exit code 4).
class TaskError : public std::runtime_error {
public:
    explicit TaskError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tigre
