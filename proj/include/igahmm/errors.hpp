#pragma once

#include <stdexcept>
#include <string>

namespace igahmm {

/// Broad failure classes. The CLI maps each one to a fixed exit code.
enum class ErrorKind {
    Config,    ///< invalid settings, refinement requests, boundary classification
    Solver,    ///< singular / indefinite systems, non-elliptic tensor data, assembly mismatches
    Geometry,  ///< parameters outside the knot range, singular geometry Jacobians
    Io         ///< unreadable files, malformed patch files
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct SolverError : Error {
    explicit SolverError(const std::string& what) : Error(ErrorKind::Solver, what) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& what) : Error(ErrorKind::Geometry, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Solver: return "solver";
        case ErrorKind::Geometry: return "geometry";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace igahmm
