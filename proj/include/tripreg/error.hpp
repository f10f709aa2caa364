#pragma once

#include <stdexcept>
#include <string>

namespace tripreg {

enum class ErrorKind {
    InvalidInput,
    DegenerateNeighborhood,
    DegeneratePair,
    DegenerateTriplet,
    EmptySet,
    Parse,
    Io,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind and, once it crosses the
/// pipeline boundary, the label of the stage that raised it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string stage = {})
        : std::runtime_error(message), kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }

    Error with_stage(std::string stage) const { return Error(kind_, what(), std::move(stage)); }

private:
    ErrorKind kind_;
    std::string stage_;
};

}  // namespace tripreg
