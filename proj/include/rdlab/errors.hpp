#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown (non-convergence, path failure, missing solutions).
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A genericity condition failed.  `stage` names the failing locus so callers
// can perturb and retry.
struct degenerate_input : std::runtime_error {
    std::string stage;
    explicit degenerate_input(std::string stage_, const std::string& what_)
        : std::runtime_error(stage_ + ": " + what_), stage(std::move(stage_)) {}
};

struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rdlab
