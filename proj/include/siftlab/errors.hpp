#pragma once

#include <stdexcept>
#include <string>

namespace siftlab {

/// Precondition violation on a mathematical domain (bad residue, bad range, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// A requested computation exceeds a configured resource cap.
struct capacity_error : domain_error {
    using domain_error::domain_error;
};

/// Evaluation requested at (or too close to) a pole.
struct pole_error : domain_error {
    using domain_error::domain_error;
};

/// Input too ill-conditioned for the requested numerical operation.
struct conditioning_error : domain_error {
    using domain_error::domain_error;
};

/// Invalid run configuration (unknown keys, missing required parameters, ...).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A result failed an internal accuracy check.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace siftlab
