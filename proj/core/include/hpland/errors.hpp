#pragma once

#include <stdexcept>
#include <string>

namespace hpland {

// Bad inputs: malformed files, out-of-range arguments, broken invariants in
// user-supplied data. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures during an otherwise valid run (solver breakdown, I/O errors,
// trainable faults). The CLI maps this to exit code 3.
class PipelineError : public std::runtime_error {
public:
    explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hpland
