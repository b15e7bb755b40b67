#pragma once

#include <stdexcept>
#include <string>

namespace csbn {

// Bad caller input: out-of-range index, malformed parameters, shape mismatch.
class argument_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data violates a DataSet / ErrorSpec invariant.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A linear solve or iteration could not produce a usable value.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, int node = -1)
        : std::runtime_error(node >= 0 ? what + " (node " + std::to_string(node + 1) + ")" : what),
          message_(what), node_(node) {}

    // 0-based node the failure is attributed to, or -1.
    int node() const noexcept { return node_; }
    // what() without the node suffix
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    int node_;
};

} // namespace csbn
