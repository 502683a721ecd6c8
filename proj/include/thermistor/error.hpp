#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace thermistor {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid, mismatched grids, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computed value left the representable range at a grid node.
class RangeError : public Error {
public:
    RangeError(const std::string& what, std::size_t node)
        : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// u vanished at a node where |u|^(alpha) needs sign(u).
class SignDegenerate : public Error {
public:
    explicit SignDegenerate(std::size_t node)
        : Error("sign-degenerate: u = 0 at node " + std::to_string(node)), node_(node) {}
    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// The source f produced a non-positive (or non-finite) sample.
class H1Violation : public Error {
public:
    H1Violation(std::size_t node, double t, double u, double value,
                std::optional<std::size_t> iteration = std::nullopt)
        : Error(describe(node, t, u, value, iteration)),
          node_(node), t_(t), u_(u), value_(value), iteration_(iteration) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }
    [[nodiscard]] double t() const noexcept { return t_; }
    [[nodiscard]] double u() const noexcept { return u_; }
    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] std::optional<std::size_t> iteration() const noexcept { return iteration_; }

    [[nodiscard]] H1Violation at_iteration(std::size_t it) const {
        return H1Violation(node_, t_, u_, value_, it);
    }

private:
    static std::string describe(std::size_t node, double t, double u, double value,
                                std::optional<std::size_t> iteration) {
        std::string s = "H1 violated: f(t=" + std::to_string(t) + ", u=" + std::to_string(u) +
                        ") = " + std::to_string(value) + " is not positive at node " +
                        std::to_string(node);
        if (iteration) s += " in iteration " + std::to_string(*iteration);
        return s;
    }

    std::size_t node_;
    double t_, u_, value_;
    std::optional<std::size_t> iteration_;
};

/// Malformed expression text; offset is a 0-based byte index into the source.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& expected, const std::string& found)
        : Error("parse error at byte " + std::to_string(offset) + ": expected " + expected +
                ", found " + found),
          offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation produced a non-finite value; [begin, end) is the offending source span.
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::size_t begin, std::size_t end, const std::string& text)
        : Error("evaluation error in '" + text + "' at bytes " + std::to_string(begin) + ".." +
                std::to_string(end) + ": " + what),
          begin_(begin), end_(end) {}
    [[nodiscard]] std::size_t begin() const noexcept { return begin_; }
    [[nodiscard]] std::size_t end() const noexcept { return end_; }

private:
    std::size_t begin_, end_;
};

/// Configuration file could not be read or is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace thermistor
