#ifndef LVN_ERRORS_HPP
#define LVN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lvn {

// Shape/dimension violations (mismatched dims, out-of-range projections).
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Lexical or syntactic failure in the expression language. `offset` is the
// byte position in the source string where the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Runtime failure while evaluating an expression (division by zero, log of a
// nonpositive value, ...). Carries the index bindings that triggered it.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, const std::string& where)
        : std::runtime_error(what + " [" + where + "]") {}
};

// Spec-file syntax or validation failure; `line` is 1-based.
class SpecFileError : public std::runtime_error {
public:
    SpecFileError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Refusal to run a solver because the domain preflight reported
// divergent evidence and no override was given.
class PreflightError : public std::runtime_error {
public:
    PreflightError(const std::string& what, const std::string& failed_series)
        : std::runtime_error(what), failed_series_(failed_series) {}
    const std::string& failed_series() const { return failed_series_; }

private:
    std::string failed_series_;
};

// Memory budget exceeded (vectorized superoperator at large N).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lvn

#endif
