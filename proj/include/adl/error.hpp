#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adl {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested on the wrong side of a cutoff frequency.
class CutoffError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DesignInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Frequency grid too coarse for the requested operation.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class BandTruncated : public std::runtime_error {
public:
    enum class Edge { Lower, Upper, Both };
    BandTruncated(const std::string& what, Edge edge)
        : std::runtime_error(what), edge_(edge) {}
    Edge edge() const noexcept { return edge_; }

private:
    Edge edge_;
};

}  // namespace adl
