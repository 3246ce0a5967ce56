#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckdv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid, coefficient or argument outside its valid domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidGrid : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The closed-form soliton denominator fell below the singularity floor.
class SingularityError : public Error {
public:
    SingularityError(double x, double t, double d)
        : Error("soliton denominator vanishes at x=" + std::to_string(x) +
                ", t=" + std::to_string(t) + " (d=" + std::to_string(d) + ")"),
          x_(x), t_(t), d_(d) {}

    double x() const { return x_; }
    double t() const { return t_; }
    double d() const { return d_; }

private:
    double x_, t_, d_;
};

/// A flux or state value became non-finite, or the state norm blew up.
class DivergedError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    DivergedError(std::size_t mode, std::size_t index)
        : Error("non-finite value in mode " + std::to_string(mode) + " at grid index " +
                std::to_string(index)),
          mode_(mode), index_(index) {}

    explicit DivergedError(const std::string& what) : Error(what) {}

    /// Offending (mode, index) when the cause is a non-finite value, npos otherwise.
    std::size_t mode() const { return mode_; }
    std::size_t index() const { return index_; }

private:
    std::size_t mode_ = npos;
    std::size_t index_ = npos;
};

/// full_step called with a half state that does not sit at base.t + tau/2,
/// or a simulation stepped after it diverged.
class SequencingError : public Error {
public:
    using Error::Error;
};

/// The stability gate rejected the requested time step.
class StabilityGateError : public Error {
public:
    using Error::Error;
};

}  // namespace ckdv
