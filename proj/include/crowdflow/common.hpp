#pragma once

#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crowdflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid grid or boundary configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable sampled field.
class FieldError : public Error {
public:
    using Error::Error;
};

/// Reaction term evaluated outside its padded state interval.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Explicit step requested with a time step above the monotonicity bound.
class StepSizeError : public Error {
public:
    using Error::Error;
};

/// Iterative complementarity solver ran out of sweeps.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, std::size_t sweeps)
        : Error(what), residual_(residual), sweeps_(sweeps) {}
    double residual() const noexcept { return residual_; }
    std::size_t sweeps() const noexcept { return sweeps_; }

private:
    double residual_;
    std::size_t sweeps_;
};

/// A scenario violates one of the model hypotheses; `hypothesis()` names it
/// (e.g. "HypV0", "G2", "u0").
class ValidationError : public Error {
public:
    ValidationError(std::string hypothesis, const std::string& what)
        : Error(what), hypothesis_(std::move(hypothesis)) {}
    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

/// Malformed scenario file; carries the offending key path and line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string field, int line)
        : Error(what), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

/// Dense per-entity array tagged by what it indexes, so cell and face data
/// cannot be mixed up.
template <class Tag>
class Field {
public:
    Field() = default;
    explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit Field(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::vector<double> values_;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline constexpr const char* kVersion = "0.1.0";

struct CellTag {};
struct FaceTag {};

/// One value per cell: densities, pressures, divergences, rates.
using ScalarField = Field<CellTag>;
/// One value per face: normal velocities, fluxes.
using FaceField = Field<FaceTag>;

}  // namespace crowdflow
