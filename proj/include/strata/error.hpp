#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strata {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DictionaryError : public Error {
public:
    DictionaryError(std::size_t line, const std::string& what)
        : Error("dictionary line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// A raw value absent from a field's recode map and not a missing code.
class UnknownCodeError : public ParseError {
public:
    UnknownCodeError(std::string field, std::string raw)
        : ParseError("field '" + field + "': unknown code '" + raw + "'"),
          field_(std::move(field)), raw_(std::move(raw)) {}
    const std::string& field() const noexcept { return field_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string field_;
    std::string raw_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class MappingError : public Error {
public:
    using Error::Error;
};

class DegenerateDatasetError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    InsufficientDataError(std::size_t requested, std::size_t available)
        : Error("insufficient data: requested " + std::to_string(requested) + " rows but only " +
                std::to_string(available) + " available"),
          requested_(requested), available_(available) {}
    std::size_t requested() const noexcept { return requested_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t requested_;
    std::size_t available_;
};

class CapacityError : public Error {
public:
    CapacityError(std::size_t requested, std::size_t max_achievable)
        : Error("capacity: cannot draw a balanced sample of " + std::to_string(requested) +
                " rows without replacement; max achievable n is " + std::to_string(max_achievable)),
          requested_(requested), max_achievable_(max_achievable) {}
    std::size_t requested() const noexcept { return requested_; }
    std::size_t max_achievable() const noexcept { return max_achievable_; }

private:
    std::size_t requested_;
    std::size_t max_achievable_;
};

class NoEligibleStrataError : public Error {
public:
    using Error::Error;
};

/// A grid cell whose size cannot be drawn from its dataset.
class InfeasibleCellError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class PredictionError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class SpecError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ReportError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace strata
