#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace scholarlite {

/// Error with a short machine-checkable code ("stub-has-versions",
/// "no-overlap", ...) and a human-readable message.
struct Error {
    std::string code;
    std::string message;
};

/// Minimal expected-like result. Operations whose contract names error
/// codes return Result<T>; plain lookups that can simply miss return
/// std::optional instead.
template <typename T>
class Result {
public:
    Result(T value) : data_(std::move(value)) {}
    Result(Error err) : data_(std::move(err)) {}

    bool ok() const { return std::holds_alternative<T>(data_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        if (!ok()) throw std::runtime_error("Result::value on error: " + error().code);
        return std::get<T>(data_);
    }
    T& value() & {
        if (!ok()) throw std::runtime_error("Result::value on error: " + error().code);
        return std::get<T>(data_);
    }
    T&& value() && {
        if (!ok()) throw std::runtime_error("Result::value on error: " + error().code);
        return std::get<T>(std::move(data_));
    }

    const Error& error() const {
        return std::get<Error>(data_);
    }

private:
    std::variant<T, Error> data_;
};

template <>
class Result<void> {
public:
    Result() = default;
    Result(Error err) : err_(std::move(err)), failed_(true) {}

    bool ok() const { return !failed_; }
    explicit operator bool() const { return ok(); }
    const Error& error() const { return err_; }

private:
    Error err_;
    bool failed_ = false;
};

}  // namespace scholarlite
