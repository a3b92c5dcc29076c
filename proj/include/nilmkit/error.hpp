#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace nilmkit {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or a configuration that cannot be run (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data, including file I/O (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

inline WarningHandler& warning_handler() {
    static WarningHandler handler = [](const std::string& msg) {
        std::cerr << "warning: " << msg << "\n";
    };
    return handler;
}

// Swaps the warning sink and returns the previous one. Warnings are
// diagnostics only; they never end up in report payloads.
inline WarningHandler set_warning_handler(WarningHandler h) {
    WarningHandler prev = warning_handler();
    warning_handler() = std::move(h);
    return prev;
}

inline void warn(const std::string& msg) { warning_handler()(msg); }

}  // namespace nilmkit
