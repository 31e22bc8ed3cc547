#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace pedflow {

// Malformed or inconsistent input (network, demand, config files).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something went wrong while simulating (conservation breach, non-finite cost).
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Warnings go to stderr unless a handler is installed. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace pedflow
